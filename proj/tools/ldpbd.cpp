// Copyright 2026 The ldpbd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldpbd/designs.hpp"
#include "ldpbd/estimation.hpp"
#include "ldpbd/io.hpp"
#include "ldpbd/mechanism.hpp"
#include "ldpbd/optimality.hpp"
#include "ldpbd/simulation.hpp"

namespace {

using namespace ldpbd;
using ordered_json = nlohmann::ordered_json;

std::uint64_t row_limit_from_env() {
  const char* s = std::getenv("LDPBD_ROW_LIMIT");
  if (s == nullptr || *s == '\0') return kDefaultRowLimit;
  char* end = nullptr;
  const unsigned long long val = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0' || val == 0)
    throw std::invalid_argument("LDPBD_ROW_LIMIT must be a positive integer");
  return val;
}

const char* kind_name(DesignErrorKind kind) {
  switch (kind) {
    case DesignErrorKind::kInvalidArgument: return "invalid_argument";
    case DesignErrorKind::kRowLimitExceeded: return "row_limit_exceeded";
    case DesignErrorKind::kDuplicateRows: return "duplicate_rows";
    case DesignErrorKind::kNonConstantRowSum: return "non_constant_row_sum";
    case DesignErrorKind::kNonConstantColumnSum: return "non_constant_column_sum";
    case DesignErrorKind::kUnbalancedPairs: return "unbalanced_pairs";
    case DesignErrorKind::kFisherViolation: return "fisher_violation";
  }
  return "unknown";
}

struct DesignOpts {
  std::string name;
  std::string file;
  int v = 0;
  int k = 0;
  int t = 0;
  int p = 0;
  std::string polarity = "minus";
};

void add_design_opts(CLI::App* cmd, DesignOpts& o, bool with_file) {
  cmd->add_option("--design", o.name,
                  "named design: trivial, complete, hadamard, projective, fano");
  if (with_file)
    cmd->add_option("--design-file", o.file, "design JSON file (blocks or incidence form)");
  cmd->add_option("--v", o.v, "alphabet size (trivial, complete)");
  cmd->add_option("--k", o.k, "block size (complete)");
  cmd->add_option("--t", o.t, "order parameter (hadamard, projective)");
  cmd->add_option("--p", o.p, "prime modulus (projective)");
  cmd->add_option("--polarity", o.polarity, "hadamard sign choice")
      ->check(CLI::IsMember({"plus", "minus"}));
}

IncidenceMatrix resolve_design(const DesignOpts& o, std::uint64_t row_limit) {
  if (!o.file.empty()) return design_from_json(read_file(o.file));
  if (o.name == "trivial") return trivial_design(o.v);
  if (o.name == "complete") return complete_design(o.v, o.k, row_limit);
  if (o.name == "hadamard")
    return hadamard_design(o.t, o.polarity == "plus" ? Polarity::kPlus : Polarity::kMinus);
  if (o.name == "projective") return projective_design(o.p, o.t);
  if (o.name == "fano") return fano_design();
  if (o.name.empty()) throw std::invalid_argument("pass --design or --design-file");
  throw std::invalid_argument("unknown design '" + o.name + "'");
}

std::string design_label(const DesignOpts& o) {
  if (!o.file.empty()) return "file:" + o.file;
  if (o.name == "trivial") return "trivial:" + std::to_string(o.v);
  if (o.name == "complete")
    return "complete:" + std::to_string(o.v) + ":" + std::to_string(o.k);
  if (o.name == "hadamard") return "hadamard:" + std::to_string(o.t) + ":" + o.polarity;
  if (o.name == "projective")
    return "projective:" + std::to_string(o.p) + ":" + std::to_string(o.t);
  return o.name;
}

struct NamedDesign {
  IncidenceMatrix a;
  std::string label;
};

NamedDesign design_from_spec(const std::string& spec, std::uint64_t row_limit) {
  if (spec.rfind("file:", 0) == 0)
    return {design_from_json(read_file(spec.substr(5))), spec};
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  DesignOpts o;
  o.name = parts[0];
  auto want = [&](std::size_t nargs) {
    if (parts.size() != nargs + 1)
      throw std::invalid_argument("design spec '" + spec + "' has the wrong number of fields");
  };
  if (o.name == "fano") {
    want(0);
  } else if (o.name == "trivial") {
    want(1);
    o.v = std::stoi(parts[1]);
  } else if (o.name == "complete") {
    want(2);
    o.v = std::stoi(parts[1]);
    o.k = std::stoi(parts[2]);
  } else if (o.name == "hadamard") {
    want(2);
    o.t = std::stoi(parts[1]);
    if (parts[2] != "plus" && parts[2] != "minus")
      throw std::invalid_argument("hadamard polarity must be 'plus' or 'minus'");
    o.polarity = parts[2];
  } else if (o.name == "projective") {
    want(2);
    o.p = std::stoi(parts[1]);
    o.t = std::stoi(parts[2]);
  } else {
    throw std::invalid_argument("unknown design spec '" + spec + "'");
  }
  return {resolve_design(o, row_limit), spec};
}

void emit(const std::string& content, const std::string& out_path) {
  std::cout << content;
  if (!out_path.empty()) write_file(out_path, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "randomised response channels from block designs: construction, risk, "
      "optimality verification, and simulation"};
  app.require_subcommand(1);

  auto* design = app.add_subcommand("design", "construct and inspect block designs");
  design->require_subcommand(1);

  auto* d_build = design->add_subcommand("build", "construct a design and print its JSON");
  DesignOpts d_opts;
  add_design_opts(d_build, d_opts, false);
  bool d_dense = false;
  std::string d_out;
  d_build->add_flag("--dense", d_dense, "emit the incidence matrix instead of block lists");
  d_build->add_option("--out", d_out, "also write the JSON to this file");

  auto* d_verify = design->add_subcommand("verify", "check that a design file is balanced");
  std::string dv_file;
  d_verify->add_option("--design-file", dv_file, "design JSON file")->required();

  auto* d_info = design->add_subcommand("info", "print the parameters of a design file");
  std::string di_file;
  d_info->add_option("--design-file", di_file, "design JSON file")->required();

  auto* mech = app.add_subcommand("mech", "privatisation channels");
  mech->require_subcommand(1);

  auto* m_build = mech->add_subcommand("build", "build the channel of a design");
  DesignOpts m_opts;
  add_design_opts(m_build, m_opts, true);
  double m_eps = 0.0;
  std::string m_out;
  m_build->add_option("--epsilon", m_eps, "privacy level")->required();
  m_build->add_option("--out", m_out, "write the channel CSV here");

  auto* optk = app.add_subcommand("optimal-k", "best subset size for (v, epsilon)");
  int ok_v = 0;
  double ok_eps = 0.0;
  optk->add_option("--v", ok_v, "alphabet size")->required();
  optk->add_option("--epsilon", ok_eps, "privacy level")->required();

  auto* risk = app.add_subcommand("risk", "closed-form risk constants for (v, k, epsilon)");
  int r_v = 0;
  int r_k = 0;
  double r_eps = 0.0;
  risk->add_option("--v", r_v, "alphabet size")->required();
  risk->add_option("--k", r_k, "subset size")->required();
  risk->add_option("--epsilon", r_eps, "privacy level")->required();

  auto* verify = app.add_subcommand("verify", "decide minimax optimality of a channel CSV");
  std::string vf_tpm;
  double vf_eps = 0.0;
  std::string vf_out;
  verify->add_option("--tpm", vf_tpm, "channel CSV file")->required();
  verify->add_option("--epsilon", vf_eps, "privacy level")->required();
  verify->add_option("--out", vf_out, "also write the report JSON to this file");

  auto* simulate = app.add_subcommand("simulate", "estimate error by simulation");
  DesignOpts s_opts;
  add_design_opts(simulate, s_opts, true);
  double s_eps = 0.0;
  std::int64_t s_n = 0;
  int s_trials = 1;
  std::uint64_t s_seed = 0;
  int s_workers = 1;
  std::string s_mu;
  std::string s_out;
  std::string s_d = "exact";
  simulate->add_option("--epsilon", s_eps, "privacy level")->required();
  simulate->add_option("--n", s_n, "users per trial")->required();
  simulate->add_option("--trials", s_trials, "independent trials");
  simulate->add_option("--seed", s_seed, "master seed");
  simulate->add_option("--workers", s_workers, "worker threads");
  simulate->add_option("--mu", s_mu, "input law JSON file (default uniform)");
  simulate->add_option("--out", s_out, "write per-trial results CSV here");
  simulate->add_option("--d-choice", s_d, "output weighting for the estimator")
      ->check(CLI::IsMember({"exact", "empirical"}));

  auto* compare = app.add_subcommand("compare", "compare designs at shared settings");
  std::vector<std::string> c_specs;
  double c_eps = 0.0;
  std::int64_t c_n = 0;
  int c_trials = 1;
  std::uint64_t c_seed = 0;
  int c_workers = 1;
  std::string c_out;
  compare
      ->add_option("--design", c_specs,
                   "design spec, repeatable: fano | trivial:V | complete:V:K | "
                   "hadamard:T:POLARITY | projective:P:T | file:PATH")
      ->required();
  compare->add_option("--epsilon", c_eps, "privacy level")->required();
  compare->add_option("--n", c_n, "users per trial")->required();
  compare->add_option("--trials", c_trials, "independent trials");
  compare->add_option("--seed", c_seed, "master seed");
  compare->add_option("--workers", c_workers, "worker threads");
  compare->add_option("--out", c_out, "also write the comparison JSON to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::uint64_t row_limit = row_limit_from_env();

    if (d_build->parsed()) {
      const IncidenceMatrix a = resolve_design(d_opts, row_limit);
      emit(d_dense ? design_to_json_dense(a) : design_to_json(a), d_out);
      return 0;
    }

    if (d_verify->parsed()) {
      const std::string text = read_file(dv_file);
      try {
        const IncidenceMatrix a = design_from_json(text);
        const DesignParams params = verify_design(a);
        ordered_json j;
        j["valid"] = true;
        j["v"] = params.v;
        j["b"] = params.b;
        j["r"] = params.r;
        j["k"] = params.k;
        j["lambda"] = params.lambda;
        std::cout << j.dump(2) << "\n";
        return 0;
      } catch (const DesignError& e) {
        ordered_json j;
        j["valid"] = false;
        j["kind"] = kind_name(e.kind());
        j["error"] = e.what();
        if (e.kind() == DesignErrorKind::kUnbalancedPairs) {
          j["pair"] = {e.pair_first, e.pair_second};
          j["pair_count"] = e.pair_count;
        }
        std::cout << j.dump(2) << "\n";
        return 1;
      }
    }

    if (d_info->parsed()) {
      const IncidenceMatrix a = design_from_json(read_file(di_file));
      const DesignParams params = verify_design(a);
      ordered_json j;
      j["v"] = params.v;
      j["b"] = params.b;
      j["r"] = params.r;
      j["k"] = params.k;
      j["lambda"] = params.lambda;
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (m_build->parsed()) {
      const Mechanism m = build_mechanism(resolve_design(m_opts, row_limit), m_eps);
      std::cout << mechanism_to_json(m);
      if (!m_out.empty()) write_file(m_out, tpm_to_csv(m.q));
      return 0;
    }

    if (optk->parsed()) {
      const int k = optimal_subset_size(ok_v, ok_eps);
      ordered_json j;
      j["v"] = ok_v;
      j["epsilon"] = ok_eps;
      j["k"] = k;
      j["f_k"] = trace_objective(ok_v, k, ok_eps);
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (risk->parsed()) {
      std::cout << risk_to_json(risk_constants(r_v, r_k, r_eps));
      return 0;
    }

    if (verify->parsed()) {
      const TransitionMatrix q = tpm_from_csv(read_file(vf_tpm));
      const VerifierReport rep = verify_optimal(q, vf_eps);
      emit(report_to_json(rep), vf_out);
      return rep.is_minimax_optimal ? 0 : 1;
    }

    if (simulate->parsed()) {
      SimConfig config;
      config.design = resolve_design(s_opts, row_limit);
      config.design_label = design_label(s_opts);
      config.epsilon = s_eps;
      if (!s_mu.empty()) config.mu = distribution_from_json(read_file(s_mu));
      config.n = s_n;
      config.trials = s_trials;
      config.master_seed = s_seed;
      config.d_choice = s_d == "empirical" ? DChoice::kEmpirical : DChoice::kExact;
      const ExperimentResult result = run_experiment(config, s_workers);
      std::cout << summary_to_json(result.summary, config);
      if (!s_out.empty()) write_file(s_out, records_to_csv(result.records));
      return 0;
    }

    if (compare->parsed()) {
      std::vector<IncidenceMatrix> designs;
      std::vector<std::string> labels;
      for (const std::string& spec : c_specs) {
        NamedDesign nd = design_from_spec(spec, row_limit);
        designs.push_back(std::move(nd.a));
        labels.push_back(std::move(nd.label));
      }
      const std::vector<CompareRow> rows =
          compare_protocols(designs, labels, c_eps, c_n, c_trials, c_seed, c_workers);
      emit(compare_to_json(rows, c_eps, c_n, c_trials, c_seed), c_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
