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

#include "ldpbd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include <json.hpp>

namespace ldpbd {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view cell) {
  cell = trim(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw ParseError("bad numeric cell '" + std::string(cell) + "'");
  return value;
}

ordered_json design_params_json(const DesignParams& params) {
  ordered_json j;
  j["v"] = params.v;
  j["b"] = params.b;
  j["r"] = params.r;
  j["k"] = params.k;
  j["lambda"] = params.lambda;
  return j;
}

void cross_check_declared(const ordered_json& j, const DesignParams& params) {
  const std::pair<const char*, int> declared[] = {{"v", params.v},
                                                  {"b", params.b},
                                                  {"r", params.r},
                                                  {"k", params.k},
                                                  {"lambda", params.lambda}};
  for (const auto& [key, actual] : declared)
    if (j.contains(key) && j.at(key).get<long long>() != actual)
      throw ParseError(std::string("declared '") + key + "' does not match the design");
}

ordered_json summary_body(const Summary& summary) {
  ordered_json j;
  j["mean_n_risk"] = summary.mean_n_risk;
  if (summary.std_error.has_value())
    j["std_error"] = *summary.std_error;
  else
    j["std_error"] = nullptr;
  j["theory_bound"] = summary.theory_bound;
  if (summary.z_gap.has_value())
    j["z_gap"] = *summary.z_gap;
  else
    j["z_gap"] = nullptr;
  if (!summary.note.empty()) j["note"] = summary.note;
  return j;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

std::string design_to_json(const IncidenceMatrix& a) {
  const DesignParams params = verify_design(a);
  ordered_json j = design_params_json(params);
  j["blocks"] = blocks_from_incidence(a);
  return j.dump(2) + "\n";
}

std::string design_to_json_dense(const IncidenceMatrix& a) {
  const DesignParams params = verify_design(a);
  ordered_json j = design_params_json(params);
  std::vector<std::vector<int>> rows(params.b, std::vector<int>(params.v, 0));
  for (int i = 0; i < params.b; ++i)
    for (int jj = 0; jj < params.v; ++jj) rows[i][jj] = a.at(i, jj);
  j["incidence"] = rows;
  return j.dump(2) + "\n";
}

IncidenceMatrix design_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("design JSON: ") + e.what());
  }
  try {
    if (j.contains("incidence")) {
      const auto& rows = j.at("incidence");
      if (!rows.is_array() || rows.empty()) throw ParseError("'incidence' must be a nonempty array");
      const int b = static_cast<int>(rows.size());
      const int v = static_cast<int>(rows.at(0).size());
      if (v < 1) throw ParseError("'incidence' rows must be nonempty");
      IncidenceMatrix a(b, v);
      for (int i = 0; i < b; ++i) {
        const auto& row = rows.at(i);
        if (static_cast<int>(row.size()) != v) throw ParseError("'incidence' rows vary in length");
        for (int jj = 0; jj < v; ++jj) {
          const long long x = row.at(jj).get<long long>();
          if (x != 0 && x != 1) throw ParseError("'incidence' entries must be 0 or 1");
          a.set(i, jj, x == 1);
        }
      }
      const DesignParams params = verify_design(a);
      cross_check_declared(j, params);
      return a;
    }
    if (!j.contains("blocks") || !j.contains("v"))
      throw ParseError("design JSON needs either 'incidence' or 'blocks' with 'v'");
    const int v = j.at("v").get<int>();
    BlockList blocks;
    for (const auto& row : j.at("blocks")) blocks.push_back(row.get<std::vector<int>>());
    IncidenceMatrix a = incidence_from_blocks(blocks, v);
    const DesignParams params = verify_design(a);
    cross_check_declared(j, params);
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("design JSON: ") + e.what());
  }
}

std::string tpm_to_csv(const TransitionMatrix& q) {
  std::string out;
  for (int i = 0; i < q.outputs(); ++i) {
    for (int j = 0; j < q.inputs(); ++j) {
      if (j > 0) out += ',';
      out += format_double(q.m.at(i, j));
    }
    out += '\n';
  }
  return out;
}

TransitionMatrix tpm_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const std::size_t comma = rest.find(',');
      row.push_back(parse_double(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("channel CSV is empty");
  const int b = static_cast<int>(rows.size());
  const int v = static_cast<int>(rows.front().size());
  Mat m(b, v);
  for (int i = 0; i < b; ++i) {
    if (static_cast<int>(rows[i].size()) != v) throw ParseError("channel CSV rows vary in length");
    for (int j = 0; j < v; ++j) {
      const double x = rows[i][j];
      if (!std::isfinite(x) || x <= 0.0)
        throw ParseError("channel entries must be positive and finite");
      m.at(i, j) = x;
    }
  }
  for (int j = 0; j < v; ++j) {
    double sum = 0.0;
    for (int i = 0; i < b; ++i) sum += m.at(i, j);
    if (std::abs(sum - 1.0) > 1e-6)
      throw ParseError("channel column " + std::to_string(j) + " sums to " +
                       format_double(sum) + ", expected 1");
  }
  return TransitionMatrix(std::move(m));
}

std::string mechanism_to_json(const Mechanism& mech) {
  ordered_json design = design_params_json(mech.spec.design);
  // The numeric parameters identify the channel; the block lists are the
  // design file's job, so only the counts are echoed here.
  ordered_json j;
  j["epsilon"] = mech.spec.epsilon;
  j["design"] = design;
  j["p"] = mech.spec.p;
  j["large"] = mech.spec.large;
  j["small"] = mech.spec.small;
  j["comm_bits"] = mech.spec.comm_bits;
  return j.dump(2) + "\n";
}

std::string risk_to_json(const RiskConstants& rc) {
  ordered_json j;
  j["f_q"] = rc.f_q;
  j["a_q"] = rc.a_q;
  j["b_q"] = rc.b_q;
  j["trace_inv"] = rc.trace_inv;
  j["minimax_n_risk"] = rc.minimax_n_risk;
  return j.dump(2) + "\n";
}

std::string report_to_json(const VerifierReport& report) {
  ordered_json j;
  j["v"] = report.v;
  j["b"] = report.b;
  j["epsilon"] = report.epsilon;
  j["is_binary"] = report.is_binary;
  j["large"] = report.large;
  j["small"] = report.small;
  j["epsilon_hat"] = report.epsilon_hat;
  j["ratio_ok"] = report.ratio_ok;
  if (report.row_weight.has_value())
    j["row_weight"] = *report.row_weight;
  else
    j["row_weight"] = nullptr;
  j["optimal_q"] = report.optimal_q;
  j["subset_size_ok"] = report.subset_size_ok;
  if (report.column_weight.has_value())
    j["column_weight"] = *report.column_weight;
  else
    j["column_weight"] = nullptr;
  j["gram_ok"] = report.gram_ok;
  j["gram_a"] = report.gram_a;
  j["gram_b"] = report.gram_b;
  if (report.c1.has_value())
    j["c1"] = *report.c1;
  else
    j["c1"] = nullptr;
  if (report.c2.has_value())
    j["c2"] = *report.c2;
  else
    j["c2"] = nullptr;
  j["is_bibd"] = report.is_bibd;
  if (report.design.has_value()) {
    ordered_json d;
    d["v"] = report.design->v;
    d["b"] = report.design->b;
    d["r"] = report.design->r;
    d["k"] = report.design->k;
    d["lambda"] = report.design->lambda;
    j["design"] = d;
  } else {
    j["design"] = nullptr;
  }
  j["b_le_v"] = report.b_le_v;
  j["is_sbibd"] = report.is_sbibd;
  if (report.reconstruction_ok.has_value())
    j["reconstruction_ok"] = *report.reconstruction_ok;
  else
    j["reconstruction_ok"] = nullptr;
  j["is_minimax_optimal"] = report.is_minimax_optimal;
  j["failures"] = report.failures;
  return j.dump(2) + "\n";
}

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::string out = "trial,l2sq_error,seed\n";
  for (const TrialRecord& r : records) {
    out += std::to_string(r.trial_index);
    out += ',';
    out += format_double(r.l2sq_error);
    out += ',';
    out += std::to_string(r.seed_used);
    out += '\n';
  }
  return out;
}

std::string summary_to_json(const Summary& summary, const SimConfig& config) {
  ordered_json j = summary_body(summary);
  ordered_json c;
  c["design"] = config.design_label;
  c["v"] = config.design.v();
  c["b"] = config.design.b();
  c["epsilon"] = config.epsilon;
  if (config.mu.has_value())
    c["mu"] = config.mu->p;
  else
    c["mu"] = "uniform";
  c["n"] = config.n;
  c["trials"] = config.trials;
  c["seed"] = config.master_seed;
  c["d_choice"] = config.d_choice == DChoice::kExact ? "exact" : "empirical";
  j["config"] = c;
  return j.dump(2) + "\n";
}

std::string compare_to_json(const std::vector<CompareRow>& rows, double epsilon,
                            std::int64_t n, int trials, std::uint64_t seed) {
  ordered_json j;
  j["epsilon"] = epsilon;
  j["n"] = n;
  j["trials"] = trials;
  j["seed"] = seed;
  ordered_json arr = ordered_json::array();
  for (const CompareRow& row : rows) {
    ordered_json r;
    r["protocol"] = row.protocol;
    r["v"] = row.params.v;
    r["b"] = row.params.b;
    r["r"] = row.params.r;
    r["k"] = row.params.k;
    r["lambda"] = row.params.lambda;
    r["comm_bits"] = row.comm_bits;
    r["theory_bound"] = row.theory_bound;
    r["mean_n_risk"] = row.mean_n_risk;
    if (row.std_error.has_value())
      r["std_error"] = *row.std_error;
    else
      r["std_error"] = nullptr;
    r["minimax_optimal"] = row.minimax_optimal;
    arr.push_back(std::move(r));
  }
  j["rows"] = arr;
  return j.dump(2) + "\n";
}

Distribution distribution_from_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    return Distribution::validated(j.get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("distribution JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("distribution JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace ldpbd
