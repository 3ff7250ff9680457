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

#include "ldpbd/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "ldpbd/optimality.hpp"

namespace ldpbd {
namespace {

int sample_index(const std::vector<double>& weights, double unit) {
  double cum = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    cum += weights[j];
    if (unit < cum) return static_cast<int>(j);
  }
  return static_cast<int>(weights.size()) - 1;
}

std::vector<std::int64_t> simulate_counts(const TransitionMatrix& q, const Distribution& mu,
                                          std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample size must be positive");
  std::vector<std::int64_t> counts(q.outputs(), 0);
  for (std::int64_t u = 0; u < n; ++u) {
    const std::uint64_t base = 2 * static_cast<std::uint64_t>(u);
    const int input = sample_index(mu.p, unit_draw(seed, base));
    const int output = sample_output(q, input, unit_draw(seed, base + 1));
    ++counts[output];
  }
  return counts;
}

double l2sq(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

Summary summarise(const std::vector<TrialRecord>& records, std::int64_t n,
                  double theory_bound) {
  Summary s;
  s.theory_bound = theory_bound;
  double mean = 0.0;
  for (const TrialRecord& r : records) mean += r.l2sq_error;
  mean /= static_cast<double>(records.size());
  s.mean_n_risk = static_cast<double>(n) * mean;
  if (records.size() >= 2) {
    double ss = 0.0;
    for (const TrialRecord& r : records) {
      const double d = r.l2sq_error - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / (records.size() - 1));
    s.std_error = static_cast<double>(n) * sd / std::sqrt(static_cast<double>(records.size()));
    if (*s.std_error > 0.0) s.z_gap = (s.mean_n_risk - s.theory_bound) / *s.std_error;
  } else {
    s.note = "single trial; dispersion not estimated";
  }
  return s;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

double unit_draw(std::uint64_t key, std::uint64_t counter) {
  const std::uint64_t word = mix64(key + kGolden * (counter + 1));
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index) {
  return mix64(master_seed ^ mix64(kGolden + static_cast<std::uint64_t>(trial_index)));
}

std::vector<double> simulate_estimate(const TransitionMatrix& q, const DebiasMatrix& l,
                                      const Distribution& mu, std::int64_t n,
                                      std::uint64_t seed) {
  return estimate(l, simulate_counts(q, mu, n, seed), n);
}

TrialRecord run_trial(const TransitionMatrix& q, const DebiasMatrix& l, const Distribution& mu,
                      std::int64_t n, std::uint64_t seed, int trial_index) {
  const std::vector<double> est = simulate_estimate(q, l, mu, n, seed);
  return TrialRecord{trial_index, l2sq(est, mu.p), seed};
}

TrialRecord run_trial_empirical(const TransitionMatrix& q, const Distribution& mu,
                                std::int64_t n, std::uint64_t seed, int trial_index) {
  const std::vector<std::int64_t> counts = simulate_counts(q, mu, n, seed);
  const int b = q.outputs();
  // Empirical output frequencies, floored away from zero so the weighting
  // stays positive, then renormalised.
  std::vector<double> nu_hat(b);
  const double floor_val = 1.0 / (10.0 * static_cast<double>(n) * b);
  double total = 0.0;
  for (int i = 0; i < b; ++i) {
    nu_hat[i] = std::max(static_cast<double>(counts[i]) / static_cast<double>(n), floor_val);
    total += nu_hat[i];
  }
  for (double& x : nu_hat) x /= total;

  const DebiasMatrix l = debias_matrix_weighted(q, nu_hat);
  const std::vector<double> est = estimate(l, counts, n);
  return TrialRecord{trial_index, l2sq(est, mu.p), seed};
}

ExperimentResult run_experiment(const SimConfig& config, int workers) {
  if (config.trials < 1) throw std::invalid_argument("need at least one trial");
  if (workers < 1) throw std::invalid_argument("need at least one worker");
  workers = std::min({workers, config.trials, 256});

  const Mechanism mech = build_mechanism(config.design, config.epsilon);
  const Distribution mu =
      config.mu.has_value() ? *config.mu : Distribution::uniform(mech.spec.design.v);
  if (mu.size() != mech.spec.design.v)
    throw std::invalid_argument("input law size does not match the design");

  double mu_sq = 0.0;
  for (double x : mu.p) mu_sq += x * x;
  const Distribution nu = induced_distribution(mech.q, mu);
  const double theory_bound = trace_inverse_gram(mech.q, nu) - mu_sq;

  DebiasMatrix l{Mat(1, 1)};
  if (config.d_choice == DChoice::kExact) l = debias_matrix(mech.q, nu);

  std::vector<TrialRecord> records(config.trials);
  std::atomic<int> next{0};
  auto body = [&]() {
    for (int t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1)) {
      const std::uint64_t seed = trial_seed(config.master_seed, t);
      records[t] = config.d_choice == DChoice::kExact
                       ? run_trial(mech.q, l, mu, config.n, seed, t)
                       : run_trial_empirical(mech.q, mu, config.n, seed, t);
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (std::thread& th : pool) th.join();
  }

  ExperimentResult result;
  result.summary = summarise(records, config.n, theory_bound);
  result.records = std::move(records);
  return result;
}

std::vector<CompareRow> compare_protocols(const std::vector<IncidenceMatrix>& designs,
                                          const std::vector<std::string>& labels,
                                          double epsilon, std::int64_t n, int trials,
                                          std::uint64_t master_seed, int workers) {
  if (designs.size() != labels.size())
    throw std::invalid_argument("one label per design is required");
  if (designs.empty()) throw std::invalid_argument("need at least one design");
  const int v = designs.front().v();
  for (const IncidenceMatrix& d : designs)
    if (d.v() != v)
      throw std::invalid_argument("all designs must share the same alphabet size");

  std::vector<CompareRow> rows;
  rows.reserve(designs.size());
  for (std::size_t i = 0; i < designs.size(); ++i) {
    SimConfig config;
    config.design = designs[i];
    config.design_label = labels[i];
    config.epsilon = epsilon;
    config.n = n;
    config.trials = trials;
    config.master_seed = master_seed;

    const Mechanism mech = build_mechanism(designs[i], epsilon);
    const ExperimentResult result = run_experiment(config, workers);

    CompareRow row;
    row.protocol = labels[i];
    row.params = mech.spec.design;
    row.comm_bits = mech.spec.comm_bits;
    row.theory_bound = result.summary.theory_bound;
    row.mean_n_risk = result.summary.mean_n_risk;
    row.std_error = result.summary.std_error;
    row.minimax_optimal = verify_optimal(mech.q, epsilon).is_minimax_optimal;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ldpbd
