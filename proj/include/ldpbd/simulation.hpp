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

#ifndef LDPBD_SIMULATION_HPP
#define LDPBD_SIMULATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldpbd/designs.hpp"
#include "ldpbd/estimation.hpp"
#include "ldpbd/mechanism.hpp"

namespace ldpbd {

// SplitMix64 output mixer: a bijective 64-bit finaliser with good avalanche.
std::uint64_t mix64(std::uint64_t x);

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Deterministic counter-based uniform draw in [0, 1): the pair (key,
// counter) fully determines the value, so simulations replay identically
// regardless of scheduling or worker count. 53 high bits of the mix feed the
// mantissa.
double unit_draw(std::uint64_t key, std::uint64_t counter);

// Per-trial key derived from the master seed; distinct trials get
// decorrelated streams.
std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index);

// Which diagonal matrix D the estimator uses: the exact induced output law
// Q mu (available when mu is known to the analyst) or the empirical output
// frequencies floored away from zero.
enum class DChoice { kExact, kEmpirical };

struct SimConfig {
  IncidenceMatrix design;
  std::string design_label;
  double epsilon = 0.0;
  std::optional<Distribution> mu;  // defaults to uniform on v
  std::int64_t n = 0;
  int trials = 1;
  std::uint64_t master_seed = 0;
  DChoice d_choice = DChoice::kExact;

  SimConfig() : design(1, 1) {}
};

struct TrialRecord {
  int trial_index = 0;
  double l2sq_error = 0.0;
  std::uint64_t seed_used = 0;
};

struct Summary {
  double mean_n_risk = 0.0;              // n * mean of l2sq_error over trials
  std::optional<double> std_error;       // n * sd / sqrt(trials); absent for 1 trial
  double theory_bound = 0.0;             // closed-form scaled risk at mu
  std::optional<double> z_gap;           // (mean - bound) / std_error
  std::string note;                      // set when std_error is unavailable
};

// One simulated estimate: n users each draw an input from mu and push it
// through the channel, using counters 2u and 2u+1 of the keyed stream for
// user u; returns the debiased estimate from the output histogram.
std::vector<double> simulate_estimate(const TransitionMatrix& q, const DebiasMatrix& l,
                                      const Distribution& mu, std::int64_t n,
                                      std::uint64_t seed);

// One trial: simulate and return the squared l2 distance to mu.
TrialRecord run_trial(const TransitionMatrix& q, const DebiasMatrix& l, const Distribution& mu,
                      std::int64_t n, std::uint64_t seed, int trial_index = 0);

// Same but the debiasing matrix is rebuilt per trial from the empirical
// output frequencies (floored at 1 / (10 n b) and renormalised).
TrialRecord run_trial_empirical(const TransitionMatrix& q, const Distribution& mu,
                                std::int64_t n, std::uint64_t seed, int trial_index = 0);

struct ExperimentResult {
  std::vector<TrialRecord> records;
  Summary summary;
};

// Runs config.trials independent trials, optionally across worker threads.
// Records are stored by trial index so results do not depend on the worker
// count.
ExperimentResult run_experiment(const SimConfig& config, int workers = 1);

struct CompareRow {
  std::string protocol;
  DesignParams params;
  int comm_bits = 0;
  double theory_bound = 0.0;
  double mean_n_risk = 0.0;
  std::optional<double> std_error;
  bool minimax_optimal = false;
};

// Head-to-head table over a set of designs at shared (epsilon, n, trials,
// seed): theory bound, simulated scaled risk, communication cost, and the
// verifier's verdict for each.
std::vector<CompareRow> compare_protocols(const std::vector<IncidenceMatrix>& designs,
                                          const std::vector<std::string>& labels,
                                          double epsilon, std::int64_t n, int trials,
                                          std::uint64_t master_seed, int workers = 1);

}  // namespace ldpbd

#endif  // LDPBD_SIMULATION_HPP
