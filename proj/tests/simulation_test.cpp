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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace ldpbd {
namespace {

const double kLn2 = std::log(2.0);
const double kLn43 = std::log(4.0 / 3.0);

TEST(CounterRng, MatchesReferenceSplitMix64) {
  // unit_draw(key, c) must equal the (c+1)-th output of a SplitMix64
  // generator seeded with key, mapped to [0, 1) by its top 53 bits.
  for (std::uint64_t key : {0ULL, 1ULL, 0xDEADBEEFULL, 0xFFFFFFFFFFFFFFFFULL}) {
    testutil::ReferenceSplitMix64 ref(key);
    for (std::uint64_t c = 0; c < 100; ++c) {
      const double want = static_cast<double>(ref.next() >> 11) * 0x1.0p-53;
      EXPECT_EQ(unit_draw(key, c), want) << "key " << key << " counter " << c;
    }
  }
}

TEST(CounterRng, DrawsLieInUnitInterval) {
  for (std::uint64_t c = 0; c < 2000; ++c) {
    const double x = unit_draw(12345, c);
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(CounterRng, TrialSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (int t = 0; t < 1000; ++t) seen.insert(trial_seed(99, t));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
}

TEST(SimulateEstimate, SumsToOne) {
  const Mechanism m = build_mechanism(fano_design(), kLn43);
  const Distribution mu = Distribution::uniform(7);
  const DebiasMatrix l = debias_matrix(m.q, induced_distribution(m.q, mu));
  for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
    const std::vector<double> est = simulate_estimate(m.q, l, mu, 500, seed);
    double sum = 0.0;
    for (double x : est) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(SimulateEstimate, ComponentwiseMeansAreUnbiased) {
  // Across many trials the per-coordinate sample mean of the estimator must
  // sit within five standard errors of the true law in every coordinate. A
  // skewed law is used so that no symmetry can hide a bias.
  const Mechanism m = build_mechanism(fano_design(), kLn2);
  const Distribution mu = Distribution::validated({0.3, 0.2, 0.15, 0.1, 0.1, 0.1, 0.05});
  const DebiasMatrix l = debias_matrix(m.q, induced_distribution(m.q, mu));
  const int trials = 2000;
  const std::int64_t n = 500;
  std::vector<double> sum(7, 0.0);
  std::vector<double> sumsq(7, 0.0);
  for (int t = 0; t < trials; ++t) {
    const std::vector<double> est = simulate_estimate(m.q, l, mu, n, trial_seed(7151, t));
    for (int j = 0; j < 7; ++j) {
      sum[j] += est[j];
      sumsq[j] += est[j] * est[j];
    }
  }
  for (int j = 0; j < 7; ++j) {
    const double mean = sum[j] / trials;
    const double var = (sumsq[j] - trials * mean * mean) / (trials - 1);
    const double se = std::sqrt(var / trials);
    EXPECT_NEAR(mean, mu.p[j], 5.0 * se) << "coordinate " << j;
  }
}

TEST(RunExperiment, IsDeterministicAcrossWorkerCounts) {
  SimConfig config;
  config.design = fano_design();
  config.design_label = "fano";
  config.epsilon = kLn2;
  config.n = 400;
  config.trials = 16;
  config.master_seed = 42;

  const ExperimentResult one = run_experiment(config, 1);
  const ExperimentResult four = run_experiment(config, 4);
  const ExperimentResult again = run_experiment(config, 4);
  ASSERT_EQ(one.records.size(), four.records.size());
  for (std::size_t t = 0; t < one.records.size(); ++t) {
    EXPECT_EQ(one.records[t].trial_index, four.records[t].trial_index);
    EXPECT_EQ(one.records[t].l2sq_error, four.records[t].l2sq_error);
    EXPECT_EQ(one.records[t].seed_used, four.records[t].seed_used);
    EXPECT_EQ(four.records[t].l2sq_error, again.records[t].l2sq_error);
  }
  EXPECT_EQ(one.summary.mean_n_risk, four.summary.mean_n_risk);
}

TEST(RunExperiment, ScaledErrorTracksTheExactExpectation) {
  // n E|est - mu|^2 equals tr(G^{-1}) - |mu|^2 exactly at every sample
  // size, so the trial mean must sit within a few standard errors of it.
  SimConfig config;
  config.design = fano_design();
  config.design_label = "fano";
  config.epsilon = kLn43;
  config.n = 2000;
  config.trials = 1500;
  config.master_seed = 20260816;

  const ExperimentResult res = run_experiment(config, 4);
  ASSERT_TRUE(res.summary.std_error.has_value());
  EXPECT_NEAR(res.summary.theory_bound, 1728.0 / 7.0, 1e-9);
  ASSERT_TRUE(res.summary.z_gap.has_value());
  EXPECT_LE(std::abs(*res.summary.z_gap), 4.5);
}

TEST(RunExperiment, SkewedInputLawAlsoMatches) {
  SimConfig config;
  config.design = complete_design(5, 2);
  config.design_label = "complete:5:2";
  config.epsilon = 1.0;
  config.mu = Distribution::validated({0.4, 0.25, 0.2, 0.1, 0.05});
  config.n = 1500;
  config.trials = 1200;
  config.master_seed = 7;

  const ExperimentResult res = run_experiment(config, 4);
  ASSERT_TRUE(res.summary.z_gap.has_value());
  EXPECT_LE(std::abs(*res.summary.z_gap), 4.5);
}

TEST(RunExperiment, EmpiricalWeightingStaysClose) {
  SimConfig config;
  config.design = fano_design();
  config.design_label = "fano";
  config.epsilon = kLn2;
  config.n = 4000;
  config.trials = 60;
  config.master_seed = 11;
  config.d_choice = DChoice::kEmpirical;

  const ExperimentResult res = run_experiment(config, 2);
  EXPECT_GT(res.summary.mean_n_risk, 0.0);
  // The plug-in weighting is consistent, so at this n the scaled risk should
  // sit near the exact-weighting expectation rather than far above it.
  EXPECT_LT(res.summary.mean_n_risk, 2.0 * res.summary.theory_bound);
}

TEST(RunExperiment, SingleTrialHasNoDispersion) {
  SimConfig config;
  config.design = trivial_design(3);
  config.design_label = "trivial:3";
  config.epsilon = kLn2;
  config.n = 100;
  config.trials = 1;
  config.master_seed = 5;

  const ExperimentResult res = run_experiment(config, 1);
  EXPECT_FALSE(res.summary.std_error.has_value());
  EXPECT_FALSE(res.summary.z_gap.has_value());
  EXPECT_FALSE(res.summary.note.empty());
  EXPECT_EQ(res.records.size(), 1u);
}

TEST(RunExperiment, Validation) {
  SimConfig config;
  config.design = trivial_design(3);
  config.epsilon = kLn2;
  config.n = 10;
  config.trials = 0;
  EXPECT_THROW(run_experiment(config, 1), std::invalid_argument);
  config.trials = 2;
  EXPECT_THROW(run_experiment(config, 0), std::invalid_argument);
  config.mu = Distribution::uniform(4);
  EXPECT_THROW(run_experiment(config, 1), std::invalid_argument);
}

TEST(CompareProtocols, RanksDesignsAtSharedSettings) {
  const std::vector<IncidenceMatrix> designs = {fano_design(), trivial_design(7),
                                                complete_design(7, 2)};
  const std::vector<std::string> labels = {"fano", "trivial:7", "complete:7:2"};
  const std::vector<CompareRow> rows =
      compare_protocols(designs, labels, kLn2, 500, 12, 3, 2);
  ASSERT_EQ(rows.size(), 3u);

  EXPECT_EQ(rows[0].protocol, "fano");
  EXPECT_EQ(rows[0].params, (DesignParams{7, 7, 3, 3, 1}));
  EXPECT_EQ(rows[0].comm_bits, 3);
  EXPECT_EQ(rows[1].comm_bits, 3);
  EXPECT_EQ(rows[2].params, (DesignParams{7, 21, 6, 2, 1}));
  EXPECT_EQ(rows[2].comm_bits, 5);

  // At eps = ln 2 the subset size 2 is optimal for v = 7, so the pair design
  // must get the verifier's blessing and the smallest theory bound.
  EXPECT_FALSE(rows[0].minimax_optimal);
  EXPECT_FALSE(rows[1].minimax_optimal);
  EXPECT_TRUE(rows[2].minimax_optimal);
  EXPECT_LT(rows[2].theory_bound, rows[0].theory_bound);
  EXPECT_LT(rows[0].theory_bound, rows[1].theory_bound);

  EXPECT_THROW(compare_protocols(designs, {"a"}, kLn2, 10, 2, 1, 1), std::invalid_argument);
  EXPECT_THROW(
      compare_protocols({fano_design(), trivial_design(5)}, {"a", "b"}, kLn2, 10, 2, 1, 1),
      std::invalid_argument);
}

}  // namespace
}  // namespace ldpbd
