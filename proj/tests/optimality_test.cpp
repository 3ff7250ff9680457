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

#include "ldpbd/optimality.hpp"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "ldpbd/estimation.hpp"
#include "test_util.hpp"

namespace ldpbd {
namespace {

const double kLn2 = std::log(2.0);
const double kLn43 = std::log(4.0 / 3.0);

bool has_failure(const VerifierReport& rep, const std::string& prefix) {
  return std::any_of(rep.failures.begin(), rep.failures.end(), [&](const std::string& f) {
    return f.rfind(prefix, 0) == 0;
  });
}

TransitionMatrix from_dense(const testutil::Dense& d) {
  Mat m(static_cast<int>(d.size()), static_cast<int>(d[0].size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m.at(i, j) = d[i][j];
  return TransitionMatrix(std::move(m));
}

TEST(BinaryStructure, RecoversDesignPositions) {
  for (const IncidenceMatrix& a :
       {fano_design(), complete_design(5, 2), hadamard_design(3, Polarity::kMinus)}) {
    const Mechanism m = build_mechanism(a, kLn2);
    const BinaryStructure s = check_binary_structure(m.q);
    EXPECT_FALSE(s.degenerate);
    EXPECT_NEAR(s.large / s.small, 2.0, 1e-12);
    EXPECT_EQ(extract_design(s), a);
  }
}

TEST(BinaryStructure, DegenerateSingleValue) {
  Mat m(4, 4);
  for (double& x : m.a) x = 0.25;
  const BinaryStructure s = check_binary_structure(TransitionMatrix(std::move(m)));
  EXPECT_TRUE(s.degenerate);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(s.positions.at(i, j), 0);
}

TEST(BinaryStructure, ThreeValuesThrow) {
  Mat m(3, 3);
  const double cols[3][3] = {{0.5, 0.3, 0.2}, {0.25, 0.5, 0.25}, {0.2, 0.3, 0.5}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m.at(i, j) = cols[j][i];
  EXPECT_THROW(check_binary_structure(TransitionMatrix(std::move(m))),
               MoreThanTwoValuesError);
}

TEST(BinaryStructure, RejectsNonPositiveEntries) {
  Mat m(2, 2);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = 1.0;
  EXPECT_THROW(check_binary_structure(TransitionMatrix(std::move(m))), std::invalid_argument);
}

TEST(VerifyOptimal, AcceptsFanoAtItsDesignPoint) {
  // q*(7) = 3 exactly when e^eps = 4/3, which is the Fano block size.
  const Mechanism m = build_mechanism(fano_design(), kLn43);
  const VerifierReport rep = verify_optimal(m.q, kLn43);
  EXPECT_TRUE(rep.is_binary);
  EXPECT_TRUE(rep.ratio_ok);
  EXPECT_NEAR(rep.epsilon_hat, kLn43, 1e-12);
  ASSERT_TRUE(rep.row_weight.has_value());
  EXPECT_EQ(*rep.row_weight, 3);
  EXPECT_EQ(rep.optimal_q, 3);
  EXPECT_TRUE(rep.subset_size_ok);
  ASSERT_TRUE(rep.column_weight.has_value());
  EXPECT_EQ(*rep.column_weight, 3);
  EXPECT_TRUE(rep.gram_ok);
  EXPECT_NEAR(rep.gram_a, 7.0 / 288.0, 1e-10);
  EXPECT_NEAR(rep.gram_b, 287.0 / 288.0, 1e-10);
  // Pair structure of the marked positions: c1 = r - lambda, c2 = lambda,
  // exactly, because the fit averages integer counts that divide evenly.
  ASSERT_TRUE(rep.c1.has_value() && rep.c2.has_value());
  EXPECT_EQ(*rep.c1, 2.0);
  EXPECT_EQ(*rep.c2, 1.0);
  EXPECT_TRUE(rep.is_bibd);
  ASSERT_TRUE(rep.design.has_value());
  EXPECT_EQ(*rep.design, (DesignParams{7, 7, 3, 3, 1}));
  EXPECT_TRUE(rep.b_le_v);
  EXPECT_TRUE(rep.is_sbibd);
  ASSERT_TRUE(rep.reconstruction_ok.has_value());
  EXPECT_TRUE(*rep.reconstruction_ok);
  EXPECT_TRUE(rep.is_minimax_optimal);
  EXPECT_TRUE(rep.failures.empty());
}

TEST(VerifyOptimal, RejectsFanoAtTheWrongPrivacyLevel) {
  // The channel is a perfectly valid design mechanism for eps = ln(4/3);
  // verified against ln 2 the value ratio no longer matches.
  const Mechanism m = build_mechanism(fano_design(), kLn43);
  const VerifierReport rep = verify_optimal(m.q, kLn2);
  EXPECT_TRUE(rep.is_binary);
  EXPECT_FALSE(rep.ratio_ok);
  EXPECT_FALSE(rep.is_minimax_optimal);
  EXPECT_TRUE(has_failure(rep, "ratio:"));
}

TEST(VerifyOptimal, RejectsSuboptimalSubsetSize) {
  // At eps = ln 2 the optimal row weight for v = 7 is 2; the Fano rows mark
  // 3 positions. Everything else about the channel is consistent, so the
  // subset-size check must be the only failure.
  const Mechanism m = build_mechanism(fano_design(), kLn2);
  const VerifierReport rep = verify_optimal(m.q, kLn2);
  EXPECT_TRUE(rep.is_binary);
  EXPECT_TRUE(rep.ratio_ok);
  EXPECT_EQ(rep.optimal_q, 2);
  ASSERT_TRUE(rep.row_weight.has_value());
  EXPECT_EQ(*rep.row_weight, 3);
  EXPECT_FALSE(rep.subset_size_ok);
  EXPECT_TRUE(rep.gram_ok);
  EXPECT_TRUE(rep.is_bibd);
  EXPECT_FALSE(rep.is_minimax_optimal);
  EXPECT_TRUE(has_failure(rep, "subset_size:"));
  EXPECT_FALSE(has_failure(rep, "gram:"));
}

TEST(VerifyOptimal, RejectsCyclicShiftChannelOnGramAndDesign) {
  // Two-valued, correct ratio, correct row weight, yet pairwise unbalanced:
  // both the analytic Gram test and the combinatorial extraction must fail,
  // independently.
  const TransitionMatrix q =
      from_dense(testutil::make_tpm_from_positions(testutil::cyclic_shift_positions(), kLn43));
  const VerifierReport rep = verify_optimal(q, kLn43);
  EXPECT_TRUE(rep.is_binary);
  EXPECT_TRUE(rep.ratio_ok);
  ASSERT_TRUE(rep.row_weight.has_value());
  EXPECT_EQ(*rep.row_weight, 3);
  EXPECT_TRUE(rep.subset_size_ok);
  EXPECT_FALSE(rep.gram_ok);
  EXPECT_FALSE(rep.is_bibd);
  EXPECT_FALSE(rep.is_minimax_optimal);
  EXPECT_TRUE(has_failure(rep, "gram:"));
  EXPECT_TRUE(has_failure(rep, "design:"));
  // The averaged pair counts still fit (2, 1); only the entrywise structure
  // is violated, which is exactly what the two failed checks detect.
  ASSERT_TRUE(rep.c1.has_value() && rep.c2.has_value());
  EXPECT_EQ(*rep.c1, 2.0);
  EXPECT_EQ(*rep.c2, 1.0);
}

TEST(VerifyOptimal, RejectsPerturbedEntry) {
  Mechanism m = build_mechanism(fano_design(), kLn43);
  m.q.m.at(2, 5) += 1e-3;
  const VerifierReport rep = verify_optimal(m.q, kLn43);
  EXPECT_FALSE(rep.is_binary);
  EXPECT_FALSE(rep.is_minimax_optimal);
  EXPECT_TRUE(has_failure(rep, "binary:"));
}

TEST(VerifyOptimal, RejectsDegenerateChannel) {
  Mat m(7, 7);
  for (double& x : m.a) x = 1.0 / 7.0;
  const VerifierReport rep = verify_optimal(TransitionMatrix(std::move(m)), kLn2);
  EXPECT_TRUE(rep.is_binary);
  // Ratio 1 is an admissible value ratio; the rejection comes from the
  // structural checks, not from the ratio.
  EXPECT_TRUE(rep.ratio_ok);
  EXPECT_FALSE(rep.subset_size_ok);
  EXPECT_FALSE(rep.gram_ok);
  EXPECT_FALSE(rep.is_bibd);
  EXPECT_FALSE(rep.c1.has_value());
  EXPECT_FALSE(rep.is_minimax_optimal);
}

TEST(VerifyOptimal, AcceptsSingletonRowsWhenPrivacyIsLoose) {
  // For large eps the optimal subset size collapses to 1 and plain
  // randomised response over v symbols is optimal.
  const Mechanism m = build_mechanism(trivial_design(7), 2.2);
  const VerifierReport rep = verify_optimal(m.q, 2.2);
  EXPECT_EQ(rep.optimal_q, 1);
  EXPECT_TRUE(rep.is_minimax_optimal);
  EXPECT_TRUE(rep.is_sbibd);
}

TEST(VerifyOptimal, AcceptsWideOptimalDesign) {
  // complete(7,2) at eps = ln 2: optimal subset size but b = 21 > v, so the
  // mechanism is optimal yet not symmetric.
  const Mechanism m = build_mechanism(complete_design(7, 2), kLn2);
  const VerifierReport rep = verify_optimal(m.q, kLn2);
  EXPECT_TRUE(rep.is_minimax_optimal);
  EXPECT_FALSE(rep.b_le_v);
  EXPECT_FALSE(rep.is_sbibd);
  ASSERT_TRUE(rep.c1.has_value() && rep.c2.has_value());
  EXPECT_EQ(*rep.c1, 5.0);
  EXPECT_EQ(*rep.c2, 1.0);
}

TEST(VerifyOptimal, RequiresAlphabetBeyondTwo) {
  const Mechanism m = build_mechanism(trivial_design(2), kLn2);
  EXPECT_THROW(verify_optimal(m.q, kLn2), std::invalid_argument);
}

TEST(CheckRatio, AcceptsPrivacyRatioAndConstants) {
  // 1/6 over 1/8 is exactly 4/3, the value ratio at privacy log(4/3); the
  // same pair fails at privacy log 2, and equal values pass at any level.
  EXPECT_TRUE(check_ratio(1.0 / 6.0, 1.0 / 8.0, kLn43));
  EXPECT_FALSE(check_ratio(1.0 / 6.0, 1.0 / 8.0, kLn2));
  EXPECT_TRUE(check_ratio(0.37, 0.37, kLn43));
  EXPECT_TRUE(check_ratio(0.37, 0.37, 2.5));
}

TEST(CheckRatio, ValidatesArguments) {
  EXPECT_THROW(check_ratio(0.1, 0.2, kLn2), std::invalid_argument);
  EXPECT_THROW(check_ratio(0.1, 0.0, kLn2), std::invalid_argument);
  EXPECT_THROW(check_ratio(0.1, -0.1, kLn2), std::invalid_argument);
  EXPECT_THROW(check_ratio(2.0, 1.0, 0.0), std::invalid_argument);
}

TEST(CheckGramCondition, FitsAndComparesConstants) {
  const Mechanism m = build_mechanism(fano_design(), kLn43);
  const GramCheckResult at3 = check_gram_condition(m.q, kLn43, 3);
  EXPECT_TRUE(at3.ok);
  EXPECT_NEAR(at3.a_fit, 7.0 / 288.0, 1e-10);
  EXPECT_NEAR(at3.b_fit, 287.0 / 288.0, 1e-10);
  EXPECT_LE(at3.max_deviation, 1e-9);

  const GramCheckResult at2 = check_gram_condition(m.q, kLn43, 2);
  EXPECT_FALSE(at2.ok);

  const GramCheckResult missing = check_gram_condition(m.q, kLn43, std::nullopt);
  EXPECT_FALSE(missing.ok);
  const GramCheckResult out_of_range = check_gram_condition(m.q, kLn43, 7);
  EXPECT_FALSE(out_of_range.ok);
}

TEST(CheckGramCondition, FlagsNonUniformGram) {
  const TransitionMatrix q =
      from_dense(testutil::make_tpm_from_positions(testutil::cyclic_shift_positions(), kLn43));
  const GramCheckResult res = check_gram_condition(q, kLn43, 3);
  EXPECT_FALSE(res.ok);
  EXPECT_GT(res.max_deviation, 1e-9);
}

}  // namespace
}  // namespace ldpbd
