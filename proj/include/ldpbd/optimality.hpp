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

#ifndef LDPBD_OPTIMALITY_HPP
#define LDPBD_OPTIMALITY_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldpbd/designs.hpp"
#include "ldpbd/mechanism.hpp"

namespace ldpbd {

class MoreThanTwoValuesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Result of clustering the entries of a channel into at most two values.
// degenerate means a single cluster (all entries equal); positions marks the
// cells holding the large value (all zero when degenerate).
struct BinaryStructure {
  bool degenerate = false;
  double large = 0.0;
  double small = 0.0;
  IncidenceMatrix positions;
};

// Clusters entries of q around their min and max at relative tolerance tol.
// Throws MoreThanTwoValuesError if some entry is far from both cluster
// means.
BinaryStructure check_binary_structure(const TransitionMatrix& q, double tol = 1e-9);

struct GramCheckResult {
  bool ok = false;
  double a_fit = 0.0;       // fitted diagonal minus off-diagonal level
  double b_fit = 0.0;       // fitted off-diagonal level
  double a_expected = 0.0;  // closed-form a_q at the extracted row weight
  double b_expected = 0.0;
  double max_deviation = 0.0;  // worst |G_ij - fit| over all cells
  std::string detail;
};

// Fits G = a I + b J to the Gram matrix of q under the uniform input law and
// compares (a, b) against the closed-form constants at the given row weight.
// row_weight outside [1, v-1] fails the check outright.
GramCheckResult check_gram_condition(const TransitionMatrix& q, double epsilon,
                                     std::optional<int> row_weight);

// Everything learned about a candidate channel. is_minimax_optimal is the
// conjunction of the binary, ratio, subset-size, Gram, and design checks;
// b <= v is reported on its own and additionally gates is_sbibd.
struct VerifierReport {
  int v = 0;
  int b = 0;
  double epsilon = 0.0;

  bool is_binary = false;
  double large = 0.0;
  double small = 0.0;
  double epsilon_hat = 0.0;  // log(large / small)
  bool ratio_ok = false;

  std::optional<int> row_weight;  // large-value count per output row
  int optimal_q = 0;
  bool subset_size_ok = false;

  std::optional<int> column_weight;  // large-value count per input column

  bool gram_ok = false;
  double gram_a = 0.0;
  double gram_b = 0.0;

  // Fitted coefficients of A'A = c1 I + c2 J over the marked positions;
  // equal (r - lambda, lambda) exactly when those positions form a design.
  std::optional<double> c1;
  std::optional<double> c2;

  bool is_bibd = false;
  std::optional<DesignParams> design;

  bool b_le_v = false;
  bool is_sbibd = false;

  std::optional<bool> reconstruction_ok;  // p(A(e^eps - 1) + J') == Q

  bool is_minimax_optimal = false;
  std::vector<std::string> failures;  // "check: detail" per failed check
};

// True when large / small equals e^eps within a relative 1e-9, or equals 1
// (a single-valued channel, admissible but never optimal). Requires
// large >= small > 0.
bool check_ratio(double large, double small, double epsilon);

// Decides whether a channel attains the minimax risk at privacy level eps:
// entries must take exactly two values in ratio e^eps, rows must mark
// subsets of the optimal size, the Gram matrix must match the closed form,
// and the marked positions must form a BIBD. Requires v > 2.
VerifierReport verify_optimal(const TransitionMatrix& q, double epsilon);

// Extracts the large-value position matrix of a binary channel; identity to
// BinaryStructure::positions but named for intent at call sites.
IncidenceMatrix extract_design(const BinaryStructure& s);

}  // namespace ldpbd

#endif  // LDPBD_OPTIMALITY_HPP
