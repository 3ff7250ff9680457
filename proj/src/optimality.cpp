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

#include <cmath>
#include <optional>
#include <string>

#include "ldpbd/estimation.hpp"

namespace ldpbd {
namespace {

std::string cell(int i, int j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

// Row and column sums of the marked positions, reduced to a single value
// when constant.
std::optional<int> constant_row_sum(const IncidenceMatrix& a) {
  int first = 0;
  for (int j = 0; j < a.v(); ++j) first += a.at(0, j);
  for (int i = 1; i < a.b(); ++i) {
    int s = 0;
    for (int j = 0; j < a.v(); ++j) s += a.at(i, j);
    if (s != first) return std::nullopt;
  }
  return first;
}

std::optional<int> constant_col_sum(const IncidenceMatrix& a) {
  std::vector<int> col(a.v(), 0);
  for (int i = 0; i < a.b(); ++i)
    for (int j = 0; j < a.v(); ++j) col[j] += a.at(i, j);
  for (int j = 1; j < a.v(); ++j)
    if (col[j] != col[0]) return std::nullopt;
  return col[0];
}

}  // namespace

BinaryStructure check_binary_structure(const TransitionMatrix& q, double tol) {
  const int b = q.outputs();
  const int v = q.inputs();
  double lo = q.m.at(0, 0);
  double hi = lo;
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < v; ++j) {
      const double x = q.m.at(i, j);
      if (!(x > 0.0))
        throw std::invalid_argument("channel entries must be strictly positive");
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }

  BinaryStructure s{false, hi, lo, IncidenceMatrix(b, v)};
  if (hi - lo <= tol * hi) {
    // One cluster: every entry equals every other up to tolerance.
    s.degenerate = true;
    return s;
  }
  const double slack = tol * hi;
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < v; ++j) {
      const double x = q.m.at(i, j);
      if (x - lo <= slack) continue;
      if (hi - x <= slack) {
        s.positions.set(i, j, true);
        continue;
      }
      throw MoreThanTwoValuesError("entry " + cell(i, j) + " lies strictly between the two " +
                                   "channel values");
    }
  return s;
}

GramCheckResult check_gram_condition(const TransitionMatrix& q, double epsilon,
                                     std::optional<int> row_weight) {
  const int v = q.inputs();
  GramCheckResult res;

  const Mat g = gram_matrix(q, induced_distribution(q, Distribution::uniform(v)));
  double diag_sum = 0.0;
  double off_sum = 0.0;
  for (int s = 0; s < v; ++s)
    for (int t = 0; t < v; ++t)
      (s == t ? diag_sum : off_sum) += g.a[static_cast<std::size_t>(s) * v + t];
  res.b_fit = v > 1 ? off_sum / (static_cast<double>(v) * (v - 1)) : 0.0;
  res.a_fit = diag_sum / v - res.b_fit;

  for (int s = 0; s < v; ++s)
    for (int t = 0; t < v; ++t) {
      const double fitted = res.b_fit + (s == t ? res.a_fit : 0.0);
      res.max_deviation = std::max(
          res.max_deviation, std::abs(g.a[static_cast<std::size_t>(s) * v + t] - fitted));
    }
  const bool structure_ok = res.max_deviation <= 1e-9;

  if (!row_weight.has_value() || *row_weight < 1 || *row_weight > v - 1) {
    res.ok = false;
    res.detail = "row weight unavailable or outside [1, v-1]";
    return res;
  }
  const RiskConstants rc = risk_constants(v, *row_weight, epsilon);
  res.a_expected = rc.a_q;
  res.b_expected = rc.b_q;
  const bool constants_ok =
      std::abs(res.a_fit - res.a_expected) <= 1e-9 && std::abs(res.b_fit - res.b_expected) <= 1e-9;
  res.ok = structure_ok && constants_ok;
  if (!structure_ok)
    res.detail = "Gram matrix is not of the form aI + bJ (max deviation " +
                 std::to_string(res.max_deviation) + ")";
  else if (!constants_ok)
    res.detail = "Gram constants do not match the closed form at this row weight";
  return res;
}

IncidenceMatrix extract_design(const BinaryStructure& s) { return s.positions; }

// Ratio 1 (a single-valued channel) is admissible alongside e^epsilon; such
// channels are rejected downstream by the subset and Gram checks.
bool check_ratio(double large, double small, double epsilon) {
  if (!(small > 0.0) || large < small)
    throw std::invalid_argument("ratio check requires large >= small > 0");
  const PrivacyParam priv(epsilon);
  const double ratio = large / small;
  return std::abs(ratio - priv.e_eps) <= 1e-9 * priv.e_eps ||
         std::abs(ratio - 1.0) <= 1e-9;
}

VerifierReport verify_optimal(const TransitionMatrix& q, double epsilon) {
  const PrivacyParam priv(epsilon);
  const int b = q.outputs();
  const int v = q.inputs();
  if (v <= 2)
    throw std::invalid_argument("optimality verification needs an alphabet larger than 2");

  VerifierReport rep;
  rep.v = v;
  rep.b = b;
  rep.epsilon = epsilon;
  rep.b_le_v = b <= v;
  rep.optimal_q = optimal_subset_size(v, epsilon);

  BinaryStructure s{false, 0.0, 0.0, IncidenceMatrix(b, v)};
  try {
    s = check_binary_structure(q);
    rep.is_binary = true;
  } catch (const MoreThanTwoValuesError& e) {
    rep.failures.push_back(std::string("binary: ") + e.what());
    return rep;
  }
  rep.large = s.large;
  rep.small = s.small;
  rep.epsilon_hat = std::log(s.large / s.small);

  rep.ratio_ok = check_ratio(s.large, s.small, epsilon);
  if (!rep.ratio_ok)
    rep.failures.push_back("ratio: channel value ratio " + std::to_string(s.large / s.small) +
                           " does not equal e^epsilon");

  rep.row_weight = constant_row_sum(s.positions);
  rep.column_weight = constant_col_sum(s.positions);
  if (!rep.row_weight.has_value()) {
    rep.failures.push_back("subset_size: rows mark subsets of varying size");
  } else {
    rep.subset_size_ok = *rep.row_weight == rep.optimal_q;
    if (!rep.subset_size_ok)
      rep.failures.push_back("subset_size: rows mark subsets of size " +
                             std::to_string(*rep.row_weight) + ", optimal is " +
                             std::to_string(rep.optimal_q));
  }

  const GramCheckResult gram = check_gram_condition(q, epsilon, rep.row_weight);
  rep.gram_ok = gram.ok;
  rep.gram_a = gram.a_fit;
  rep.gram_b = gram.b_fit;
  if (!gram.ok) rep.failures.push_back("gram: " + gram.detail);

  if (s.degenerate) {
    rep.failures.push_back("design: channel takes a single value; nothing to extract");
  } else {
    // Fit A'A = c1 I + c2 J from its diagonal and off-diagonal means; both
    // reduce to row-weight sums. trace(A'A) = sum_i w_i and the off-diagonal
    // total is sum_i w_i (w_i - 1).
    long long diag_sum = 0;
    long long off_sum = 0;
    for (int i = 0; i < b; ++i) {
      long long w = 0;
      for (int j = 0; j < v; ++j) w += s.positions.at(i, j);
      diag_sum += w;
      off_sum += w * (w - 1);
    }
    const double c2 = static_cast<double>(off_sum) / (static_cast<double>(v) * (v - 1));
    rep.c2 = c2;
    rep.c1 = static_cast<double>(diag_sum) / v - c2;

    const VerifyOutcome outcome = try_verify_design(s.positions);
    rep.is_bibd = outcome.ok();
    if (outcome.ok()) {
      rep.design = outcome.params;
      rep.is_sbibd = b <= v;

      const Mechanism rebuilt = build_mechanism(s.positions, epsilon);
      rep.reconstruction_ok = max_abs_diff(rebuilt.q.m, q.m) <= 1e-12;
      if (!*rep.reconstruction_ok)
        rep.failures.push_back(
            "reconstruction: rebuilt channel differs from the input channel");
    } else {
      rep.failures.push_back("design: " + outcome.message);
    }
  }

  rep.is_minimax_optimal =
      rep.is_binary && rep.ratio_ok && rep.subset_size_ok && rep.gram_ok && rep.is_bibd;
  return rep;
}

}  // namespace ldpbd
