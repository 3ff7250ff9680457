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

#include "ldpbd/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace ldpbd {
namespace {

Eigen::MatrixXd to_eigen(const Mat& m) {
  Eigen::MatrixXd e(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) e(i, j) = m.a[static_cast<std::size_t>(i) * m.cols + j];
  return e;
}

Mat from_eigen(const Eigen::MatrixXd& e) {
  Mat m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m.at(static_cast<int>(i), static_cast<int>(j)) = e(i, j);
  return m;
}

Eigen::MatrixXd weighted_gram(const TransitionMatrix& q, const std::vector<double>& nu) {
  if (static_cast<int>(nu.size()) != q.outputs())
    throw std::invalid_argument("weighting size does not match channel outputs");
  for (double x : nu)
    if (!(x > 0.0)) throw std::invalid_argument("output weighting must be strictly positive");
  const Eigen::MatrixXd qe = to_eigen(q.m);
  Eigen::VectorXd inv(q.outputs());
  for (int i = 0; i < q.outputs(); ++i) inv(i) = 1.0 / nu[i];
  return qe.transpose() * inv.asDiagonal() * qe;
}

Eigen::MatrixXd invert_gram(const Eigen::MatrixXd& g) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (!lu.isInvertible()) {
    const auto diag = lu.matrixLU().diagonal();
    const double hi = diag.cwiseAbs().maxCoeff();
    const double lo = diag.cwiseAbs().minCoeff();
    throw SingularGramError(
        "channel columns are not identifiable under this input law (pivot ratio " +
        std::to_string(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity()) + ")");
  }
  return lu.inverse();
}

struct TwoLevel {
  double a = 0.0;
  double b = 0.0;
};

// Fits g = a I + b J and accepts only when every entry matches the fit to
// machine precision and the fitted matrix is positive definite. The tight
// tolerance keeps this path to Gram matrices that are structured by
// construction; anything else falls through to dense elimination.
std::optional<TwoLevel> two_level_fit(const Eigen::MatrixXd& g) {
  const int v = static_cast<int>(g.rows());
  if (v < 2) return std::nullopt;
  double off = 0.0;
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < v; ++j)
      if (i != j) off += g(i, j);
  const double b = off / (static_cast<double>(v) * (v - 1));
  const double a = g.diagonal().mean() - b;
  const double tol = 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff());
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < v; ++j) {
      const double want = i == j ? a + b : b;
      if (std::abs(g(i, j) - want) > tol) return std::nullopt;
    }
  if (!(a > 0.0) || !(a + v * b > 0.0)) return std::nullopt;
  return TwoLevel{a, b};
}

// (a I + b J)^(-1) = (1/a)(I - b/(a + v b) J).
Eigen::MatrixXd invert_two_level(const TwoLevel& t, int v) {
  Eigen::MatrixXd inv = Eigen::MatrixXd::Constant(v, v, -t.b / (t.a * (t.a + v * t.b)));
  inv.diagonal().array() += 1.0 / t.a;
  return inv;
}

DebiasMatrix debias_from_weights(const TransitionMatrix& q, const std::vector<double>& nu) {
  const Eigen::MatrixXd g = weighted_gram(q, nu);
  const std::optional<TwoLevel> lvl = two_level_fit(g);
  const Eigen::MatrixXd ginv =
      lvl ? invert_two_level(*lvl, static_cast<int>(g.rows())) : invert_gram(g);
  Eigen::MatrixXd qe = to_eigen(q.m);
  // Q' D^(-1): scale row i of Q by 1/nu_i before transposing.
  for (int i = 0; i < qe.rows(); ++i) qe.row(i) /= nu[i];
  return DebiasMatrix{from_eigen(ginv * qe.transpose())};
}

// a_q as an explicit product rather than f(k) - v; the subtraction form
// cancels catastrophically for small epsilon.
double closed_form_a(int v, int k, double epsilon) {
  const double g1 = std::expm1(epsilon);
  const double p0 = 1.0 / (v + k * g1);
  return static_cast<double>(v) * k * (v - k) * g1 * g1 * p0 * p0 / (v - 1);
}

}  // namespace

DebiasMatrix debias_matrix(const TransitionMatrix& q, const Distribution& nu) {
  return debias_from_weights(q, nu.p);
}

DebiasMatrix debias_matrix_weighted(const TransitionMatrix& q, const std::vector<double>& nu) {
  return debias_from_weights(q, nu);
}

std::vector<double> estimate(const DebiasMatrix& l, const std::vector<std::int64_t>& counts,
                             std::int64_t n) {
  if (static_cast<int>(counts.size()) != l.m.cols)
    throw std::invalid_argument("count vector size does not match channel outputs");
  if (n <= 0) throw std::invalid_argument("sample size must be positive");
  std::int64_t total = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("counts must be nonnegative");
    total += c;
  }
  if (total != n) throw std::invalid_argument("counts must sum to the sample size");

  std::vector<double> freq(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    freq[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  return matvec(l.m, freq);
}

double trace_inverse_gram(const TransitionMatrix& q, const Distribution& nu) {
  const Eigen::MatrixXd g = weighted_gram(q, nu.p);
  if (const std::optional<TwoLevel> lvl = two_level_fit(g)) {
    const int v = static_cast<int>(g.rows());
    return (v - 1) / lvl->a + 1.0 / (lvl->a + v * lvl->b);
  }
  return invert_gram(g).trace();
}

double minimax_bound(int v, int k, double epsilon, const Distribution& mu) {
  if (mu.size() != v) throw std::invalid_argument("input law size does not match v");
  const RiskConstants rc = risk_constants(v, k, epsilon);
  double mu_sq = 0.0;
  for (double x : mu.p) mu_sq += x * x;
  return rc.trace_inv - mu_sq;
}

RiskConstants risk_constants(int v, int k, double epsilon) {
  if (v < 2) throw std::invalid_argument("alphabet size must be at least 2");
  if (k < 1 || k > v - 1)
    throw std::invalid_argument("subset size must lie in [1, v-1]");
  RiskConstants rc;
  rc.v = v;
  rc.k = k;
  rc.epsilon = epsilon;
  rc.f_q = trace_objective(v, k, epsilon);
  rc.a_q = closed_form_a(v, k, epsilon);
  rc.b_q = 1.0 - rc.a_q / v;
  rc.eig_small = rc.a_q;
  rc.eig_large = rc.a_q + v * rc.b_q;
  rc.minimax_n_risk = (v - 1) / rc.a_q;
  rc.trace_inv = rc.minimax_n_risk + 1.0 / v;
  return rc;
}

}  // namespace ldpbd
