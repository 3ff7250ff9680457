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

#include "ldpbd/mechanism.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ldpbd {

PrivacyParam::PrivacyParam(double eps) : epsilon(eps), e_eps(std::exp(eps)) {
  if (!std::isfinite(eps) || eps <= 0.0)
    throw std::invalid_argument("privacy parameter must be positive and finite");
}

Distribution Distribution::uniform(int m) {
  if (m < 1) throw std::invalid_argument("distribution needs at least one outcome");
  Distribution d;
  d.p.assign(m, 1.0 / m);
  return d;
}

Distribution Distribution::validated(std::vector<double> vec) {
  if (vec.empty()) throw std::invalid_argument("distribution needs at least one outcome");
  double sum = 0.0;
  for (double x : vec) {
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument("distribution entries must be finite and nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("distribution entries must sum to 1");
  Distribution d;
  d.p = std::move(vec);
  for (double& x : d.p) x /= sum;
  return d;
}

Mechanism build_mechanism(const IncidenceMatrix& design, double epsilon) {
  const PrivacyParam priv(epsilon);
  const DesignParams params = verify_design(design);

  const double growth = priv.e_eps - 1.0;
  const double p = 1.0 / (params.r * growth + params.b);
  Mechanism mech{TransitionMatrix(Mat(params.b, params.v)), MechanismSpec{}};
  mech.spec.design = params;
  mech.spec.epsilon = epsilon;
  mech.spec.p = p;
  mech.spec.p0 = 1.0 / (params.v + params.k * growth);
  mech.spec.small = p;
  mech.spec.large = p * priv.e_eps;
  mech.spec.comm_bits =
      params.b > 1 ? std::bit_width(static_cast<std::uint64_t>(params.b - 1)) : 0;

  for (int i = 0; i < params.b; ++i)
    for (int j = 0; j < params.v; ++j)
      mech.q.m.at(i, j) = design.at(i, j) ? mech.spec.large : mech.spec.small;
  return mech;
}

double ldp_ratio(const TransitionMatrix& q) {
  double worst = 1.0;
  for (int i = 0; i < q.outputs(); ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int j = 0; j < q.inputs(); ++j) {
      const double x = q.m.at(i, j);
      if (!(x > 0.0))
        throw std::invalid_argument("channel entries must be strictly positive");
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    worst = std::max(worst, hi / lo);
  }
  return worst;
}

Distribution induced_distribution(const TransitionMatrix& q, const Distribution& mu) {
  if (mu.size() != q.inputs())
    throw std::invalid_argument("input law size does not match channel inputs");
  Distribution nu;
  nu.p = matvec(q.m, mu.p);
  return nu;
}

double trace_objective(int v, double k, double epsilon) {
  if (v < 2) throw std::invalid_argument("alphabet size must be at least 2");
  if (!(k >= 0.0)) throw std::invalid_argument("subset size must be nonnegative");
  const PrivacyParam priv(epsilon);
  const double g1 = std::expm1(epsilon);        // e^eps - 1
  const double g2 = std::expm1(2.0 * epsilon);  // e^(2 eps) - 1
  const double den = k * g1 + v;
  return static_cast<double>(v) * v * (k * g2 + v) / (den * den);
}

int optimal_subset_size(int v, double epsilon) {
  if (v <= 2) throw std::invalid_argument("alphabet size must exceed 2");
  const PrivacyParam priv(epsilon);
  // The real maximiser of the objective is v / (1 + e^eps); the integer
  // optimum is one of its two neighbours.
  const double x = v / (1.0 + priv.e_eps);
  int lo = static_cast<int>(std::floor(x));
  int hi = static_cast<int>(std::ceil(x));
  lo = std::max(1, std::min(lo, v - 1));
  hi = std::max(1, std::min(hi, v - 1));
  if (lo == hi) return lo;
  const double f_lo = trace_objective(v, lo, epsilon);
  const double f_hi = trace_objective(v, hi, epsilon);
  return f_hi > f_lo ? hi : lo;
}

int sample_output(const TransitionMatrix& q, int input, double unit_draw) {
  if (input < 0 || input >= q.inputs())
    throw std::invalid_argument("input symbol out of range");
  double cum = 0.0;
  for (int i = 0; i < q.outputs(); ++i) {
    cum += q.m.at(i, input);
    if (unit_draw < cum) return i;
  }
  return q.outputs() - 1;
}

Mat gram_matrix(const TransitionMatrix& q, const Distribution& nu) {
  if (nu.size() != q.outputs())
    throw std::invalid_argument("output weighting size does not match channel outputs");
  for (double x : nu.p)
    if (!(x > 0.0))
      throw std::invalid_argument("output weighting has a zero component");
  const int b = q.outputs();
  const int v = q.inputs();
  Mat g(v, v);
  for (int i = 0; i < b; ++i) {
    const double w = 1.0 / nu.p[i];
    for (int s = 0; s < v; ++s) {
      const double qs = q.m.at(i, s);
      if (qs == 0.0) continue;
      for (int t = 0; t < v; ++t) g.at(s, t) += w * qs * q.m.at(i, t);
    }
  }
  return g;
}

}  // namespace ldpbd
