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

#ifndef LDPBD_ESTIMATION_HPP
#define LDPBD_ESTIMATION_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ldpbd/mechanism.hpp"

namespace ldpbd {

class SingularGramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Left inverse of the channel: L = (Q' D^(-1) Q)^(-1) Q' D^(-1) with
// D = diag(Q * mu). Satisfies L Q = I for any mu with positive induced
// output probabilities, so L applied to empirical output frequencies is an
// unbiased estimate of the input law.
struct DebiasMatrix {
  Mat m;  // v rows by b columns
};

// Closed-form constants of a block design mechanism under the uniform input
// law. The Gram matrix Q' D^(-1) Q equals a_q I + b_q J, its eigenvalues are
// a_q (multiplicity v-1) and a_q + v b_q = v (multiplicity 1), and the exact
// scaled risk of the unbiased estimator at mu is trace_inv - |mu|_2^2.
struct RiskConstants {
  int v = 0;
  int k = 0;
  double epsilon = 0.0;
  double f_q = 0.0;        // trace_objective(v, k, epsilon)
  double a_q = 0.0;        // (f_q - v) / (v - 1)
  double b_q = 0.0;        // 1 - a_q / v
  double eig_small = 0.0;  // a_q
  double eig_large = 0.0;  // a_q + v * b_q = v
  double trace_inv = 0.0;  // (v - 1) / a_q + 1 / v
  double minimax_n_risk = 0.0;  // trace_inv - 1/v = (v-1)^2 / (f_q - v)
};

// Computes L for a channel and a positive output weighting nu, normally the
// induced law Q * mu. When the Gram matrix has the two-level form a I + b J
// the inverse is taken in closed form as (1/a)(I - b/(a + v b) J); otherwise
// the v linear systems are solved densely with full pivoting. Throws
// SingularGramError, with a pivot-ratio condition estimate in the message,
// when the Gram matrix is numerically singular (channel columns not linearly
// independent under D).
DebiasMatrix debias_matrix(const TransitionMatrix& q, const Distribution& nu);

// Same construction with an arbitrary strictly positive weighting that need
// not be normalised. L is invariant under scaling of the weighting, and
// L Q = I holds for every such weighting.
DebiasMatrix debias_matrix_weighted(const TransitionMatrix& q, const std::vector<double>& nu);

// Applies L to the empirical output frequencies counts / n. counts must have
// one entry per output and sum to n.
std::vector<double> estimate(const DebiasMatrix& l, const std::vector<std::int64_t>& counts,
                             std::int64_t n);

// tr((Q' D^(-1) Q)^(-1)) with D = diag(nu). Uses the closed form
// (v-1)/a + 1/(a + v b) when the Gram matrix has the two-level form
// a I + b J, and the dense inverse otherwise. With nu induced by an input
// law mu, n times the expected squared error of the unbiased estimator
// equals this trace minus |mu|_2^2, exactly, for every sample size.
double trace_inverse_gram(const TransitionMatrix& q, const Distribution& nu);

// Closed-form route for block design mechanisms: the scaled risk bound
// (v-1)^2 / (f(k) - v) + 1/v - |mu|_2^2. With mu uniform this is the exact
// scaled risk of the design's unbiased estimator and is largest over all mu,
// which is what makes uniform the hardest input law.
double minimax_bound(int v, int k, double epsilon, const Distribution& mu);

RiskConstants risk_constants(int v, int k, double epsilon);

}  // namespace ldpbd

#endif  // LDPBD_ESTIMATION_HPP
