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

#ifndef LDPBD_MECHANISM_HPP
#define LDPBD_MECHANISM_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ldpbd/designs.hpp"
#include "ldpbd/matrix.hpp"

namespace ldpbd {

struct PrivacyParam {
  double epsilon = 0.0;
  double e_eps = 1.0;  // exp(epsilon), computed once

  explicit PrivacyParam(double eps);
};

// A probability vector over a finite alphabet.
struct Distribution {
  std::vector<double> p;

  static Distribution uniform(int m);
  // Validates entries nonnegative and summing to 1 within 1e-9, then
  // renormalises exactly.
  static Distribution validated(std::vector<double> vec);

  int size() const { return static_cast<int>(p.size()); }
};

// Column-stochastic transition matrix of a privatisation channel:
// m.at(i, j) = Pr[output i | input j], with b rows (outputs) and v columns
// (inputs).
struct TransitionMatrix {
  Mat m;

  explicit TransitionMatrix(Mat q) : m(std::move(q)) {}
  int outputs() const { return m.rows; }
  int inputs() const { return m.cols; }
};

struct MechanismSpec {
  DesignParams design;
  double epsilon = 0.0;
  double p = 0.0;        // base cell value 1 / (r (e^eps - 1) + b)
  double p0 = 0.0;       // per-point scale 1 / (v + k (e^eps - 1))
  double large = 0.0;    // p * e^eps
  double small = 0.0;    // p
  int comm_bits = 0;     // bits to index an output: bit_width(b - 1)
};

struct Mechanism {
  TransitionMatrix q;
  MechanismSpec spec;
};

// Builds the randomised response channel of a block design: each cell of the
// incidence matrix A becomes p * e^eps where A is 1 and p where A is 0, with
// p chosen so every column sums to 1. Requires eps > 0 and a design that
// passes verify_design.
Mechanism build_mechanism(const IncidenceMatrix& design, double epsilon);

// max over output rows of (max column entry / min column entry); the privacy
// level of a channel is the log of this value. Requires all entries positive.
double ldp_ratio(const TransitionMatrix& q);

// The output distribution nu = Q * mu over the b outputs. No renormalisation
// is applied: a column-stochastic channel maps a probability vector to a
// probability vector exactly.
Distribution induced_distribution(const TransitionMatrix& q, const Distribution& mu);

// The scale-free figure of merit of subset size k on alphabet size v at
// privacy eps:
//
//   f(k) = v^2 (k (e^(2 eps) - 1) + v) / (k (e^eps - 1) + v)^2.
//
// Larger is better; f(k) - v is proportional to the reciprocal of the
// leading estimation risk term. Real-valued k is accepted so callers can
// inspect the objective between integers.
double trace_objective(int v, double k, double epsilon);

// The integer k in [1, v-1] maximising trace_objective, computed by rounding
// the real maximiser v / (1 + e^eps) both ways and comparing. Ties take the
// smaller k. Requires v > 2.
int optimal_subset_size(int v, double epsilon);

// Inverse-CDF sample from the column of q indexed by input, consuming one
// uniform draw in [0, 1).
int sample_output(const TransitionMatrix& q, int input, double unit_draw);

// Q' diag(nu)^(-1) Q for a strictly positive weighting nu over the b
// outputs. With nu = induced_distribution(q, mu) this is the v x v matrix
// whose inverse trace gives the exact scaled risk of the unbiased estimator
// under input law mu. Throws if nu has the wrong length or a component that
// is zero or negative.
Mat gram_matrix(const TransitionMatrix& q, const Distribution& nu);

}  // namespace ldpbd

#endif  // LDPBD_MECHANISM_HPP
