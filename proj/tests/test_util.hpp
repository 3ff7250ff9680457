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

// Reference implementations used to cross-check library output. Everything
// here is written from first principles with plain loops so that a bug in
// the library cannot hide behind shared code.

#ifndef LDPBD_TESTS_TEST_UTIL_HPP
#define LDPBD_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ldpbd/designs.hpp"
#include "ldpbd/mechanism.hpp"

namespace testutil {

using Dense = std::vector<std::vector<double>>;

// Number of blocks containing both point s and point t, counted by direct
// scan.
inline long long pair_count(const ldpbd::IncidenceMatrix& a, int s, int t) {
  long long count = 0;
  for (int i = 0; i < a.b(); ++i)
    if (a.at(i, s) && a.at(i, t)) ++count;
  return count;
}

// Gauss-Jordan inverse with partial pivoting. Throws on (near-)singular
// input.
inline Dense naive_inverse(Dense m) {
  const std::size_t n = m.size();
  Dense inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    if (std::abs(m[pivot][col]) < 1e-12) throw std::runtime_error("singular matrix");
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);

    const double scale = 1.0 / m[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] *= scale;
      inv[col][j] *= scale;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      const double factor = m[row][col];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        m[row][j] -= factor * m[col][j];
        inv[row][j] -= factor * inv[col][j];
      }
    }
  }
  return inv;
}

inline Dense dense_from(const ldpbd::Mat& m) {
  Dense d(m.rows, std::vector<double>(m.cols));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      d[i][j] = m.a[static_cast<std::size_t>(i) * m.cols + j];
  return d;
}

// Gram matrix of a channel under an input law, computed densely from
// scratch: G[s][t] = sum_i Q[i][s] Q[i][t] / (Q mu)_i.
inline Dense oracle_gram(const Dense& q, const std::vector<double>& mu) {
  const std::size_t b = q.size();
  const std::size_t v = q[0].size();
  std::vector<double> nu(b, 0.0);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < v; ++j) nu[i] += q[i][j] * mu[j];
  Dense g(v, std::vector<double>(v, 0.0));
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t s = 0; s < v; ++s)
      for (std::size_t t = 0; t < v; ++t) g[s][t] += q[i][s] * q[i][t] / nu[i];
  return g;
}

inline double oracle_trace(const Dense& m) {
  double tr = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) tr += m[i][i];
  return tr;
}

inline double oracle_trace_inverse_gram(const Dense& q, const std::vector<double>& mu) {
  return oracle_trace(naive_inverse(oracle_gram(q, mu)));
}

// Builds the two-valued channel of an arbitrary 0/1 position matrix whose
// columns all hold the same number of ones. This reproduces the cell-value
// rule of the library mechanism without requiring pairwise balance, so
// tests can manufacture channels that are binary but not designs.
inline Dense make_tpm_from_positions(const ldpbd::IncidenceMatrix& positions, double epsilon) {
  const int b = positions.b();
  const int v = positions.v();
  int r = 0;
  for (int i = 0; i < b; ++i) r += positions.at(i, 0);
  for (int j = 1; j < v; ++j) {
    int c = 0;
    for (int i = 0; i < b; ++i) c += positions.at(i, j);
    if (c != r) throw std::invalid_argument("columns must hold equally many ones");
  }
  const double e_eps = std::exp(epsilon);
  const double p = 1.0 / (r * (e_eps - 1.0) + b);
  Dense q(b, std::vector<double>(v, p));
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < v; ++j)
      if (positions.at(i, j)) q[i][j] = p * e_eps;
  return q;
}

// The seven blocks {i, i+1, i+2} mod 7: two-valued, constant row and column
// sums, but pairwise unbalanced (adjacent points meet twice, distant ones
// never).
inline ldpbd::IncidenceMatrix cyclic_shift_positions() {
  ldpbd::IncidenceMatrix a(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int d = 0; d < 3; ++d) a.set(i, (i + d) % 7, true);
  return a;
}

// Canonical SplitMix64 stream, kept verbatim as the reference for the
// library's counter-based draws.
class ReferenceSplitMix64 {
 public:
  explicit ReferenceSplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace testutil

#endif  // LDPBD_TESTS_TEST_UTIL_HPP
