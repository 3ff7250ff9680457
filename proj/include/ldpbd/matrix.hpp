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

#ifndef LDPBD_MATRIX_HPP
#define LDPBD_MATRIX_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ldpbd {

// Small dense row-major matrix of doubles. Everything in this library is
// desk scale (v up to a few thousand), so plain contiguous storage is enough.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {
    if (r < 0 || c < 0) throw std::invalid_argument("Mat: negative dimension");
  }

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  bool operator==(const Mat& other) const = default;
};

inline Mat matmul(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matmul: dimension mismatch");
  Mat z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int t = 0; t < x.cols; ++t) {
      const double xv = x.at(i, t);
      if (xv == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) += xv * y.at(t, j);
    }
  }
  return z;
}

inline Mat transpose(const Mat& x) {
  Mat z(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) z.at(j, i) = x.at(i, j);
  return z;
}

// y = M x
inline std::vector<double> matvec(const Mat& m, const std::vector<double>& x) {
  if (m.cols != static_cast<int>(x.size()))
    throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> y(static_cast<std::size_t>(m.rows), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m.at(i, j) * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

inline double max_abs_diff(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    double d = x.a[i] - y.a[i];
    if (d < 0) d = -d;
    if (d > worst) worst = d;
  }
  return worst;
}

}  // namespace ldpbd

#endif  // LDPBD_MATRIX_HPP
