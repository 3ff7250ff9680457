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

#include "ldpbd/designs.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <numeric>

namespace ldpbd {
namespace {

VerifyOutcome fail(DesignErrorKind kind, std::string msg) {
  VerifyOutcome out;
  out.error_kind = kind;
  out.message = std::move(msg);
  return out;
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; static_cast<long long>(d) * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

VerifyOutcome try_verify_design(const IncidenceMatrix& a) noexcept {
  const int b = a.b();
  const int v = a.v();

  // Constant row sums give the block size k.
  int k = 0;
  for (int j = 0; j < v; ++j) k += a.at(0, j);
  for (int i = 1; i < b; ++i) {
    int s = 0;
    for (int j = 0; j < v; ++j) s += a.at(i, j);
    if (s != k)
      return fail(DesignErrorKind::kNonConstantRowSum,
                  "block " + std::to_string(i) + " has size " + std::to_string(s) +
                      ", expected " + std::to_string(k));
  }
  if (k < 1)
    return fail(DesignErrorKind::kInvalidArgument, "blocks are empty");

  // Constant column sums give the replication number r.
  std::vector<int> col(v, 0);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < v; ++j) col[j] += a.at(i, j);
  const int r = col[0];
  for (int j = 1; j < v; ++j)
    if (col[j] != r)
      return fail(DesignErrorKind::kNonConstantColumnSum,
                  "point " + std::to_string(j) + " lies in " + std::to_string(col[j]) +
                      " blocks, expected " + std::to_string(r));
  if (r < 1)
    return fail(DesignErrorKind::kInvalidArgument, "some point lies in no block");

  // Pair balance: every pair of points must meet in exactly
  // lambda = r(k-1)/(v-1) blocks. Counts accumulate per block in O(b k^2).
  long long lambda_ll = 0;
  if (v >= 2 && k >= 2) {
    if (static_cast<std::size_t>(v) * v > 100'000'000)
      return fail(DesignErrorKind::kInvalidArgument,
                  "alphabet too large for pair verification");
    std::vector<std::uint32_t> pair_count(static_cast<std::size_t>(v) * v, 0);
    std::vector<int> members;
    members.reserve(k);
    for (int i = 0; i < b; ++i) {
      members.clear();
      for (int j = 0; j < v; ++j)
        if (a.at(i, j)) members.push_back(j);
      for (std::size_t s = 0; s < members.size(); ++s)
        for (std::size_t t = s + 1; t < members.size(); ++t)
          ++pair_count[static_cast<std::size_t>(members[s]) * v + members[t]];
    }
    // Cross-multiplied comparison keeps everything in integers even when
    // r(k-1)/(v-1) is not integral.
    const long long num = static_cast<long long>(r) * (k - 1);
    for (int s = 0; s < v; ++s)
      for (int t = s + 1; t < v; ++t) {
        const long long c = pair_count[static_cast<std::size_t>(s) * v + t];
        if (c * (v - 1) != num) {
          VerifyOutcome out = fail(
              DesignErrorKind::kUnbalancedPairs,
              "points " + std::to_string(s) + " and " + std::to_string(t) + " share " +
                  std::to_string(c) + " blocks, expected " + std::to_string(num) + "/" +
                  std::to_string(v - 1));
          out.pair_first = s;
          out.pair_second = t;
          out.pair_count = c;
          return out;
        }
      }
    lambda_ll = num / (v - 1);
  }

  // Repeated blocks collapse the design; compare blocks as sorted index
  // lists so the check costs O(b k log b) rather than O(b v log b).
  {
    BlockList blocks = blocks_from_incidence(a);
    std::sort(blocks.begin(), blocks.end());
    for (std::size_t i = 1; i < blocks.size(); ++i)
      if (blocks[i] == blocks[i - 1])
        return fail(DesignErrorKind::kDuplicateRows, "repeated block");
  }

  if (lambda_ll >= 1 && b < v)
    return fail(DesignErrorKind::kFisherViolation,
                "b = " + std::to_string(b) + " blocks < v = " + std::to_string(v) +
                    " points with lambda >= 1");

  DesignParams params;
  params.v = v;
  params.b = b;
  params.r = r;
  params.k = k;
  params.lambda = static_cast<int>(lambda_ll);
  VerifyOutcome out;
  out.params = params;
  return out;
}

DesignParams verify_design(const IncidenceMatrix& a) {
  VerifyOutcome out = try_verify_design(a);
  if (!out.ok()) {
    DesignError err(out.error_kind, out.message);
    err.pair_first = out.pair_first;
    err.pair_second = out.pair_second;
    err.pair_count = out.pair_count;
    throw err;
  }
  return *out.params;
}

IncidenceMatrix trivial_design(int v) {
  if (v < 1)
    throw DesignError(DesignErrorKind::kInvalidArgument, "v must be at least 1");
  IncidenceMatrix a(v, v);
  for (int i = 0; i < v; ++i) a.set(i, i, true);
  return a;
}

IncidenceMatrix complete_design(int v, int k, std::uint64_t row_limit) {
  if (v < 2 || k < 1 || k > v - 1)
    throw DesignError(DesignErrorKind::kInvalidArgument,
                      "complete design needs v >= 2 and 1 <= k <= v-1");
  // C(v, k) with early bail-out once the count passes the row limit.
  std::uint64_t binom = 1;
  for (int i = 1; i <= k; ++i) {
    if (binom > row_limit * static_cast<std::uint64_t>(i))
      throw DesignError(DesignErrorKind::kRowLimitExceeded,
                        "C(" + std::to_string(v) + "," + std::to_string(k) +
                            ") exceeds the row limit of " + std::to_string(row_limit));
    binom = binom * static_cast<std::uint64_t>(v - k + i) / i;
  }
  if (binom > row_limit)
    throw DesignError(DesignErrorKind::kRowLimitExceeded,
                      "C(" + std::to_string(v) + "," + std::to_string(k) +
                          ") exceeds the row limit of " + std::to_string(row_limit));

  IncidenceMatrix a(static_cast<int>(binom), v);
  std::vector<int> subset(k);
  std::iota(subset.begin(), subset.end(), 0);
  for (int row = 0;; ++row) {
    for (int j : subset) a.set(row, j, true);
    // Advance to the next k-subset in lexicographic order.
    int i = k - 1;
    while (i >= 0 && subset[i] == v - k + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int t = i + 1; t < k; ++t) subset[t] = subset[t - 1] + 1;
  }
  return a;
}

IncidenceMatrix hadamard_design(int t, Polarity polarity) {
  if (t < 2 || t > 20)
    throw DesignError(DesignErrorKind::kInvalidArgument,
                      "hadamard construction needs 2 <= t <= 20");
  const int n = 1 << t;
  IncidenceMatrix a(n - 1, n - 1);
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      const bool minus = (std::popcount(static_cast<unsigned>(i & j)) & 1) != 0;
      const bool on = (polarity == Polarity::kMinus) ? minus : !minus;
      a.set(i - 1, j - 1, on);
    }
  return a;
}

IncidenceMatrix projective_design(int p, int t) {
  if (!is_prime(p))
    throw DesignError(DesignErrorKind::kInvalidArgument,
                      std::to_string(p) + " is not prime");
  if (t < 2)
    throw DesignError(DesignErrorKind::kInvalidArgument, "t must be at least 2");
  long long pt = 1;
  for (int i = 0; i < t; ++i) {
    pt *= p;
    if (pt > (1LL << 31))
      throw DesignError(DesignErrorKind::kRowLimitExceeded, "p^t is too large");
  }
  const long long v_ll = (pt - 1) / (p - 1);
  if (v_ll > 1'000'000)
    throw DesignError(DesignErrorKind::kRowLimitExceeded,
                      "projective geometry has too many points");
  const int v = static_cast<int>(v_ll);

  // Canonical representatives of projective classes: digit strings base p
  // (least significant digit first) whose lowest nonzero digit is 1, in
  // increasing integer order.
  std::vector<std::vector<int>> reps;
  reps.reserve(v);
  for (long long x = 1; x < pt; ++x) {
    std::vector<int> digits(t);
    long long y = x;
    for (int i = 0; i < t; ++i) {
      digits[i] = static_cast<int>(y % p);
      y /= p;
    }
    int first = 0;
    while (digits[first] == 0) ++first;
    if (digits[first] == 1) reps.push_back(std::move(digits));
  }

  IncidenceMatrix a(v, v);
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < v; ++j) {
      long long dot = 0;
      for (int d = 0; d < t; ++d) dot += static_cast<long long>(reps[i][d]) * reps[j][d];
      a.set(i, j, dot % p == 0);
    }
  return a;
}

IncidenceMatrix fano_design() {
  IncidenceMatrix a(7, 7);
  for (int i = 0; i < 7; ++i) {
    a.set(i, (1 + i) % 7, true);
    a.set(i, (2 + i) % 7, true);
    a.set(i, (4 + i) % 7, true);
  }
  return a;
}

BlockList blocks_from_incidence(const IncidenceMatrix& a) {
  BlockList blocks(a.b());
  for (int i = 0; i < a.b(); ++i)
    for (int j = 0; j < a.v(); ++j)
      if (a.at(i, j)) blocks[i].push_back(j);
  return blocks;
}

IncidenceMatrix incidence_from_blocks(const BlockList& blocks, int v) {
  if (blocks.empty() || v < 1)
    throw DesignError(DesignErrorKind::kInvalidArgument,
                      "need at least one block and one point");
  IncidenceMatrix a(static_cast<int>(blocks.size()), v);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (int j : blocks[i]) {
      if (j < 0 || j >= v)
        throw DesignError(DesignErrorKind::kInvalidArgument,
                          "point index " + std::to_string(j) + " out of range");
      if (a.at(static_cast<int>(i), j))
        throw DesignError(DesignErrorKind::kInvalidArgument,
                          "block " + std::to_string(i) + " repeats point " +
                              std::to_string(j));
      a.set(static_cast<int>(i), j, true);
    }
  return a;
}

}  // namespace ldpbd
