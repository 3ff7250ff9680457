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

#ifndef LDPBD_DESIGNS_HPP
#define LDPBD_DESIGNS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldpbd {

// Parameters of a balanced incomplete block design: v points, b blocks,
// each point in r blocks, each block of size k, each point pair in exactly
// lambda blocks. The counting identities b*k = v*r and r*(k-1) = lambda*(v-1)
// hold for every verified design. lambda = 0 designs (k = 1) are accepted;
// Fisher's inequality (b >= v) is enforced only for lambda >= 1.
struct DesignParams {
  int v = 0;
  int b = 0;
  int r = 0;
  int k = 0;
  int lambda = 0;

  bool operator==(const DesignParams&) const = default;
};

enum class DesignErrorKind {
  kInvalidArgument,
  kRowLimitExceeded,
  kDuplicateRows,
  kNonConstantRowSum,
  kNonConstantColumnSum,
  kUnbalancedPairs,
  kFisherViolation,
};

class DesignError : public std::runtime_error {
 public:
  DesignError(DesignErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}

  DesignErrorKind kind() const { return kind_; }

  // Populated for kUnbalancedPairs: the first column pair (in lexicographic
  // order) whose meet count differs from the lambda forced by the counting
  // identity, together with that count.
  int pair_first = -1;
  int pair_second = -1;
  long long pair_count = -1;

 private:
  DesignErrorKind kind_;
};

// Zero-one incidence matrix of a block design: b rows (blocks) by v columns
// (points), entry (i, j) = 1 iff point j lies in block i. Stored dense.
class IncidenceMatrix {
 public:
  IncidenceMatrix(int blocks, int points)
      : b_(blocks), v_(points), bits_(static_cast<std::size_t>(blocks) * points, 0) {
    if (blocks < 1 || points < 1)
      throw DesignError(DesignErrorKind::kInvalidArgument,
                        "incidence matrix needs at least one block and one point");
  }

  int b() const { return b_; }
  int v() const { return v_; }

  std::uint8_t at(int i, int j) const {
    return bits_[static_cast<std::size_t>(i) * v_ + j];
  }
  void set(int i, int j, bool value) {
    bits_[static_cast<std::size_t>(i) * v_ + j] = value ? 1 : 0;
  }

  const std::vector<std::uint8_t>& raw() const { return bits_; }

  bool operator==(const IncidenceMatrix&) const = default;

 private:
  int b_;
  int v_;
  std::vector<std::uint8_t> bits_;
};

// Blocks as sorted lists of point indices; bijective with IncidenceMatrix.
using BlockList = std::vector<std::vector<int>>;

struct VerifyOutcome {
  std::optional<DesignParams> params;
  DesignErrorKind error_kind = DesignErrorKind::kInvalidArgument;
  std::string message;
  int pair_first = -1;
  int pair_second = -1;
  long long pair_count = -1;

  bool ok() const { return params.has_value(); }
};

// Checks that A is the incidence matrix of a BIBD: constant row sums k,
// constant column sums r, every pair of distinct columns meeting in exactly
// lambda = r(k-1)/(v-1) blocks, distinct rows, and Fisher's inequality when
// lambda >= 1. Equivalent to A'A = (r-lambda)I + lambda*J with constant row
// sums. All arithmetic is exact.
VerifyOutcome try_verify_design(const IncidenceMatrix& a) noexcept;

// Throwing form of try_verify_design.
DesignParams verify_design(const IncidenceMatrix& a);

inline constexpr std::uint64_t kDefaultRowLimit = 1'000'000;

// Identity matrix of order v: the design behind v-ary randomised response.
IncidenceMatrix trivial_design(int v);

// All C(v, k) k-subsets of [0, v), one block per subset, in lexicographic
// order of the sorted subsets (the subset-selection design). row_limit guards
// the binomial blow-up.
IncidenceMatrix complete_design(int v, int k, std::uint64_t row_limit = kDefaultRowLimit);

enum class Polarity { kPlus, kMinus };

// Sylvester Hadamard construction: form the +/-1 matrix of order 2^t with
// entry (i, j) = (-1)^popcount(i & j), drop row 0 and column 0, and take the
// positions of the chosen sign. kMinus gives (2^t-1, 2^t-1, 2^(t-1),
// 2^(t-1), 2^(t-2)); kPlus gives the complementary design.
IncidenceMatrix hadamard_design(int t, Polarity polarity);

// Point-hyperplane incidence of the projective geometry PG(t-1, p) for prime
// p: points and blocks are the projective classes of nonzero vectors in
// F_p^t (canonical representative: first nonzero coordinate 1, enumerated in
// lexicographic order), and block i contains point j iff their dot product
// is 0 mod p. Gives v = b = (p^t-1)/(p-1), k = r = (p^(t-1)-1)/(p-1).
IncidenceMatrix projective_design(int p, int t);

// The (7,7,3,3,1) design built from the perfect difference set {1,2,4}
// mod 7: block i is {1+i, 2+i, 4+i} sorted.
IncidenceMatrix fano_design();

BlockList blocks_from_incidence(const IncidenceMatrix& a);
IncidenceMatrix incidence_from_blocks(const BlockList& blocks, int v);

}  // namespace ldpbd

#endif  // LDPBD_DESIGNS_HPP
