#pragma once

// The three weights on (T^2)^{D0} and the two-level bucket index.
//
//   w1(theta) = sum_i psi_i
//   w2(theta) = c2 * sum_i psi_i^2
//   w3(theta) = sum_i (1 - {p_i})^2      ({.} dropped when w3_literal)
//
// Any three points of a 3-AP taken from the product block satisfy either
// 2 w1(y) >= w1(x) + w1(z) + 1/2, or a second-difference bound on w2 + w3
// of at least the displacement penalty. Half-open buckets of width 1/4
// (w1) and delta/2 (w2 + w3) therefore cannot contain such a triple once
// the penalty is >= delta.

#include "apfree/rational.hpp"
#include "apfree/torus.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace apfree {

struct WeightParams {
  Rat epsilon{1, 16};
  Rat c2;
  Rat w1_width{1, 4};
  Rat w23_width;
  bool w3_literal = false;
};

/// 10^10 / eps^2.
Rat default_c2(const Rat& epsilon);
/// 1 + 10^8 / eps^2: below this an index with |d1+d2| >= eps/1000 is no
/// longer guaranteed a contribution of 100 to the second difference.
Rat c2_floor(const Rat& epsilon);

/// Throws std::invalid_argument when c2 is under the floor and
/// allow_unsafe_c2 is false, or when c2 <= 0.
WeightParams make_weight_params(const Rat& epsilon, const Rat& delta_hat, std::optional<Rat> c2 = std::nullopt,
                                bool allow_unsafe_c2 = false, bool w3_literal = false);

Rat w1(const TorusVec& theta);
Rat w2(const TorusVec& theta, const Rat& c2);
Rat w3(const TorusVec& theta, bool literal = false);
inline Rat w2(const TorusVec& theta, const WeightParams& params) { return w2(theta, params.c2); }
inline Rat w23(const TorusVec& theta, const WeightParams& params) {
  return Rat(w2(theta, params.c2) + w3(theta, params.w3_literal));
}

struct BucketKey {
  BigInt r1;
  BigInt r2;
  friend bool operator==(const BucketKey&, const BucketKey&) = default;
  friend auto operator<=>(const BucketKey& a, const BucketKey& b) {
    if (auto c = cmp(a.r1, b.r1); c != 0) return c <=> 0;
    return cmp(a.r2, b.r2) <=> 0;
  }
};

/// (floor(w1 / w1_width), floor((w2 + w3) / w23_width)), evaluated on rationals.
BucketKey bucket_pair(const TorusVec& theta, const WeightParams& params);

/// Same index as bucket_pair, computed from the integer numerators of a
/// grid point with all denominators cleared once up front.
class BucketIndexer {
 public:
  BucketIndexer(const WeightParams& params, std::uint64_t modulus);

  BucketKey index(std::span<const std::uint64_t> numerators) const;
  BucketKey index(const TorusVec& theta) const { return index(theta.numerators()); }

 private:
  bool literal_;
  std::uint64_t q_;
  // r1 = floor(sum(a+b) * w1_scale_num / w1_scale_den)
  BigInt w1_scale_num_;
  BigInt w1_scale_den_;
  // r2 = floor((s2_coef * S2 + t_coef * T) / r2_den), S2 = sum (a+b)^2,
  // T = sum (2Q - 2{p}Q)^2.
  BigInt s2_coef_;
  BigInt t_coef_;
  BigInt r2_den_;
};

}  // namespace apfree
