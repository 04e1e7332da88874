#pragma once

// Building-block regions of [0,1)^2 and their products.
//
//   U1 = {(a,b) in [0,1/2)x[1/2,1) u [1/2,1)x[0,1/2) : a+b < 3/4}
//   U2 = {(a,b) in [0,1/2)x[0,1) : 3/4+eps < a+b < 5/4}
//   S_eps = pi(U1 u U2),  measure 9/32 - eps/2.
//
// The alternative T-variant is the truncated set
//   T1 = {[0,1/2)x[1/2,1) : 7/12 <= a+b <= 4/3} u {[0,1/2)^2 : 5/6 < a+b}
//   T2 = {[1/2,1)x[0,1/2) : 7/12 <= a+b < 5/6, 2a+b < 3/2}
// with the psi-band [5/6-eps, 5/6) removed. It is used for benchmarking only.

#include "apfree/rational.hpp"
#include "apfree/torus.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace apfree {

enum class BlockVariant { kUTruncation, kTEps };

struct BlockSpec {
  BlockVariant variant = BlockVariant::kUTruncation;
  Rat epsilon{1, 16};

  /// Throws std::invalid_argument unless 0 < epsilon < 1/4.
  void validate() const;
};

bool in_U1(const Rat& a, const Rat& b);
bool in_U2(const Rat& a, const Rat& b, const Rat& eps);
bool in_U(const Rat& a, const Rat& b, const Rat& eps);
bool in_T_truncated(const Rat& a, const Rat& b, const Rat& eps);
bool in_block_pair(const Rat& a, const Rat& b, const BlockSpec& spec);

/// Every T^2 factor of theta lies in the block.
bool in_block(const TorusVec& theta, const BlockSpec& spec);

/// U-variant: exact measure 9/32 - eps/2. T-variant: the lower bound 7/24 - 2 eps.
Rat measure_exact(const BlockSpec& spec);

/// Membership for grid points k/Q using 128-bit integer comparisons. Falls
/// back to the rational predicates when eps has a very large denominator.
class GridBlock {
 public:
  GridBlock(const BlockSpec& spec, std::uint64_t modulus);

  bool contains_pair(std::uint64_t a, std::uint64_t b) const;
  bool contains(std::span<const std::uint64_t> numerators) const;
  bool contains(const TorusVec& theta) const;

  const BlockSpec& spec() const { return spec_; }

 private:
  BlockSpec spec_;
  std::uint64_t q_;
  // eps = eps_num / eps_den when both fit comfortably in 64 bits.
  std::optional<std::pair<std::int64_t, std::int64_t>> eps_;
};

}  // namespace apfree
