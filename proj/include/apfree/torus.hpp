#pragma once

// Exact arithmetic on (T^2)^{D0}.
//
// A TorusVec stores 2*D0 coordinates as numerators over one shared modulus
// Q, so every coordinate is a grid value k/Q in [0,1). Translating by
// n*theta0 is then modular arithmetic on the numerators. Lifts and
// displacements leave the grid (half-differences have denominator 2Q) and
// are carried as vectors of exact rationals.

#include "apfree/rational.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace apfree {

/// 2^61 - 1.
inline constexpr std::uint64_t kDefaultModulus = (std::uint64_t{1} << 61) - 1;
/// Numerator sums of three coordinates must fit in 64 bits.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

class TorusVec {
 public:
  /// Throws std::invalid_argument unless the size is even and non-zero,
  /// 1 <= modulus <= 2^62, and every numerator is < modulus.
  TorusVec(std::vector<std::uint64_t> numerators, std::uint64_t modulus);

  static TorusVec zero(std::size_t dim_pairs, std::uint64_t modulus);

  /// Projects arbitrary rationals onto the grid (reduction mod 1). Every
  /// denominator must divide the modulus; otherwise std::invalid_argument.
  static TorusVec from_rats(std::span<const Rat> coords, std::uint64_t modulus);

  std::size_t dim_pairs() const { return numerators_.size() / 2; }
  std::size_t size() const { return numerators_.size(); }
  std::uint64_t modulus() const { return modulus_; }
  std::span<const std::uint64_t> numerators() const { return numerators_; }
  std::uint64_t numerator(std::size_t i) const { return numerators_[i]; }
  Rat coord(std::size_t i) const;

  TorusVec operator+(const TorusVec& other) const;
  TorusVec scaled(std::uint64_t n) const;

  friend bool operator==(const TorusVec&, const TorusVec&) = default;

 private:
  std::vector<std::uint64_t> numerators_;
  std::uint64_t modulus_;
};

/// A point of R^{2*D0}: lifts x in [0,1)^{2 D0} and displacements d in
/// [-1/2,1/2]^{2 D0}.
using LiftVec = std::vector<Rat>;

/// Canonical representative in [0,1)^{2 D0}.
LiftVec lift(const TorusVec& theta);

/// {x}: x on [0,1/2), x - 1/2 on [1/2,1). Throws std::out_of_range outside [0,1).
Rat frac_bracket(const Rat& x);
LiftVec frac_bracket(const LiftVec& x);

/// Sum-map, one value in [0,2) per T^2 factor.
std::vector<Rat> psi(const TorusVec& theta);
/// First lift coordinate of each T^2 factor.
std::vector<Rat> p_proj(const TorusVec& theta);

/// mu + n*theta0, reduced into [0,1).
TorusVec affine_orbit(const TorusVec& mu, const TorusVec& theta0, std::uint64_t n);

/// (lift(theta_z) - lift(theta_x)) / 2.
LiftVec half_difference(const TorusVec& theta_x, const TorusVec& theta_z);

/// Per-coordinate offsets xi with d = lift(alpha) + xi for the
/// half-difference d of any 3-AP {theta, theta+alpha, theta+2alpha}.
/// The realised offsets are {-1,-1/2,0}; 1/2 is kept for symmetry.
inline const std::array<Rat, 4>& xi_offsets() {
  static const std::array<Rat, 4> offsets{Rat(-1), Rat(-1, 2), Rat(0), Rat(1, 2)};
  return offsets;
}

/// Candidate displacements lift(alpha)_j + xi for each scalar coordinate j.
std::vector<std::array<Rat, 4>> xi_candidates(const TorusVec& alpha);

}  // namespace apfree
