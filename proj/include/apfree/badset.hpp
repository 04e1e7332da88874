#pragma once

// Bad directions and the search for a good orbit direction theta0.
//
// For d in (R^2)^{D0} the penalty is sum_i (d1+d2)^2 + d1^2. A direction
// alpha is bad when some admissible offset xi makes lift(alpha) + xi have
// penalty below delta_hat. Orbit directions n*theta0 (n = 1..N) that avoid
// the bad set guarantee every surviving 3-AP has a large weight spread.

#include "apfree/rational.hpp"
#include "apfree/torus.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>

namespace apfree {

struct BadSetParams {
  Rat delta_hat;
  std::uint64_t n = 1;
  unsigned d0 = 1;
};

/// Largest k / 2^64 with (400 k)^D * N^2 <= 2^(64 D), i.e. the largest
/// dyadic rational (denominator 2^64) not exceeding N^(-2/D) / 400.
/// Throws std::invalid_argument for D = 0, N = 0, or when the value
/// underflows to zero.
Rat conservative_delta(std::uint64_t n, unsigned d);

/// D must be even and >= 2; d0 = D / 2.
BadSetParams make_bad_set_params(std::uint64_t n, unsigned d);

/// min over xi in {-1,-1/2,0,1/2}^2 of (d1+d2)^2 + d1^2, d = (a1,a2) + xi.
Rat coord_penalty(const Rat& a1, const Rat& a2);

/// sum_i coord_penalty(alpha^(i)) < delta_hat.
bool in_bad_set(const TorusVec& alpha, const BadSetParams& params);

/// Integer-only bad-set membership for grid directions over a fixed modulus.
class BadSetTester {
 public:
  BadSetTester(const BadSetParams& params, std::uint64_t modulus);

  bool contains(std::span<const std::uint64_t> numerators) const;
  bool contains(const TorusVec& alpha) const { return contains(alpha.numerators()); }

 private:
  std::uint64_t q_;
  // bad iff sum of pair penalty numerators (over 4Q^2) < threshold_.
  unsigned __int128 threshold_;
};

struct DirectionSearchStats {
  unsigned tries = 0;
  std::uint64_t best_bad_count = 0;  // fewest bad orbit points over all tries
  double expected_bad_bound = 0;     // (16/20)^D
};

struct GoodDirection {
  TorusVec theta0;
  DirectionSearchStats stats;
};

class DirectionSearchError : public std::runtime_error {
 public:
  DirectionSearchError(const std::string& what, DirectionSearchStats stats)
      : std::runtime_error(what), stats_(stats) {}
  const DirectionSearchStats& stats() const { return stats_; }

 private:
  DirectionSearchStats stats_;
};

/// Counts n in [1, N] with n*theta0 in the bad set.
std::uint64_t count_bad_orbit_points(const TorusVec& theta0, const BadSetParams& params, unsigned threads = 1);

/// Draws theta0 uniformly from the Q-grid until its orbit 1..N avoids the
/// bad set. Throws DirectionSearchError after max_tries failures.
GoodDirection find_good_direction(const BadSetParams& params, std::uint64_t modulus, std::mt19937_64& rng,
                                  unsigned max_tries, unsigned threads = 1);

}  // namespace apfree
