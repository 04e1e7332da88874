#pragma once

// Exact 3-AP detection and counting. Counts are of unordered nontrivial
// progressions {x, y, z} with x < y < z and x + z = 2y.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace apfree {

struct APWitness {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t z = 0;
  friend bool operator==(const APWitness&, const APWitness&) = default;
};

struct APCount {
  std::uint64_t count = 0;
  std::vector<APWitness> witnesses;
  bool capped = false;  // more progressions exist than witnesses listed
};

inline constexpr std::size_t kDefaultMaxWitnesses = 100;

/// Throws std::invalid_argument unless strictly increasing.
void require_sorted_unique(std::span<const std::uint64_t> set);

/// Pair scan over (x, z) of equal parity with a bitset midpoint lookup;
/// O(|A|^2). Witnesses are listed in (x, z) lexicographic order.
APCount count_aps_bruteforce(std::span<const std::uint64_t> set, std::size_t max_witnesses = kDefaultMaxWitnesses,
                             unsigned threads = 1);

/// (sum_{y in A} (1_A * 1_A)(2y) - |A|) / 2 via an exact number-theoretic
/// transform. Requires A within [1, n].
std::uint64_t count_aps_convolution(std::span<const std::uint64_t> set, std::uint64_t n);

bool is_3ap_free(std::span<const std::uint64_t> set, unsigned threads = 1);

/// Cyclic convolution of two integer sequences modulo the NTT prime
/// 29 * 2^57 + 1; exposed for testing.
std::vector<std::uint64_t> ntt_convolve(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

inline constexpr std::uint64_t kNttPrime = 4179340454199820289ull;  // 29 * 2^57 + 1

}  // namespace apfree
