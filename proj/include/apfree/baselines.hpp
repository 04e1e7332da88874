#pragma once

// Classic Behrend sphere-shell construction and the reference curves the
// benchmark prints next to achieved sizes.

#include "apfree/progression_free_set.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace apfree {

/// Largest q with (2q)^D <= N; 0 when even q = 1 does not fit.
std::uint64_t behrend_base(std::uint64_t n, unsigned d);

struct BehrendResult {
  ProgressionFreeSet set;
  std::vector<std::uint64_t> shell_sizes;  // indexed by squared norm 0..D(q-1)^2
};

/// Digit vectors in [0,q)^D grouped by squared norm; the largest shell
/// (smallest norm on ties) encoded in base 2q and shifted by +1 into [1, N].
/// Throws std::invalid_argument when q < 1.
BehrendResult behrend_construct(std::uint64_t n, unsigned d);

/// |A| * (D (q-1)^2 + 1) >= q^D, i.e. the shell-pigeonhole guarantee.
bool meets_shell_pigeonhole(std::uint64_t size, std::uint64_t q, unsigned d);

/// N 2^(-2 sqrt(2 log2 N)): the classic curve without its log factor.
double classic_curve(std::uint64_t n);

/// sqrt(D) N 2^(-D) N^(-2/D): the parametrised Behrend curve.
double behrend_curve(std::uint64_t n, unsigned d);

enum class BenchMode { kBehrend, kForge };

struct BoundRow {
  std::uint64_t n = 0;
  double classic = 0;
  double torus = 0;  // theoretical_bound at the recommended even D
  unsigned torus_d = 0;
  std::optional<std::uint64_t> behrend_size;
  std::optional<std::uint64_t> forge_size;
};

/// Reference curves per N (constants dropped); optionally runs both
/// constructions. Every produced set is verified.
std::vector<BoundRow> bound_table(const std::vector<std::uint64_t>& ns, bool run_behrend, bool run_forge,
                                  std::uint64_t seed = 1, unsigned threads = 1);

}  // namespace apfree
