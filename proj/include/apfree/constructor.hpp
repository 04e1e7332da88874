#pragma once

// End-to-end torus construction of a 3-AP-free subset of [N]:
//
//   1. derive delta_hat, bucket widths and c2 from (N, D, eps);
//   2. find theta0 whose orbit {n theta0 : n in [N]} avoids the bad set;
//   3. for each random shift mu, bucket the in-block orbit points
//      mu + n theta0 by (w1, w2 + w3);
//   4. return the n of the fullest bucket over all shifts.
//
// Any bucket is 3-AP-free, so step 4 only picks the largest one.

#include "apfree/progression_free_set.hpp"
#include "apfree/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace apfree {

struct ConstructionConfig {
  std::uint64_t n = 1;
  unsigned d = 2;
  Rat epsilon{1, 16};
  BlockVariant variant = BlockVariant::kUTruncation;
  std::uint64_t modulus = kDefaultModulus;
  std::uint64_t seed = 0;
  unsigned max_direction_tries = 32;
  unsigned num_mu_samples = 8;
  std::optional<Rat> c2_override;
  bool unsafe_c2 = false;
  bool w3_literal = false;
  bool skip_verify = false;
  unsigned threads = 1;
  std::size_t top_k = 5;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// Raised when a constructed set fails the exact verifier.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DerivedParams derive_params(std::uint64_t n, unsigned d, const Rat& epsilon, std::optional<Rat> c2 = std::nullopt,
                            bool unsafe_c2 = false, bool w3_literal = false);

enum class DimensionMode { kClassic, kNew };

/// Smallest even D >= ceil(sqrt(2 log_b N)), b = 2 (classic) or sqrt(32/9)
/// (new); decided by exact integer power comparisons. Requires N >= 2.
unsigned recommended_d(std::uint64_t n, DimensionMode mode);

/// ceil(sqrt(2 log2 N)) without the even rounding (Behrend baseline).
unsigned classic_d(std::uint64_t n);

ProgressionFreeSet construct(const ConstructionConfig& config);

/// A reference-curve value: exact when every factor is rational.
struct ReferenceValue {
  std::optional<Rat> exact;
  double approx = 0;
};

/// (1/D^2) N (9/32 - eps)^(D/2) N^(-2/D), implied constant dropped.
ReferenceValue theoretical_bound(std::uint64_t n, unsigned d, const Rat& epsilon);

}  // namespace apfree
