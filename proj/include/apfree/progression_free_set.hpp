#pragma once

#include "apfree/badset.hpp"
#include "apfree/building_block.hpp"
#include "apfree/rational.hpp"
#include "apfree/torus.hpp"
#include "apfree/weights.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace apfree {

struct DerivedParams {
  unsigned d0 = 1;
  Rat delta_hat;
  WeightParams weights;
};

struct BucketTally {
  BucketKey key;
  std::uint64_t count = 0;
  std::size_t mu_index = 0;
};

/// Where a torus-construction set came from; enough to rebuild it.
struct TorusProvenance {
  std::uint64_t seed = 0;
  std::uint64_t modulus = 0;
  unsigned d = 2;
  BlockSpec block;
  DerivedParams params;
  TorusVec theta0{std::vector<std::uint64_t>{0, 0}, 1};
  TorusVec mu{std::vector<std::uint64_t>{0, 0}, 1};
  std::size_t mu_index = 0;
  BucketKey bucket;
  DirectionSearchStats direction;
  std::uint64_t block_hits = 0;         // orbit points of the chosen mu inside the block
  std::vector<BucketTally> top_buckets;  // best buckets over all mu samples, descending
  std::string diagnostic;
};

struct BehrendProvenance {
  unsigned d = 1;
  std::uint64_t base_q = 1;          // digits lie in [0, q), encoded in base 2q
  std::uint64_t radius = 0;          // squared norm of the chosen shell
  std::uint64_t distinct_norms = 0;  // D (q-1)^2 + 1
  std::uint64_t vectors = 0;         // q^D
};

struct ProgressionFreeSet {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> elements;  // strictly increasing, within [1, n]
  std::optional<bool> verified;         // unset when verification was skipped
  std::variant<std::monostate, TorusProvenance, BehrendProvenance> provenance;
};

}  // namespace apfree
