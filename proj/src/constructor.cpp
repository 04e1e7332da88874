#include "apfree/constructor.hpp"

#include "apfree/parallel.hpp"
#include "apfree/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

namespace apfree {

namespace {

struct MuOutcome {
  std::vector<std::uint64_t> best_members;
  BucketKey best_key;
  std::uint64_t block_hits = 0;
  std::vector<BucketTally> top;
};

bool tally_before(const BucketTally& a, const BucketTally& b) {
  if (a.count != b.count) return a.count > b.count;
  if (a.mu_index != b.mu_index) return a.mu_index < b.mu_index;
  return a.key < b.key;
}

MuOutcome scan_orbit(const TorusVec& mu, const TorusVec& theta0, std::uint64_t n, const GridBlock& block,
                     const BucketIndexer& indexer, std::size_t mu_index, std::size_t top_k) {
  std::map<BucketKey, std::vector<std::uint64_t>> buckets;
  MuOutcome out;
  std::vector<std::uint64_t> point(mu.numerators().begin(), mu.numerators().end());
  const auto step = theta0.numerators();
  const std::uint64_t q = mu.modulus();
  for (std::uint64_t k = 1; k <= n; ++k) {
    for (std::size_t j = 0; j < point.size(); ++j) {
      const std::uint64_t s = point[j] + step[j];
      point[j] = s >= q ? s - q : s;
    }
    if (!block.contains(point)) continue;
    ++out.block_hits;
    buckets[indexer.index(point)].push_back(k);
  }
  for (auto& [key, members] : buckets) {
    out.top.push_back({key, members.size(), mu_index});
    if (members.size() > out.best_members.size()) {
      out.best_members = members;
      out.best_key = key;
    }
  }
  std::sort(out.top.begin(), out.top.end(), tally_before);
  if (out.top.size() > top_k) out.top.resize(top_k);
  return out;
}

// Smallest m >= 1 with base_num^(m^2) >= base_den^(m^2) * N^power.
unsigned smallest_root_bound(std::uint64_t n, unsigned long base_num, unsigned long base_den, unsigned long power) {
  BigInt target;
  const BigInt nb = from_u64(n);
  mpz_pow_ui(target.get_mpz_t(), nb.get_mpz_t(), power);
  for (unsigned m = 1;; ++m) {
    BigInt lhs;
    BigInt rhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), base_num, static_cast<unsigned long>(m) * m);
    mpz_ui_pow_ui(rhs.get_mpz_t(), base_den, static_cast<unsigned long>(m) * m);
    if (lhs >= rhs * target) return m;
  }
}

}  // namespace

void ConstructionConfig::validate() const {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("D must be even and >= 2, got " + std::to_string(d));
  BlockSpec{variant, epsilon}.validate();
  if (modulus < 2 || modulus > kMaxModulus) throw std::invalid_argument("modulus Q must lie in [2, 2^62]");
  if (max_direction_tries < 1) throw std::invalid_argument("max_direction_tries must be >= 1");
  if (num_mu_samples < 1) throw std::invalid_argument("num_mu_samples must be >= 1");
}

DerivedParams derive_params(std::uint64_t n, unsigned d, const Rat& epsilon, std::optional<Rat> c2, bool unsafe_c2,
                            bool w3_literal) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("D must be even and >= 2, got " + std::to_string(d));
  DerivedParams p;
  p.d0 = d / 2;
  p.delta_hat = conservative_delta(n, d);
  // The w23 bucket width uses the same delta as the bad set.
  p.weights = make_weight_params(epsilon, p.delta_hat, std::move(c2), unsafe_c2, w3_literal);
  return p;
}

unsigned recommended_d(std::uint64_t n, DimensionMode mode) {
  if (n < 2) throw std::invalid_argument("recommended_d needs N >= 2");
  // classic: m^2 >= 2 log2 N        <=>  2^(m^2) >= N^2
  // new:     m^2 >= 2 log_b N, b^2 = 32/9  <=>  32^(m^2) >= 9^(m^2) N^4
  const unsigned m = mode == DimensionMode::kClassic ? smallest_root_bound(n, 2, 1, 2)
                                                     : smallest_root_bound(n, 32, 9, 4);
  return m % 2 == 0 ? m : m + 1;
}

unsigned classic_d(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("classic_d needs N >= 2");
  return smallest_root_bound(n, 2, 1, 2);
}

ProgressionFreeSet construct(const ConstructionConfig& config) {
  config.validate();
  const BlockSpec block_spec{config.variant, config.epsilon};
  DerivedParams params =
      derive_params(config.n, config.d, config.epsilon, config.c2_override, config.unsafe_c2, config.w3_literal);
  const BadSetParams bad{params.delta_hat, config.n, params.d0};

  std::mt19937_64 rng(config.seed);
  GoodDirection direction = find_good_direction(bad, config.modulus, rng, config.max_direction_tries, config.threads);

  std::uniform_int_distribution<std::uint64_t> coord(0, config.modulus - 1);
  std::vector<TorusVec> mus;
  mus.reserve(config.num_mu_samples);
  for (unsigned i = 0; i < config.num_mu_samples; ++i) {
    std::vector<std::uint64_t> nums(2 * params.d0);
    for (auto& v : nums) v = coord(rng);
    mus.emplace_back(std::move(nums), config.modulus);
  }

  const GridBlock block(block_spec, config.modulus);
  const BucketIndexer indexer(params.weights, config.modulus);
  std::vector<MuOutcome> outcomes(mus.size());
  parallel_chunks(config.threads, mus.size(), [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      outcomes[i] = scan_orbit(mus[i], direction.theta0, config.n, block, indexer, i, config.top_k);
    }
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i) {
    if (outcomes[i].best_members.size() > outcomes[best].best_members.size()) best = i;
  }

  TorusProvenance prov;
  prov.seed = config.seed;
  prov.modulus = config.modulus;
  prov.d = config.d;
  prov.block = block_spec;
  prov.params = std::move(params);
  prov.theta0 = direction.theta0;
  prov.direction = direction.stats;
  prov.mu = mus[best];
  prov.mu_index = best;
  prov.bucket = outcomes[best].best_key;
  prov.block_hits = outcomes[best].block_hits;
  for (const auto& o : outcomes) prov.top_buckets.insert(prov.top_buckets.end(), o.top.begin(), o.top.end());
  std::sort(prov.top_buckets.begin(), prov.top_buckets.end(), tally_before);
  if (prov.top_buckets.size() > config.top_k) prov.top_buckets.resize(config.top_k);

  ProgressionFreeSet out;
  out.n = config.n;
  out.elements = std::move(outcomes[best].best_members);
  if (out.elements.empty()) {
    prov.diagnostic = "no orbit point landed in the building block for any mu sample";
  }

  // The T-variant carries no proof for these weights; always verify it.
  if (!config.skip_verify || config.variant == BlockVariant::kTEps) {
    const APCount check = count_aps_bruteforce(out.elements, 1, config.threads);
    out.verified = check.count == 0;
    if (check.count != 0) {
      const auto& w = check.witnesses.front();
      throw VerificationFailure("constructed set contains " + std::to_string(check.count) +
                                " 3-APs, e.g. (" + std::to_string(w.x) + ", " + std::to_string(w.y) + ", " +
                                std::to_string(w.z) + ")");
    }
  }
  out.provenance = std::move(prov);
  return out;
}

ReferenceValue theoretical_bound(std::uint64_t n, unsigned d, const Rat& epsilon) {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("D must be even and >= 2");
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  const unsigned d0 = d / 2;
  const Rat base = Rat(9, 32) - epsilon;
  ReferenceValue out;
  const double log_value = std::log(static_cast<double>(n)) - 2 * std::log(static_cast<double>(d)) +
                           d0 * std::log(to_double(base)) - (2.0 / d) * std::log(static_cast<double>(n));
  out.approx = std::exp(log_value);

  // N^(-2/D) = 1 / N^(1/D0) is rational iff N is a perfect D0-th power.
  const BigInt nb = from_u64(n);
  BigInt root;
  if (mpz_root(root.get_mpz_t(), nb.get_mpz_t(), d0) != 0) {
    Rat power = 1;
    for (unsigned i = 0; i < d0; ++i) power *= base;
    Rat value = Rat(nb) * power / (Rat(d) * Rat(d) * Rat(root));
    out.exact = value;
    out.approx = to_double(value);
  }
  return out;
}

}  // namespace apfree
