#include "apfree/badset.hpp"

#include "apfree/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace apfree {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr u128 kSaturated = std::numeric_limits<u128>::max();

u128 square_saturating(i128 v) {
  const u128 m = v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v);
  if (m >= (u128{1} << 64)) return kSaturated;
  return m * m;
}

u128 add_saturating(u128 a, u128 b) { return a > kSaturated - b ? kSaturated : a + b; }

// Penalty numerator over 4Q^2 for one pair, minimised over the 16 offsets.
// With xi = k/2, the displacement numerator over 2Q is 2a + kQ.
u128 pair_penalty(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  static constexpr int kHalfSteps[4] = {-2, -1, 0, 1};
  u128 best = kSaturated;
  for (int k1 : kHalfSteps) {
    const i128 d1 = 2 * static_cast<i128>(a) + static_cast<i128>(k1) * q;
    const u128 d1sq = square_saturating(d1);
    for (int k2 : kHalfSteps) {
      const i128 d2 = 2 * static_cast<i128>(b) + static_cast<i128>(k2) * q;
      best = std::min(best, add_saturating(square_saturating(d1 + d2), d1sq));
    }
  }
  return best;
}

}  // namespace

Rat conservative_delta(std::uint64_t n, unsigned d) {
  if (n == 0 || d == 0) throw std::invalid_argument("conservative_delta needs N >= 1 and D >= 1");
  const BigInt n_big = from_u64(n);
  BigInt rhs;  // 2^(64 D) / N^2 compared as (400k)^D * N^2 <= 2^(64 D)
  mpz_ui_pow_ui(rhs.get_mpz_t(), 2, 64ul * d);
  const BigInt n_sq = n_big * n_big;
  auto ok = [&](const BigInt& k) {
    BigInt lhs;
    BigInt base = 400 * k;
    mpz_pow_ui(lhs.get_mpz_t(), base.get_mpz_t(), d);
    return lhs * n_sq <= rhs;
  };
  BigInt lo = 0;
  BigInt hi;
  mpz_ui_pow_ui(hi.get_mpz_t(), 2, 64);
  hi = hi / 400 + 1;  // ok(hi) is false: 400*hi > 2^64
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (ok(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (lo == 0) throw std::invalid_argument("delta underflows 2^-64 for this N and D");
  BigInt two64;
  mpz_ui_pow_ui(two64.get_mpz_t(), 2, 64);
  Rat out(lo, two64);
  out.canonicalize();
  return out;
}

BadSetParams make_bad_set_params(std::uint64_t n, unsigned d) {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("D must be even and >= 2");
  return BadSetParams{conservative_delta(n, d), n, d / 2};
}

Rat coord_penalty(const Rat& a1, const Rat& a2) {
  std::optional<Rat> best;
  for (const Rat& x1 : xi_offsets()) {
    const Rat d1 = a1 + x1;
    for (const Rat& x2 : xi_offsets()) {
      const Rat s = d1 + a2 + x2;
      Rat v = s * s + d1 * d1;
      if (!best || v < *best) best = std::move(v);
    }
  }
  return *best;
}

bool in_bad_set(const TorusVec& alpha, const BadSetParams& params) {
  Rat total = 0;
  for (std::size_t i = 0; i < alpha.dim_pairs(); ++i) {
    total += coord_penalty(alpha.coord(2 * i), alpha.coord(2 * i + 1));
    if (total >= params.delta_hat) return false;
  }
  return total < params.delta_hat;
}

BadSetTester::BadSetTester(const BadSetParams& params, std::uint64_t modulus) : q_(modulus) {
  // penalty sum P / (4Q^2) < hn/hd  <=>  P < ceil(4 Q^2 hn / hd) for integer P.
  const BigInt q = from_u64(modulus);
  BigInt num = 4 * q * q * params.delta_hat.get_num();
  BigInt cap;
  mpz_cdiv_q(cap.get_mpz_t(), num.get_mpz_t(), params.delta_hat.get_den_mpz_t());
  if (mpz_sizeinbase(cap.get_mpz_t(), 2) > 127) throw std::invalid_argument("delta too large for the bad-set tester");
  const BigInt hi = cap >> 64;
  const BigInt lo = cap - (hi << 64);
  threshold_ = (static_cast<u128>(to_u64(hi)) << 64) | to_u64(lo);
}

bool BadSetTester::contains(std::span<const std::uint64_t> nums) const {
  u128 total = 0;
  for (std::size_t i = 0; i + 1 < nums.size(); i += 2) {
    total = add_saturating(total, pair_penalty(nums[i], nums[i + 1], q_));
    if (total >= threshold_) return false;
  }
  return true;
}

std::uint64_t count_bad_orbit_points(const TorusVec& theta0, const BadSetParams& params, unsigned threads) {
  const BadSetTester tester(params, theta0.modulus());
  std::vector<std::uint64_t> per_worker(std::max(1u, threads), 0);
  parallel_chunks(threads, params.n, [&](unsigned w, std::size_t begin, std::size_t end) {
    if (begin == end) return;
    // Points (begin+1)*theta0 .. end*theta0.
    TorusVec point = theta0.scaled(begin + 1);
    std::vector<std::uint64_t> nums(point.numerators().begin(), point.numerators().end());
    const auto step = theta0.numerators();
    const std::uint64_t q = theta0.modulus();
    std::uint64_t bad = 0;
    for (std::size_t n = begin; n < end; ++n) {
      if (tester.contains(nums)) ++bad;
      for (std::size_t j = 0; j < nums.size(); ++j) {
        const std::uint64_t s = nums[j] + step[j];
        nums[j] = s >= q ? s - q : s;
      }
    }
    per_worker[w] = bad;
  });
  std::uint64_t total = 0;
  for (auto b : per_worker) total += b;
  return total;
}

GoodDirection find_good_direction(const BadSetParams& params, std::uint64_t modulus, std::mt19937_64& rng,
                                  unsigned max_tries, unsigned threads) {
  if (max_tries == 0) throw std::invalid_argument("max_tries must be >= 1");
  DirectionSearchStats stats;
  stats.expected_bad_bound = std::pow(0.8, 2.0 * params.d0);
  stats.best_bad_count = std::numeric_limits<std::uint64_t>::max();
  std::uniform_int_distribution<std::uint64_t> coord(0, modulus - 1);
  for (unsigned t = 0; t < max_tries; ++t) {
    std::vector<std::uint64_t> nums(2 * params.d0);
    for (auto& v : nums) v = coord(rng);
    TorusVec theta0(std::move(nums), modulus);
    ++stats.tries;
    const std::uint64_t bad = count_bad_orbit_points(theta0, params, threads);
    stats.best_bad_count = std::min(stats.best_bad_count, bad);
    if (bad == 0) return GoodDirection{std::move(theta0), stats};
  }
  throw DirectionSearchError("no direction with a clean orbit after " + std::to_string(max_tries) +
                                 " tries (fewest bad orbit points: " + std::to_string(stats.best_bad_count) + ")",
                             stats);
}

}  // namespace apfree
