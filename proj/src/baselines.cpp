#include "apfree/baselines.hpp"

#include "apfree/constructor.hpp"
#include "apfree/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace apfree {

namespace {

// base^exp, or nullopt once it exceeds limit.
std::optional<std::uint64_t> bounded_pow(std::uint64_t base, unsigned exp, std::uint64_t limit) {
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > limit) return std::nullopt;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace

std::uint64_t behrend_base(std::uint64_t n, unsigned d) {
  if (d == 0) throw std::invalid_argument("D must be >= 1");
  std::uint64_t lo = 0;
  std::uint64_t hi = n / 2 + 1;  // (2 hi)^D > N for every D >= 1
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (bounded_pow(2 * mid, d, n)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

BehrendResult behrend_construct(std::uint64_t n, unsigned d) {
  const std::uint64_t q = behrend_base(n, d);
  if (q < 1) {
    throw std::invalid_argument("N = " + std::to_string(n) + " is too small for D = " + std::to_string(d) +
                                " (need (2q)^D <= N with q >= 1)");
  }
  const std::uint64_t max_norm = static_cast<std::uint64_t>(d) * (q - 1) * (q - 1);
  const std::uint64_t total = *bounded_pow(q, d, n);  // q^D <= (2q)^D <= N

  BehrendResult out;
  out.shell_sizes.assign(max_norm + 1, 0);
  std::vector<std::uint64_t> digits(d, 0);
  auto advance = [&] {
    for (unsigned i = 0; i < d; ++i) {
      if (++digits[i] < q) return;
      digits[i] = 0;
    }
  };
  auto norm = [&] {
    std::uint64_t s = 0;
    for (auto v : digits) s += v * v;
    return s;
  };

  for (std::uint64_t k = 0; k < total; ++k, advance()) ++out.shell_sizes[norm()];
  const auto best = std::max_element(out.shell_sizes.begin(), out.shell_sizes.end());
  const std::uint64_t radius = static_cast<std::uint64_t>(best - out.shell_sizes.begin());

  std::fill(digits.begin(), digits.end(), 0);
  std::vector<std::uint64_t> elements;
  elements.reserve(*best);
  for (std::uint64_t k = 0; k < total; ++k, advance()) {
    if (norm() != radius) continue;
    // Digits < q in base 2q: sums of two members never carry.
    std::uint64_t value = 0;
    for (unsigned i = d; i-- > 0;) value = value * (2 * q) + digits[i];
    elements.push_back(value + 1);
  }
  std::sort(elements.begin(), elements.end());

  out.set.n = n;
  out.set.elements = std::move(elements);
  out.set.provenance = BehrendProvenance{d, q, radius, max_norm + 1, total};
  return out;
}

bool meets_shell_pigeonhole(std::uint64_t size, std::uint64_t q, unsigned d) {
  BigInt lhs = from_u64(size) * (BigInt(d) * from_u64(q - 1) * from_u64(q - 1) + 1);
  BigInt rhs;
  mpz_ui_pow_ui(rhs.get_mpz_t(), q, d);
  return lhs >= rhs;
}

double classic_curve(std::uint64_t n) {
  const double nd = static_cast<double>(n);
  return nd * std::exp2(-2.0 * std::sqrt(2.0 * std::log2(nd)));
}

double behrend_curve(std::uint64_t n, unsigned d) {
  const double nd = static_cast<double>(n);
  return std::sqrt(static_cast<double>(d)) * nd * std::exp2(-static_cast<double>(d)) * std::pow(nd, -2.0 / d);
}

std::vector<BoundRow> bound_table(const std::vector<std::uint64_t>& ns, bool run_behrend, bool run_forge,
                                  std::uint64_t seed, unsigned threads) {
  std::vector<BoundRow> rows;
  for (std::uint64_t n : ns) {
    if (n < 2) throw std::invalid_argument("bound_table needs N >= 2");
    BoundRow row;
    row.n = n;
    row.classic = classic_curve(n);
    row.torus_d = recommended_d(n, DimensionMode::kNew);
    row.torus = theoretical_bound(n, row.torus_d, Rat(1, 16)).approx;
    if (run_behrend) {
      const auto b = behrend_construct(n, classic_d(n));
      if (!is_3ap_free(b.set.elements, threads)) throw VerificationFailure("Behrend set failed verification");
      row.behrend_size = b.set.elements.size();
    }
    if (run_forge) {
      ConstructionConfig cfg;
      cfg.n = n;
      cfg.d = row.torus_d;
      cfg.seed = seed;
      cfg.threads = threads;
      row.forge_size = construct(cfg).elements.size();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace apfree
