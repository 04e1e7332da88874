#include "apfree/building_block.hpp"

#include <doctest.h>

#include <random>

using namespace apfree;

namespace {

Rat r(long n, long d) {
  Rat x(n, d);
  x.canonicalize();
  return x;
}

// Exact polygon clipping: keep {(a,b) : ca*a + cb*b <= k}.
using Poly = std::vector<std::pair<Rat, Rat>>;

Poly clip(const Poly& in, const Rat& ca, const Rat& cb, const Rat& k) {
  Poly out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto& p = in[i];
    const auto& q = in[(i + 1) % in.size()];
    const Rat fp = ca * p.first + cb * p.second - k;
    const Rat fq = ca * q.first + cb * q.second - k;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      const Rat t = fp / (fp - fq);
      out.emplace_back(p.first + t * (q.first - p.first), p.second + t * (q.second - p.second));
    }
  }
  return out;
}

Rat area(const Poly& p) {
  Rat s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % p.size()];
    s += a.first * b.second - b.first * a.second;
  }
  return s < 0 ? Rat(-s / 2) : Rat(s / 2);
}

Poly box(const Rat& a0, const Rat& a1, const Rat& b0, const Rat& b1) { return {{a0, b0}, {a1, b0}, {a1, b1}, {a0, b1}}; }

Rat polygon_measure_U(const Rat& eps) {
  const Rat h(1, 2);
  const Rat u1a = area(clip(box(0, h, h, 1), 1, 1, Rat(3, 4)));
  const Rat u1b = area(clip(box(h, 1, 0, h), 1, 1, Rat(3, 4)));
  const Rat u2 = area(clip(clip(box(0, h, 0, 1), -1, -1, -(Rat(3, 4) + eps)), 1, 1, Rat(5, 4)));
  return u1a + u1b + u2;
}

}  // namespace

TEST_CASE("U1 examples") {
  CHECK(in_U1(r(3, 5), r(1, 10)));
  CHECK_FALSE(in_U1(r(3, 10), r(3, 10)));
  CHECK_FALSE(in_U1(r(7, 10), r(1, 10)));
  CHECK_FALSE(in_U1(r(1, 4), r(1, 2)));  // a+b = 3/4 is excluded
}

TEST_CASE("U2 boundaries are open") {
  const Rat eps(1, 16);
  CHECK_FALSE(in_U2(r(1, 4), r(9, 16), eps));  // a+b = 3/4+eps
  CHECK(in_U2(r(1, 4), r(10, 16), eps));
  CHECK_FALSE(in_U2(r(1, 4), Rat(1), eps));  // a+b = 5/4
  CHECK_FALSE(in_U2(r(1, 2), r(1, 2), eps));  // a must be < 1/2
}

TEST_CASE("measure_exact equals the polygon-area oracle") {
  for (const Rat& eps : {r(1, 16), r(1, 8), r(1, 7), r(1, 1000), r(3, 13)}) {
    CAPTURE(to_string(eps));
    const BlockSpec spec{BlockVariant::kUTruncation, eps};
    CHECK(measure_exact(spec) == polygon_measure_U(eps));
    CHECK(measure_exact(spec) >= Rat(9, 32) - eps);
  }
  CHECK(measure_exact({BlockVariant::kUTruncation, r(1, 16)}) == r(1, 4));
  CHECK(measure_exact({BlockVariant::kTEps, r(1, 16)}) == r(7, 24) - r(1, 8));
  // eps -> 0 limit of the formula.
  CHECK(measure_exact({BlockVariant::kUTruncation, r(1, 1000000000)}) - r(9, 32) == r(-1, 2000000000));
}

TEST_CASE("BlockSpec validation") {
  CHECK_THROWS_AS((BlockSpec{BlockVariant::kUTruncation, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((BlockSpec{BlockVariant::kUTruncation, r(1, 4)}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((BlockSpec{BlockVariant::kUTruncation, r(-1, 8)}.validate()), std::invalid_argument);
  CHECK_NOTHROW((BlockSpec{BlockVariant::kTEps, r(1, 8)}.validate()));
}

TEST_CASE("GridBlock agrees with the rational predicates (exhaustive small grid)") {
  for (std::uint64_t q : {160ull, 161ull, 240ull}) {
    for (const Rat& eps : {r(1, 16), r(1, 8), r(1, 7), r(1, 5)}) {
      for (auto variant : {BlockVariant::kUTruncation, BlockVariant::kTEps}) {
        const BlockSpec spec{variant, eps};
        const GridBlock g(spec, q);
        std::uint64_t mismatches = 0;
        for (std::uint64_t a = 0; a < q; ++a) {
          for (std::uint64_t b = 0; b < q; ++b) {
            Rat ra(a, q);
            Rat rb(b, q);
            ra.canonicalize();
            rb.canonicalize();
            if (g.contains_pair(a, b) != in_block_pair(ra, rb, spec)) ++mismatches;
          }
        }
        CHECK(mismatches == 0);
      }
    }
  }
}

TEST_CASE("GridBlock agrees with the rational predicates at Q = 2^61-1") {
  std::mt19937_64 rng(21);
  const std::uint64_t q = kDefaultModulus;
  std::uniform_int_distribution<std::uint64_t> u(0, q - 1);
  for (const Rat& eps : {r(1, 16), r(1, 7)}) {
    for (auto variant : {BlockVariant::kUTruncation, BlockVariant::kTEps}) {
      const BlockSpec spec{variant, eps};
      const GridBlock g(spec, q);
      for (int t = 0; t < 20000; ++t) {
        std::vector<std::uint64_t> v{u(rng), u(rng), u(rng), u(rng)};
        const TorusVec tv(v, q);
        CHECK(g.contains(tv) == in_block(tv, spec));
      }
    }
  }
}

TEST_CASE("property: Monte Carlo measure of U") {
  std::mt19937_64 rng(22);
  const Rat eps(1, 16);
  const GridBlock g({BlockVariant::kUTruncation, eps}, kDefaultModulus);
  std::uniform_int_distribution<std::uint64_t> u(0, kDefaultModulus - 1);
  const int samples = 200000;
  int hits = 0;
  for (int t = 0; t < samples; ++t) hits += g.contains_pair(u(rng), u(rng));
  CHECK(static_cast<double>(hits) / samples == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("property: T-variant grid share stays above its lower bound") {
  const std::uint64_t q = 960;
  for (const Rat& eps : {r(1, 16), r(1, 32)}) {
    const GridBlock g({BlockVariant::kTEps, eps}, q);
    std::uint64_t hits = 0;
    for (std::uint64_t a = 0; a < q; ++a) {
      for (std::uint64_t b = 0; b < q; ++b) hits += g.contains_pair(a, b);
    }
    const double share = static_cast<double>(hits) / static_cast<double>(q * q);
    CHECK(share >= to_double(Rat(7, 24) - 2 * eps) - 0.005);
  }
}

TEST_CASE("gap between U1 and U2 sums exceeds eps") {
  const Rat eps(1, 16);
  const unsigned g = 64;
  Rat max_u1 = -1;
  Rat min_u2 = 3;
  for (unsigned i = 0; i < g; ++i) {
    for (unsigned j = 0; j < g; ++j) {
      Rat a(i, g);
      Rat b(j, g);
      a.canonicalize();
      b.canonicalize();
      if (in_U1(a, b)) max_u1 = std::max(max_u1, Rat(a + b));
      if (in_U2(a, b, eps)) min_u2 = std::min(min_u2, Rat(a + b));
    }
  }
  CHECK(min_u2 - max_u1 > eps);
}
