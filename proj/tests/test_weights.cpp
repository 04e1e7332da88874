#include "apfree/weights.hpp"

#include <doctest.h>

#include <random>

using namespace apfree;

namespace {

constexpr std::uint64_t kQ = 1200;

Rat r(long n, long d) {
  Rat x(n, d);
  x.canonicalize();
  return x;
}

TorusVec pt(std::initializer_list<Rat> coords, std::uint64_t q = kQ) {
  std::vector<Rat> v(coords);
  return TorusVec::from_rats(v, q);
}

WeightParams params_with(const Rat& c2, const Rat& w23_width, bool literal = false) {
  WeightParams p;
  p.epsilon = r(1, 16);
  p.c2 = c2;
  p.w23_width = w23_width;
  p.w3_literal = literal;
  return p;
}

}  // namespace

TEST_CASE("w1 examples") {
  CHECK(w1(pt({r(1, 10), r(1, 5), r(3, 5), r(3, 5)})) == r(3, 2));
  CHECK(w1(pt({0, 0})) == 0);
  CHECK(w1(pt({r(9, 10), r(9, 10)})) == r(9, 5));
}

TEST_CASE("w2 examples") {
  CHECK(w2(pt({r(1, 4), r(1, 4)}), Rat(100)) == 25);
  CHECK(w2(pt({0, 0}), Rat(100)) == 0);
  CHECK(w2(pt({r(1, 2), r(1, 2), r(1, 4), r(1, 4)}), Rat(100)) == 125);
}

TEST_CASE("w3 examples") {
  CHECK(w3(pt({r(1, 4), r(1, 3)})) == r(9, 16));
  CHECK(w3(pt({r(3, 4), r(1, 3)})) == r(9, 16));
  CHECK(w3(pt({r(3, 4), r(1, 3)}), true) == r(1, 16));
  CHECK(w3(pt({0, 0, 0, 0})) == 2);
}

TEST_CASE("bucket examples use half-open intervals") {
  const WeightParams p = params_with(Rat(100), r(1, 800));
  // w1 = 3/10
  CHECK(bucket_pair(pt({r(1, 10), r(1, 5)}), p).r1 == 1);
  // w1 = 1/4 exactly lands in the upper bucket
  CHECK(bucket_pair(pt({r(1, 8), r(1, 8)}), p).r1 == 1);
  CHECK(bucket_pair(pt({r(1, 8), r(29, 240)}), p).r1 == 0);
}

TEST_CASE("bucket of the origin") {
  // w1 = 0 and w2 = 0 at the origin; w3 = D0 with the bracket, so r2 is D0 / width.
  const WeightParams p = params_with(Rat(100), r(1, 4));
  CHECK(bucket_pair(pt({0, 0}), p) == BucketKey{0, 4});
}

TEST_CASE("weight parameters and c2 floor") {
  const Rat eps(1, 16);
  CHECK(default_c2(eps) == Rat(2560000000000));
  CHECK(c2_floor(eps) == Rat(25600000001));
  const WeightParams p = make_weight_params(eps, r(1, 400));
  CHECK(p.c2 == default_c2(eps));
  CHECK(p.w23_width == r(1, 800));
  CHECK(p.w1_width == r(1, 4));
  CHECK_THROWS_AS(make_weight_params(eps, r(1, 400), Rat(1000)), std::invalid_argument);
  CHECK(make_weight_params(eps, r(1, 400), Rat(1000), true).c2 == 1000);
  CHECK_THROWS_AS(make_weight_params(eps, r(1, 400), Rat(0), true), std::invalid_argument);
}

TEST_CASE("property: weights add across factors") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::uint64_t> u(0, kDefaultModulus - 1);
  for (int t = 0; t < 200; ++t) {
    const std::vector<std::uint64_t> a{u(rng), u(rng)};
    const std::vector<std::uint64_t> b{u(rng), u(rng)};
    const TorusVec ta(a, kDefaultModulus);
    const TorusVec tb(b, kDefaultModulus);
    const TorusVec tab({a[0], a[1], b[0], b[1]}, kDefaultModulus);
    CHECK(w1(tab) == w1(ta) + w1(tb));
    CHECK(w2(tab, Rat(7)) == w2(ta, Rat(7)) + w2(tb, Rat(7)));
    CHECK(w3(tab) == w3(ta) + w3(tb));
  }
}

TEST_CASE("property: integer bucket index equals the rational one") {
  std::mt19937_64 rng(32);
  const std::vector<WeightParams> all{
      make_weight_params(r(1, 16), r(1, 400)),
      make_weight_params(r(1, 8), r(1, 123457)),
      make_weight_params(r(1, 16), r(1, 400), r(3, 7), true, true),
      params_with(r(1, 3), r(1, 5)),
      params_with(Rat(100), r(5, 2), true),
  };
  for (std::uint64_t q : {std::uint64_t{48}, std::uint64_t{1000003}, kDefaultModulus, kMaxModulus}) {
    std::uniform_int_distribution<std::uint64_t> u(0, q - 1);
    for (const auto& p : all) {
      const BucketIndexer idx(p, q);
      for (int t = 0; t < 300; ++t) {
        const std::size_t pairs = 1 + t % 3;
        std::vector<std::uint64_t> v(2 * pairs);
        for (auto& x : v) x = u(rng);
        const TorusVec tv(v, q);
        CHECK(idx.index(tv) == bucket_pair(tv, p));
      }
    }
  }
}

TEST_CASE("property: integer bucket index on grid boundaries") {
  // Small grid where many points sit exactly on bucket edges.
  const std::uint64_t q = 16;
  const WeightParams p = params_with(Rat(1), r(1, 8));
  const BucketIndexer idx(p, q);
  for (std::uint64_t a = 0; a < q; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      const TorusVec tv({a, b}, q);
      CHECK(idx.index(tv) == bucket_pair(tv, p));
    }
  }
}
