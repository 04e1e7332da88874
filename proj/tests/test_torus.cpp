#include "apfree/torus.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace apfree;

namespace {

// Divisible by 2, 3, 4, 5, 10 and 16.
constexpr std::uint64_t kQ = 1200;

TorusVec pt(std::initializer_list<Rat> coords, std::uint64_t q = kQ) {
  std::vector<Rat> v(coords);
  return TorusVec::from_rats(v, q);
}

Rat r(long n, long d) {
  Rat x(n, d);
  x.canonicalize();
  return x;
}

TorusVec random_vec(std::mt19937_64& rng, std::size_t pairs, std::uint64_t q) {
  std::uniform_int_distribution<std::uint64_t> u(0, q - 1);
  std::vector<std::uint64_t> v(2 * pairs);
  for (auto& x : v) x = u(rng);
  return TorusVec(v, q);
}

}  // namespace

TEST_CASE("lift examples") {
  CHECK(lift(pt({r(3, 10), r(9, 10)})) == LiftVec{r(3, 10), r(9, 10)});
  CHECK(lift(pt({0, 0})) == LiftVec{0, 0});
  CHECK(lift(pt({r(13, 10), r(1, 2)})) == LiftVec{r(3, 10), r(1, 2)});
  CHECK(lift(pt({r(-1, 4), 0})) == LiftVec{r(3, 4), 0});
}

TEST_CASE("frac_bracket examples") {
  CHECK(frac_bracket(r(3, 10)) == r(3, 10));
  CHECK(frac_bracket(r(7, 10)) == r(1, 5));
  CHECK(frac_bracket(Rat(0)) == 0);
  CHECK(frac_bracket(r(1, 2)) == 0);
  CHECK_THROWS_AS(frac_bracket(Rat(1)), std::out_of_range);
  CHECK_THROWS_AS(frac_bracket(r(-1, 3)), std::out_of_range);
}

TEST_CASE("psi and p examples") {
  CHECK(psi(pt({r(3, 10), r(9, 10)})) == std::vector<Rat>{r(6, 5)});
  CHECK(psi(pt({0, 0})) == std::vector<Rat>{0});
  CHECK(psi(pt({r(1, 10), r(1, 5), r(1, 2), r(1, 2)})) == std::vector<Rat>{r(3, 10), 1});
  CHECK(p_proj(pt({r(3, 10), r(9, 10)})) == std::vector<Rat>{r(3, 10)});
  CHECK(p_proj(pt({0, r(1, 2)})) == std::vector<Rat>{0});
  CHECK(p_proj(pt({r(1, 10), r(1, 5), r(3, 5), r(1, 2)})) == std::vector<Rat>{r(1, 10), r(3, 5)});
}

TEST_CASE("affine_orbit examples") {
  CHECK(affine_orbit(pt({0, 0}), pt({r(1, 4), r(1, 4)}), 3) == pt({r(3, 4), r(3, 4)}));
  const TorusVec mu = pt({r(1, 3), r(7, 10)});
  CHECK(affine_orbit(mu, pt({r(1, 5), r(2, 3)}), 0) == mu);
  CHECK(affine_orbit(pt({r(1, 2), 0}), pt({r(1, 3), 0}), 2) == pt({r(1, 6), 0}));
}

TEST_CASE("half_difference examples") {
  CHECK(half_difference(pt({r(9, 10), 0}), pt({r(1, 10), 0})) == LiftVec{r(-2, 5), 0});
  const TorusVec x = pt({r(1, 5), r(3, 10)});
  CHECK(half_difference(x, x) == LiftVec{0, 0});
  CHECK(half_difference(x, pt({r(3, 5), r(1, 10)})) == LiftVec{r(1, 5), r(-1, 10)});
}

TEST_CASE("TorusVec rejects bad shapes") {
  CHECK_THROWS_AS(TorusVec({}, 10), std::invalid_argument);
  CHECK_THROWS_AS(TorusVec({1, 2, 3}, 10), std::invalid_argument);
  CHECK_THROWS_AS(TorusVec({10, 0}, 10), std::invalid_argument);
  CHECK_THROWS_AS(TorusVec({0, 0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(TorusVec({0, 0}, kMaxModulus + 1), std::invalid_argument);
  const std::vector<Rat> third{r(1, 3), 0};
  CHECK_THROWS_AS(TorusVec::from_rats(third, 1024), std::invalid_argument);
  CHECK_THROWS_AS(pt({0, 0}) + pt({0, 0}, 600), std::invalid_argument);
}

TEST_CASE("property: lift round trip and periodicity") {
  std::mt19937_64 rng(11);
  for (std::uint64_t q : {kQ, kDefaultModulus, kMaxModulus}) {
    for (int t = 0; t < 200; ++t) {
      const TorusVec v = random_vec(rng, 2, q);
      const LiftVec l = lift(v);
      CHECK(TorusVec::from_rats(l, q) == v);
      LiftVec shifted = l;
      for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += Rat(static_cast<long>(i) - 2);
      CHECK(TorusVec::from_rats(shifted, q) == v);
      for (const auto& x : l) CHECK((x >= 0 && x < 1));
    }
  }
}

TEST_CASE("property: orbit additivity and scaling") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::uint64_t> small(0, 1000);
  for (std::uint64_t q : {kQ, kDefaultModulus, kMaxModulus}) {
    for (int t = 0; t < 200; ++t) {
      const TorusVec mu = random_vec(rng, 2, q);
      const TorusVec th = random_vec(rng, 2, q);
      const std::uint64_t a = small(rng);
      const std::uint64_t b = small(rng);
      CHECK(affine_orbit(mu, th, a + b) == affine_orbit(affine_orbit(mu, th, a), th, b));
      TorusVec acc = TorusVec::zero(2, q);
      for (int k = 0; k < 5; ++k) acc = acc + th;
      CHECK(acc == th.scaled(5));
    }
  }
}

TEST_CASE("property: half-difference identity") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 500; ++t) {
    const TorusVec x = random_vec(rng, 2, kDefaultModulus);
    const TorusVec z = random_vec(rng, 2, kDefaultModulus);
    const LiftVec d = half_difference(x, z);
    const LiftVec lx = lift(x);
    const LiftVec lz = lift(z);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(2 * d[i] == lz[i] - lx[i]);
      CHECK((d[i] > Rat(-1, 2) && d[i] < Rat(1, 2)));
    }
  }
}

TEST_CASE("xi offsets cover every realised displacement (exhaustive grid)") {
  // For every x and alpha on a 1/48 grid, d = (lift(x+2alpha) - lift(x))/2
  // differs from lift(alpha) by one of the listed offsets.
  constexpr std::uint64_t q = 48;
  std::set<Rat> realised;
  for (std::uint64_t x = 0; x < q; ++x) {
    for (std::uint64_t a = 0; a < q; ++a) {
      const TorusVec xv({x, 0}, q);
      const TorusVec av({a, 0}, q);
      const Rat d = half_difference(xv, xv + av + av)[0];
      const Rat xi = d - av.coord(0);
      realised.insert(xi);
      bool listed = false;
      for (const auto& o : xi_offsets()) listed = listed || o == xi;
      CHECK(listed);
      const auto cands = xi_candidates(av);
      REQUIRE(cands.size() == 2);
      CHECK(std::count(cands[0].begin(), cands[0].end(), d) == 1);
    }
  }
  CHECK(realised == std::set<Rat>{Rat(-1), r(-1, 2), Rat(0)});
}

TEST_CASE("xi_candidates has four entries per scalar coordinate") {
  const auto c = xi_candidates(pt({r(1, 4), r(1, 3), 0, r(1, 2)}));
  REQUIRE(c.size() == 4);
  CHECK(c[0][2] == r(1, 4));
  CHECK(c[0][0] == r(-3, 4));
  CHECK(c[3][1] == 0);
}
