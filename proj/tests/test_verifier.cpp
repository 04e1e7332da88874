#include "apfree/verifier.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace apfree;

namespace {

// Triple loop over x < y < z.
std::uint64_t naive_count(const std::vector<std::uint64_t>& a) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      for (std::size_t k = j + 1; k < a.size(); ++k) c += a[i] + a[k] == 2 * a[j];
    }
  }
  return c;
}

std::vector<std::uint64_t> random_set(std::mt19937_64& rng, std::uint64_t n, std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size(0, max_size);
  std::uniform_int_distribution<std::uint64_t> u(1, n);
  std::set<std::uint64_t> s;
  const std::size_t target = std::min<std::size_t>(size(rng), n);
  while (s.size() < target) s.insert(u(rng));
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("brute-force examples") {
  const std::vector<std::uint64_t> a{1, 2, 3};
  const APCount c = count_aps_bruteforce(a);
  CHECK(c.count == 1);
  REQUIRE(c.witnesses.size() == 1);
  CHECK(c.witnesses[0] == APWitness{1, 2, 3});

  CHECK(count_aps_bruteforce(std::vector<std::uint64_t>{1, 2, 4, 8}).count == 0);

  const APCount five = count_aps_bruteforce(std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK(five.count == 4);
  CHECK(five.witnesses ==
        std::vector<APWitness>{{1, 2, 3}, {1, 3, 5}, {2, 3, 4}, {3, 4, 5}});
}

TEST_CASE("witness list is capped") {
  std::vector<std::uint64_t> a(50);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = i + 1;
  const APCount c = count_aps_bruteforce(a, 10);
  CHECK(c.count == naive_count(a));
  CHECK(c.witnesses.size() == 10);
  CHECK(c.capped);
  CHECK_FALSE(count_aps_bruteforce(a, c.count).capped);
}

TEST_CASE("convolution examples") {
  CHECK(count_aps_convolution(std::vector<std::uint64_t>{1, 2, 3}, 3) == 1);
  CHECK(count_aps_convolution(std::vector<std::uint64_t>{}, 10) == 0);
  CHECK_THROWS_AS(count_aps_convolution(std::vector<std::uint64_t>{0, 1}, 10), std::invalid_argument);
  CHECK_THROWS_AS(count_aps_convolution(std::vector<std::uint64_t>{1, 11}, 10), std::invalid_argument);
}

TEST_CASE("is_3ap_free examples") {
  CHECK_FALSE(is_3ap_free(std::vector<std::uint64_t>{1, 2, 3}));
  CHECK(is_3ap_free(std::vector<std::uint64_t>{5}));
  CHECK(is_3ap_free(std::vector<std::uint64_t>{}));
}

TEST_CASE("unsorted or repeated input is rejected") {
  CHECK_THROWS_AS(count_aps_bruteforce(std::vector<std::uint64_t>{3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(count_aps_bruteforce(std::vector<std::uint64_t>{1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(count_aps_convolution(std::vector<std::uint64_t>{2, 2}, 5), std::invalid_argument);
}

TEST_CASE("NTT convolution equals the schoolbook product") {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<std::uint64_t> v(0, 1000);
  for (std::size_t len : {1u, 2u, 3u, 17u, 64u, 200u}) {
    std::vector<std::uint64_t> a(len);
    std::vector<std::uint64_t> b(len + 5);
    for (auto& x : a) x = v(rng);
    for (auto& x : b) x = v(rng);
    std::vector<std::uint64_t> want(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) want[i + j] += a[i] * b[j];
    }
    auto got = ntt_convolve(a, b);
    REQUIRE(got.size() >= want.size());
    for (std::size_t i = want.size(); i < got.size(); ++i) CHECK(got[i] == 0);
    got.resize(want.size());
    CHECK(got == want);
  }
}

TEST_CASE("property: brute force and convolution agree with the triple loop") {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 60; ++t) {
    const auto a = random_set(rng, 300, 120);
    const std::uint64_t want = naive_count(a);
    CHECK(count_aps_bruteforce(a).count == want);
    CHECK(count_aps_convolution(a, 300) == want);
  }
}

TEST_CASE("property: counts are invariant under x -> k x + b") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 40; ++t) {
    const auto a = random_set(rng, 5000, 400);
    const std::uint64_t base = count_aps_bruteforce(a).count;
    for (std::uint64_t k : {1u, 3u, 7u}) {
      std::vector<std::uint64_t> b(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) b[i] = k * a[i] + 11;
      CHECK(count_aps_bruteforce(b).count == base);
      CHECK(count_aps_convolution(b, b.empty() ? 1 : b.back()) == base);
    }
  }
}

TEST_CASE("property: subsets never gain progressions") {
  std::mt19937_64 rng(54);
  std::bernoulli_distribution keep(0.7);
  for (int t = 0; t < 40; ++t) {
    const auto a = random_set(rng, 2000, 500);
    std::vector<std::uint64_t> sub;
    for (auto x : a) {
      if (keep(rng)) sub.push_back(x);
    }
    CHECK(count_aps_bruteforce(sub).count <= count_aps_bruteforce(a).count);
  }
}

TEST_CASE("results do not depend on the thread count") {
  std::mt19937_64 rng(55);
  const auto a = random_set(rng, 100000, 2000);
  const APCount one = count_aps_bruteforce(a, 20, 1);
  const APCount many = count_aps_bruteforce(a, 20, 5);
  CHECK(one.count == many.count);
  CHECK(one.witnesses == many.witnesses);
  CHECK(one.count == count_aps_convolution(a, 100000));
}
