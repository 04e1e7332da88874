#include "apfree/verifier.hpp"

#include "apfree/parallel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace apfree {

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kNttRoot = 3;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % kNttPrime);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  while (exp > 0) {
    if (exp & 1) out = mul_mod(out, base);
    base = mul_mod(base, base);
    exp >>= 1;
  }
  return out;
}

void ntt(std::vector<std::uint64_t>& a, bool invert) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::uint64_t w = pow_mod(kNttRoot, (kNttPrime - 1) / len);
    if (invert) w = pow_mod(w, kNttPrime - 2);
    for (std::size_t i = 0; i < n; i += len) {
      std::uint64_t wn = 1;
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::uint64_t u = a[i + j];
        const std::uint64_t v = mul_mod(a[i + j + len / 2], wn);
        a[i + j] = u + v >= kNttPrime ? u + v - kNttPrime : u + v;
        a[i + j + len / 2] = u >= v ? u - v : u + kNttPrime - v;
        wn = mul_mod(wn, w);
      }
    }
  }
  if (invert) {
    const std::uint64_t inv_n = pow_mod(n % kNttPrime, kNttPrime - 2);
    for (auto& x : a) x = mul_mod(x, inv_n);
  }
}

}  // namespace

void require_sorted_unique(std::span<const std::uint64_t> set) {
  for (std::size_t i = 1; i < set.size(); ++i) {
    if (set[i - 1] >= set[i]) {
      throw std::invalid_argument("set must be strictly increasing (at position " + std::to_string(i) + ")");
    }
  }
}

APCount count_aps_bruteforce(std::span<const std::uint64_t> set, std::size_t max_witnesses, unsigned threads) {
  require_sorted_unique(set);
  APCount out;
  if (set.size() < 3) return out;
  const std::uint64_t lo = set.front();
  std::vector<bool> member(set.back() - lo + 1, false);
  for (auto v : set) member[v - lo] = true;

  struct Partial {
    std::uint64_t count = 0;
    std::vector<APWitness> witnesses;
  };
  const unsigned workers = std::max(1u, threads);
  std::vector<Partial> partial(workers);
  // Outer index i is the smallest element x; chunks keep witness order stable.
  parallel_chunks(workers, set.size(), [&](unsigned w, std::size_t begin, std::size_t end) {
    Partial& p = partial[w];
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t x = set[i];
      for (std::size_t j = i + 2; j < set.size(); ++j) {
        const std::uint64_t z = set[j];
        if ((x ^ z) & 1) continue;
        const std::uint64_t y = x + (z - x) / 2;
        if (member[y - lo]) {
          ++p.count;
          if (p.witnesses.size() < max_witnesses) p.witnesses.push_back({x, y, z});
        }
      }
    }
  });
  for (auto& p : partial) {
    out.count += p.count;
    for (auto& wv : p.witnesses) {
      if (out.witnesses.size() < max_witnesses) out.witnesses.push_back(wv);
    }
  }
  out.capped = out.count > out.witnesses.size();
  return out;
}

std::vector<std::uint64_t> ntt_convolve(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t result_size = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < result_size) n <<= 1;
  if (n > (std::size_t{1} << 57)) throw std::length_error("convolution too long for the NTT prime");
  std::vector<std::uint64_t> fa(n, 0);
  std::vector<std::uint64_t> fb(n, 0);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i] % kNttPrime;
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i] % kNttPrime;
  ntt(fa, false);
  ntt(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] = mul_mod(fa[i], fb[i]);
  ntt(fa, true);
  fa.resize(result_size);
  return fa;
}

std::uint64_t count_aps_convolution(std::span<const std::uint64_t> set, std::uint64_t n) {
  require_sorted_unique(set);
  if (set.empty()) return 0;
  if (set.front() < 1 || set.back() > n) throw std::invalid_argument("set is not contained in [1, N]");
  // Every coefficient of 1_A * 1_A is at most |A|; exact when |A| < p.
  if (set.size() >= kNttPrime) throw std::overflow_error("set too large for an exact NTT");
  const std::uint64_t lo = set.front();
  std::vector<std::uint64_t> indicator(set.back() - lo + 1, 0);
  for (auto v : set) indicator[v - lo] = 1;
  const auto sq = ntt_convolve(indicator, indicator);
  // (1_A * 1_A)(2y) in shifted coordinates sits at index 2(y - lo).
  std::uint64_t total = 0;
  for (auto y : set) total += sq[2 * (y - lo)];
  return (total - set.size()) / 2;
}

bool is_3ap_free(std::span<const std::uint64_t> set, unsigned threads) {
  return count_aps_bruteforce(set, 0, threads).count == 0;
}

}  // namespace apfree
