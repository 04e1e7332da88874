#include "apfree/weights.hpp"

#include <stdexcept>

namespace apfree {

namespace {

Rat one_minus_bracket_sq(const Rat& p, bool literal) {
  const Rat v = literal ? Rat(1 - p) : Rat(1 - frac_bracket(p));
  return v * v;
}

}  // namespace

Rat default_c2(const Rat& epsilon) {
  BigInt ten10;
  mpz_ui_pow_ui(ten10.get_mpz_t(), 10, 10);
  return Rat(Rat(ten10) / (epsilon * epsilon));
}

Rat c2_floor(const Rat& epsilon) {
  BigInt ten8;
  mpz_ui_pow_ui(ten8.get_mpz_t(), 10, 8);
  return Rat(1 + Rat(ten8) / (epsilon * epsilon));
}

WeightParams make_weight_params(const Rat& epsilon, const Rat& delta_hat, std::optional<Rat> c2,
                                bool allow_unsafe_c2, bool w3_literal) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  if (delta_hat <= 0) throw std::invalid_argument("delta must be positive");
  WeightParams p;
  p.epsilon = epsilon;
  p.c2 = c2.value_or(default_c2(epsilon));
  p.w1_width = Rat(1, 4);
  p.w23_width = delta_hat / 2;
  p.w3_literal = w3_literal;
  if (p.c2 <= 0) throw std::invalid_argument("c2 must be positive");
  if (!allow_unsafe_c2 && p.c2 < c2_floor(epsilon)) {
    throw std::invalid_argument("c2 = " + to_string(p.c2) + " is below the soundness floor " +
                                to_string(c2_floor(epsilon)) + " (pass --unsafe-c2 to override)");
  }
  return p;
}

Rat w1(const TorusVec& theta) {
  Rat total = 0;
  for (const Rat& s : psi(theta)) total += s;  // psi >= 0, so |psi| = psi
  return total;
}

Rat w2(const TorusVec& theta, const Rat& c2) {
  Rat total = 0;
  for (const Rat& s : psi(theta)) total += s * s;
  return Rat(c2 * total);
}

Rat w3(const TorusVec& theta, bool literal) {
  Rat total = 0;
  for (const Rat& p : p_proj(theta)) total += one_minus_bracket_sq(p, literal);
  return total;
}

BucketKey bucket_pair(const TorusVec& theta, const WeightParams& params) {
  return {floor_of(Rat(w1(theta) / params.w1_width)), floor_of(Rat(w23(theta, params) / params.w23_width))};
}

BucketIndexer::BucketIndexer(const WeightParams& params, std::uint64_t modulus)
    : literal_(params.w3_literal), q_(modulus) {
  const BigInt q = from_u64(modulus);
  w1_scale_num_ = params.w1_width.get_den();
  w1_scale_den_ = q * params.w1_width.get_num();
  const BigInt& hn = params.w23_width.get_num();
  const BigInt& hd = params.w23_width.get_den();
  s2_coef_ = 4 * hd * params.c2.get_num();
  t_coef_ = hd * params.c2.get_den();
  r2_den_ = 4 * params.c2.get_den() * q * q * hn;
}

BucketKey BucketIndexer::index(std::span<const std::uint64_t> nums) const {
  using u128 = unsigned __int128;
  // Per pair: (a+b)^2 < 4Q^2 <= 2^126 and (2Q - bp)^2 <= 4Q^2, so each
  // partial sum stays in 128 bits for a handful of pairs; accumulate into
  // big integers to stay exact for any D0.
  BigInt sum1 = 0;
  BigInt s2 = 0;
  BigInt t = 0;
  const u128 q = q_;
  for (std::size_t i = 0; i + 1 < nums.size(); i += 2) {
    const u128 a = nums[i];
    const u128 b = nums[i + 1];
    const u128 s = a + b;
    sum1 += from_u128(s);
    s2 += from_u128(s * s);
    u128 bp = 2 * a;
    if (!literal_ && bp >= q) bp -= q;
    const u128 gap = 2 * q - bp;
    t += from_u128(gap * gap);
  }
  BucketKey key;
  BigInt r1_num = sum1 * w1_scale_num_;
  mpz_fdiv_q(key.r1.get_mpz_t(), r1_num.get_mpz_t(), w1_scale_den_.get_mpz_t());
  BigInt r2_num = s2_coef_ * s2 + t_coef_ * t;
  mpz_fdiv_q(key.r2.get_mpz_t(), r2_num.get_mpz_t(), r2_den_.get_mpz_t());
  return key;
}

}  // namespace apfree
