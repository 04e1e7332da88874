#include "apfree/building_block.hpp"

#include <stdexcept>

namespace apfree {

namespace {

const Rat kHalf(1, 2);
const Rat kThreeQuarters(3, 4);
const Rat kFiveQuarters(5, 4);

using i128 = __int128;

}  // namespace

void BlockSpec::validate() const {
  if (epsilon <= 0 || epsilon >= Rat(1, 4)) {
    throw std::invalid_argument("epsilon must lie in (0, 1/4), got " + to_string(epsilon));
  }
}

bool in_U1(const Rat& a, const Rat& b) {
  const bool off_diagonal = (a < kHalf) != (b < kHalf);
  return off_diagonal && a + b < kThreeQuarters;
}

bool in_U2(const Rat& a, const Rat& b, const Rat& eps) {
  if (!(a < kHalf)) return false;
  const Rat s = a + b;
  return s > kThreeQuarters + eps && s < kFiveQuarters;
}

bool in_U(const Rat& a, const Rat& b, const Rat& eps) { return in_U1(a, b) || in_U2(a, b, eps); }

bool in_T_truncated(const Rat& a, const Rat& b, const Rat& eps) {
  const Rat s = a + b;
  const bool a_low = a < kHalf;
  const bool b_low = b < kHalf;
  bool in_t = false;
  if (a_low && !b_low) {
    in_t = s >= Rat(7, 12) && s <= Rat(4, 3);
  } else if (a_low && b_low) {
    in_t = s > Rat(5, 6);
  } else if (!a_low && b_low) {
    in_t = s >= Rat(7, 12) && s < Rat(5, 6) && 2 * a + b < Rat(3, 2);
  }
  if (!in_t) return false;
  return !(s >= Rat(5, 6) - eps && s < Rat(5, 6));
}

bool in_block_pair(const Rat& a, const Rat& b, const BlockSpec& spec) {
  switch (spec.variant) {
    case BlockVariant::kUTruncation:
      return in_U(a, b, spec.epsilon);
    case BlockVariant::kTEps:
      return in_T_truncated(a, b, spec.epsilon);
  }
  return false;
}

bool in_block(const TorusVec& theta, const BlockSpec& spec) {
  for (std::size_t i = 0; i < theta.dim_pairs(); ++i) {
    if (!in_block_pair(theta.coord(2 * i), theta.coord(2 * i + 1), spec)) return false;
  }
  return true;
}

Rat measure_exact(const BlockSpec& spec) {
  spec.validate();
  if (spec.variant == BlockVariant::kTEps) return Rat(7, 24) - 2 * spec.epsilon;
  return Rat(9, 32) - spec.epsilon / 2;
}

GridBlock::GridBlock(const BlockSpec& spec, std::uint64_t modulus) : spec_(spec), q_(modulus) {
  spec_.validate();
  const BigInt& num = spec_.epsilon.get_num();
  const BigInt& den = spec_.epsilon.get_den();
  // Keeps every product below 2^127: coordinate sums < 2^63, factors < 2^60.
  if (mpz_sizeinbase(den.get_mpz_t(), 2) <= 56) {
    eps_ = std::pair{static_cast<std::int64_t>(num.get_si()), static_cast<std::int64_t>(den.get_si())};
  }
}

bool GridBlock::contains_pair(std::uint64_t a, std::uint64_t b) const {
  if (!eps_) {
    Rat ra(from_u64(a), from_u64(q_));
    Rat rb(from_u64(b), from_u64(q_));
    ra.canonicalize();
    rb.canonicalize();
    return in_block_pair(ra, rb, spec_);
  }
  const i128 q = q_;
  const i128 s = static_cast<i128>(a) + b;
  const bool a_low = 2 * static_cast<i128>(a) < q;
  const bool b_low = 2 * static_cast<i128>(b) < q;
  const i128 en = eps_->first;
  const i128 ed = eps_->second;
  if (spec_.variant == BlockVariant::kUTruncation) {
    if (a_low != b_low && 4 * s < 3 * q) return true;
    // 3/4 + en/ed < s/q < 5/4
    return a_low && 4 * ed * s > (3 * ed + 4 * en) * q && 4 * s < 5 * q;
  }
  bool in_t = false;
  if (a_low && !b_low) {
    in_t = 12 * s >= 7 * q && 3 * s <= 4 * q;
  } else if (a_low && b_low) {
    in_t = 6 * s > 5 * q;
  } else if (!a_low && b_low) {
    in_t = 12 * s >= 7 * q && 6 * s < 5 * q && 2 * (2 * static_cast<i128>(a) + b) < 3 * q;
  }
  if (!in_t) return false;
  // psi in [5/6 - en/ed, 5/6)
  const bool in_band = 6 * ed * s >= (5 * ed - 6 * en) * q && 6 * s < 5 * q;
  return !in_band;
}

bool GridBlock::contains(std::span<const std::uint64_t> nums) const {
  for (std::size_t i = 0; i + 1 < nums.size(); i += 2) {
    if (!contains_pair(nums[i], nums[i + 1])) return false;
  }
  return true;
}

bool GridBlock::contains(const TorusVec& theta) const {
  if (theta.modulus() != q_) throw std::invalid_argument("grid block modulus mismatch");
  return contains(theta.numerators());
}

}  // namespace apfree
