#include "apfree/torus.hpp"

#include <stdexcept>
#include <string>

namespace apfree {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

void require_same_shape(const TorusVec& a, const TorusVec& b) {
  if (a.size() != b.size() || a.modulus() != b.modulus()) {
    throw std::invalid_argument("torus vectors differ in dimension or modulus");
  }
}

}  // namespace

TorusVec::TorusVec(std::vector<std::uint64_t> numerators, std::uint64_t modulus)
    : numerators_(std::move(numerators)), modulus_(modulus) {
  if (modulus_ == 0 || modulus_ > kMaxModulus) {
    throw std::invalid_argument("modulus must lie in [1, 2^62]");
  }
  if (numerators_.empty() || numerators_.size() % 2 != 0) {
    throw std::invalid_argument("torus vector needs 2*D0 coordinates, D0 >= 1");
  }
  for (auto v : numerators_) {
    if (v >= modulus_) throw std::invalid_argument("coordinate numerator not reduced mod Q");
  }
}

TorusVec TorusVec::zero(std::size_t dim_pairs, std::uint64_t modulus) {
  return TorusVec(std::vector<std::uint64_t>(2 * dim_pairs, 0), modulus);
}

TorusVec TorusVec::from_rats(std::span<const Rat> coords, std::uint64_t modulus) {
  std::vector<std::uint64_t> nums;
  nums.reserve(coords.size());
  const BigInt q = from_u64(modulus);
  for (const Rat& c : coords) {
    if (q % c.get_den() != 0) {
      throw std::invalid_argument("denominator of " + to_string(c) + " does not divide the modulus " +
                                  std::to_string(modulus));
    }
    BigInt scaled = c.get_num() * (q / c.get_den());
    BigInt reduced;
    mpz_fdiv_r(reduced.get_mpz_t(), scaled.get_mpz_t(), q.get_mpz_t());
    nums.push_back(to_u64(reduced));
  }
  return TorusVec(std::move(nums), modulus);
}

Rat TorusVec::coord(std::size_t i) const {
  Rat r(from_u64(numerators_.at(i)), from_u64(modulus_));
  r.canonicalize();
  return r;
}

TorusVec TorusVec::operator+(const TorusVec& other) const {
  require_same_shape(*this, other);
  std::vector<std::uint64_t> out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    std::uint64_t s = numerators_[i] + other.numerators_[i];
    out[i] = s >= modulus_ ? s - modulus_ : s;
  }
  return TorusVec(std::move(out), modulus_);
}

TorusVec TorusVec::scaled(std::uint64_t n) const {
  std::vector<std::uint64_t> out(size());
  const std::uint64_t nr = n % modulus_;
  for (std::size_t i = 0; i < size(); ++i) out[i] = mul_mod(numerators_[i], nr, modulus_);
  return TorusVec(std::move(out), modulus_);
}

LiftVec lift(const TorusVec& theta) {
  LiftVec out;
  out.reserve(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) out.push_back(theta.coord(i));
  return out;
}

Rat frac_bracket(const Rat& x) {
  if (x < 0 || x >= 1) throw std::out_of_range("fractional bracket needs x in [0,1), got " + to_string(x));
  static const Rat half(1, 2);
  if (x < half) return x;
  return Rat(x - half);
}

LiftVec frac_bracket(const LiftVec& x) {
  LiftVec out;
  out.reserve(x.size());
  for (const Rat& v : x) out.push_back(frac_bracket(v));
  return out;
}

std::vector<Rat> psi(const TorusVec& theta) {
  std::vector<Rat> out;
  out.reserve(theta.dim_pairs());
  const BigInt q = from_u64(theta.modulus());
  for (std::size_t i = 0; i < theta.dim_pairs(); ++i) {
    Rat r(from_u64(theta.numerator(2 * i)) + from_u64(theta.numerator(2 * i + 1)), q);
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

std::vector<Rat> p_proj(const TorusVec& theta) {
  std::vector<Rat> out;
  out.reserve(theta.dim_pairs());
  for (std::size_t i = 0; i < theta.dim_pairs(); ++i) out.push_back(theta.coord(2 * i));
  return out;
}

TorusVec affine_orbit(const TorusVec& mu, const TorusVec& theta0, std::uint64_t n) {
  require_same_shape(mu, theta0);
  return mu + theta0.scaled(n);
}

LiftVec half_difference(const TorusVec& theta_x, const TorusVec& theta_z) {
  require_same_shape(theta_x, theta_z);
  LiftVec out;
  out.reserve(theta_x.size());
  const BigInt two_q = 2 * from_u64(theta_x.modulus());
  for (std::size_t i = 0; i < theta_x.size(); ++i) {
    Rat d(from_u64(theta_z.numerator(i)) - from_u64(theta_x.numerator(i)), two_q);
    d.canonicalize();
    out.push_back(d);
  }
  return out;
}

std::vector<std::array<Rat, 4>> xi_candidates(const TorusVec& alpha) {
  std::vector<std::array<Rat, 4>> out;
  out.reserve(alpha.size());
  const auto& offsets = xi_offsets();
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const Rat a = alpha.coord(i);
    out.push_back({Rat(a + offsets[0]), Rat(a + offsets[1]), Rat(a + offsets[2]), Rat(a + offsets[3])});
  }
  return out;
}

}  // namespace apfree
