#include "apfree/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace apfree {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rat parse_rat(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-') {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "' (expected p/q)");
  }
  BigInt n(std::string(num), 10);
  BigInt d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_str();
}

std::string to_string(const BigInt& value) { return value.get_str(); }

Rat make_rat(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rat r(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
  r.canonicalize();
  return r;
}

BigInt floor_of(const Rat& value) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

BigInt from_u128(unsigned __int128 value) {
  BigInt hi = from_u64(static_cast<std::uint64_t>(value >> 64));
  BigInt lo = from_u64(static_cast<std::uint64_t>(value));
  BigInt out = hi;
  out <<= 64;
  out += lo;
  return out;
}

BigInt from_u64(std::uint64_t value) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(value), 0, 0, &value);
  return out;
}

std::uint64_t to_u64(const BigInt& value) {
  if (value < 0 || mpz_sizeinbase(value.get_mpz_t(), 2) > 64) {
    throw std::overflow_error("integer does not fit in 64 bits: " + value.get_str());
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, value.get_mpz_t());
  return out;
}

double to_double(const Rat& value) { return value.get_d(); }

}  // namespace apfree
