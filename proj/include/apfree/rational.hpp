#pragma once

// Exact rationals and big integers. Every real-valued quantity in the
// library lives here; GMP keeps mpq values canonical (lowest terms,
// positive denominator) after each arithmetic operation.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace apfree {

using Rat = mpq_class;
using BigInt = mpz_class;

/// Parses "p/q" or "p" (decimal, optional leading '-'). Throws
/// std::invalid_argument on malformed text or a zero denominator.
Rat parse_rat(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rat& value);
std::string to_string(const BigInt& value);

Rat make_rat(std::int64_t num, std::int64_t den = 1);

BigInt floor_of(const Rat& value);

BigInt from_u128(unsigned __int128 value);
BigInt from_u64(std::uint64_t value);
std::uint64_t to_u64(const BigInt& value);  // throws std::overflow_error

double to_double(const Rat& value);

}  // namespace apfree
