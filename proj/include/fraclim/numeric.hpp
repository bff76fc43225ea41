#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace fraclim {

using BigInt = mpz_class;
using Rational = mpq_class;

BigInt ipow(const BigInt& base, unsigned long e);
BigInt ipow(long base, unsigned long e);
// exponent may be negative
Rational rpow(const Rational& base, long e);

BigInt floor_of(const Rational& q);
BigInt ceil_of(const Rational& q);
BigInt floor_div(const BigInt& a, const BigInt& b);

bool fits_u64(const BigInt& v);
bool fits_i64(const BigInt& v);
std::uint64_t to_u64(const BigInt& v);
std::int64_t to_i64(const BigInt& v);
BigInt from_u64(std::uint64_t v);
BigInt from_i64(std::int64_t v);
BigInt from_i128(__int128 v);

std::string to_string(const BigInt& v);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

// "3/4", "-2", "0.15", "1e-6", "2^-20", "3*2^-5"
Rational parse_rational(std::string_view text);

// round to a multiple of 2^-bits
Rational round_down(const Rational& q, unsigned bits);
Rational round_up(const Rational& q, unsigned bits);

// exact integer q-th root when it exists
bool exact_root(const BigInt& v, unsigned long q, BigInt& out);
// v^(num/den) exactly when rational, for v > 0
bool exact_rational_power(const Rational& v, const Rational& e, Rational& out);

struct BigIntHash {
  std::size_t operator()(const BigInt& v) const noexcept;
};

}  // namespace fraclim
