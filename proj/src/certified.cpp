#include "fraclim/limit/certified.hpp"
#include "fraclim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fraclim {

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DomainError("interval division by an interval containing 0");
  return a * Interval{1 / b.hi, 1 / b.lo};
}

Interval pow(const Interval& a, unsigned long e) {
  if (sgn(a.lo) < 0) throw DomainError("pow of an interval with negative part");
  return {rpow(a.lo, static_cast<long>(e)), rpow(a.hi, static_cast<long>(e))};
}

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

std::optional<Rational> exact_power(const Rational& x, const Rational& e) {
  Rational out;
  if (exact_rational_power(x, e, out)) return out;
  return std::nullopt;
}

Interval power_enclosure(const Rational& x, const Rational& e, unsigned bits) {
  if (sgn(x) <= 0) throw DomainError("power of a non-positive number");
  if (auto ex = exact_power(x, e)) return Interval::point(*ex);
  // x^(p/q) = (x^p)^(1/q)
  const unsigned long q = to_u64(e.get_den());
  const long p = to_i64(e.get_num());
  Rational y = rpow(x, p);
  // y^(1/q) = (N * D^(q-1))^(1/q) / D, scaled by 2^bits
  BigInt N = y.get_num(), D = y.get_den();
  // extra bits relative to the magnitude of the result
  long mag = static_cast<long>(mpz_sizeinbase(N.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(D.get_mpz_t(), 2));
  long shift = static_cast<long>(bits) + std::max(0L, -mag / static_cast<long>(q)) + 2;
  BigInt M = N * ipow(D, q - 1) << static_cast<unsigned long>(shift * static_cast<long>(q));
  BigInt r;
  bool exact = mpz_root(r.get_mpz_t(), M.get_mpz_t(), q) != 0;
  BigInt den = D << static_cast<unsigned long>(shift);
  Rational lo(r, den), hi(exact ? r : BigInt(r + 1), den);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

CertifiedValue CertifiedValue::exact_value(const Rational& v, int n_used) {
  CertifiedValue c;
  c.mid = v;
  c.radius = 0;
  c.exact = true;
  c.n_used = n_used;
  return c;
}

namespace {

bool dyadic(const Rational& q, unsigned max_bits) {
  const BigInt& d = q.get_den();
  return mpz_popcount(d.get_mpz_t()) == 1 && mpz_sizeinbase(d.get_mpz_t(), 2) <= max_bits + 1;
}

}  // namespace

CertifiedValue CertifiedValue::from_interval(const Interval& iv, int n_used) {
  if (iv.lo > iv.hi) throw DomainError("empty interval");
  Rational m = iv.mid();
  Rational half = iv.hi - m;
  unsigned bits = 64;
  if (sgn(half) > 0) {
    // resolve well below the radius
    BigInt inv = ceil_of(1 / half);
    bits = std::max<unsigned>(64, static_cast<unsigned>(mpz_sizeinbase(inv.get_mpz_t(), 2)) + 16);
  }
  CertifiedValue c;
  c.n_used = n_used;
  c.mid = dyadic(m, bits) ? m : round_down(m, bits);
  Rational r = std::max(iv.hi - c.mid, c.mid - iv.lo);
  c.radius = dyadic(r, bits) ? r : round_up(r, bits);
  c.exact = false;
  return c;
}

double upper_double(const Rational& q) {
  double d = q.get_d();
  if (Rational(d) < q) d = std::nextafter(d, HUGE_VAL);
  return d;
}

double lower_double(const Rational& q) {
  double d = q.get_d();
  if (Rational(d) > q) d = std::nextafter(d, -HUGE_VAL);
  return d;
}

}  // namespace fraclim
