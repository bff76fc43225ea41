#pragma once

#include "fraclim/numeric.hpp"

#include <optional>
#include <string>

namespace fraclim {

// closed rational interval
struct Interval {
  Rational lo;
  Rational hi;

  static Interval point(const Rational& v) { return {v, v}; }
  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }
  bool is_point() const { return lo == hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);  // b must exclude 0
Interval pow(const Interval& a, unsigned long e);            // a >= 0
Interval hull(const Interval& a, const Interval& b);

// x^e for x > 0, rational e. Exact point when the power is rational, else an
// enclosure of width at most ~2^-bits relative to the magnitude.
Interval power_enclosure(const Rational& x, const Rational& e, unsigned bits);
std::optional<Rational> exact_power(const Rational& x, const Rational& e);

// mid +- radius; exact values carry radius 0
struct CertifiedValue {
  Rational mid;
  Rational radius;
  bool exact = false;
  int n_used = 0;

  static CertifiedValue exact_value(const Rational& v, int n_used = 0);
  // mid snapped to a dyadic grid fine enough for the interval, radius rounded outward
  static CertifiedValue from_interval(const Interval& iv, int n_used);

  Rational lo() const { return mid - radius; }
  Rational hi() const { return mid + radius; }
  Interval interval() const { return {lo(), hi()}; }
  bool contains(const Rational& v) const { return lo() <= v && v <= hi(); }
  bool overlaps(const CertifiedValue& o, const Rational& slack = 0) const {
    return lo() <= o.hi() + slack && o.lo() <= hi() + slack;
  }
};

// radius rounded up to a double, so printed bounds stay valid
double upper_double(const Rational& q);
double lower_double(const Rational& q);

}  // namespace fraclim
