#pragma once

#include "fraclim/numeric.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fraclim {

// p * b^-n, kept canonical (n == 0 or b does not divide p)
class BAdicPoint {
 public:
  BAdicPoint(int base, BigInt numerator, unsigned depth);
  static BAdicPoint integer(int base, BigInt value) { return BAdicPoint(base, std::move(value), 0); }
  // digits x_0 (integer part) then x_1..x_n
  static BAdicPoint from_digits(int base, const BigInt& int_part, const std::vector<int>& frac);

  int base() const { return base_; }
  const BigInt& numerator() const { return p_; }
  unsigned depth() const { return n_; }
  Rational value() const;

  // x_j for j >= 1, terminating expansion
  int digit(unsigned j) const;
  // floor(b^j x)
  BigInt floor_scale(unsigned j) const;
  // p' with x = p' / b^level, valid when level >= depth
  BigInt scaled_numerator(unsigned level) const;

  std::string str() const;  // "p/b^n", or "p" at depth 0

  friend bool operator==(const BAdicPoint& a, const BAdicPoint& b) {
    return a.base_ == b.base_ && a.n_ == b.n_ && a.p_ == b.p_;
  }

 private:
  int base_;
  BigInt p_;
  unsigned n_;
};

// [k/b^n, (k+1)/b^n)
class BAdicInterval {
 public:
  BAdicInterval(int base, unsigned level, BigInt index);

  int base() const { return base_; }
  unsigned level() const { return level_; }
  const BigInt& index() const { return k_; }
  Rational left() const;
  Rational right() const;
  BAdicPoint left_point() const { return BAdicPoint(base_, k_, level_); }

  BAdicInterval child(int i) const;
  std::vector<BAdicInterval> children() const;
  BAdicInterval parent() const;
  bool contains(const BAdicPoint& x) const;
  bool contains(const Rational& x) const;
  std::string str() const;

  friend bool operator==(const BAdicInterval& a, const BAdicInterval& b) {
    return a.base_ == b.base_ && a.level_ == b.level_ && a.k_ == b.k_;
  }

 private:
  int base_;
  unsigned level_;
  BigInt k_;
};

int digit(const BAdicPoint& x, unsigned j);
BigInt floor_scale(const BAdicPoint& x, unsigned j);
BAdicInterval enclosing_interval(const BAdicPoint& x, unsigned n);

// Accepts "p/b^n", "p/q" with q a power of base, "p", and decimal-free rationals.
// base_hint is required unless the text spells out "b^n".
BAdicPoint parse_badic(std::string_view text, std::optional<int> base_hint = std::nullopt);
// Rational with denominator a power of base; throws DomainError otherwise
BAdicPoint to_badic(const Rational& x, int base);

}  // namespace fraclim
