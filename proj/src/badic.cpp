#include "fraclim/badic.hpp"
#include "fraclim/errors.hpp"

#include <cctype>

namespace fraclim {

namespace {

void check_base(int base) {
  if (base < 2) throw DomainError("base must be >= 2, got " + std::to_string(base));
}

}  // namespace

BAdicPoint::BAdicPoint(int base, BigInt numerator, unsigned depth)
    : base_(base), p_(std::move(numerator)), n_(depth) {
  check_base(base);
  if (sgn(p_) < 0) throw DomainError("b-adic numerator must be non-negative");
  if (sgn(p_) == 0) {
    n_ = 0;
    return;
  }
  BigInt q, r;
  BigInt b(base);
  while (n_ > 0) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), p_.get_mpz_t(), b.get_mpz_t());
    if (r != 0) break;
    p_ = q;
    --n_;
  }
}

BAdicPoint BAdicPoint::from_digits(int base, const BigInt& int_part, const std::vector<int>& frac) {
  BigInt p = int_part;
  for (int d : frac) {
    if (d < 0 || d >= base) throw DomainError("digit out of range");
    p = p * base + d;
  }
  return BAdicPoint(base, p, static_cast<unsigned>(frac.size()));
}

Rational BAdicPoint::value() const {
  Rational r(p_, ipow(base_, n_));
  r.canonicalize();
  return r;
}

BigInt BAdicPoint::floor_scale(unsigned j) const {
  if (j >= n_) return p_ * ipow(base_, j - n_);
  BigInt r;
  BigInt d = ipow(base_, n_ - j);
  mpz_fdiv_q(r.get_mpz_t(), p_.get_mpz_t(), d.get_mpz_t());
  return r;
}

int BAdicPoint::digit(unsigned j) const {
  if (j == 0 || j > n_) return 0;
  BigInt f = floor_scale(j);
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), f.get_mpz_t(), static_cast<unsigned long>(base_));
  return static_cast<int>(r.get_si());
}

BigInt BAdicPoint::scaled_numerator(unsigned level) const {
  if (level < n_) throw DomainError("point " + str() + " is not on the level-" + std::to_string(level) + " grid");
  return p_ * ipow(base_, level - n_);
}

std::string BAdicPoint::str() const {
  if (n_ == 0) return p_.get_str();
  return p_.get_str() + "/" + std::to_string(base_) + "^" + std::to_string(n_);
}

BAdicInterval::BAdicInterval(int base, unsigned level, BigInt index)
    : base_(base), level_(level), k_(std::move(index)) {
  check_base(base);
  if (sgn(k_) < 0 || k_ >= ipow(base, level))
    throw DomainError("interval index out of range: " + k_.get_str() + " at level " + std::to_string(level));
}

Rational BAdicInterval::left() const {
  Rational r(k_, ipow(base_, level_));
  r.canonicalize();
  return r;
}

Rational BAdicInterval::right() const {
  Rational r(k_ + 1, ipow(base_, level_));
  r.canonicalize();
  return r;
}

BAdicInterval BAdicInterval::child(int i) const {
  if (i < 0 || i >= base_) throw DomainError("child digit out of range");
  return BAdicInterval(base_, level_ + 1, k_ * base_ + i);
}

std::vector<BAdicInterval> BAdicInterval::children() const {
  std::vector<BAdicInterval> out;
  out.reserve(static_cast<std::size_t>(base_));
  for (int i = 0; i < base_; ++i) out.push_back(child(i));
  return out;
}

BAdicInterval BAdicInterval::parent() const {
  if (level_ == 0) throw DomainError("level-0 interval has no parent");
  return BAdicInterval(base_, level_ - 1, floor_div(k_, BigInt(base_)));
}

bool BAdicInterval::contains(const Rational& x) const { return left() <= x && x < right(); }

bool BAdicInterval::contains(const BAdicPoint& x) const {
  return x.base() == base_ && x.floor_scale(level_) == k_;
}

std::string BAdicInterval::str() const {
  return "I(" + std::to_string(level_) + "," + k_.get_str() + ")";
}

int digit(const BAdicPoint& x, unsigned j) { return x.digit(j); }
BigInt floor_scale(const BAdicPoint& x, unsigned j) { return x.floor_scale(j); }

BAdicInterval enclosing_interval(const BAdicPoint& x, unsigned n) {
  return BAdicInterval(x.base(), n, x.floor_scale(n));
}

BAdicPoint to_badic(const Rational& x, int base) {
  check_base(base);
  if (sgn(x) < 0) throw DomainError("negative b-adic point " + x.get_str());
  BigInt den = x.get_den();
  unsigned n = 0;
  BigInt b(base);
  while (den != 1) {
    // den must divide some power of base
    BigInt g;
    mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), b.get_mpz_t());
    if (g == 1) throw DomainError(x.get_str() + " is not a " + std::to_string(base) + "-adic rational");
    den /= g;
    ++n;
  }
  BigInt p = x.get_num() * ipow(base, n) / x.get_den();
  return BAdicPoint(base, p, n);
}

BAdicPoint parse_badic(std::string_view text, std::optional<int> base_hint) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  std::size_t slash = t.find('/');
  std::size_t caret = t.find('^');
  if (slash != std::string::npos && caret != std::string::npos && caret > slash) {
    int b = 0;
    try {
      b = std::stoi(t.substr(slash + 1, caret - slash - 1));
    } catch (const std::exception&) {
      throw DomainError("malformed b-adic point '" + std::string(text) + "'");
    }
    if (base_hint && *base_hint != b)
      throw DomainError("point '" + std::string(text) + "' is base " + std::to_string(b) + ", expected base " +
                        std::to_string(*base_hint));
    Rational v = parse_rational(t);
    return to_badic(v, b);
  }
  if (!base_hint) throw DomainError("cannot infer base for '" + std::string(text) + "'; write p/b^n");
  return to_badic(parse_rational(t), *base_hint);
}

}  // namespace fraclim
