#include "fraclim/limit/rho.hpp"
#include "fraclim/errors.hpp"
#include "fraclim/seq/builtins.hpp"

namespace fraclim {

RhoLimit::RhoLimit() : RhoLimit(std::make_shared<seq::SequenceEngine>(seq::builtin("rho"))) {}

RhoLimit::RhoLimit(std::shared_ptr<seq::SequenceEngine> engine) : engine_(std::move(engine)) {
  if (engine_->base() != 4) throw DomainError("the rho series needs a base-4 engine");
}

void RhoLimit::check_point(const BAdicPoint& x) const {
  if (x.base() != 4) throw DomainError("expected a 4-adic point, got " + x.str());
}

int RhoLimit::a_coeff(const BAdicPoint& x, unsigned j) {
  check_point(x);
  BigInt m = x.floor_scale(j);
  if (sgn(m) == 0) return -1;
  BigInt d = engine_->delta(m - 1);
  return static_cast<int>(d.get_si());
}

int RhoLimit::digit_weight(int y) {
  if (y < 0 || y > 3) throw DomainError("digit out of range: " + std::to_string(y));
  return y > 1 ? y - 1 : 1 - y;
}

std::vector<Rational> RhoLimit::partial_sums(const BAdicPoint& x, unsigned nmax) {
  check_point(x);
  std::vector<Rational> out;
  out.reserve(nmax);
  Rational acc = 0;
  Rational w(1, 2);
  for (unsigned j = 1; j <= nmax; ++j) {
    int d = digit_weight(x.digit(j));
    if (d != 0) acc += w * (d * a_coeff(x, j));
    out.push_back(acc);
    w /= 2;
  }
  return out;
}

Rational RhoLimit::f_n(const BAdicPoint& x, unsigned n) {
  if (n == 0) return 0;
  return partial_sums(x, n).back();
}

bool RhoLimit::verify_tail_identity(std::uint64_t N) {
  for (std::uint64_t n = 1; n <= N; ++n) {
    std::uint64_t i = 4 * n - 1;
    if (engine_->eval_small(i + 1) - engine_->eval_small(i) != 1) return false;
  }
  return true;
}

void RhoLimit::gate() {
  if (gate_passed_) return;
  if (!verify_tail_identity(gate_n_))
    throw VerificationError("tail identity Delta rho(4n-1) = 1 failed; exact evaluation disabled");
  gate_passed_ = true;
}

Rational RhoLimit::a_exact(const BAdicPoint& x) {
  check_point(x);
  if (x.value() > 1) throw OutOfRange("a(x) is evaluated on [0,1], got " + x.str());
  if (sgn(x.numerator()) == 0) return -1;
  gate();
  // beyond depth k every digit is 0 and a_j = Delta rho(4n - 1) = 1
  const unsigned k = x.depth();
  return f_n(x, k) + Rational(1, ipow(2, k));
}

CertifiedValue RhoLimit::a_certified(const BAdicPoint& x, const Rational& eps) {
  check_point(x);
  if (sgn(eps) <= 0) throw DomainError("eps must be positive");
  if (x.value() > 1 || x.value() < 0) throw OutOfRange("a(x) is evaluated on [0,1], got " + x.str());
  unsigned n = 1;
  while (Rational(2, ipow(2, n)) > eps) ++n;
  CertifiedValue c;
  c.mid = f_n(x, n);
  c.radius = Rational(2, ipow(2, n));
  c.radius.canonicalize();
  c.n_used = static_cast<int>(n);
  return c;
}

CertifiedValue RhoLimit::lambda(const BAdicPoint& x, const Rational& eps) {
  check_point(x);
  if (sgn(eps) <= 0) throw DomainError("eps must be positive");
  if (sgn(x.numerator()) == 0) throw DomainError("lambda is undefined at x = 0");
  if (x.value() > 1) throw OutOfRange("lambda is evaluated on (0,1], got " + x.str());
  const BigInt& z = x.numerator();
  const unsigned k = x.depth();
  Rational A = a_exact(x) + Rational(engine_->eval(x.floor_scale(0)));
  Rational scale(ipow(2, k));
  BigInt root;
  if (exact_root(z, 2, root)) return CertifiedValue::exact_value(A * scale / root, static_cast<int>(k));
  for (unsigned bits = 64;; bits *= 2) {
    Interval s = power_enclosure(Rational(z), Rational(1, 2), bits);
    Interval lam = Interval::point(A * scale) / s;
    if (lam.width() <= eps) {
      CertifiedValue c = CertifiedValue::from_interval(lam, static_cast<int>(k));
      if (c.radius <= eps) return c;
    }
    if (bits > (1u << 16)) throw Error("lambda enclosure did not converge");
  }
}

}  // namespace fraclim
