#include "fraclim/limit/profile.hpp"
#include "fraclim/errors.hpp"

#include <algorithm>

namespace fraclim {

void QLProfile::validate() const {
  if (base < 2) throw DomainError("profile base must be >= 2");
  if (sgn(beta) < 0) throw DomainError("profile needs beta >= 0");
  if (alpha <= beta) throw DomainError("profile needs alpha > beta");
  if (sgn(C) < 0) throw DomainError("profile constant C must be non-negative");
}

OrbitLimit::OrbitLimit(const seq::SequenceEngine& engine, const BigInt& B) {
  if (engine.has_overrides()) {
    reason_ = "initial values override the rules";
    return;
  }
  if (B < 2) {
    reason_ = "b^alpha must be at least 2";
    return;
  }
  const std::size_t W = engine.window_size();
  const std::size_t n = W + 1;
  seq::AffineMap m = engine.window_map(0);
  linalg::Matrix A(n, linalg::Vector(n, 0));
  Rational invB(1, B);
  invB.canonicalize();
  for (std::size_t i = 0; i < W; ++i) {
    for (std::size_t j = 0; j < W; ++j) A[i][j] = Rational(static_cast<long>(m.M[i][j])) * invB;
    A[i][W] = Rational(static_cast<long>(m.c[i])) * invB;
  }
  A[W][W] = invB;

  charpoly_ = linalg::charpoly(A);
  linalg::Vector rest = charpoly_;
  mult_one_ = linalg::divide_out_one(rest);
  if (!linalg::schur_stable(rest)) {
    reason_ = "the scaled window map has an eigenvalue other than 1 on or outside the unit circle";
    return;
  }
  linalg::Matrix AmI = linalg::subtract(A, linalg::identity(n));
  if (linalg::rank(AmI) != n - mult_one_) {
    reason_ = "eigenvalue 1 of the scaled window map is not semisimple";
    return;
  }
  linalg::Vector ell(n, 0);
  if (mult_one_ > 0) {
    // spectral projector onto ker(A - I) along range(A - I)
    auto K = linalg::nullspace(AmI);
    auto R = linalg::column_basis(AmI);
    linalg::Matrix T(n, linalg::Vector(n, 0));
    for (std::size_t c = 0; c < K.size(); ++c)
      for (std::size_t r = 0; r < n; ++r) T[r][c] = K[c][r];
    for (std::size_t c = 0; c < R.size(); ++c)
      for (std::size_t r = 0; r < n; ++r) T[r][K.size() + c] = R[c][r];
    linalg::Matrix Ti = linalg::inverse(T);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c < K.size(); ++c) ell[j] += T[0][c] * Ti[c][j];
  }
  den_ = 1;
  for (const auto& v : ell) mpz_lcm(den_.get_mpz_t(), den_.get_mpz_t(), v.get_den_mpz_t());
  num_.resize(n);
  small_ = true;
  for (std::size_t j = 0; j < n; ++j) {
    num_[j] = ell[j].get_num() * (den_ / ell[j].get_den());
    if (!fits_i64(num_[j])) small_ = false;
  }
  if (small_) {
    num_small_.resize(n);
    for (std::size_t j = 0; j < n; ++j) num_small_[j] = to_i64(num_[j]);
  }
  available_ = true;
}

Rational OrbitLimit::limit(const seq::Window& w) const {
  if (!available_) throw ExactPathUnavailable("orbit limit unavailable: " + reason_);
  BigInt acc = num_.back();
  for (std::size_t i = 0; i < w.v.size(); ++i)
    if (num_[i] != 0) acc += num_[i] * BigInt(static_cast<long>(w.v[i]));
  Rational r(acc, den_);
  r.canonicalize();
  return r;
}

__int128 OrbitLimit::limit_numerator(const seq::Window& w) const {
  if (!available_) throw ExactPathUnavailable("orbit limit unavailable: " + reason_);
  if (!small_) throw OverflowError("orbit functional does not fit 64-bit coefficients");
  __int128 acc = num_small_.back();
  for (std::size_t i = 0; i < w.v.size(); ++i) {
    if (num_small_[i] == 0) continue;
    __int128 prod;
    if (__builtin_mul_overflow(static_cast<__int128>(num_small_[i]), static_cast<__int128>(w.v[i]), &prod) ||
        __builtin_add_overflow(acc, prod, &acc))
      throw OverflowError("orbit limit numerator exceeds 128 bits");
  }
  return acc;
}

ProfileLimit::ProfileLimit(std::shared_ptr<seq::SequenceEngine> engine, QLProfile profile)
    : engine_(std::move(engine)), profile_(std::move(profile)) {
  profile_.validate();
  if (engine_->base() != profile_.base)
    throw DomainError("profile base " + std::to_string(profile_.base) + " differs from the engine base " +
                      std::to_string(engine_->base()));
  if (auto p = exact_power(Rational(profile_.base), profile_.alpha); p && p->get_den() == 1) B_ = p->get_num();
}

const OrbitLimit* ProfileLimit::orbit() {
  if (!orbit_tried_) {
    orbit_tried_ = true;
    if (B_) orbit_.emplace(*engine_, *B_);
  }
  return orbit_ && orbit_->available() ? &*orbit_ : nullptr;
}

Interval ProfileLimit::B_interval(unsigned bits) const {
  if (B_) return Interval::point(Rational(*B_));
  return power_enclosure(Rational(profile_.base), profile_.alpha, bits);
}

void ProfileLimit::check_point(const BAdicPoint& x) const {
  if (x.base() != profile_.base)
    throw DomainError("expected a " + std::to_string(profile_.base) + "-adic point, got " + x.str());
}

Interval ProfileLimit::c_term(const BAdicPoint& x, unsigned j) {
  check_point(x);
  if (j == 0) throw DomainError("c(j,x) needs j >= 1");
  BigInt s1 = engine_->eval(x.floor_scale(j));
  BigInt s0 = engine_->eval(x.floor_scale(j - 1));
  if (B_) return Interval::point(Rational(s1 - *B_ * s0));
  return Interval::point(Rational(s1)) - B_interval(160) * Interval::point(Rational(s0));
}

Rational ProfileLimit::g_n_exact(const BAdicPoint& x, unsigned n) {
  check_point(x);
  if (!B_) throw ExactPathUnavailable("b^alpha is not an integer; g_n has no exact path");
  // common denominator B^n
  BigInt acc = 0;
  BigInt prev = engine_->eval(x.floor_scale(0));
  for (unsigned j = 1; j <= n; ++j) {
    BigInt cur = engine_->eval(x.floor_scale(j));
    acc += (cur - *B_ * prev) * ipow(*B_, n - j);
    prev = cur;
  }
  Rational r(acc, ipow(*B_, n));
  r.canonicalize();
  return r;
}

CertifiedValue ProfileLimit::g_n(const BAdicPoint& x, unsigned n, bool demand_exact) {
  if (B_) return CertifiedValue::exact_value(g_n_exact(x, n), static_cast<int>(n));
  if (demand_exact) throw ExactPathUnavailable("b^alpha is not an integer; g_n has no exact path");
  check_point(x);
  Interval Bi = B_interval(160);
  Interval acc = Interval::point(0);
  Interval Bj = Interval::point(1);
  for (unsigned j = 1; j <= n; ++j) {
    Bj = Bj * Bi;
    acc = acc + c_term(x, j) / Bj;
  }
  return CertifiedValue::from_interval(acc, static_cast<int>(n));
}

Rational ProfileLimit::tail_bound(unsigned n) const {
  // |c(j,x)| <= C_tail b^((j-1) beta) for x in [0,1], so the tail after n is
  // C_tail b^-beta r^(n+1) / (1 - r) with r = b^(beta - alpha)
  const Rational b(profile_.base);
  const Rational Ct = profile_.c_tail();
  auto r_exact = exact_power(b, profile_.beta - profile_.alpha);
  auto bb_exact = exact_power(b, -profile_.beta);
  if (r_exact && bb_exact) return Ct * *bb_exact * rpow(*r_exact, static_cast<long>(n) + 1) / (1 - *r_exact);
  Interval r = power_enclosure(b, profile_.beta - profile_.alpha, 160);
  Interval bb = power_enclosure(b, -profile_.beta, 160);
  if (r.hi >= 1) throw DomainError("degenerate profile: b^(beta - alpha) >= 1");
  return Ct * bb.hi * rpow(r.hi, static_cast<long>(n) + 1) / (1 - r.hi);
}

CertifiedValue ProfileLimit::a_s_certified(const BAdicPoint& x, const Rational& eps) {
  check_point(x);
  if (sgn(eps) <= 0) throw DomainError("eps must be positive");
  if (x.value() > 1) throw OutOfRange("a_s is evaluated on [0,1], got " + x.str());
  unsigned n = 1;
  while (tail_bound(n) > eps / 2) {
    ++n;
    if (n > 4096) throw Error("tail bound does not reach eps");
  }
  for (;; ++n) {
    CertifiedValue g = g_n(x, n);
    Rational t = tail_bound(n);
    CertifiedValue c = CertifiedValue::from_interval({g.lo() - t, g.hi() + t}, static_cast<int>(n));
    if (c.radius <= eps) return c;
  }
}

Rational ProfileLimit::a_s_exact(const BAdicPoint& x) {
  check_point(x);
  if (x.value() > 1) throw OutOfRange("a_s is evaluated on [0,1], got " + x.str());
  const OrbitLimit* orb = orbit();
  if (!orb) {
    throw ExactPathUnavailable(B_ ? "exact limit unavailable: " + orbit_->reason()
                                  : std::string("b^alpha is not an integer"));
  }
  BigInt fl = x.floor_scale(0);
  if (sgn(x.numerator()) == 0) return -Rational(engine_->eval(0));
  BigInt z = x.numerator();
  unsigned L = x.depth();
  const BigInt nmin(static_cast<long>(engine_->spec().n_min));
  while (z < nmin) {
    z *= profile_.base;
    ++L;
  }
  const std::size_t w = engine_->window_width();
  auto big_limit = [&] {
    BigInt acc = orb->numerators().back();
    for (std::size_t s = 0; s < engine_->sequence_count(); ++s)
      for (std::size_t o = 0; o < w; ++o) {
        const BigInt& c = orb->numerators()[s * w + o];
        if (c != 0) acc += c * engine_->eval(s, z + static_cast<long>(o));
      }
    Rational q(acc, orb->denominator());
    q.canonicalize();
    return q;
  };
  Rational lim;
  bool done = false;
  if (fits_u64(z + static_cast<long>(w))) {
    try {
      lim = orb->limit(engine_->window(to_u64(z)));
      done = true;
    } catch (const OverflowError&) {
    }
  }
  if (!done) lim = big_limit();
  Rational r = lim / Rational(ipow(*B_, L)) - Rational(engine_->eval(fl));
  r.canonicalize();
  return r;
}

CertifiedValue ProfileLimit::a_s(const BAdicPoint& x, const Rational& eps) {
  if (orbit()) return CertifiedValue::exact_value(a_s_exact(x), static_cast<int>(x.depth()));
  return a_s_certified(x, eps);
}

CertifiedValue ProfileLimit::lambda_s(const BAdicPoint& x, const Rational& eps) {
  check_point(x);
  if (sgn(eps) <= 0) throw DomainError("eps must be positive");
  if (sgn(x.numerator()) == 0) throw DomainError("lambda_s is undefined at x = 0");
  if (x.value() > 1) throw OutOfRange("lambda_s is evaluated on (0,1], got " + x.str());
  const Rational s_floor(engine_->eval(x.floor_scale(0)));
  auto xa_exact = exact_power(x.value(), profile_.alpha);
  bool exact_a = orbit() != nullptr;
  if (exact_a && xa_exact) {
    return CertifiedValue::exact_value((a_s_exact(x) + s_floor) / *xa_exact, static_cast<int>(x.depth()));
  }
  Interval xa0 = power_enclosure(x.value(), profile_.alpha, 64);
  Rational eps_a = eps * xa0.lo / 4;
  Interval A = exact_a ? Interval::point(a_s_exact(x) + s_floor)
                       : a_s_certified(x, eps_a).interval() + Interval::point(s_floor);
  for (unsigned bits = 64;; bits *= 2) {
    Interval xa = power_enclosure(x.value(), profile_.alpha, bits);
    Interval lam = A / xa;
    CertifiedValue c = CertifiedValue::from_interval(lam, static_cast<int>(x.depth()));
    if (c.radius <= eps) return c;
    if (bits > (1u << 16)) throw Error("lambda_s enclosure did not converge");
  }
}

}  // namespace fraclim
