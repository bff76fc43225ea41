#include "fraclim/instance.hpp"

#include "fraclim/quasilinear.hpp"
#include "fraclim/seq/builtins.hpp"

#include <fmt/format.h>

namespace fraclim {

std::string to_string(CoverKind k) { return k == CoverKind::F ? "F" : "E"; }

CoverKind parse_cover_kind(std::string_view text) {
  if (text == "F" || text == "f") return CoverKind::F;
  if (text == "E" || text == "e") return CoverKind::E;
  throw DomainError("unknown cover kind '" + std::string(text) + "' (expected F or E)");
}

BigInt d4(const QLProfile& p) {
  if (p.alpha <= p.beta) throw DegenerateProfile("D_4 needs alpha > beta");
  if (p.base < 2) throw DegenerateProfile("D_4 needs b >= 2");
  const Rational e = p.alpha - p.beta;
  if (auto q = exact_power(Rational(p.base), e)) return floor_of(Rational(3) / (*q - 1)) + 1;
  // b^e is irrational, so 3/(b^e - 1) is not an integer and the floor settles
  for (unsigned bits = 64; bits <= 4096; bits *= 2) {
    Interval q = power_enclosure(Rational(p.base), e, bits);
    BigInt lo = floor_of(Rational(3) / (q.hi - 1));
    BigInt hi = floor_of(Rational(3) / (q.lo - 1));
    if (lo == hi) return lo + 1;
  }
  throw DegenerateProfile("could not decide the floor in D_4");
}

namespace {

Rational ratio_of(const QLProfile& p) {
  auto q = exact_power(Rational(p.base), p.alpha - p.beta);
  if (!q) throw ExactPathUnavailable("b^(alpha-beta) is irrational; half-heights would not be exact");
  return 1 / *q;
}

}  // namespace

Instance Instance::rho() {
  Instance in;
  in.id_ = "rho";
  in.kind_ = CoverKind::F;
  in.engine_ = std::make_shared<seq::SequenceEngine>(seq::builtin("rho"));
  in.rho_ = std::make_shared<RhoLimit>(in.engine_);
  // f_n coincides with g_n for the profile (b, alpha, beta) = (4, 1/2, 0), C = C0 = 2
  QLProfile p;
  p.base = 4;
  p.alpha = Rational(1, 2);
  p.beta = 0;
  p.C = 2;
  p.C0 = 2;
  p.verified_n = 0;
  in.limit_ = std::make_shared<ProfileLimit>(in.engine_, p);
  in.B_ = 2;
  in.orbit_ = std::make_shared<OrbitLimit>(*in.engine_, in.B_);
  in.factor_ = 2;
  in.ratio_ = Rational(1, 2);
  in.vexp_ = Rational(1, 2);
  in.s0_ = in.engine_->eval_small(0);
  return in;
}

Instance Instance::profile(std::string id, std::shared_ptr<seq::SequenceEngine> engine, QLProfile profile) {
  Instance in;
  in.id_ = std::move(id);
  in.kind_ = CoverKind::E;
  in.engine_ = std::move(engine);
  in.limit_ = std::make_shared<ProfileLimit>(in.engine_, profile);
  if (!in.limit_->B()) throw ExactPathUnavailable("b^alpha is not an integer for " + in.id_);
  in.B_ = *in.limit_->B();
  in.orbit_ = std::make_shared<OrbitLimit>(*in.engine_, in.B_);
  if (!in.orbit_->available()) throw ExactPathUnavailable("exact limit unavailable for " + in.id_ + ": " + in.orbit_->reason());
  if (!in.orbit_->small()) throw ExactPathUnavailable("limit functional too large for " + in.id_);
  in.ratio_ = ratio_of(profile);
  in.vexp_ = profile.alpha - profile.beta;
  in.factor_ = Rational(d4(profile)) * profile.c_tail();
  in.s0_ = in.engine_->eval_small(0);
  return in;
}

Instance Instance::builtin(std::string_view id, std::uint64_t verify_n) {
  if (id == "rho") return rho();
  struct Row {
    std::string_view id;
    Rational alpha, beta;
  };
  static const Row rows[] = {
      {"tm_sum", 1, 0},
      {"rs_sum", Rational(1, 2), 0},
      {"tm_double_sum", 2, 1},
      {"zero", Rational(1, 2), 0},
  };
  for (const Row& r : rows) {
    if (r.id != id) continue;
    auto engine = std::make_shared<seq::SequenceEngine>(seq::builtin(id));
    QLVerification v = verify_quasilinear(*engine, engine->base(), r.alpha, r.beta, verify_n);
    return profile(std::string(id), engine, v.profile);
  }
  throw seq::UnknownBuiltin("no instance named '" + std::string(id) + "' (rho, tm_sum, rs_sum, tm_double_sum, zero)");
}

RhoLimit& Instance::rho_limit() {
  if (!rho_) throw DomainError(id_ + " is not the rho instance");
  return *rho_;
}

Rational Instance::half_height(unsigned n) const { return factor_ * rpow(ratio_, static_cast<long>(n)); }

Rational Instance::midline_definition(unsigned n, const BigInt& k) {
  BAdicPoint x(base(), k, n);
  if (kind_ == CoverKind::F) return rho_->f_n(x, n);
  return limit_->g_n_exact(x, n);
}

Rational Instance::midline(unsigned n, const BigInt& k) {
  Rational q(engine_->eval(k), ipow(B_, n));
  q.canonicalize();
  return q - Rational(engine_->eval(0));
}

Rational Instance::value(const BAdicPoint& x) {
  if (kind_ == CoverKind::F) return rho_->a_exact(x);
  return limit_->a_s_exact(x);
}

CertifiedValue Instance::lambda(const BAdicPoint& x, const Rational& eps) {
  if (kind_ == CoverKind::F) return rho_->lambda(x, eps);
  return limit_->lambda_s(x, eps);
}

__int128 Instance::limit_numerator(const seq::Window& w) const {
  if (w.index == 0) return 0;
  if (w.index < static_cast<std::uint64_t>(engine_->spec().n_min))
    throw DomainError(fmt::format("limit numerator below n_min at index {}", w.index));
  return orbit_->limit_numerator(w);
}

}  // namespace fraclim
