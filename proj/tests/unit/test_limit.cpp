#include "fraclim/instance.hpp"
#include "fraclim/limit/profile.hpp"
#include "fraclim/limit/rho.hpp"
#include "fraclim/seq/builtins.hpp"

#include <doctest.h>

#include <random>

using namespace fraclim;

namespace {

BAdicPoint pt(int b, long p, unsigned n) { return BAdicPoint(b, p, n); }

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// s(z b^m) / B^(k+m) - s(0), straight from the sequence
Rational orbit_oracle(Instance& inst, const BigInt& z, unsigned k, unsigned m) {
  BigInt v = inst.engine().eval(z * ipow(inst.base(), m));
  BigInt fl = z / ipow(inst.base(), k);
  return Rational(v) / Rational(ipow(inst.B(), k + m)) - Rational(inst.engine().eval(fl));
}

BigInt random_index(std::mt19937_64& rng, int b, unsigned k) {
  BigInt top = ipow(b, k);
  BigInt r = from_u64(rng()) * from_u64(rng());
  return r % (top + 1);
}

}  // namespace

TEST_CASE("digit weights and coefficients") {
  CHECK(RhoLimit::digit_weight(0) == 1);
  CHECK(RhoLimit::digit_weight(1) == 0);
  CHECK(RhoLimit::digit_weight(2) == 1);
  CHECK(RhoLimit::digit_weight(3) == 2);
  RhoLimit r;
  r.set_gate_size(1000);
  auto x = pt(4, 1, 2);  // 1/16
  CHECK(r.a_coeff(x, 0) == -1);
  CHECK(r.a_coeff(x, 1) == -1);
  // floor(16 x) = 1: Delta rho(0) = rho(1) - rho(0) = 1
  CHECK(r.a_coeff(x, 2) == 1);
  // floor(4^4 x) = 16: Delta rho(15)
  seq::SequenceEngine rho = seq::builtin("rho");
  CHECK(r.a_coeff(x, 4) == rho.eval_small(16) - rho.eval_small(15));
}

TEST_CASE("rho remainder against the orbit of the sequence") {
  RhoLimit r;
  r.set_gate_size(2000);
  seq::SequenceEngine rho = seq::builtin("rho");
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    unsigned k = 1 + rng() % 12;
    BigInt z = 1 + random_index(rng, 4, k) % ipow(4, k);
    BAdicPoint x(4, z, k);
    Rational a = r.a_exact(x);
    unsigned m = 20;
    BigInt fl = z / ipow(4, k);
    Rational oracle = Rational(rho.eval(z * ipow(4, m))) / Rational(ipow(2, k + m)) - Rational(rho.eval(fl));
    REQUIRE(abs_q(a - oracle) == Rational(1) / Rational(ipow(2, k + m)));
  }
  // a(0) = -rho(0)
  CHECK(r.a_exact(pt(4, 0, 0)) == -1);
}

TEST_CASE("series partial sums agree with the telescoped midlines") {
  Instance inst = Instance::rho();
  ProfileLimit pl(inst.engine_ptr(), inst.profile());
  RhoLimit& r = inst.rho_limit();
  for (unsigned n = 1; n <= 6; ++n)
    for (long k = 0; k < (1L << (2 * n)); ++k) {
      BAdicPoint x(4, k, n);
      Rational f = r.f_n(x, n);
      REQUIRE(f == inst.midline(n, k));
      REQUIRE(f == pl.g_n_exact(x, n));
    }
  auto ps = r.partial_sums(pt(4, 27, 3), 5);
  REQUIRE(ps.size() == 5);
  CHECK(ps[2] == r.f_n(pt(4, 27, 3), 3));
}

TEST_CASE("partial sums are step functions on level-n intervals") {
  RhoLimit r;
  r.set_gate_size(1000);
  std::mt19937_64 rng(5);
  for (unsigned n = 1; n <= 6; ++n)
    for (long k = 0; k < (1L << (2 * n)); k += 1 + rng() % 3) {
      Rational left = r.f_n(BAdicPoint(4, k, n), n);
      for (int t = 0; t < 4; ++t) {
        BigInt inner = BigInt(k) * ipow(4, 5) + from_u64(rng() % 1024);
        REQUIRE(r.f_n(BAdicPoint(4, inner, n + 5), n) == left);
      }
    }
}

TEST_CASE("truncation error stays under the half-height law") {
  std::mt19937_64 rng(7);
  for (const char* id : {"rho", "tm_sum", "rs_sum", "tm_double_sum", "zero"}) {
    Instance inst = Instance::builtin(id, 20000);
    int b = inst.base();
    for (int t = 0; t < 150; ++t) {
      unsigned L = 10;
      BigInt z = random_index(rng, b, L);
      BAdicPoint x(b, z, L);
      Rational v = inst.value(x);
      for (unsigned n = 0; n <= L; n += 2) {
        BigInt k = x.floor_scale(n);
        if (k == ipow(b, n)) continue;
        REQUIRE(abs_q(v - inst.midline(n, k)) <= inst.half_height(n));
      }
    }
  }
}

TEST_CASE("exact values agree with raw sequence orbits") {
  std::mt19937_64 rng(9);
  for (const char* id : {"tm_sum", "rs_sum", "tm_double_sum"}) {
    Instance inst = Instance::builtin(id, 20000);
    int b = inst.base();
    for (int t = 0; t < 100; ++t) {
      unsigned k = 1 + rng() % 8;
      BigInt z = random_index(rng, b, k);
      Rational v = inst.value(BAdicPoint(b, z, k));
      unsigned m = 24;
      REQUIRE(abs_q(v - orbit_oracle(inst, z, k, m)) <= inst.half_height(k + m));
    }
  }
}

TEST_CASE("rho lambda values and scale invariance") {
  Instance inst = Instance::rho();
  Rational eps(1, 1 << 20);
  auto l1 = inst.lambda(pt(4, 1, 0), eps);
  CHECK(l1.exact);
  CHECK(l1.mid == 3);
  CHECK(inst.lambda(pt(4, 1, 1), eps).mid == 3);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 60; ++t) {
    unsigned k = 1 + rng() % 8;
    BigInt z = 1 + random_index(rng, 4, k) % ipow(4, k);
    auto a = inst.lambda(BAdicPoint(4, z, k), eps);
    auto b = inst.lambda(BAdicPoint(4, z, k + 1), eps);
    REQUIRE(a.overlaps(b));
    REQUIRE(a.radius <= eps);
    // lambda(x) ~ rho(z 4^m) / 2^(k+m) / sqrt(x)
    RhoLimit& r = inst.rho_limit();
    double direct = to_double(Rational(r.engine().eval(z * ipow(4, 16)), ipow(2, k + 16))) /
                    std::sqrt(to_double(Rational(z, ipow(4, k))));
    REQUIRE(std::abs(to_double(a.mid) - direct) < 1e-3);
  }
  CHECK_THROWS_AS(inst.lambda(pt(4, 0, 0), eps), DomainError);
}

TEST_CASE("certified values enclose exact ones") {
  std::mt19937_64 rng(17);
  for (const char* id : {"tm_sum", "rs_sum", "tm_double_sum"}) {
    Instance inst = Instance::builtin(id, 20000);
    int b = inst.base();
    for (int t = 0; t < 40; ++t) {
      unsigned k = 1 + rng() % 8;
      BigInt z = random_index(rng, b, k);
      BAdicPoint x(b, z, k);
      Rational eps(1, 1 << 12);
      CertifiedValue c = inst.limit().a_s_certified(x, eps);
      REQUIRE(c.contains(inst.value(x)));
      REQUIRE(c.radius <= eps);
    }
  }
  Instance rho = Instance::rho();
  for (long k = 1; k < 64; k += 5) {
    BAdicPoint x(4, k, 3);
    CertifiedValue c = rho.rho_limit().a_certified(x, Rational(1, 1 << 10));
    REQUIRE(c.contains(rho.value(x)));
  }
}

TEST_CASE("limit of Thue-Morse partial sums at 1") {
  Instance tm = Instance::builtin("tm_sum", 20000);
  auto l = tm.lambda(pt(2, 1, 0), Rational(1, 1 << 20));
  CHECK(l.contains(Rational(1, 2)));
  // a_s(1) = lambda_s(1) - s(1) with s(1) = 0
  CHECK(tm.value(pt(2, 1, 0)) == Rational(1, 2));
}

TEST_CASE("tail identity and domain checks") {
  RhoLimit r;
  CHECK(r.verify_tail_identity(5000));
  CHECK_THROWS_AS(r.a_exact(pt(4, 5, 1)), OutOfRange);
  Instance inst = Instance::builtin("tm_sum", 2000);
  seq::Window w0 = inst.engine().window(0);
  CHECK(inst.limit_numerator(w0) == 0);
}

TEST_CASE("d4 values") {
  QLProfile p;
  p.base = 2;
  p.alpha = 1;
  p.beta = 0;
  CHECK(d4(p) == 4);
  p.base = 4;
  p.alpha = Rational(1, 2);
  CHECK(d4(p) == 4);
  p.base = 2;
  p.alpha = 2;
  p.beta = 0;
  CHECK(d4(p) == 2);
  p.alpha = 0;
  CHECK_THROWS_AS(d4(p), DegenerateProfile);
}
