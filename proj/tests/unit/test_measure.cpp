#include "fraclim/measure.hpp"

#include <doctest.h>

#include <random>

using namespace fraclim;

namespace {

// every level-m rectangle inside the root, tested one by one
Rational brute_measure(Instance& inst, unsigned n0, std::uint64_t k0, const Box& S, unsigned m) {
  int b = inst.base();
  BigInt span = ipow(b, m - n0);
  Rational h = inst.half_height(m);
  Rational w = Rational(1) / Rational(ipow(b, m));
  Rational total = 0;
  for (BigInt j = 0; j < span; ++j) {
    BigInt k = BigInt(static_cast<unsigned long>(k0)) * span + j;
    Rational mid = inst.midline(m, k);
    Rational x0 = Rational(k) * w;
    bool meets_x = x0 <= S.x0 + S.width && S.x0 <= x0 + w;
    bool meets_y = mid - h <= S.y0 + S.height && S.y0 <= mid + h;
    if (meets_x && meets_y) total += Rational(1) / Rational(span);
  }
  return total;
}

Box random_box(std::mt19937_64& rng, const Rational& y_center) {
  auto r = [&](int den) { return Rational(static_cast<long>(rng() % (2 * den)) - den, den); };
  Rational x0 = Rational(static_cast<long>(rng() % 64), 64);
  Rational w = Rational(1 + static_cast<long>(rng() % 16), 128);
  Rational y0 = y_center + r(8);
  Rational h = Rational(1 + static_cast<long>(rng() % 16), 32);
  return {x0, y0, w, h};
}

}  // namespace

TEST_CASE("root rectangle carries unit mass") {
  for (const char* id : {"rho", "tm_sum", "rs_sum"}) {
    Instance inst = Instance::builtin(id, 20000);
    CoverMeasure mu(inst, 1, 1);
    Box everything{-1, -100, 3, 200};
    for (unsigned m = 1; m <= 5; ++m) CHECK(mu.ball_measure(everything, m) == 1);
    CHECK(mu.cell_mass(1, 1) == 1);
    CHECK(mu.cell_mass(3, inst.base() * inst.base() + 2) == Rational(1, inst.base() * inst.base()));
    CHECK(mu.cell_mass(3, 0) == 0);
    Box far{5, 0, 1, 1};
    CHECK(mu.ball_measure(far, 4) == 0);
  }
}

TEST_CASE("pruned search matches exhaustive enumeration") {
  std::mt19937_64 rng(21);
  for (const char* id : {"rho", "tm_sum", "rs_sum", "tm_double_sum"}) {
    Instance inst = Instance::builtin(id, 20000);
    unsigned n0 = 1;
    std::uint64_t k0 = 1;
    CoverMeasure mu(inst, n0, k0);
    for (int t = 0; t < 60; ++t) {
      unsigned m = n0 + 1 + rng() % (inst.base() == 4 ? 5 : 9);
      Rational yc = inst.midline(n0, k0);
      Box S = random_box(rng, yc);
      S.x0 = Rational(k0, inst.base()) + S.x0 / inst.base();
      REQUIRE(mu.ball_measure(S, m) == brute_measure(inst, n0, k0, S, m));
    }
  }
}

TEST_CASE("measure is monotone and subadditive") {
  std::mt19937_64 rng(23);
  Instance inst = Instance::builtin("tm_sum", 20000);
  CoverMeasure mu(inst, 2, 1);
  Rational yc = inst.midline(2, 1);
  for (int t = 0; t < 80; ++t) {
    Box S = random_box(rng, yc);
    S.x0 = Rational(1, 4) + S.x0 / 4;
    Box bigger{S.x0 - Rational(1, 256), S.y0 - Rational(1, 64), S.width + Rational(1, 128), S.height + Rational(1, 32)};
    Rational a = mu.ball_measure(S, 8), big = mu.ball_measure(bigger, 8);
    REQUIRE(a <= big);
    REQUIRE(big <= 1);
    Box left{S.x0, S.y0, S.width / 2, S.height}, right{S.x0 + S.width / 2, S.y0, S.width / 2, S.height};
    REQUIRE(a <= mu.ball_measure(left, 8) + mu.ball_measure(right, 8));
  }
}

TEST_CASE("rectangle level for squares") {
  Instance rho = Instance::rho();
  CHECK(mdp_rect_level(rho, 4) == 10);
  Instance tm = Instance::builtin("tm_sum", 20000);
  CHECK(mdp_rect_level(tm, 4) == 6);
}

TEST_CASE("scans are reproducible and bounded") {
  Instance rho = Instance::rho();
  CoverMeasure mu(rho, 2, 5);
  MdpReport a = mdp_scan(mu, Rational(3, 2), 3, 6, 60, 42);
  MdpReport b = mdp_scan(mu, Rational(3, 2), 3, 6, 60, 42);
  CHECK(a.max_ratio == b.max_ratio);
  REQUIRE(a.arg);
  CHECK(a.arg->square.x0 == b.arg->square.x0);
  CHECK(a.max_ratio < 1024);
  CHECK(a.max_by_level.size() == 4);

  MdpReport zero = mdp_scan(mu, 0, 3, 6, 60, 7);
  CHECK(zero.max_ratio <= 1.0);
  CHECK(zero.max_ratio > 0);

  Instance tm = Instance::builtin("tm_sum", 20000);
  CoverMeasure mt(tm, 2, 1);
  MdpReport r = mdp_scan(mt, 1, 3, 8, 80, 3);
  // b^n0 (1 + 2 b^(m - rect level)) with b = 2, n0 = 2, m - rect level = -2
  CHECK(r.max_ratio <= 6.0);
}
