#include "fraclim/instance.hpp"
#include "fraclim/quasilinear.hpp"
#include "fraclim/seq/builtins.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace fraclim;

namespace {

// max |s(bn+i) - B s(n)| over 1 <= n <= N, integral B, beta = 0
std::int64_t brute_C(seq::SequenceEngine& e, int b, std::int64_t B, std::uint64_t N) {
  std::int64_t best = 0;
  for (std::uint64_t n = 1; n <= N; ++n)
    for (int i = 0; i < b; ++i) best = std::max(best, std::abs(e.eval_small(b * n + i) - B * e.eval_small(n)));
  return best;
}

}  // namespace

TEST_CASE("exponent estimates") {
  seq::SequenceEngine tm = seq::builtin("tm_sum");
  auto a = estimate_alpha(tm, 1 << 16);
  REQUIRE(a.snapped);
  CHECK(*a.snapped == 1);
  auto b = estimate_beta(tm, 1 << 16);
  REQUIRE(b.snapped);
  CHECK(*b.snapped == 0);

  seq::SequenceEngine rs = seq::builtin("rs_sum");
  auto ar = estimate_alpha(rs, 1 << 16);
  REQUIRE(ar.snapped);
  CHECK(*ar.snapped == Rational(1, 2));

  seq::SequenceEngine d = seq::builtin("tm_double_sum");
  CHECK(*estimate_alpha(d, 1 << 16).snapped == 2);
  CHECK(*estimate_beta(d, 1 << 16).snapped == 1);

  CHECK_THROWS_AS(estimate_alpha(tm, 100), DomainError);
  seq::SequenceEngine zero(seq::parse_spec("base 2\nname z\ninit z(0) = 0\ninit z(1) = 0\nrule z(2n+0) = z(n)\n"
                                           "rule z(2n+1) = z(n)\n"));
  CHECK_THROWS_AS(estimate_alpha(zero, 4096), AllZero);
}

TEST_CASE("quasi-linear constants against brute force") {
  seq::SequenceEngine tm = seq::builtin("tm_sum");
  QLVerification v = verify_quasilinear(tm, 2, 1, 0, 20000);
  CHECK(v.exact);
  CHECK(v.profile.C == brute_C(tm, 2, 2, 20000));
  CHECK(v.profile.C == 2);
  CHECK(v.C_double == brute_C(tm, 2, 2, 40000));
  CHECK(v.growth == doctest::Approx(1.0));
  CHECK_FALSE(v.diverging);

  seq::SequenceEngine rs = seq::builtin("rs_sum");
  int b = rs.base();
  std::int64_t B = b == 4 ? 2 : 0;
  REQUIRE(B != 0);
  QLVerification w = verify_quasilinear(rs, 4, Rational(1, 2), 0, 20000);
  CHECK(w.profile.C == brute_C(rs, 4, B, 20000));
  CHECK(w.profile.C == 3);
  CHECK_FALSE(w.diverging);
}

TEST_CASE("a wrong exponent is flagged as diverging") {
  seq::SequenceEngine tm = seq::builtin("tm_sum");
  QLVerification v = verify_quasilinear(tm, 2, Rational(1, 2), 0, 20000);
  CHECK_FALSE(v.exact);
  CHECK(v.diverging);
  CHECK(v.growth > 1.5);
}

TEST_CASE("t-sequences and syndeticity") {
  CHECK(check_syndetic(TSequence::parse("2n"), 1000).M == 2);
  CHECK(check_syndetic(TSequence::parse("n"), 1000).M == 1);
  CHECK(check_syndetic(TSequence::parse("2*n+1"), 1000).M == 2);
  CHECK(TSequence::parse("2*n+1").at(3) == BigInt(7));
  CHECK(TSequence::parse("n^2").at(5) == BigInt(25));
  SyndeticReport sq = check_syndetic(TSequence::parse("n^2"), 1000);
  CHECK(sq.heuristic_unbounded);
  CHECK_FALSE(check_syndetic(TSequence::parse("2n"), 1000).heuristic_unbounded);

  TSequence bad = TSequence::list({1, 3, 3, 5}, "list");
  CHECK_THROWS_AS(check_syndetic(bad, 10), NotIncreasing);
  CHECK_THROWS(TSequence::parse("n^3"));

  std::string path = "fraclim_test_t.txt";
  {
    std::ofstream f(path);
    f << "2, 4 6\n8\n";
  }
  TSequence l = TSequence::load(path);
  CHECK(l.at(1) == BigInt(2));
  CHECK(l.at(4) == BigInt(8));
  CHECK_FALSE(l.at(5).has_value());
  std::remove(path.c_str());
  CHECK_THROWS_AS(TSequence::load("/nonexistent/t.txt"), IoError);
}

TEST_CASE("condition on the even grid for the Thue-Morse sum") {
  Instance inst = Instance::builtin("tm_sum", 20000);
  ConditionReport r = check_condition(inst.limit(), TSequence::parse("2n"), 10, std::nullopt, "tm_sum");
  CHECK(r.verdict == Verdict::HoldsCertified);
  REQUIRE(r.best_c);
  CHECK(*r.best_c == 1);
  CHECK(r.syndetic.M == 2);
  REQUIRE(r.levels.size() == 10);
  for (const auto& lv : r.levels) {
    if (lv.pairs == 0) continue;  // k <= 2 has no consecutive pair below b^k
    CHECK(lv.min_gap == 1);
    CHECK(lv.max_gap == 1);
  }
  // gaps computed directly from exact values
  for (unsigned k = 1; k <= 7; ++k)
    for (long n = 1; 2 * (n + 1) <= (1L << k) - 1; ++n) {
      Rational g = inst.value(BAdicPoint(2, 2 * (n + 1), k)) - inst.value(BAdicPoint(2, 2 * n, k));
      REQUIRE(g == Rational(1) / Rational(ipow(2, k)));
    }
}

TEST_CASE("condition fails for the Rudin-Shapiro sum on the full grid") {
  Instance inst = Instance::builtin("rs_sum", 20000);
  ConditionReport r = check_condition(inst.limit(), TSequence::parse("n"), 10, Rational(1, 10), "rs_sum");
  CHECK(r.verdict == Verdict::FailsCertified);
  REQUIRE(r.counterexample);
  CHECK(r.counterexample->k == 2);
  // scaled gaps stay in [-1, 1]; compare with direct differences
  int b = inst.base();
  for (const auto& lv : r.levels) {
    CHECK(lv.min_gap >= -1);
    CHECK(lv.max_gap <= 1);
  }
  for (unsigned k = 1; k <= 5; ++k) {
    Rational lo = 10, hi = -10;
    BigInt top = ipow(b, k) - 1;
    for (BigInt n = 1; n + 1 <= top; ++n) {
      Rational g = (inst.value(BAdicPoint(b, n + 1, k)) - inst.value(BAdicPoint(b, n, k))) * Rational(ipow(inst.B(), k));
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    REQUIRE(k <= r.levels.size());
    CHECK(r.levels[k - 1].min_gap == lo);
    CHECK(r.levels[k - 1].max_gap == hi);
  }
}

TEST_CASE("degenerate and unbounded grids") {
  Instance inst = Instance::builtin("tm_sum", 20000);
  ConditionReport zero = check_condition(inst.limit(), TSequence::parse("2n"), 0, std::nullopt);
  CHECK(zero.verdict == Verdict::HoldsCertified);
  CHECK_FALSE(zero.best_c);

  ConditionReport sq = check_condition(inst.limit(), TSequence::parse("n^2"), 10, std::nullopt);
  CHECK(sq.verdict == Verdict::Inconclusive);
  CHECK(sq.syndetic.heuristic_unbounded);
  CHECK(to_string(Verdict::FailsCertified) == "fails_certified");
}
