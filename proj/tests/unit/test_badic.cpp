#include "fraclim/badic.hpp"
#include "fraclim/errors.hpp"

#include <doctest.h>

#include <random>

using namespace fraclim;

TEST_CASE("digits of 4-adic points") {
  BAdicPoint x(4, 3, 2);
  CHECK(digit(x, 1) == 0);
  CHECK(digit(x, 2) == 3);
  CHECK(digit(x, 7) == 0);
  BAdicPoint y(4, 11, 2);
  CHECK(digit(y, 1) == 2);
  CHECK(digit(y, 2) == 3);
  BAdicPoint one = BAdicPoint::integer(4, 1);
  for (unsigned j = 1; j <= 10; ++j) CHECK(digit(one, j) == 0);
}

TEST_CASE("floor_scale") {
  CHECK(floor_scale(BAdicPoint(4, 3, 2), 2) == 3);
  CHECK(floor_scale(BAdicPoint(4, 1, 1), 3) == 16);
  CHECK(floor_scale(BAdicPoint(4, 11, 2), 1) == 2);
  CHECK(floor_scale(BAdicPoint(4, 11, 2), 0) == 0);
}

TEST_CASE("enclosing interval") {
  CHECK(enclosing_interval(BAdicPoint(4, 1, 1), 1) == BAdicInterval(4, 1, 1));
  CHECK(enclosing_interval(BAdicPoint(4, 15, 2), 1) == BAdicInterval(4, 1, 3));
  for (unsigned n = 0; n < 6; ++n) CHECK(enclosing_interval(BAdicPoint(4, 0, 0), n) == BAdicInterval(4, n, 0));
}

TEST_CASE("canonical form strips factors of b") {
  BAdicPoint x(4, 16, 3);
  CHECK(x.numerator() == 1);
  CHECK(x.depth() == 1);
  BAdicPoint z(2, 0, 9);
  CHECK(z.depth() == 0);
  CHECK(BAdicPoint(10, 500, 3).str() == "5/10^1");
  CHECK(BAdicPoint(4, 12, 0).str() == "12");
}

TEST_CASE("digit round trip is exhaustive below b^8") {
  for (int b : {2, 3, 4}) {
    long top = 1;
    for (int i = 0; i < 8; ++i) top *= b;
    for (unsigned n = 0; n <= 8; ++n) {
      // every numerator for n = 8, a stride below so the loop stays small
      long step = n == 8 ? 1 : 7;
      for (long p = 0; p < top; p += step) {
        BAdicPoint x(b, p, n);
        std::vector<int> frac;
        for (unsigned j = 1; j <= n; ++j) frac.push_back(digit(x, j));
        BAdicPoint back = BAdicPoint::from_digits(b, floor_scale(x, 0), frac);
        REQUIRE(back.value() == x.value());
        REQUIRE(back.numerator() == x.numerator());
        REQUIRE(back.depth() == x.depth());
      }
    }
  }
}

TEST_CASE("children partition their parent") {
  for (int b : {2, 4}) {
    for (unsigned n = 0; n <= 6; ++n) {
      const long count = to_i64(ipow(b, n));
      for (long k = 0; k < count; ++k) {
        BAdicInterval I(b, n, k);
        auto ch = I.children();
        REQUIRE(ch.size() == static_cast<std::size_t>(b));
        REQUIRE(ch.front().left() == I.left());
        REQUIRE(ch.back().right() == I.right());
        for (std::size_t i = 0; i + 1 < ch.size(); ++i) REQUIRE(ch[i].right() == ch[i + 1].left());
        for (const auto& c : ch) REQUIRE(c.parent() == I);
      }
    }
  }
}

TEST_CASE("half-open containment") {
  BAdicInterval I(4, 2, 5);
  CHECK(I.contains(BAdicPoint(4, 5, 2)));
  CHECK_FALSE(I.contains(BAdicPoint(4, 6, 2)));
  CHECK(I.contains(BAdicPoint(4, 23, 3)));
  CHECK_FALSE(I.contains(BAdicPoint(4, 19, 3)));
}

TEST_CASE("membership agrees with floor_scale on random points") {
  std::mt19937_64 rng(7);
  for (int s = 0; s < 5000; ++s) {
    unsigned depth = rng() % 12;
    BigInt p = from_u64(rng() % (1ull << (2 * depth)));
    BAdicPoint x(4, p, depth);
    unsigned n = rng() % 10;
    BigInt k = floor_scale(x, n);
    REQUIRE(BAdicInterval(4, n, k).contains(x));
    if (k + 1 < ipow(4, n)) REQUIRE_FALSE(BAdicInterval(4, n, k + 1).contains(x));
    if (k > 0) REQUIRE_FALSE(BAdicInterval(4, n, k - 1).contains(x));
  }
}

TEST_CASE("parsing") {
  BAdicPoint a = parse_badic("11/4^2");
  CHECK(a.base() == 4);
  CHECK(a.numerator() == 11);
  CHECK(a.depth() == 2);
  CHECK(parse_badic("1/4", 4).value() == Rational(1, 4));
  CHECK(parse_badic("3/8", 2).str() == "3/2^3");
  CHECK(parse_badic("1", 4).depth() == 0);
  CHECK_THROWS_AS(parse_badic("1/3", 4), DomainError);
  CHECK_THROWS_AS(parse_badic("abc", 4), DomainError);
  CHECK(to_badic(Rational(5, 16), 4).str() == "5/4^2");
}

TEST_CASE("big numerators beyond 64 bits") {
  BAdicPoint x(4, ipow(4, 40) - 1, 40);
  CHECK(digit(x, 40) == 3);
  CHECK(digit(x, 1) == 3);
  CHECK(floor_scale(x, 40) == ipow(4, 40) - 1);
}
