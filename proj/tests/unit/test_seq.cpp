#include "fraclim/seq/abelian.hpp"
#include "fraclim/seq/builtins.hpp"
#include "fraclim/seq/engine.hpp"
#include "fraclim/seq/spec.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace fraclim;
using namespace fraclim::seq;

namespace {

int tm_bit(std::uint64_t i) { return __builtin_popcountll(i) & 1; }
// (-1)^(number of 11 blocks in binary i)
int rs_sign(std::uint64_t i) { return (__builtin_popcountll(i & (i >> 1)) & 1) ? -1 : 1; }

// r_0 = 1, r_2n = r_n, r_2n+1 = (-1)^n r_n, no memo
int rs_recursive(std::uint64_t n) {
  if (n == 0) return 1;
  if (n % 2 == 0) return rs_recursive(n / 2);
  std::uint64_t m = (n - 1) / 2;
  return (m % 2 == 0 ? 1 : -1) * rs_recursive(m);
}

const char* kRho = R"(base 4
name rho
init rho(0) = 1
init rho(1) = 2
init rho(2) = 3
init rho(3) = 4
rule rho(4n+0) = 2*rho(n) + 1
rule rho(4n+1) = 2*rho(n)
rule rho(4n+2) = rho(n) + rho(n+1)
rule rho(4n+3) = 2*rho(n+1)
)";

SpecErrorKind kind_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const SpecError& e) {
    return e.kind();
  }
  FAIL("spec was accepted");
  return SpecErrorKind::Syntax;
}

}  // namespace

TEST_CASE("the rho spec parses and evaluates") {
  RecurrenceSpec spec = parse_spec(kRho);
  CHECK(spec.base == 4);
  CHECK(spec.name == "rho");
  CHECK(spec.n_min == 1);
  SequenceEngine e(spec);
  CHECK(e.eval(1) == 2);
  CHECK(e.eval(4) == 5);
  CHECK(e.eval(6) == 5);
  CHECK(e.delta(1) == 1);
  CHECK(e.delta(3) == 1);
}

TEST_CASE("rho(4^k) = 3 2^k - 1, far beyond 64 bits") {
  SequenceEngine e = builtin("rho");
  for (unsigned k = 0; k <= 90; k += 3) CHECK(e.eval(ipow(4, k)) == 3 * ipow(2, k) - 1);
}

TEST_CASE("spec diagnostics") {
  std::string missing = kRho;
  missing.erase(missing.find("rule rho(4n+2)"), std::string("rule rho(4n+2) = rho(n) + rho(n+1)\n").size());
  try {
    parse_spec(missing);
    FAIL("accepted");
  } catch (const SpecError& e) {
    CHECK(e.kind() == SpecErrorKind::MissingResidue);
    CHECK(e.detail == 2);
  }

  const char* nwf = "base 2\nname s\ninit s(0) = 0\ninit s(1) = 1\nrule s(2n+0) = s(n+3)\nrule s(2n+1) = s(n)\n";
  CHECK(kind_of(nwf) == SpecErrorKind::NonWellFounded);

  const char* noinit = "base 2\nname s\ninit s(0) = 0\nrule s(2n+0) = s(n)\nrule s(2n+1) = s(n)\n";
  CHECK(kind_of(noinit) == SpecErrorKind::MissingInitial);

  const char* dup = "base 2\nname s\ninit s(0) = 0\ninit s(1) = 1\nrule s(2n+0) = s(n)\nrule s(2n+0) = s(n)\n"
                    "rule s(2n+1) = s(n)\n";
  CHECK(kind_of(dup) == SpecErrorKind::DuplicateResidue);

  CHECK(kind_of("name s\n") == SpecErrorKind::Header);
  CHECK(kind_of("base 2\nname s\ninit s(0) = 0\ninit s(1) = 1\nrule s(2n+0) = s(n-1)\nrule s(2n+1) = s(n)\n") ==
        SpecErrorKind::Syntax);

  try {
    parse_spec("base 4\nname x\nrule x(4n+0) = = 2\n", "bad.seq");
    FAIL("accepted");
  } catch (const SpecError& e) {
    CHECK(e.kind() == SpecErrorKind::Syntax);
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
    CHECK(std::string(e.what()).find("bad.seq:3:") == 0);
  }
}

TEST_CASE("format_spec round trips") {
  for (const auto& name : builtin_names()) {
    RecurrenceSpec a = builtin_spec(name);
    RecurrenceSpec b = parse_spec(format_spec(a));
    SequenceEngine ea(a), eb(b);
    for (std::uint64_t n = 0; n < 500; ++n) REQUIRE(ea.eval(from_u64(n)) == eb.eval(from_u64(n)));
  }
}

TEST_CASE("golden data files match the builtins") {
  for (const char* name : {"rho", "rudin_shapiro", "thue_morse", "tm_sum", "tm_double_sum", "rs_sum"}) {
    RecurrenceSpec file = load_spec(std::string(FRACLIM_DATA_DIR) + "/" + name + ".seq");
    CHECK(spec_hash(file) == spec_hash(builtin_spec(name)));
  }
  CHECK_THROWS_AS(load_spec("/nonexistent/x.seq"), IoError);
  CHECK_THROWS_AS(builtin("nope"), UnknownBuiltin);
}

TEST_CASE("builtin values") {
  SequenceEngine rs = builtin("rudin_shapiro");
  CHECK(rs.eval(0) == 1);
  SequenceEngine tm = builtin("thue_morse");
  CHECK(tm.eval(0) == 0);
  CHECK(tm.eval(1) == 1);
  CHECK(tm.eval(2) == 1);
  CHECK(tm.eval(3) == 0);
  SequenceEngine s = builtin("tm_sum");
  for (std::uint64_t j = 0; j <= (1u << 16); ++j) REQUIRE(s.eval_small(2 * j) == static_cast<std::int64_t>(j));
}

TEST_CASE("Rudin-Shapiro against an unmemoized recursion below 2^20") {
  SequenceEngine rs = builtin("rudin_shapiro");
  for (std::uint64_t n = 0; n < (1u << 20); ++n) REQUIRE(rs.eval_small(n) == rs_recursive(n));
}

TEST_CASE("Thue-Morse and Rudin-Shapiro against bit counting") {
  SequenceEngine tm = builtin("thue_morse"), rs = builtin("rudin_shapiro");
  for (std::uint64_t n = 0; n < 200000; ++n) {
    REQUIRE(tm.eval_small(n) == tm_bit(n));
    REQUIRE(rs.eval_small(n) == rs_sign(n));
  }
}

TEST_CASE("sum sequences against direct prefix summation up to 10^6") {
  SequenceEngine s = builtin("tm_sum"), S = builtin("rs_sum"), D = builtin("tm_double_sum");
  std::int64_t ps = 0, pS = 0, pD = 0;
  for (std::uint64_t n = 0; n <= 1000000; ++n) {
    REQUIRE(s.eval_small(n) == ps);
    REQUIRE(S.eval_small(n) == pS);
    REQUIRE(D.eval_small(n) == pD);
    pD += ps;
    ps += tm_bit(n);
    pS += rs_sign(n);
  }
}

TEST_CASE("Delta rho is +-1 on 1..10^5") {
  SequenceEngine e = builtin("rho");
  for (std::uint64_t n = 1; n <= 100000; ++n) {
    std::int64_t d = e.eval_small(n + 1) - e.eval_small(n);
    REQUIRE((d == 1 || d == -1));
  }
}

TEST_CASE("abelian complexity oracle") {
  SequenceEngine rs = builtin("rudin_shapiro");
  CHECK(abelian_oracle(rs, 1, 4097) == 2);
  CHECK(abelian_oracle(rs, 3, 4099) == 4);
  SequenceEngine rho = builtin("rho");
  for (std::size_t n = 1; n <= 120; ++n) REQUIRE(abelian_oracle(rs, n, n + 4096) == to_u64(rho.eval(from_u64(n))));

  SequenceEngine c(parse_spec("base 2\nname c\ninit c(0) = 1\ninit c(1) = 1\nrule c(2n+0) = c(n)\nrule c(2n+1) = c(n)\n"));
  for (std::size_t n = 1; n <= 20; ++n) CHECK(abelian_oracle(c, n, 200) == 1);
  CHECK_THROWS_AS(abelian_oracle(rs, 10, 10), WindowTooSmall);
  CHECK(abelian_complexity({1, 1, 2, 1}, 2) == 2);
}

TEST_CASE("evaluation order does not matter") {
  std::mt19937_64 rng(11);
  for (const char* name : {"rho", "rs_sum", "tm_double_sum"}) {
    SequenceEngine asc = builtin(name), shuffled = builtin(name);
    std::vector<std::uint64_t> idx;
    for (std::uint64_t i = 0; i < 3000; ++i) idx.push_back(rng() % (1ull << 40));
    std::vector<BigInt> a;
    auto sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    for (auto n : sorted) a.push_back(asc.eval(from_u64(n)));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      auto pos = std::lower_bound(sorted.begin(), sorted.end(), idx[i]) - sorted.begin();
      REQUIRE(shuffled.eval(from_u64(idx[i])) == a[pos]);
    }
    shuffled.clear_memo();
    REQUIRE(shuffled.eval(from_u64(sorted.back())) == a.back());
  }
}

TEST_CASE("64-bit path reports overflow instead of wrapping") {
  SequenceEngine D = builtin("tm_double_sum");
  CHECK_THROWS_AS(D.eval_small(1ull << 40), OverflowError);
  BigInt big = D.eval(BigInt(1) << 40);
  CHECK(big > BigInt(1) << 70);
}

TEST_CASE("windows follow the digit maps") {
  for (const char* name : {"rho", "rs_sum", "tm_double_sum"}) {
    SequenceEngine e = builtin(name);
    Window w = e.window(5), c;
    for (int d = 0; d < e.base(); ++d) {
      e.child(w, d, c);
      Window direct = e.window(5 * e.base() + d);
      CHECK(c.index == direct.index);
      CHECK(c.v == direct.v);
    }
  }
}
