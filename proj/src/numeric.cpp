#include "fraclim/numeric.hpp"
#include "fraclim/errors.hpp"

#include <cctype>
#include <climits>
#include <cstdlib>
#include <limits>

namespace fraclim {

BigInt ipow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

BigInt ipow(long base, unsigned long e) { return ipow(BigInt(base), e); }

Rational rpow(const Rational& base, long e) {
  unsigned long m = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Rational r(ipow(base.get_num(), m), ipow(base.get_den(), m));
  if (e < 0) {
    if (r == 0) throw DomainError("zero to a negative power");
    r = 1 / r;
  }
  r.canonicalize();
  return r;
}

BigInt floor_of(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt ceil_of(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

bool fits_u64(const BigInt& v) { return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

bool fits_i64(const BigInt& v) {
  if (sgn(v) == 0) return true;
  if (mpz_sizeinbase(v.get_mpz_t(), 2) <= 63) return true;
  return v == BigInt(std::numeric_limits<long>::min());
}

std::uint64_t to_u64(const BigInt& v) {
  static_assert(sizeof(unsigned long) == 8);
  if (!fits_u64(v)) throw OverflowError("value does not fit in 64 bits: " + v.get_str());
  return mpz_get_ui(v.get_mpz_t());
}

std::int64_t to_i64(const BigInt& v) {
  if (!fits_i64(v)) throw OverflowError("value does not fit in 64 bits: " + v.get_str());
  return mpz_get_si(v.get_mpz_t());
}

BigInt from_u64(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }
BigInt from_i64(std::int64_t v) { return BigInt(static_cast<long>(v)); }

BigInt from_i128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt hi = from_u64(static_cast<std::uint64_t>(u >> 64));
  BigInt r = (hi << 64) + from_u64(static_cast<std::uint64_t>(u));
  return neg ? BigInt(-r) : r;
}

std::string to_string(const BigInt& v) { return v.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) {
  // mpq_get_d truncates; good enough for reporting
  return q.get_d();
}

namespace {

BigInt parse_int(std::string_view s, std::string_view whole) {
  if (s.empty()) throw DomainError("malformed number: '" + std::string(whole) + "'");
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  if (i == s.size()) throw DomainError("malformed number: '" + std::string(whole) + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw DomainError("malformed number: '" + std::string(whole) + "'");
  return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  std::size_t epos = s.find_first_of("eE");
  long exp10 = 0;
  std::string_view mant = s;
  if (epos != std::string_view::npos) {
    exp10 = to_i64(parse_int(s.substr(epos + 1), whole));
    mant = s.substr(0, epos);
  }
  std::size_t dot = mant.find('.');
  std::string digits;
  if (dot != std::string_view::npos) {
    digits = std::string(mant.substr(0, dot)) + std::string(mant.substr(dot + 1));
    exp10 -= static_cast<long>(mant.size() - dot - 1);
    if (digits.empty() || digits == "-" || digits == "+")
      throw DomainError("malformed number: '" + std::string(whole) + "'");
  } else {
    digits = std::string(mant);
  }
  Rational r(parse_int(digits, whole));
  return r * rpow(Rational(10), exp10);
}

// factor: decimal | INT '^' [-]INT
Rational parse_factor(std::string_view s, std::string_view whole) {
  std::size_t caret = s.find('^');
  if (caret == std::string_view::npos) return parse_decimal(s, whole);
  BigInt base = parse_int(s.substr(0, caret), whole);
  long e = to_i64(parse_int(s.substr(caret + 1), whole));
  return rpow(Rational(base), e);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw DomainError("empty number");
  bool neg = false;
  std::string_view s = t;
  if (s[0] == '-' && s.find('^') != std::string_view::npos) {
    neg = true;
    s.remove_prefix(1);
  }
  Rational r = 1;
  // products and a single quotient: a*b/c*d is read as (a*b)/(c*d)
  std::size_t slash = s.find('/');
  auto product = [&](std::string_view part) {
    Rational p = 1;
    std::size_t start = 0;
    while (true) {
      std::size_t star = part.find('*', start);
      p *= parse_factor(part.substr(start, star == std::string_view::npos ? star : star - start), text);
      if (star == std::string_view::npos) break;
      start = star + 1;
    }
    return p;
  };
  if (slash == std::string_view::npos) {
    r = product(s);
  } else {
    Rational den = product(s.substr(slash + 1));
    if (den == 0) throw DomainError("division by zero in '" + std::string(text) + "'");
    r = product(s.substr(0, slash)) / den;
  }
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

Rational round_down(const Rational& q, unsigned bits) {
  BigInt scale = BigInt(1) << bits;
  Rational r(floor_of(q * scale), scale);
  r.canonicalize();
  return r;
}

Rational round_up(const Rational& q, unsigned bits) {
  BigInt scale = BigInt(1) << bits;
  Rational r(ceil_of(q * scale), scale);
  r.canonicalize();
  return r;
}

bool exact_root(const BigInt& v, unsigned long q, BigInt& out) {
  if (sgn(v) < 0) return false;
  return mpz_root(out.get_mpz_t(), v.get_mpz_t(), q) != 0;
}

bool exact_rational_power(const Rational& v, const Rational& e, Rational& out) {
  if (sgn(v) <= 0) return false;
  if (!fits_i64(e.get_num()) || !fits_u64(e.get_den())) return false;
  unsigned long q = to_u64(e.get_den());
  BigInt n, d;
  if (!exact_root(v.get_num(), q, n) || !exact_root(v.get_den(), q, d)) return false;
  out = rpow(Rational(n, d), to_i64(e.get_num()));
  return true;
}

std::size_t BigIntHash::operator()(const BigInt& v) const noexcept {
  std::size_t h = static_cast<std::size_t>(mpz_size(v.get_mpz_t())) * 0x9E3779B97F4A7C15ull;
  for (std::size_t i = 0; i < mpz_size(v.get_mpz_t()); ++i) {
    h ^= mpz_getlimbn(v.get_mpz_t(), i) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return h ^ static_cast<std::size_t>(sgn(v) + 1);
}

unsigned long long max_cells() {
  const char* env = std::getenv("FRACLIM_MAX_CELLS");
  if (env && *env) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1ull << 24;
}

void check_cells(unsigned long long cells, const std::string& what) {
  if (cells > max_cells())
    throw ResourceError(what + ": " + std::to_string(cells) + " cells exceeds limit " +
                        std::to_string(max_cells()) + " (set FRACLIM_MAX_CELLS to raise it)");
}

void check_cells(int base, int level, const std::string& what) {
  BigInt cells = ipow(base, static_cast<unsigned long>(level < 0 ? 0 : level));
  if (!fits_u64(cells) || to_u64(cells) > max_cells())
    throw ResourceError(what + ": " + std::to_string(base) + "^" + std::to_string(level) +
                        " cells exceeds limit " + std::to_string(max_cells()) +
                        " (set FRACLIM_MAX_CELLS to raise it)");
}

}  // namespace fraclim
