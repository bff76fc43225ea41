#include "fraclim/quasilinear.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fraclim {

namespace {

double log_abs(seq::SequenceEngine& e, std::uint64_t n, bool diff) {
  BigInt v;
  try {
    std::int64_t a = e.eval_small(n);
    if (!diff) return a == 0 ? -INFINITY : std::log(std::fabs(static_cast<double>(a)));
    std::int64_t b = e.eval_small(n + 1);
    std::int64_t d;
    if (!__builtin_sub_overflow(b, a, &d)) return d == 0 ? -INFINITY : std::log(std::fabs(static_cast<double>(d)));
    v = BigInt(static_cast<long>(b)) - BigInt(static_cast<long>(a));
  } catch (const OverflowError&) {
    BigInt n_big = from_u64(n);
    v = diff ? BigInt(e.eval(n_big + 1) - e.eval(n_big)) : e.eval(n_big);
  }
  if (sgn(v) == 0) return -INFINITY;
  long exp = 0;
  double m = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(std::fabs(m)) + static_cast<double>(exp) * std::log(2.0);
}

ExponentEstimate estimate(seq::SequenceEngine& e, std::uint64_t N, bool diff) {
  if (N < 1024) throw DomainError("exponent estimation needs N >= 1024");
  ExponentEstimate out;
  out.lo = std::max<std::uint64_t>(1, N / 64);
  out.hi = N;
  std::vector<std::uint64_t> sample;
  for (int i = 0;; ++i) {
    auto n = static_cast<std::uint64_t>(std::llround(static_cast<double>(out.lo) * std::exp2(i / 8.0)));
    if (n > N) break;
    if (sample.empty() || n != sample.back()) sample.push_back(n);
  }
  if (sample.back() != N) sample.push_back(N);
  // running envelope of |s| (or |Delta s|) from 1 up
  double env = -INFINITY;
  std::size_t next = 0;
  std::vector<double> xs, ys;
  for (std::uint64_t n = 1; n <= N && next < sample.size(); ++n) {
    env = std::max(env, log_abs(e, n, diff));
    if (n == sample[next]) {
      if (std::isfinite(env)) {
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(env);
      }
      ++next;
    }
  }
  if (xs.size() < 2) throw AllZero(diff ? "the difference sequence vanishes on the window" : "the sequence vanishes on the window");
  const double k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.raw_slope = sxy / sxx;
  out.samples = xs.size();
  double best = 1e9;
  for (long den = 1; den <= 4; ++den) {
    long num = std::lround(out.raw_slope * static_cast<double>(den));
    double dist = std::fabs(out.raw_slope - static_cast<double>(num) / static_cast<double>(den));
    if (dist + 1e-12 < best) {
      best = dist;
      Rational q(num, den);
      q.canonicalize();
      if (dist <= 0.05) out.snapped = q;
    }
  }
  if (best > 0.05) out.snapped.reset();
  return out;
}

}  // namespace

ExponentEstimate estimate_alpha(seq::SequenceEngine& engine, std::uint64_t N) { return estimate(engine, N, false); }
ExponentEstimate estimate_beta(seq::SequenceEngine& engine, std::uint64_t N) { return estimate(engine, N, true); }

QLVerification verify_quasilinear(seq::SequenceEngine& engine, int b, const Rational& alpha, const Rational& beta,
                                  std::uint64_t N) {
  if (N > (1ull << 31)) throw OverflowError("verification range beyond 2^31");
  if (N == 0) throw DomainError("verification range must be non-empty");
  if (engine.base() != b) throw DomainError(fmt::format("engine base {} differs from b = {}", engine.base(), b));
  QLVerification out;
  out.profile.base = b;
  out.profile.alpha = alpha;
  out.profile.beta = beta;
  out.profile.validate();
  out.profile.verified_n = from_u64(N);

  std::optional<BigInt> B;
  if (auto p = exact_power(Rational(b), alpha); p && p->get_den() == 1) B = p->get_num();
  const bool beta_int = beta.get_den() == 1;
  out.exact = B.has_value() && beta_int;
  Interval Bi = B ? Interval::point(Rational(*B)) : power_enclosure(Rational(b), alpha, 128);

  auto bound = [&](const BigInt& s1, const BigInt& s0, std::uint64_t n) -> Rational {
    Rational num;
    if (B) {
      num = abs(Rational(s1 - *B * s0));
    } else {
      Interval d = Interval::point(Rational(s1)) - Bi * Interval::point(Rational(s0));
      num = std::max(abs(d.lo), abs(d.hi));
    }
    if (n == 0 || sgn(beta) == 0) return num;
    if (beta_int) return num / Rational(ipow(from_u64(n), to_u64(beta.get_num())));
    return num / power_enclosure(Rational(from_u64(n)), beta, 64).lo;
  };

  const BigInt s_zero = engine.eval(0);
  for (int i = 0; i < b; ++i) out.profile.C0 = std::max(out.profile.C0, bound(engine.eval(i), s_zero, 0));

  Rational C = 0;
  const BigInt bb(b);
  for (std::uint64_t n = 1; n <= 2 * N; ++n) {
    BigInt nb = from_u64(n);
    BigInt s0 = engine.eval(nb);
    for (int i = 0; i < b; ++i) {
      Rational v = bound(engine.eval(nb * bb + i), s0, n);
      if (v > C) {
        C = v;
        if (n <= N) {
          out.argmax_n = n;
          out.argmax_i = i;
        }
      }
    }
    if (n == N) out.profile.C = C;
  }
  out.C_double = C;
  if (sgn(out.profile.C) == 0) {
    out.growth = sgn(C) == 0 ? 1.0 : INFINITY;
  } else {
    out.growth = to_double(C / out.profile.C);
  }
  out.diverging = out.growth > std::pow(static_cast<double>(b), 0.1);
  return out;
}

TSequence TSequence::affine(const BigInt& a, const BigInt& c) {
  TSequence t;
  t.description = fmt::format("{}*n{}{}", a.get_str(), sgn(c) < 0 ? "-" : "+", BigInt(abs(c)).get_str());
  t.at = [a, c](std::uint64_t n) -> std::optional<BigInt> { return a * from_u64(n) + c; };
  return t;
}

TSequence TSequence::list(std::vector<BigInt> values, std::string description) {
  TSequence t;
  t.description = std::move(description);
  auto shared = std::make_shared<std::vector<BigInt>>(std::move(values));
  t.at = [shared](std::uint64_t n) -> std::optional<BigInt> {
    if (n == 0 || n > shared->size()) return std::nullopt;
    return (*shared)[n - 1];
  };
  return t;
}

TSequence TSequence::parse(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw DomainError("empty t-sequence");
  // polynomial in n of degree <= 2 with integer coefficients
  BigInt coef[3] = {0, 0, 0};
  std::size_t i = 0;
  auto fail = [&]() { throw DomainError("cannot parse t-sequence '" + std::string(text) + "' (expected e.g. 2*n+1)"); };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      fail();
    }
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    BigInt c = j > i ? BigInt(s.substr(i, j - i)) : BigInt(1);
    bool had_digits = j > i;
    i = j;
    int degree = 0;
    if (i < s.size() && s[i] == '*') {
      if (!had_digits) fail();
      ++i;
      if (i >= s.size() || s[i] != 'n') fail();
    }
    if (i < s.size() && s[i] == 'n') {
      ++i;
      degree = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        if (i >= s.size() || (s[i] != '1' && s[i] != '2')) fail();
        degree = s[i] - '0';
        ++i;
      }
    } else if (!had_digits) {
      fail();
    }
    coef[degree] += sign * c;
  }
  TSequence t;
  t.description = s;
  BigInt c0 = coef[0], c1 = coef[1], c2 = coef[2];
  t.at = [c0, c1, c2](std::uint64_t n) -> std::optional<BigInt> {
    BigInt nb = from_u64(n);
    return c2 * nb * nb + c1 * nb + c0;
  };
  return t;
}

TSequence TSequence::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open t-sequence file '" + path + "'");
  std::vector<BigInt> values;
  std::string tok;
  while (f >> tok) {
    std::string cleaned;
    for (char ch : tok)
      if (ch != ',') cleaned.push_back(ch);
    if (cleaned.empty()) continue;
    try {
      values.emplace_back(cleaned);
    } catch (const std::exception&) {
      throw DomainError("bad integer '" + cleaned + "' in " + path);
    }
  }
  return list(std::move(values), "file:" + path);
}

SyndeticReport check_syndetic(const TSequence& t, std::uint64_t N) {
  SyndeticReport r;
  std::vector<BigInt> gaps;
  auto prev = t.at(1);
  if (!prev) return r;
  for (std::uint64_t n = 1; n < N; ++n) {
    auto next = t.at(n + 1);
    if (!next) break;
    if (*next <= *prev)
      throw NotIncreasing(fmt::format("t is not increasing at n = {}: t_n = {}, t_(n+1) = {}", n, prev->get_str(),
                                      next->get_str()));
    gaps.push_back(*next - *prev);
    r.M = std::max(r.M, gaps.back());
    prev = next;
    r.checked = n + 1;
  }
  if (gaps.size() >= 8) {
    // heuristic: gaps never decrease across the last quartile and end larger
    std::size_t start = gaps.size() - gaps.size() / 4;
    bool monotone = true;
    for (std::size_t i = start + 1; i < gaps.size(); ++i)
      if (gaps[i] < gaps[i - 1]) monotone = false;
    r.heuristic_unbounded = monotone && gaps.back() > gaps[start];
  }
  return r;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::HoldsCertified: return "holds_certified";
    case Verdict::FailsCertified: return "fails_certified";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

ConditionReport check_condition(ProfileLimit& limit, const TSequence& t, unsigned K,
                                std::optional<Rational> c_requested, std::string instance_id) {
  ConditionReport rep;
  rep.instance = instance_id.empty() ? limit.engine().name() : instance_id;
  rep.t_description = t.description;
  rep.K = K;
  rep.c_requested = c_requested;
  if (c_requested && sgn(*c_requested) <= 0) throw DomainError("requested c must be positive");
  if (K == 0) {
    rep.verdict = Verdict::HoldsCertified;
    rep.exact = true;
    rep.note = "no levels tested";
    return rep;
  }
  const int b = limit.base();
  const BigInt top_all = ipow(b, K) - 1;
  std::uint64_t terms = 0;
  while (true) {
    auto v = t.at(terms + 1);
    if (!v || *v > top_all) break;
    ++terms;
    if (terms > (1ull << 32)) throw ResourceError("t-sequence range too large");
  }
  rep.syndetic = check_syndetic(t, std::max<std::uint64_t>(terms, 1));

  const OrbitLimit* orbit = limit.orbit();
  rep.exact = orbit != nullptr && orbit->small();
  const auto nmin = static_cast<std::uint64_t>(limit.engine().spec().n_min);
  const Rational threshold = c_requested.value_or(Rational(0));
  bool undecided = false;
  std::optional<Rational> best;

  for (unsigned k = 1; k <= K; ++k) {
    LevelGaps lg;
    lg.k = k;
    const BigInt top = ipow(b, k) - 1;
    Interval Bk = rep.exact ? Interval::point(Rational(ipow(*limit.B(), k)))
                            : power_enclosure(Rational(b), limit.profile().alpha * static_cast<long>(k), 96);
    bool first = true;
    for (std::uint64_t n = 1;; ++n) {
      auto t0 = t.at(n), t1 = t.at(n + 1);
      if (!t0 || !t1 || *t1 > top) break;
      if (sgn(*t0) < 0) throw DomainError("t-sequence must be non-negative");
      ++lg.pairs;
      Interval gap;       // a_s(t1/b^k) - a_s(t0/b^k)
      Interval scaled;    // gap * b^(alpha k)
      if (rep.exact && *t0 >= from_u64(nmin)) {
        auto& e = limit.engine();
        __int128 g = orbit->limit_numerator(e.window(to_u64(*t1))) - orbit->limit_numerator(e.window(to_u64(*t0)));
        Rational sc(from_i128(g), orbit->denominator());
        sc.canonicalize();
        scaled = Interval::point(sc);
        gap = Interval::point(sc / Bk.lo);
      } else if (rep.exact) {
        Rational g = limit.a_s_exact(BAdicPoint(b, *t1, k)) - limit.a_s_exact(BAdicPoint(b, *t0, k));
        gap = Interval::point(g);
        scaled = Interval::point(g * Bk.lo);
      } else {
        Rational eps = Rational(1, 16) / Bk.hi;
        bool decided = false;
        for (int attempt = 0; attempt < 12 && !decided; ++attempt, eps /= 4) {
          CertifiedValue a1 = limit.a_s_certified(BAdicPoint(b, *t1, k), eps);
          CertifiedValue a0 = limit.a_s_certified(BAdicPoint(b, *t0, k), eps);
          gap = a1.interval() - a0.interval();
          scaled = gap * Bk;
          decided = scaled.lo > threshold || scaled.hi <= threshold;
        }
        if (!decided) {
          undecided = true;
          if (rep.note.empty())
            rep.note = fmt::format("InconclusivePrecision at k = {}, n = {}", k, n);
        }
      }
      if (first || scaled.lo < lg.min_gap) lg.min_gap = scaled.lo;
      if (first || scaled.hi > lg.max_gap) lg.max_gap = scaled.hi;
      first = false;
      if (!best || scaled.lo < *best) best = scaled.lo;
      if (!rep.counterexample && scaled.hi <= threshold) rep.counterexample = Counterexample{k, n, *t0, *t1, gap};
    }
    // per-level stats are reported on the b^(alpha k) scale
    rep.levels.push_back(lg);
  }

  if (rep.counterexample) {
    rep.verdict = Verdict::FailsCertified;
  } else if (undecided) {
    rep.verdict = Verdict::Inconclusive;
  } else {
    rep.verdict = Verdict::HoldsCertified;
    if (best) rep.best_c = *best;
    if (rep.syndetic.heuristic_unbounded) {
      rep.verdict = Verdict::Inconclusive;
      rep.note = "t does not look syndetic on the tested range (heuristic)";
    }
  }
  return rep;
}

}  // namespace fraclim
