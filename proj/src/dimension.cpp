#include "fraclim/dimension.hpp"

#include "fraclim/seq/spec.hpp"

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace fraclim {

RhoEnvelope certify_rho_envelope(const seq::SequenceEngine& engine) {
  const auto& spec = engine.spec();
  const int b = spec.base;
  auto fail = [](const std::string& why) { throw VerificationError("envelope not certified: " + why); };
  if (spec.rules.empty() || spec.rules[0].size() != static_cast<std::size_t>(b)) fail("main sequence has no rules");
  std::optional<std::int64_t> B;
  // child values relative to (s(n), s(n+1)) = (0, delta)
  auto child = [&](int i, std::int64_t delta) {
    const seq::Rule& r = spec.rules[0][i];
    std::int64_t v = r.constant;
    for (const auto& t : r.terms) v += t.coef * (t.shift == 1 ? delta : 0);
    return v;
  };
  for (int i = 0; i < b; ++i) {
    const seq::Rule& r = spec.rules[0][i];
    std::int64_t sum = 0;
    for (const auto& t : r.terms) {
      if (t.seq != 0) fail("rule for residue " + std::to_string(i) + " references another sequence");
      if (t.shift > 1) fail("shift above 1 in residue " + std::to_string(i));
      if (i == 0 && t.shift != 0) fail("residue 0 must only use s(n)");
      sum += t.coef;
    }
    if (!B) B = sum;
    if (*B != sum) fail("coefficient sums differ between residues");
  }
  if (*B < 2) fail("coefficient sum below 2");
  const Rational BR(static_cast<long>(*B));
  RhoEnvelope env;
  env.phi0 = Rational(static_cast<long>(spec.rules[0][0].constant)) / (BR - 1);

  // children of state delta: (c_i, c_{i+1}) for i < b, c_b from residue 0 at n+1
  struct Step {
    Rational c;
    int sign;
  };
  auto steps = [&](std::int64_t delta) {
    std::vector<std::int64_t> c(b + 1);
    for (int i = 0; i < b; ++i) c[i] = child(i, delta);
    c[b] = *B * delta + spec.rules[0][0].constant;
    std::vector<Step> out;
    for (int i = 0; i < b; ++i) {
      std::int64_t d = c[i + 1] - c[i];
      if (d != 1 && d != -1) fail("a child difference leaves {-1, +1}");
      out.push_back({Rational(static_cast<long>(c[i])), d > 0 ? 1 : 0});
    }
    return out;
  };
  const std::vector<Step> st[2] = {steps(-1), steps(1)};
  // hull of the attractor from the grid point, then rounded outward
  Interval I[2] = {Interval::point(env.phi0), Interval::point(env.phi0)};
  for (int it = 0; it < 80; ++it) {
    Interval next[2];
    for (int s = 0; s < 2; ++s) {
      bool first = true;
      for (const Step& p : st[s]) {
        Interval img{(p.c + I[p.sign].lo) / BR, (p.c + I[p.sign].hi) / BR};
        next[s] = first ? img : hull(next[s], img);
        first = false;
      }
      next[s] = hull(next[s], Interval::point(env.phi0));
    }
    I[0] = next[0];
    I[1] = next[1];
  }
  for (auto& iv : I) iv = Interval{round_down(iv.lo, 10), round_up(iv.hi, 10)};
  for (int s = 0; s < 2; ++s)
    for (const Step& p : st[s]) {
      Interval img{(p.c + I[p.sign].lo) / BR, (p.c + I[p.sign].hi) / BR};
      if (img.lo < I[s].lo || img.hi > I[s].hi) fail("one-step invariance does not hold");
    }
  env.minus_lo = I[0].lo - env.phi0;
  env.minus_hi = I[0].hi - env.phi0;
  env.plus_lo = I[1].lo - env.phi0;
  env.plus_hi = I[1].hi - env.phi0;
  return env;
}

std::string to_string(BracketMode m) { return m == BracketMode::Envelope ? "envelope" : "truncation"; }

BracketMode parse_bracket_mode(std::string_view text) {
  if (text == "envelope") return BracketMode::Envelope;
  if (text == "truncation") return BracketMode::Truncation;
  throw DomainError("unknown bracket mode '" + std::string(text) + "' (envelope or truncation)");
}

namespace {

struct Offsets {
  // in units of 1 / (den B^L)
  __int128 plus_lo, plus_hi, minus_lo, minus_hi, zero_lo, zero_hi;
};

__int128 to_i128_exact(const Rational& q) {
  if (q.get_den() != 1) throw DomainError("non-integral envelope offset");
  if (!fits_i64(q.get_num())) throw OverflowError("envelope offset too large");
  return to_i64(q.get_num());
}

// grid and enclosure extremes of one column, numerators over den B^L
struct ColumnScan {
  __int128 vmin, vmax, emin, emax;
};

class Scanner {
 public:
  Scanner(Instance& inst, unsigned p, BracketMode mode) : inst_(inst), p_(p) {
    envelope_ = mode == BracketMode::Envelope && inst.has_rho_envelope();
    if (envelope_) {
      RhoEnvelope env = certify_rho_envelope(inst.engine());
      const Rational den(inst.orbit().denominator());
      off_.plus_lo = to_i128_exact(env.plus_lo * den);
      off_.plus_hi = to_i128_exact(env.plus_hi * den);
      off_.minus_lo = to_i128_exact(env.minus_lo * den);
      off_.minus_hi = to_i128_exact(env.minus_hi * den);
      // the cell at 0: truncation of the digit series, a in a(0) + [-1, 3] 2^-L
      off_.zero_lo = to_i128_exact(Rational(-1) * den);
      off_.zero_hi = to_i128_exact(Rational(3) * den);
    }
  }

  bool envelope() const { return envelope_; }

  ColumnScan scan(std::uint64_t k) {
    auto& e = inst_.engine();
    ColumnScan cs{0, 0, 0, 0};
    first_ = true;
    buf_.resize(p_);
    seq::Window w = e.window(k);
    walk(w, 0, cs);
    return cs;
  }

 private:
  void leaf(const seq::Window& w, ColumnScan& cs) {
    const __int128 v = inst_.limit_numerator(w);
    __int128 lo = v, hi = v;
    if (envelope_) {
      auto& e = inst_.engine();
      if (w.index == 0) {
        lo += off_.zero_lo;
        hi += off_.zero_hi;
      } else {
        const std::int64_t d = e.at(w, 0, 1) - e.at(w, 0, 0);
        if (d == 1) {
          lo += off_.plus_lo;
          hi += off_.plus_hi;
        } else if (d == -1) {
          lo += off_.minus_lo;
          hi += off_.minus_hi;
        } else {
          throw VerificationError(fmt::format("difference {} at index {} outside the envelope cases", d, w.index));
        }
      }
    }
    if (first_) {
      cs = ColumnScan{v, v, lo, hi};
      first_ = false;
      return;
    }
    cs.vmin = std::min(cs.vmin, v);
    cs.vmax = std::max(cs.vmax, v);
    cs.emin = std::min(cs.emin, lo);
    cs.emax = std::max(cs.emax, hi);
  }

  void walk(const seq::Window& w, unsigned depth, ColumnScan& cs) {
    if (depth == p_) {
      leaf(w, cs);
      return;
    }
    auto& e = inst_.engine();
    for (int i = 0; i < e.base(); ++i) {
      e.child(w, i, buf_[depth]);
      walk(buf_[depth], depth + 1, cs);
    }
  }

  Instance& inst_;
  unsigned p_;
  bool envelope_ = false;
  bool first_ = true;
  Offsets off_{};
  std::vector<seq::Window> buf_;
};

// columns [first, last] at level n for u, v
std::pair<std::uint64_t, std::uint64_t> column_range(const BAdicPoint& u, const BAdicPoint& v, unsigned n) {
  if (u.base() != v.base()) throw DomainError("interval endpoints in different bases");
  if (u.value() >= v.value()) throw DomainError("empty interval " + u.str() + ":" + v.str());
  if (sgn(u.numerator()) < 0 || v.value() > 1) throw DomainError("interval must lie in [0, 1]");
  if (u.depth() > n || v.depth() > n)
    throw DomainError(fmt::format("interval endpoints are not b-adic at level {}", n));
  BigInt a = u.scaled_numerator(n), c = v.scaled_numerator(n);
  return {to_u64(a), to_u64(c) - 1};
}

}  // namespace

Osc column_osc(Instance& inst, const BAdicInterval& column, unsigned p, BracketMode mode) {
  if (column.base() != inst.base()) throw DomainError("column base differs from the instance base");
  if (!fits_u64(column.index())) throw OverflowError("column index beyond 64 bits");
  check_cells(inst.base(), static_cast<int>(p), "grid points in one column");
  Scanner sc(inst, p, mode);
  ColumnScan cs = sc.scan(to_u64(column.index()));
  const unsigned L = column.level() + p;
  const Rational unit = 1 / (Rational(inst.orbit().denominator()) * Rational(ipow(inst.B(), L)));
  Osc o;
  o.lower = Rational(from_i128(cs.vmax - cs.vmin)) * unit;
  if (sc.envelope())
    o.upper = Rational(from_i128(cs.emax - cs.emin)) * unit;
  else
    o.upper = o.lower + 2 * inst.half_height(L);
  o.lower.canonicalize();
  o.upper.canonicalize();
  return o;
}

BoxCountRow box_count(Instance& inst, const BAdicPoint& u, const BAdicPoint& v, unsigned n, unsigned p,
                      BracketMode mode) {
  if (u.base() != inst.base()) throw DomainError("interval base differs from the instance base");
  auto [first, last] = column_range(u, v, n);
  const std::uint64_t columns = last - first + 1;
  BigInt cells = from_u64(columns) * ipow(inst.base(), p);
  if (!fits_u64(cells)) throw ResourceError("grid beyond 64 bits");
  check_cells(to_u64(cells), fmt::format("grid points for level {} with oversample {}", n, p));

  Scanner sc(inst, p, mode);
  const unsigned L = n + p;
  // boxes = floor(O b^n / (den B^L)) + 1
  const BigInt scale_den = inst.orbit().denominator() * ipow(inst.B(), L);
  const BigInt bn = ipow(inst.base(), n);
  // truncation slack 2 h(L) in numerator units, as P / Q
  Rational extra = 2 * inst.half_height(L) * Rational(scale_den);
  extra.canonicalize();
  BoxCountRow row;
  row.level = n;
  row.delta = rpow(Rational(inst.base()), -static_cast<long>(n));
  row.count_lower = 0;
  row.count_upper = 0;
  for (std::uint64_t k = first; k <= last; ++k) {
    ColumnScan cs = sc.scan(k);
    BigInt ol = from_i128(cs.vmax - cs.vmin);
    row.count_lower += floor_div(ol * bn, scale_den) + 1;
    if (sc.envelope()) {
      row.count_upper += floor_div(from_i128(cs.emax - cs.emin) * bn, scale_den) + 1;
    } else {
      row.count_upper += floor_of((Rational(ol) + extra) * Rational(bn) / Rational(scale_den)) + 1;
    }
  }
  return row;
}

BoxCountTable box_count_table(Instance& inst, const BAdicPoint& u, const BAdicPoint& v, unsigned n_lo,
                              unsigned n_hi, unsigned p, BracketMode mode) {
  if (n_lo > n_hi) throw DomainError("empty level range");
  BoxCountTable t;
  t.instance = inst.id();
  t.u = u;
  t.v = v;
  t.oversample = p;
  t.mode = (mode == BracketMode::Envelope && inst.has_rho_envelope()) ? BracketMode::Envelope : BracketMode::Truncation;
  for (unsigned n = n_lo; n <= n_hi; ++n) t.rows.push_back(box_count(inst, u, v, n, p, mode));
  return t;
}

namespace {

double log_big(const BigInt& v) {
  long e = 0;
  double m = mpz_get_d_2exp(&e, v.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

}  // namespace

SlopeFit fit_dimension(const BoxCountTable& table, unsigned level_lo, unsigned level_hi) {
  std::vector<double> xs, ys;
  SlopeFit fit;
  for (const auto& r : table.rows) {
    if (r.level < level_lo || r.level > level_hi) continue;
    if (sgn(r.count_lower) <= 0 || r.count_upper < r.count_lower)
      throw DomainError(fmt::format("bad counts at level {}", r.level));
    xs.push_back(-std::log(to_double(r.delta)));
    ys.push_back((log_big(r.count_lower) + log_big(r.count_upper)) / 2);
    fit.levels.push_back(r.level);
  }
  if (xs.size() < 3) throw InsufficientRows(fmt::format("slope fit needs at least 3 rows, got {}", xs.size()));
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    fit.residuals.push_back(r);
    ss += r * r;
  }
  fit.stderr_ = std::sqrt(ss / (n - 2) / sxx);
  return fit;
}

void write_csv(const BoxCountTable& t, std::ostream& out) {
  out << "# instance=" << t.instance << "\n";
  out << "# interval=" << t.u.str() << ":" << t.v.str() << "\n";
  out << "# oversample=" << t.oversample << "\n";
  out << "# bracket=" << to_string(t.mode) << "\n";
  if (!t.provenance.empty()) {
    std::istringstream lines(t.provenance);
    std::string line;
    while (std::getline(lines, line))
      if (!line.empty()) out << "# " << line << "\n";
  }
  out << "level,delta,count_lower,count_upper\n";
  for (const auto& r : t.rows)
    out << r.level << "," << to_string(r.delta) << "," << r.count_lower.get_str() << "," << r.count_upper.get_str()
        << "\n";
}

BoxCountTable read_csv(std::istream& in) {
  BoxCountTable t;
  std::string line;
  bool header = false;
  int lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      char ch = s[i];
      if (quoted) {
        if (ch == '"' && i + 1 < s.size() && s[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          cur.push_back(ch);
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        f.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    f.push_back(cur);
    return f;
  };
  std::string prov;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string kv = line.substr(1);
      while (!kv.empty() && kv.front() == ' ') kv.erase(kv.begin());
      auto eq = kv.find('=');
      if (eq != std::string::npos) {
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "instance") {
          t.instance = val;
        } else if (key == "oversample") {
          t.oversample = static_cast<unsigned>(std::stoul(val));
        } else if (key == "bracket") {
          t.mode = parse_bracket_mode(val);
        } else if (key == "interval") {
          auto colon = val.find(':');
          if (colon != std::string::npos) {
            t.u = parse_badic(val.substr(0, colon));
            t.v = parse_badic(val.substr(colon + 1));
          }
        } else {
          prov += kv + "\n";
        }
      }
      continue;
    }
    auto f = split(line);
    if (!header) {
      if (f.size() < 4 || f[0] != "level" || f[1] != "delta" || f[2] != "count_lower" || f[3] != "count_upper")
        throw DomainError(fmt::format("line {}: expected header level,delta,count_lower,count_upper", lineno));
      header = true;
      continue;
    }
    if (f.size() < 4) throw DomainError(fmt::format("line {}: expected 4 fields", lineno));
    try {
      BoxCountRow r;
      r.level = static_cast<unsigned>(std::stoul(f[0]));
      r.delta = parse_rational(f[1]);
      r.count_lower = BigInt(f[2]);
      r.count_upper = BigInt(f[3]);
      t.rows.push_back(r);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw DomainError(fmt::format("line {}: malformed row", lineno));
    }
  }
  if (!header) throw DomainError("missing CSV header");
  t.provenance = prov;
  return t;
}

}  // namespace fraclim
