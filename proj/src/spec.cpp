#include "fraclim/seq/spec.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

namespace fraclim::seq {

std::size_t RecurrenceSpec::index_of(std::string_view seq_name) const {
  auto it = std::find(sequences.begin(), sequences.end(), seq_name);
  return it == sequences.end() ? std::string::npos : static_cast<std::size_t>(it - sequences.begin());
}

std::int64_t RecurrenceSpec::max_shift() const {
  std::int64_t m = 0;
  for (const auto& per_seq : rules)
    for (const auto& r : per_seq)
      for (const auto& t : r.terms) m = std::max(m, t.shift);
  return m;
}

namespace {

enum class Tok { Ident, Int, LParen, RParen, Eq, Plus, Minus, Star, End };

struct Token {
  Tok kind;
  std::string text;
  int column;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Eq: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::End: return "end of line";
  }
  return "?";
}

struct RawTerm {
  std::string seq;  // empty for a constant
  BigInt coef;
  std::int64_t shift = 0;
};

struct RawRule {
  std::string seq;
  int mult = 0;
  std::int64_t residue = 0;
  std::vector<RawTerm> terms;
  int line = 0;
};

class LineParser {
 public:
  LineParser(std::string_view line, int lineno, std::string_view origin)
      : lineno_(lineno), origin_(origin) {
    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      int col = static_cast<int>(i) + 1;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
        toks_.push_back({Tok::Int, std::string(line.substr(i, j - i)), col});
        i = j;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
        toks_.push_back({Tok::Ident, std::string(line.substr(i, j - i)), col});
        i = j;
      } else {
        Tok k;
        switch (c) {
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          case '=': k = Tok::Eq; break;
          case '+': k = Tok::Plus; break;
          case '-': k = Tok::Minus; break;
          case '*': k = Tok::Star; break;
          default:
            fail(col, fmt::format("unexpected character '{}'", c));
        }
        toks_.push_back({k, std::string(1, c), col});
        ++i;
      }
    }
    toks_.push_back({Tok::End, "", static_cast<int>(line.size()) + 1});
  }

  [[noreturn]] void fail(int col, const std::string& msg) const {
    throw SpecError(SpecErrorKind::Syntax, fmt::format("{}:{}:{}: syntax error: {}", origin_, lineno_, col, msg),
                    lineno_, col);
  }

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }

  Token expect(Tok k, const char* what = nullptr) {
    const Token& t = peek();
    if (t.kind != k) {
      std::string got = t.kind == Tok::End ? "end of line" : "'" + t.text + "'";
      fail(t.column, fmt::format("expected {}, got {}", what ? what : tok_name(k), got));
    }
    return toks_[pos_++];
  }

  void expect_word(std::string_view w) {
    const Token& t = peek();
    if (!(t.kind == Tok::Ident && t.text == w)) {
      std::string got = t.kind == Tok::End ? "end of line" : "'" + t.text + "'";
      fail(t.column, fmt::format("expected '{}', got {}", w, got));
    }
    ++pos_;
  }

  std::int64_t expect_small_int(const char* what) {
    Token t = expect(Tok::Int, what);
    BigInt v(t.text);
    if (!fits_i64(v) || v > BigInt(1L << 40)) fail(t.column, std::string(what) + " is too large");
    return to_i64(v);
  }

  void expect_end() { expect(Tok::End); }

  // '(' 'n' [('+'|'-') INT] ')'  -> shift
  std::int64_t call_argument() {
    expect(Tok::LParen);
    expect_word("n");
    std::int64_t shift = 0;
    if (at(Tok::Plus)) {
      ++pos_;
      shift = expect_small_int("shift");
    } else if (at(Tok::Minus)) {
      int col = peek().column;
      ++pos_;
      expect_small_int("shift");
      fail(col, "shifts must be non-negative (write n+<INT>)");
    }
    expect(Tok::RParen);
    return shift;
  }

  std::vector<RawTerm> expression() {
    std::vector<RawTerm> out;
    int sign = 1;
    if (at(Tok::Minus)) {
      sign = -1;
      ++pos_;
    } else if (at(Tok::Plus)) {
      ++pos_;
    }
    while (true) {
      RawTerm term;
      if (at(Tok::Int)) {
        Token t = expect(Tok::Int);
        term.coef = BigInt(t.text) * sign;
        if (at(Tok::Star)) {
          ++pos_;
          Token id = expect(Tok::Ident, "sequence name");
          if (id.text == "n") fail(id.column, "polynomial coefficients are not supported");
          term.seq = id.text;
          term.shift = call_argument();
        }
      } else if (at(Tok::Ident)) {
        Token id = expect(Tok::Ident);
        if (id.text == "n") fail(id.column, "polynomial terms are not supported");
        term.seq = id.text;
        term.coef = sign;
        term.shift = call_argument();
      } else {
        const Token& t = peek();
        fail(t.column, fmt::format("expected term, got {}", t.kind == Tok::End ? "end of line" : "'" + t.text + "'"));
      }
      out.push_back(std::move(term));
      if (at(Tok::Plus)) {
        sign = 1;
      } else if (at(Tok::Minus)) {
        sign = -1;
      } else {
        break;
      }
      ++pos_;
    }
    expect_end();
    return out;
  }

  int lineno_;
  std::string_view origin_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::int64_t checked_coef(const BigInt& v, int line, std::string_view origin) {
  if (!fits_i64(v) || abs(v) > BigInt(1L << 40))
    throw SpecError(SpecErrorKind::Syntax, fmt::format("{}:{}: coefficient {} is too large", origin, line, v.get_str()),
                    line, 0);
  return to_i64(v);
}

}  // namespace

RecurrenceSpec parse_spec(std::string_view text, std::string_view origin) {
  RecurrenceSpec spec;
  spec.source = std::string(text);
  std::optional<std::int64_t> base, nmin;
  std::optional<std::string> name;
  int base_line = 0;
  std::vector<std::pair<std::string, std::pair<std::int64_t, BigInt>>> raw_inits;
  std::vector<int> init_lines;
  std::vector<RawRule> raw_rules;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    LineParser p(line, lineno, origin);
    if (p.at(Tok::End)) continue;
    Token kw = p.expect(Tok::Ident, "keyword (base, name, nmin, init, rule)");
    if (kw.text == "base") {
      if (base) p.fail(kw.column, "duplicate 'base'");
      base = p.expect_small_int("base");
      base_line = lineno;
      p.expect_end();
      if (*base < 2 || *base > 64)
        throw SpecError(SpecErrorKind::Header, fmt::format("{}:{}: base must be in [2, 64]", origin, lineno), lineno, 1);
    } else if (kw.text == "name") {
      if (name) p.fail(kw.column, "duplicate 'name'");
      name = p.expect(Tok::Ident, "sequence name").text;
      p.expect_end();
    } else if (kw.text == "nmin") {
      if (nmin) p.fail(kw.column, "duplicate 'nmin'");
      nmin = p.expect_small_int("nmin");
      p.expect_end();
      if (*nmin < 1)
        throw SpecError(SpecErrorKind::Header, fmt::format("{}:{}: nmin must be >= 1", origin, lineno), lineno, 1);
    } else if (kw.text == "init") {
      std::string seq = p.expect(Tok::Ident, "sequence name").text;
      p.expect(Tok::LParen);
      std::int64_t idx = p.expect_small_int("index");
      p.expect(Tok::RParen);
      p.expect(Tok::Eq);
      int sign = 1;
      if (p.at(Tok::Minus)) {
        sign = -1;
        ++p.pos_;
      }
      BigInt v(p.expect(Tok::Int, "integer value").text);
      p.expect_end();
      raw_inits.push_back({seq, {idx, v * sign}});
      init_lines.push_back(lineno);
    } else if (kw.text == "rule") {
      if (!base) p.fail(kw.column, "'base' must precede rules");
      RawRule r;
      r.line = lineno;
      r.seq = p.expect(Tok::Ident, "sequence name").text;
      p.expect(Tok::LParen);
      Token mult = p.expect(Tok::Int, "base multiplier");
      r.mult = static_cast<int>(std::stol(mult.text.size() > 6 ? "0" : mult.text));
      if (r.mult != *base) p.fail(mult.column, fmt::format("multiplier must equal the base {}", *base));
      if (p.at(Tok::Star)) ++p.pos_;
      p.expect_word("n");
      if (p.at(Tok::Plus)) {
        ++p.pos_;
        Token res = p.expect(Tok::Int, "residue");
        r.residue = res.text.size() > 6 ? *base : std::stol(res.text);
        if (r.residue >= *base) p.fail(res.column, fmt::format("residue must be below the base {}", *base));
      }
      p.expect(Tok::RParen);
      p.expect(Tok::Eq);
      r.terms = p.expression();
      raw_rules.push_back(std::move(r));
    } else {
      p.fail(kw.column, fmt::format("unknown keyword '{}'", kw.text));
    }
  }

  if (!base) throw SpecError(SpecErrorKind::Header, fmt::format("{}: missing 'base'", origin));
  if (!name) throw SpecError(SpecErrorKind::Header, fmt::format("{}: missing 'name'", origin));
  spec.base = static_cast<int>(*base);
  spec.name = *name;
  spec.n_min = nmin.value_or(1);
  const int b = spec.base;

  // sequence table: main first, then first appearance
  auto add_seq = [&](const std::string& s) {
    if (spec.index_of(s) == std::string::npos) spec.sequences.push_back(s);
  };
  add_seq(spec.name);
  for (const auto& r : raw_rules) {
    add_seq(r.seq);
    for (const auto& t : r.terms)
      if (!t.seq.empty()) add_seq(t.seq);
  }
  for (const auto& [s, v] : raw_inits) add_seq(s);
  const std::size_t S = spec.sequences.size();
  spec.initials.assign(S, {});
  spec.rules.assign(S, std::vector<Rule>(static_cast<std::size_t>(b)));
  std::vector<std::vector<bool>> have(S, std::vector<bool>(static_cast<std::size_t>(b), false));

  for (std::size_t i = 0; i < raw_inits.size(); ++i) {
    const auto& [s, v] = raw_inits[i];
    auto& table = spec.initials[spec.index_of(s)];
    if (table.count(v.first))
      throw SpecError(SpecErrorKind::Header,
                      fmt::format("{}:{}: duplicate initial value {}({})", origin, init_lines[i], s, v.first),
                      init_lines[i], 1);
    table[v.first] = v.second;
  }

  for (const auto& r : raw_rules) {
    std::size_t si = spec.index_of(r.seq);
    auto res = static_cast<std::size_t>(r.residue);
    if (have[si][res]) {
      SpecError e(SpecErrorKind::DuplicateResidue,
                  fmt::format("{}:{}: second rule for {}({}n+{})", origin, r.line, r.seq, b, r.residue), r.line, 1);
      e.detail = r.residue;
      e.sequence = r.seq;
      throw e;
    }
    have[si][res] = true;
    Rule rule;
    rule.seq = si;
    rule.residue = r.residue;
    rule.line = r.line;
    BigInt constant = 0;
    for (const auto& t : r.terms) {
      if (t.seq.empty()) {
        constant += t.coef;
      } else {
        rule.terms.push_back({spec.index_of(t.seq), checked_coef(t.coef, r.line, origin), t.shift});
      }
    }
    rule.constant = checked_coef(constant, r.line, origin);
    spec.rules[si][res] = std::move(rule);
  }

  // every sequence reachable from the main one needs a full set of rules
  std::vector<bool> live(S, false);
  std::vector<std::size_t> stack{0};
  live[0] = true;
  for (std::size_t s = 1; s < S; ++s) {
    if (std::find(have[s].begin(), have[s].end(), true) != have[s].end()) {
      live[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    std::size_t s = stack.back();
    stack.pop_back();
    for (int i = 0; i < b; ++i) {
      if (!have[s][static_cast<std::size_t>(i)]) {
        SpecError e(SpecErrorKind::MissingResidue,
                    fmt::format("{}: no rule for {}({}n+{}) (missing residue {})", origin, spec.sequences[s], b, i, i),
                    base_line, 0);
        e.detail = i;
        e.sequence = spec.sequences[s];
        throw e;
      }
      for (const auto& t : spec.rules[s][static_cast<std::size_t>(i)].terms) {
        if (!live[t.seq]) {
          live[t.seq] = true;
          stack.push_back(t.seq);
        }
      }
    }
  }

  // well-foundedness: n + shift < b*n + i for all n >= n_min
  for (std::size_t s = 0; s < S; ++s) {
    if (!live[s]) continue;
    for (const auto& r : spec.rules[s]) {
      for (const auto& t : r.terms) {
        if (t.shift >= (b - 1) * spec.n_min + r.residue) {
          SpecError e(SpecErrorKind::NonWellFounded,
                      fmt::format("{}:{}: rule {}({}n+{}) refers to {}(n+{}), which is not smaller for n = {} "
                                  "(need shift < {})",
                                  origin, r.line, spec.sequences[s], b, r.residue, spec.sequences[t.seq], t.shift,
                                  spec.n_min, (b - 1) * spec.n_min + r.residue),
                      r.line, 0);
          e.detail = t.shift;
          e.sequence = spec.sequences[s];
          throw e;
        }
      }
    }
  }

  // closure: indices below b*n_min are only reachable through initials
  const std::int64_t top = b * spec.n_min;
  auto require = [&](std::size_t s, std::int64_t idx) {
    if (!spec.initials[s].count(idx)) {
      SpecError e(SpecErrorKind::MissingInitial,
                  fmt::format("{}: missing initial value {}({})", origin, spec.sequences[s], idx), 0, 0);
      e.detail = idx;
      e.sequence = spec.sequences[s];
      throw e;
    }
  };
  for (std::int64_t idx = 0; idx < top; ++idx) require(0, idx);
  for (std::size_t s = 0; s < S; ++s) {
    if (!live[s]) continue;
    for (const auto& r : spec.rules[s])
      for (const auto& t : r.terms)
        for (std::int64_t idx = spec.n_min + t.shift; idx < top; ++idx) require(t.seq, idx);
  }
  return spec;
}

RecurrenceSpec load_spec(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_spec(ss.str(), path);
}

std::string spec_hash(const RecurrenceSpec& spec) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : spec.source) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

std::string format_spec(const RecurrenceSpec& spec) {
  std::string out = fmt::format("base {}\nname {}\nnmin {}\n", spec.base, spec.name, spec.n_min);
  for (std::size_t s = 0; s < spec.sequences.size(); ++s)
    for (const auto& [idx, v] : spec.initials[s]) out += fmt::format("init {}({}) = {}\n", spec.sequences[s], idx, v.get_str());
  for (std::size_t s = 0; s < spec.sequences.size(); ++s) {
    for (const auto& r : spec.rules[s]) {
      if (r.line == 0 && r.terms.empty() && r.constant == 0) continue;
      std::string rhs;
      for (const auto& t : r.terms) {
        std::string coef = t.coef == 1 ? "" : t.coef == -1 ? "-" : fmt::format("{}*", t.coef);
        std::string arg = t.shift ? fmt::format("n+{}", t.shift) : "n";
        std::string piece = fmt::format("{}{}({})", coef, spec.sequences[t.seq], arg);
        if (rhs.empty()) rhs = piece;
        else if (piece[0] == '-') rhs += " - " + piece.substr(1);
        else rhs += " + " + piece;
      }
      if (r.constant != 0 || rhs.empty()) {
        if (rhs.empty()) rhs = std::to_string(r.constant);
        else rhs += r.constant < 0 ? fmt::format(" - {}", -r.constant) : fmt::format(" + {}", r.constant);
      }
      out += fmt::format("rule {}({}n+{}) = {}\n", spec.sequences[s], spec.base, r.residue, rhs);
    }
  }
  return out;
}

}  // namespace fraclim::seq
