#include "cli.hpp"

#include "fraclim/covers.hpp"
#include "fraclim/dimension.hpp"
#include "fraclim/limit/rho.hpp"
#include "fraclim/measure.hpp"
#include "fraclim/quasilinear.hpp"
#include "fraclim/seq/builtins.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace fraclim::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "fraclim 0.3.0";

struct Range {
  unsigned lo = 0, hi = 0;
};

Range parse_range(const std::string& text) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      unsigned v = static_cast<unsigned>(std::stoul(text));
      return {v, v};
    }
    Range r{static_cast<unsigned>(std::stoul(text.substr(0, dots))),
            static_cast<unsigned>(std::stoul(text.substr(dots + 2)))};
    if (r.lo > r.hi) throw DomainError("empty range '" + text + "'");
    return r;
  } catch (const std::logic_error&) {
    throw DomainError("bad range '" + text + "' (expected a..b)");
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string decimal(double v) { return fmt::format("{:.17g}", v); }

json rational_json(const Rational& q) { return to_string(q); }

// an instance by builtin id, or a spec file with declared exponents
struct InstanceOpts {
  std::string id;
  std::string spec;
  std::string alpha;
  std::string beta = "0";
  std::uint64_t verify_n = 100000;

  void add(CLI::App* app, const std::string& default_id) {
    id = default_id;
    app->add_option("--instance", id, "rho, tm_sum, rs_sum, tm_double_sum, zero")->capture_default_str();
    app->add_option("--spec", spec, "recurrence file (.seq) instead of a builtin");
    app->add_option("--alpha", alpha, "alpha for --spec");
    app->add_option("--beta", beta, "beta for --spec")->capture_default_str();
    app->add_option("--verify-n", verify_n, "range on which C is verified")->capture_default_str();
  }

  Instance make() const {
    if (spec.empty()) return Instance::builtin(id, verify_n);
    if (alpha.empty()) throw DomainError("--spec needs --alpha");
    auto engine = std::make_shared<seq::SequenceEngine>(seq::load_spec(spec));
    QLVerification v =
        verify_quasilinear(*engine, engine->base(), parse_rational(alpha), parse_rational(beta), verify_n);
    return Instance::profile(engine->name(), engine, v.profile);
  }

  std::string hash() const {
    if (spec.empty()) return seq::spec_hash(seq::builtin_spec(id == "rho" ? "rho" : id));
    return seq::spec_hash(seq::load_spec(spec));
  }
};

// a spec file or a builtin name
struct EngineOpts {
  std::string spec;
  std::string builtin;

  void add(CLI::App* app) {
    app->add_option("--spec", spec, "recurrence file (.seq)");
    app->add_option("--builtin", builtin, "builtin sequence name");
  }

  seq::RecurrenceSpec load() const {
    if (!spec.empty()) return seq::load_spec(spec);
    if (!builtin.empty()) return seq::builtin_spec(builtin);
    throw DomainError("give --spec PATH or --builtin NAME");
  }
};

void write_provenance(std::ostream& o, const std::vector<std::pair<std::string, std::string>>& kv) {
  o << "# " << kVersion << "\n";
  for (const auto& [k, v] : kv) o << "# " << k << "=" << v << "\n";
}

std::ostream& open_out(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path, std::ios::binary);
  if (!file) throw IoError("cannot write '" + path + "'");
  return file;
}

Rational parse_eps(const std::string& s) {
  Rational e = parse_rational(s);
  if (sgn(e) <= 0) throw DomainError("eps must be positive");
  return e;
}

json certified_json(const BAdicPoint& x, const CertifiedValue& v) {
  return json{{"x", x.str()},
              {"mid", rational_json(v.mid)},
              {"radius", rational_json(v.radius)},
              {"mid_decimal", to_double(v.mid)},
              {"radius_decimal", upper_double(v.radius)},
              {"exact", v.exact},
              {"n_used", v.n_used}};
}

json rect_json(const Rect& r) {
  return json{{"column", r.column.str()}, {"bottom", rational_json(r.bottom())}, {"top", rational_json(r.top())}};
}

// verify-all suites --------------------------------------------------------

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

SuiteResult suite_nesting(Range levels, std::optional<Rational> tamper, std::uint64_t verify_n) {
  SuiteResult r{"nesting", true, ""};
  Instance rho = Instance::rho();
  Instance tm = Instance::builtin("tm_sum", verify_n);
  if (tamper) tm.set_height_factor(*tamper * tm.profile().c_tail());
  std::uint64_t checked = 0;
  for (Instance* in : {&rho, &tm}) {
    RectFamily parent = build_family(*in, levels.lo);
    for (unsigned n = levels.lo; n <= levels.hi; ++n) {
      RectFamily child = build_family(*in, n + 1);
      NestingReport rep = verify_nesting(parent, child);
      checked += rep.checked;
      if (!rep.pass()) {
        const auto& v = *rep.violation;
        r.pass = false;
        r.detail = fmt::format("{} {} level {}: child (k={}, i={}) {} not inside {}", in->id(), to_string(in->kind()),
                               n, v.k, v.i, v.child.str(), v.parent.str());
        return r;
      }
      parent = std::move(child);
    }
  }
  r.detail = fmt::format("{} child rectangles checked, F on rho and E on tm_sum (D4*C = {}), levels {}..{}", checked,
                         to_string(tm.height_factor()), levels.lo, levels.hi);
  return r;
}

SuiteResult suite_graph(Range levels, std::uint64_t verify_n) {
  SuiteResult r{"graph", true, ""};
  Instance rho = Instance::rho();
  Instance tm = Instance::builtin("tm_sum", verify_n);
  std::uint64_t checked = 0;
  for (Instance* in : {&rho, &tm}) {
    for (unsigned n = levels.lo; n <= levels.hi; ++n) {
      GraphReport rep = verify_graph(*in, build_family(*in, n));
      checked += rep.checked;
      if (!rep.pass()) {
        r.pass = false;
        r.detail = fmt::format("{} level {}: value {} at {} outside {}", in->id(), n, to_string(rep.violation->value),
                               rep.violation->x.str(), rep.violation->rect.str());
        return r;
      }
    }
  }
  r.detail = fmt::format("{} endpoint values inside their rectangles", checked);
  return r;
}

SuiteResult suite_truncation(std::uint64_t samples, std::uint64_t seed) {
  SuiteResult r{"truncation", true, ""};
  RhoLimit rho;
  std::mt19937_64 rng(seed);
  for (std::uint64_t s = 0; s < samples; ++s) {
    unsigned depth = 1 + static_cast<unsigned>(rng() % 20);
    BigInt top = ipow(4, depth);
    // 64 random bits reduced into [0, 4^depth]
    BigInt z = from_u64(rng()) % (top + 1);
    BAdicPoint x(4, z, depth);
    Rational a = rho.a_exact(x);
    std::vector<Rational> f = rho.partial_sums(x, 20);
    for (unsigned n = 1; n <= 20; ++n) {
      Rational bound = rpow(Rational(2), 1 - static_cast<long>(n));
      if (abs(a - f[n - 1]) > bound) {
        r.pass = false;
        r.detail = fmt::format("|a - f_{}| = {} > {} at x = {}", n, to_string(abs(a - f[n - 1])), to_string(bound),
                               x.str());
        return r;
      }
    }
  }
  r.detail = fmt::format("{} random 4-adic points, n = 1..20", samples);
  return r;
}

// a((z+1)/4^k) - a(z/4^k) = Delta rho(z) 2^-k, minus 1 for the jump at x = 1
SuiteResult suite_increment(Range levels) {
  SuiteResult r{"increment", true, ""};
  RhoLimit rho;
  std::uint64_t checked = 0;
  const unsigned hi = std::min(levels.hi, 8u);
  for (unsigned k = std::max(levels.lo, 1u); k <= hi; ++k) {
    const std::uint64_t top = to_u64(ipow(4, k));
    Rational unit = rpow(Rational(2), -static_cast<long>(k));
    Rational prev = rho.a_exact(BAdicPoint(4, 1, k));
    for (std::uint64_t z = 1; z < top; ++z) {
      Rational next = rho.a_exact(BAdicPoint(4, from_u64(z + 1), k));
      Rational want = Rational(rho.engine().delta(from_u64(z))) * unit - (z + 1 == top ? 1 : 0);
      ++checked;
      if (next - prev != want) {
        r.pass = false;
        r.detail = fmt::format("k = {}, z = {}: increment {} != {}", k, z, to_string(next - prev), to_string(want));
        return r;
      }
      prev = next;
    }
  }
  r.detail = fmt::format("{} increments equal Delta rho(z) 2^-k (and 2^-k - 1 at z = 4^k - 1)", checked);
  return r;
}

SuiteResult suite_mdp(std::uint64_t samples, std::uint64_t seed) {
  SuiteResult r{"mdp", true, ""};
  Instance rho = Instance::rho();
  CoverMeasure mu(rho, 2, 5);
  MdpReport rep = mdp_scan(mu, Rational(3, 2), 3, 10, samples, seed);
  const double bound = 1024.0;
  r.pass = rep.max_ratio <= bound;
  r.detail = fmt::format("sampled max mu(S)/side^(3/2) = {:.6g} (bound 4^5 = 1024), {} samples, seed {}",
                         rep.max_ratio, samples, seed);
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-linear sequences: limit functions, covers, measures and box dimension", "fraclim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // seq
  auto* seq_cmd = app.add_subcommand("seq", "recurrence specs")->require_subcommand(1);
  EngineOpts se_opts;
  std::string se_n = "0..15", se_format = "csv";
  std::string se_seq;
  auto* seq_eval = seq_cmd->add_subcommand("eval", "evaluate a sequence on a range of indices");
  se_opts.add(seq_eval);
  seq_eval->add_option("--n", se_n, "index or range a..b")->capture_default_str();
  seq_eval->add_option("--seq", se_seq, "sequence of the system (default: the main one)");
  seq_eval->add_option("--format", se_format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  EngineOpts sc_opts;
  auto* seq_check = seq_cmd->add_subcommand("check", "parse and validate a spec");
  sc_opts.add(seq_check);

  // limit
  auto* limit_cmd = app.add_subcommand("limit", "limit functions")->require_subcommand(1);
  auto* limit_eval = limit_cmd->add_subcommand("eval", "a, a_s or lambda at a b-adic point");
  InstanceOpts le_inst;
  le_inst.add(limit_eval, "rho");
  std::string le_x, le_eps = "2^-30", le_what = "a", le_method = "auto";
  limit_eval->add_option("--x", le_x, "point p/b^n")->required();
  limit_eval->add_option("--eps", le_eps, "radius bound")->capture_default_str();
  limit_eval->add_option("--what", le_what, "a or lambda")->check(CLI::IsMember({"a", "lambda"}))->capture_default_str();
  limit_eval->add_option("--method", le_method, "auto, exact or certified")
      ->check(CLI::IsMember({"auto", "exact", "certified"}))
      ->capture_default_str();

  // covers
  auto* covers_cmd = app.add_subcommand("covers", "rectangle covers")->require_subcommand(1);
  auto* covers_verify = covers_cmd->add_subcommand("verify", "nesting of consecutive families");
  InstanceOpts cv_inst;
  cv_inst.add(covers_verify, "");
  std::string cv_kind = "F", cv_levels = "1..8", cv_factor;
  bool cv_graph = false;
  covers_verify->add_option("--kind", cv_kind, "F (rho) or E (profile)")->capture_default_str();
  covers_verify->add_option("--levels", cv_levels, "parent levels a..b")->capture_default_str();
  covers_verify->add_option("--factor", cv_factor, "override the half-height factor (D4*C for E)");
  covers_verify->add_flag("--graph", cv_graph, "also check graph containment");

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "mass distribution")->require_subcommand(1);
  auto* measure_mdp = measure_cmd->add_subcommand("mdp", "sampled mass distribution scan");
  InstanceOpts md_inst;
  md_inst.add(measure_mdp, "rho");
  std::string md_t = "1.5", md_levels = "3..10";
  std::uint64_t md_samples = 10000, md_seed = 42;
  unsigned md_n0 = 2;
  std::optional<std::uint64_t> md_k0;
  measure_mdp->add_option("--t", md_t, "exponent")->capture_default_str();
  measure_mdp->add_option("--levels", md_levels, "square levels a..b")->capture_default_str();
  measure_mdp->add_option("--samples", md_samples)->capture_default_str();
  measure_mdp->add_option("--seed", md_seed)->capture_default_str();
  measure_mdp->add_option("--n0", md_n0, "root level")->capture_default_str();
  measure_mdp->add_option("--k0", md_k0, "root index (default floor(5 b^n0 / 16))");

  // dim
  auto* dim_cmd = app.add_subcommand("dim", "box counting")->require_subcommand(1);
  auto* dim_box = dim_cmd->add_subcommand("box", "lower/upper box counts per level");
  InstanceOpts db_inst;
  db_inst.add(dim_box, "rho");
  std::string db_interval = "1/4:1/2", db_levels = "4..10", db_out, db_bracket = "envelope";
  unsigned db_p = 3;
  dim_box->add_option("--interval", db_interval, "u:v, b-adic endpoints")->capture_default_str();
  dim_box->add_option("--levels", db_levels)->capture_default_str();
  dim_box->add_option("--oversample", db_p)->capture_default_str();
  dim_box->add_option("--bracket", db_bracket, "envelope or truncation")->capture_default_str();
  dim_box->add_option("--out", db_out, "CSV path (stdout when absent)");
  auto* dim_fit = dim_cmd->add_subcommand("fit", "log-log slope of a box-count table");
  std::string df_path, df_levels;
  dim_fit->add_option("table", df_path, "CSV from dim box")->required();
  dim_fit->add_option("--levels", df_levels, "subset a..b");

  // ql
  auto* ql_cmd = app.add_subcommand("ql", "quasi-linearity")->require_subcommand(1);
  auto* ql_verify = ql_cmd->add_subcommand("verify", "minimal C over a range");
  EngineOpts qv_eng;
  qv_eng.add(ql_verify);
  std::string qv_alpha, qv_beta = "0";
  std::uint64_t qv_N = 100000;
  ql_verify->add_option("--alpha", qv_alpha)->required();
  ql_verify->add_option("--beta", qv_beta)->capture_default_str();
  ql_verify->add_option("--N", qv_N)->capture_default_str();
  auto* ql_estimate = ql_cmd->add_subcommand("estimate", "suggest alpha and beta");
  EngineOpts qe_eng;
  qe_eng.add(ql_estimate);
  std::uint64_t qe_N = 1 << 16;
  ql_estimate->add_option("--N", qe_N)->capture_default_str();
  auto* ql_condition = ql_cmd->add_subcommand("condition", "gap condition along a t-sequence");
  EngineOpts qc_eng;
  qc_eng.add(ql_condition);
  std::string qc_alpha, qc_beta, qc_t, qc_tfile, qc_c;
  unsigned qc_K = 10;
  std::uint64_t qc_N = 100000;
  ql_condition->add_option("--alpha", qc_alpha, "default: the builtin's exponent");
  ql_condition->add_option("--beta", qc_beta);
  ql_condition->add_option("--t", qc_t, "a*n+c, n^2, ...");
  ql_condition->add_option("--t-file", qc_tfile, "enumerated t values");
  ql_condition->add_option("--K", qc_K)->capture_default_str();
  ql_condition->add_option("--c", qc_c, "requested c");
  ql_condition->add_option("--N", qc_N, "verification range for C")->capture_default_str();

  // verify all
  auto* verify_cmd = app.add_subcommand("verify", "verification suites")->require_subcommand(1);
  auto* verify_all = verify_cmd->add_subcommand("all", "nesting, graph, truncation, increment and MDP suites");
  std::string va_levels = "1..8", va_tamper;
  std::uint64_t va_samples = 2000, va_mdp_samples = 2000, va_seed = 42, va_verify_n = 100000;
  verify_all->add_option("--levels", va_levels, "nesting / increment levels")->capture_default_str();
  verify_all->add_option("--tamper-d4", va_tamper, "replace D4 for the tm_sum E cover");
  verify_all->add_option("--samples", va_samples, "truncation samples")->capture_default_str();
  verify_all->add_option("--mdp-samples", va_mdp_samples)->capture_default_str();
  verify_all->add_option("--seed", va_seed)->capture_default_str();
  verify_all->add_option("--verify-n", va_verify_n)->capture_default_str();

  // export graph
  auto* export_cmd = app.add_subcommand("export", "plot data")->require_subcommand(1);
  auto* export_graph = export_cmd->add_subcommand("graph", "graph samples at one level");
  InstanceOpts eg_inst;
  eg_inst.add(export_graph, "rho");
  unsigned eg_level = 8;
  std::string eg_mode = "a", eg_eps = "2^-30", eg_out;
  export_graph->add_option("--level", eg_level)->capture_default_str();
  export_graph->add_option("--mode", eg_mode, "a or lambda")->check(CLI::IsMember({"a", "lambda"}))->capture_default_str();
  export_graph->add_option("--eps", eg_eps)->capture_default_str();
  export_graph->add_option("--out", eg_out);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (seq_eval->parsed()) {
      seq::RecurrenceSpec spec = se_opts.load();
      seq::SequenceEngine e(spec);
      std::size_t which = 0;
      if (!se_seq.empty()) {
        which = spec.index_of(se_seq);
        if (which == std::string::npos) throw DomainError("no sequence '" + se_seq + "' in " + spec.name);
      }
      Range r = parse_range(se_n);
      const std::string name = se_seq.empty() ? spec.name : se_seq;
      if (se_format == "json") {
        json rows = json::array();
        for (std::uint64_t n = r.lo; n <= r.hi; ++n)
          rows.push_back({{"n", n}, {"value", e.eval(which, from_u64(n)).get_str()}});
        out << json{{"sequence", name}, {"spec_hash", seq::spec_hash(spec)}, {"rows", rows}}.dump(2) << "\n";
      } else {
        write_provenance(out, {{"sequence", name}, {"spec_hash", seq::spec_hash(spec)}, {"n", se_n}});
        out << "n," << csv_field(name) << "\n";
        for (std::uint64_t n = r.lo; n <= r.hi; ++n) out << n << "," << e.eval(which, from_u64(n)).get_str() << "\n";
      }
      return 0;
    }
    if (seq_check->parsed()) {
      seq::RecurrenceSpec spec = sc_opts.load();
      std::string seqs;
      for (const auto& s : spec.sequences) seqs += (seqs.empty() ? "" : ",") + s;
      out << json{{"name", spec.name},
                  {"base", spec.base},
                  {"n_min", spec.n_min},
                  {"sequences", spec.sequences},
                  {"spec_hash", seq::spec_hash(spec)},
                  {"valid", true}}
                 .dump(2)
          << "\n";
      return 0;
    }
    if (limit_eval->parsed()) {
      Instance in = le_inst.make();
      BAdicPoint x = parse_badic(le_x, in.base());
      Rational eps = parse_eps(le_eps);
      CertifiedValue v;
      if (le_what == "lambda") {
        v = in.lambda(x, eps);
      } else if (le_method == "certified") {
        v = in.kind() == CoverKind::F ? in.rho_limit().a_certified(x, eps) : in.limit().a_s_certified(x, eps);
      } else if (le_method == "exact") {
        v = CertifiedValue::exact_value(in.value(x));
      } else {
        try {
          v = CertifiedValue::exact_value(in.value(x));
        } catch (const ExactPathUnavailable&) {
          v = in.limit().a_s_certified(x, eps);
        }
      }
      json j = certified_json(x, v);
      j["instance"] = in.id();
      j["function"] = le_what;
      out << j.dump(2) << "\n";
      return 0;
    }
    if (covers_verify->parsed()) {
      CoverKind kind = parse_cover_kind(cv_kind);
      InstanceOpts opts = cv_inst;
      if (opts.id.empty() && opts.spec.empty()) opts.id = kind == CoverKind::F ? "rho" : "tm_sum";
      Instance in = opts.make();
      if (in.kind() != kind)
        throw DomainError(fmt::format("instance {} carries {} covers, not {}", in.id(), to_string(in.kind()), cv_kind));
      if (!cv_factor.empty()) in.set_height_factor(parse_rational(cv_factor));
      Range r = parse_range(cv_levels);
      if (r.lo < 1) throw DomainError("levels start at 1");
      json levels = json::array();
      bool pass = true;
      json violation;
      RectFamily parent = build_family(in, r.lo);
      for (unsigned n = r.lo; n <= r.hi && pass; ++n) {
        RectFamily child = build_family(in, n + 1);
        NestingReport rep = verify_nesting(parent, child);
        json lv{{"level", n}, {"checked", rep.checked}, {"pass", rep.pass()}};
        if (cv_graph) {
          GraphReport g = verify_graph(in, parent);
          lv["graph"] = g.pass();
          if (!g.pass() && pass) {
            pass = false;
            violation = {{"type", "graph"},
                         {"level", n},
                         {"k", g.violation->k},
                         {"x", g.violation->x.str()},
                         {"value", rational_json(g.violation->value)},
                         {"rect", rect_json(g.violation->rect)}};
          }
        }
        if (!rep.pass() && pass) {
          pass = false;
          violation = {{"type", "nesting"},
                       {"level", n},
                       {"k", rep.violation->k},
                       {"i", rep.violation->i},
                       {"parent", rect_json(rep.violation->parent)},
                       {"child", rect_json(rep.violation->child)}};
        }
        levels.push_back(lv);
        parent = std::move(child);
      }
      json j{{"kind", to_string(kind)},
             {"instance", in.id()},
             {"height_factor", rational_json(in.height_factor())},
             {"levels", levels},
             {"pass", pass}};
      if (!pass) j["violation"] = violation;
      out << j.dump(2) << "\n";
      return pass ? 0 : 1;
    }
    if (measure_mdp->parsed()) {
      Instance in = md_inst.make();
      Range r = parse_range(md_levels);
      std::uint64_t k0 = md_k0 ? *md_k0 : to_u64(floor_of(Rational(5, 16) * Rational(ipow(in.base(), md_n0))));
      CoverMeasure mu(in, md_n0, k0);
      MdpReport rep = mdp_scan(mu, parse_rational(md_t), r.lo, r.hi, md_samples, md_seed);
      json by_level = json::object();
      for (unsigned m = r.lo; m <= r.hi; ++m) by_level[std::to_string(m)] = rep.max_by_level[m - r.lo];
      json j{{"label", "sampled upper-ratio witness (evidence, not a bound over all squares)"},
             {"instance", rep.instance},
             {"n0", rep.n0},
             {"k0", rep.k0},
             {"t", rational_json(rep.t)},
             {"levels", md_levels},
             {"samples", rep.samples},
             {"seed", rep.seed},
             {"max_ratio", rep.max_ratio},
             {"max_ratio_by_level", by_level}};
      if (rep.arg) {
        const auto& a = *rep.arg;
        j["arg_square"] = {{"x0", rational_json(a.square.x0)},
                           {"y0", rational_json(a.square.y0)},
                           {"side", rational_json(a.square.side)},
                           {"level", a.level},
                           {"rect_level", a.rect_level},
                           {"mass", rational_json(a.mass)}};
      }
      out << j.dump(2) << "\n";
      return 0;
    }
    if (dim_box->parsed()) {
      Instance in = db_inst.make();
      auto colon = db_interval.find(':');
      if (colon == std::string::npos) throw DomainError("interval must be u:v");
      BAdicPoint u = parse_badic(db_interval.substr(0, colon), in.base());
      BAdicPoint v = parse_badic(db_interval.substr(colon + 1), in.base());
      Range r = parse_range(db_levels);
      BoxCountTable t = box_count_table(in, u, v, r.lo, r.hi, db_p, parse_bracket_mode(db_bracket));
      t.provenance = fmt::format("generator={}\nspec_hash={}\nlevels={}", kVersion, db_inst.hash(), db_levels);
      std::ofstream file;
      write_csv(t, open_out(db_out, file, out));
      return 0;
    }
    if (dim_fit->parsed()) {
      std::ifstream f(df_path);
      if (!f) throw IoError("cannot open '" + df_path + "'");
      BoxCountTable t = read_csv(f);
      Range r{0, ~0u};
      if (!df_levels.empty()) r = parse_range(df_levels);
      SlopeFit fit = fit_dimension(t, r.lo, r.hi);
      out << json{{"instance", t.instance},
                  {"slope", fit.slope},
                  {"intercept", fit.intercept},
                  {"stderr", fit.stderr_},
                  {"levels", fit.levels},
                  {"residuals", fit.residuals}}
                 .dump(2)
          << "\n";
      return 0;
    }
    if (ql_verify->parsed()) {
      seq::SequenceEngine e(qv_eng.load());
      QLVerification v = verify_quasilinear(e, e.base(), parse_rational(qv_alpha), parse_rational(qv_beta), qv_N);
      out << json{{"sequence", e.name()},
                  {"b", e.base()},
                  {"alpha", rational_json(v.profile.alpha)},
                  {"beta", rational_json(v.profile.beta)},
                  {"N", qv_N},
                  {"C_min", rational_json(v.profile.C)},
                  {"C_min_2N", rational_json(v.C_double)},
                  {"C0", rational_json(v.profile.C0)},
                  {"growth", v.growth},
                  {"diverging", v.diverging},
                  {"exact", v.exact},
                  {"argmax", {{"n", v.argmax_n}, {"i", v.argmax_i}}}}
                 .dump(2)
          << "\n";
      return v.diverging ? 1 : 0;
    }
    if (ql_estimate->parsed()) {
      seq::SequenceEngine e(qe_eng.load());
      auto est = [&](const ExponentEstimate& x) {
        json j{{"raw_slope", x.raw_slope}, {"window", {x.lo, x.hi}}, {"samples", x.samples}};
        j["snapped"] = x.snapped ? json(to_string(*x.snapped)) : json(nullptr);
        return j;
      };
      json j{{"sequence", e.name()}, {"N", qe_N}};
      j["alpha"] = est(estimate_alpha(e, qe_N));
      try {
        j["beta"] = est(estimate_beta(e, qe_N));
      } catch (const AllZero& z) {
        j["beta"] = {{"error", z.what()}};
      }
      out << j.dump(2) << "\n";
      return 0;
    }
    if (ql_condition->parsed()) {
      auto engine = std::make_shared<seq::SequenceEngine>(qc_eng.load());
      std::string alpha = qc_alpha, beta = qc_beta;
      if (alpha.empty()) {
        static const std::map<std::string, std::pair<std::string, std::string>> known = {
            {"tm_sum", {"1", "0"}}, {"rs_sum", {"1/2", "0"}}, {"tm_double_sum", {"2", "1"}}, {"rho", {"1/2", "0"}}};
        auto it = known.find(engine->name());
        if (it == known.end()) throw DomainError("give --alpha for " + engine->name());
        alpha = it->second.first;
        if (beta.empty()) beta = it->second.second;
      }
      if (beta.empty()) beta = "0";
      QLVerification v = verify_quasilinear(*engine, engine->base(), parse_rational(alpha), parse_rational(beta), qc_N);
      ProfileLimit lim(engine, v.profile);
      if (qc_t.empty() == qc_tfile.empty()) throw DomainError("give exactly one of --t and --t-file");
      TSequence t = qc_t.empty() ? TSequence::load(qc_tfile) : TSequence::parse(qc_t);
      std::optional<Rational> c;
      if (!qc_c.empty()) c = parse_rational(qc_c);
      ConditionReport rep = check_condition(lim, t, qc_K, c, engine->name());
      json levels = json::array();
      for (const auto& l : rep.levels)
        levels.push_back({{"k", l.k},
                          {"pairs", l.pairs},
                          {"min_scaled_gap", rational_json(l.min_gap)},
                          {"max_scaled_gap", rational_json(l.max_gap)}});
      json j{{"instance", rep.instance},
             {"t", rep.t_description},
             {"K", rep.K},
             {"verdict", to_string(rep.verdict)},
             {"exact", rep.exact},
             {"tested_range_only", true},
             {"syndetic", {{"M", rep.syndetic.M.get_str()},
                           {"checked", rep.syndetic.checked},
                           {"heuristic_unbounded", rep.syndetic.heuristic_unbounded}}},
             {"levels", levels}};
      j["c_requested"] = rep.c_requested ? json(to_string(*rep.c_requested)) : json(nullptr);
      j["best_c"] = rep.best_c ? json(to_string(*rep.best_c)) : json(nullptr);
      if (rep.counterexample) {
        const auto& ce = *rep.counterexample;
        j["counterexample"] = {{"k", ce.k},
                               {"n", ce.n},
                               {"t_n", ce.t0.get_str()},
                               {"t_n1", ce.t1.get_str()},
                               {"gap_lo", rational_json(ce.gap.lo)},
                               {"gap_hi", rational_json(ce.gap.hi)}};
      }
      if (!rep.note.empty()) j["note"] = rep.note;
      out << j.dump(2) << "\n";
      return 0;
    }
    if (verify_all->parsed()) {
      Range r = parse_range(va_levels);
      if (r.lo < 1) throw DomainError("levels start at 1");
      std::optional<Rational> tamper;
      if (!va_tamper.empty()) tamper = parse_rational(va_tamper);
      std::vector<SuiteResult> results;
      results.push_back(suite_nesting(r, tamper, va_verify_n));
      results.push_back(suite_graph(r, va_verify_n));
      results.push_back(suite_truncation(va_samples, va_seed));
      results.push_back(suite_increment(r));
      results.push_back(suite_mdp(va_mdp_samples, va_seed));
      bool all = true;
      for (const auto& s : results) {
        out << (s.pass ? "PASS " : "FAIL ") << s.name << ": " << s.detail << "\n";
        all = all && s.pass;
      }
      out << (all ? "all suites passed" : "some suites failed") << "\n";
      return all ? 0 : 1;
    }
    if (export_graph->parsed()) {
      Instance in = eg_inst.make();
      check_cells(in.base(), static_cast<int>(eg_level), "graph rows");
      Rational eps = parse_eps(eg_eps);
      std::ofstream file;
      std::ostream& o = open_out(eg_out, file, out);
      write_provenance(o, {{"instance", in.id()},
                           {"spec_hash", eg_inst.hash()},
                           {"level", std::to_string(eg_level)},
                           {"mode", eg_mode},
                           {"eps", eg_eps}});
      o << "x,value,radius\n";
      const std::uint64_t count = to_u64(ipow(in.base(), eg_level));
      // a on [0, 1), lambda on (0, 1]
      const std::uint64_t first = eg_mode == "a" ? 0 : 1;
      for (std::uint64_t k = first; k < first + count; ++k) {
        BAdicPoint x(in.base(), from_u64(k), eg_level);
        CertifiedValue v = eg_mode == "a" ? CertifiedValue::exact_value(in.value(x)) : in.lambda(x, eps);
        o << decimal(to_double(x.value())) << "," << decimal(to_double(v.mid)) << ","
          << decimal(upper_double(v.radius)) << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace fraclim::cli
