#include "cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = fraclim::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("seq eval prints the first rho values") {
  Run r = run({"seq", "eval", "--builtin", "rho", "--n", "1..4"});
  REQUIRE(r.code == 0);
  auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "n,rho");
  CHECK(lines[1] == "1,2");
  CHECK(lines[2] == "2,3");
  CHECK(lines[3] == "3,4");
  CHECK(lines[4] == "4,5");
  CHECK(r.out.find("# spec_hash=") != std::string::npos);

  Run f = run({"seq", "eval", "--spec", std::string(FRACLIM_DATA_DIR) + "/rho.seq", "--n", "1..4"});
  CHECK(data_lines(f.out) == lines);
}

TEST_CASE("usage and parse errors exit with 2") {
  Run missing = run({"seq", "eval", "--spec", "/nonexistent/rho.seq", "--n", "1..2"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("/nonexistent/rho.seq") != std::string::npos);

  std::string path = "fraclim_cli_bad.seq";
  {
    std::ofstream f(path);
    f << "base 4\nname x\nrule x(4n+0) = = 2\n";
  }
  Run bad = run({"seq", "eval", "--spec", path, "--n", "1..2"});
  std::remove(path.c_str());
  CHECK(bad.code == 2);
  CHECK(bad.err.find(path + ":3:") != std::string::npos);

  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"seq", "eval", "--builtin", "rho", "--n", "4..1"}).code == 2);
}

TEST_CASE("resource guard exits with 3") {
  setenv("FRACLIM_MAX_CELLS", "10", 1);
  Run r = run({"export", "graph", "--instance", "rho", "--level", "4"});
  unsetenv("FRACLIM_MAX_CELLS");
  CHECK(r.code == 3);
  CHECK(r.err.find("FRACLIM_MAX_CELLS") != std::string::npos);
}

TEST_CASE("verify all on a level subset, and with a broken D4") {
  Run ok = run({"verify", "all", "--levels", "1..2", "--samples", "200", "--mdp-samples", "100"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  CHECK(ok.out.find("PASS nesting") != std::string::npos);
  CHECK(ok.out.find("PASS mdp") != std::string::npos);

  Run at_one = run({"verify", "all", "--levels", "1..3", "--tamper-d4", "1", "--samples", "100", "--mdp-samples", "50"});
  CHECK(at_one.code == 0);

  Run bad = run({"verify", "all", "--levels", "1..3", "--tamper-d4", "3/4", "--samples", "100", "--mdp-samples", "50"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL nesting: tm_sum E level 1: child (k=1, i=1)") != std::string::npos);
}

TEST_CASE("covers verify exit codes") {
  CHECK(run({"covers", "verify", "--instance", "rho", "--levels", "1..4", "--graph"}).code == 0);
  CHECK(run({"covers", "verify", "--instance", "tm_sum", "--kind", "E", "--levels", "1..4", "--factor", "1"}).code == 1);
}

TEST_CASE("export graph rows") {
  Run r0 = run({"export", "graph", "--instance", "rho", "--level", "0"});
  REQUIRE(r0.code == 0);
  auto l0 = data_lines(r0.out);
  REQUIRE(l0.size() == 2);
  CHECK(l0[0] == "x,value,radius");

  Run r = run({"export", "graph", "--instance", "rho", "--level", "4"});
  auto rows = data_lines(r.out);
  CHECK(rows.size() == 257);
  for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i].substr(rows[i].rfind(',') + 1) == "0");

  Run lam = run({"export", "graph", "--instance", "tm_sum", "--level", "5", "--mode", "lambda", "--eps", "2^-20"});
  REQUIRE(lam.code == 0);
  auto lrows = data_lines(lam.out);
  CHECK(lrows.size() == 33);
  for (std::size_t i = 1; i < lrows.size(); ++i) REQUIRE(std::stod(lrows[i].substr(lrows[i].rfind(',') + 1)) <= 1.0 / (1 << 20));
}

TEST_CASE("identical runs give identical files") {
  std::string a = "fraclim_cli_a.csv", b = "fraclim_cli_b.csv";
  for (const auto& p : {a, b})
    REQUIRE(run({"dim", "box", "--instance", "rho", "--interval", "1/4:1/2", "--levels", "2..5", "--out", p}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  Run fit = run({"dim", "fit", a});
  CHECK(fit.code == 0);
  std::remove(a.c_str());
  std::remove(b.c_str());

  Run m1 = run({"measure", "mdp", "--instance", "rho", "--samples", "200", "--seed", "9"});
  Run m2 = run({"measure", "mdp", "--instance", "rho", "--samples", "200", "--seed", "9"});
  CHECK(m1.code == 0);
  CHECK(m1.out == m2.out);
  CHECK(m1.out.find("9") != std::string::npos);
}

TEST_CASE("limit and ql commands") {
  Run l = run({"limit", "eval", "--instance", "rho", "--x", "1/4", "--what", "lambda"});
  REQUIRE(l.code == 0);
  CHECK(l.out.find("\"mid\": \"3\"") != std::string::npos);

  CHECK(run({"ql", "verify", "--builtin", "tm_sum", "--alpha", "1", "--beta", "0", "--N", "5000"}).code == 0);
  CHECK(run({"ql", "verify", "--builtin", "tm_sum", "--alpha", "1/2", "--beta", "0", "--N", "5000"}).code == 1);
  Run c = run({"ql", "condition", "--builtin", "tm_sum", "--t", "2n", "--K", "6"});
  CHECK(c.code == 0);
  CHECK(c.out.find("holds_certified") != std::string::npos);
}
