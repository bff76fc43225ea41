#include "fraclim/seq/builtins.hpp"

#include <array>
#include <utility>

namespace fraclim::seq {

namespace {

// kept in sync with data/*.seq (checked by the test suite)
const std::array<std::pair<const char*, const char*>, 7> kSources{{
    {"rho", R"seq(# abelian complexity of the Rudin-Shapiro word
base 4
name rho
init rho(0) = 1
init rho(1) = 2
init rho(2) = 3
init rho(3) = 4
rule rho(4n+0) = 2*rho(n) + 1
rule rho(4n+1) = 2*rho(n)
rule rho(4n+2) = rho(n) + rho(n+1)
rule rho(4n+3) = 2*rho(n+1)
)seq"},
    {"rudin_shapiro", R"seq(# r(2n) = r(n), r(2n+1) = (-1)^n r(n), split over residues mod 4.
# q(n) stands for r(2n+1).
base 4
name rudin_shapiro
init rudin_shapiro(0) = 1
init rudin_shapiro(1) = 1
init rudin_shapiro(2) = 1
init rudin_shapiro(3) = -1
init q(0) = 1
init q(1) = -1
init q(2) = 1
init q(3) = 1
rule rudin_shapiro(4n+0) = rudin_shapiro(n)
rule rudin_shapiro(4n+1) = rudin_shapiro(n)
rule rudin_shapiro(4n+2) = q(n)
rule rudin_shapiro(4n+3) = -q(n)
rule q(4n+0) = rudin_shapiro(n)
rule q(4n+1) = -rudin_shapiro(n)
rule q(4n+2) = q(n)
rule q(4n+3) = q(n)
)seq"},
    {"thue_morse", R"seq(base 2
name thue_morse
init thue_morse(0) = 0
init thue_morse(1) = 1
rule thue_morse(2n+0) = thue_morse(n)
rule thue_morse(2n+1) = -thue_morse(n) + 1
)seq"},
    {"tm_sum", R"seq(# s(n) = m(0) + ... + m(n-1), m = Thue-Morse; u(n) = n
base 2
name tm_sum
init tm_sum(0) = 0
init tm_sum(1) = 0
init u(0) = 0
init u(1) = 1
rule tm_sum(2n+0) = u(n)
rule tm_sum(2n+1) = u(n) + tm_sum(n+1) - tm_sum(n)
rule u(2n+0) = 2*u(n)
rule u(2n+1) = 2*u(n) + 1
)seq"},
    {"tm_double_sum", R"seq(# D(n) = s(0) + ... + s(n-1) with s the Thue-Morse sum; w(n) = n(n-1)
base 2
name tm_double_sum
init tm_double_sum(0) = 0
init tm_double_sum(1) = 0
init w(0) = 0
init w(1) = 0
init u(0) = 0
init u(1) = 1
init s(0) = 0
init s(1) = 0
rule tm_double_sum(2n+0) = w(n) + s(n)
rule tm_double_sum(2n+1) = w(n) + s(n) + u(n)
rule w(2n+0) = 4*w(n) + 2*u(n)
rule w(2n+1) = 4*w(n) + 6*u(n)
rule u(2n+0) = 2*u(n)
rule u(2n+1) = 2*u(n) + 1
rule s(2n+0) = u(n)
rule s(2n+1) = u(n) + s(n+1) - s(n)
)seq"},
    {"rs_sum", R"seq(# S(n) = r(0) + ... + r(n-1), r = Rudin-Shapiro; q(n) = r(2n+1)
base 4
name rs_sum
init rs_sum(0) = 0
init rs_sum(1) = 1
init rs_sum(2) = 2
init rs_sum(3) = 3
init q(0) = 1
init q(1) = -1
init q(2) = 1
init q(3) = 1
init r(0) = 1
init r(1) = 1
init r(2) = 1
init r(3) = -1
rule rs_sum(4n+0) = 2*rs_sum(n)
rule rs_sum(4n+1) = rs_sum(n) + rs_sum(n+1)
rule rs_sum(4n+2) = 2*rs_sum(n+1)
rule rs_sum(4n+3) = 2*rs_sum(n+1) + q(n)
rule q(4n+0) = r(n)
rule q(4n+1) = -r(n)
rule q(4n+2) = q(n)
rule q(4n+3) = q(n)
rule r(4n+0) = r(n)
rule r(4n+1) = r(n)
rule r(4n+2) = q(n)
rule r(4n+3) = -q(n)
)seq"},
    {"zero", R"seq(# identically zero, base 4
base 4
name zero
init zero(0) = 0
init zero(1) = 0
init zero(2) = 0
init zero(3) = 0
rule zero(4n+0) = 2*zero(n)
rule zero(4n+1) = 2*zero(n)
rule zero(4n+2) = 2*zero(n)
rule zero(4n+3) = 2*zero(n)
)seq"},
}};

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : kSources) out.emplace_back(name);
  return out;
}

std::string builtin_source(std::string_view name) {
  for (const auto& [n, text] : kSources)
    if (name == n) return text;
  std::string known;
  for (const auto& [n, text] : kSources) known += (known.empty() ? "" : ", ") + std::string(n);
  throw UnknownBuiltin("unknown builtin sequence '" + std::string(name) + "' (known: " + known + ")");
}

RecurrenceSpec builtin_spec(std::string_view name) {
  return parse_spec(builtin_source(name), "<builtin:" + std::string(name) + ">");
}

SequenceEngine builtin(std::string_view name) { return SequenceEngine(builtin_spec(name)); }

}  // namespace fraclim::seq
