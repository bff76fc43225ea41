#pragma once

#include "fraclim/limit/certified.hpp"
#include "fraclim/limit/profile.hpp"
#include "fraclim/seq/engine.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fraclim {

class AllZero : public Error {
 public:
  using Error::Error;
};

class NotIncreasing : public Error {
 public:
  using Error::Error;
};

struct ExponentEstimate {
  double raw_slope = 0;
  std::optional<Rational> snapped;  // denominator <= 4, within 0.05
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::size_t samples = 0;
};

// Slope of log max_{m<=n} |s(m)| against log n over geometric samples in [N/64, N].
ExponentEstimate estimate_alpha(seq::SequenceEngine& engine, std::uint64_t N);
// Same with s(n+1) - s(n).
ExponentEstimate estimate_beta(seq::SequenceEngine& engine, std::uint64_t N);

struct QLVerification {
  QLProfile profile;          // C = max over 1 <= n <= N
  Rational C_double;          // the same maximum over 1 <= n <= 2N
  double growth = 1;          // C_double / C
  bool diverging = false;     // growth > b^0.1
  bool exact = true;          // false when C is a certified upper bound
  std::uint64_t argmax_n = 0;
  int argmax_i = 0;
};

// max over 1 <= n <= N, 0 <= i < b of |s(bn+i) - b^alpha s(n)| / n^beta
QLVerification verify_quasilinear(seq::SequenceEngine& engine, int b, const Rational& alpha, const Rational& beta,
                                  std::uint64_t N);

// increasing integer sequence t_1, t_2, ...
struct TSequence {
  std::string description;
  std::function<std::optional<BigInt>(std::uint64_t)> at;  // nullopt past the end of a finite list

  static TSequence affine(const BigInt& a, const BigInt& c);
  static TSequence list(std::vector<BigInt> values, std::string description);
  // "a*n+c", "2n", "n", "n^2", "n^2+c"
  static TSequence parse(std::string_view text);
  static TSequence load(const std::string& path);
};

struct SyndeticReport {
  BigInt M = 0;
  std::uint64_t checked = 0;
  bool heuristic_unbounded = false;
};

SyndeticReport check_syndetic(const TSequence& t, std::uint64_t N);

enum class Verdict { HoldsCertified, FailsCertified, Inconclusive };
std::string to_string(Verdict v);

struct LevelGaps {
  unsigned k = 0;
  std::uint64_t pairs = 0;
  Rational min_gap;  // certified lower bound of the smallest gap
  Rational max_gap;  // certified upper bound of the largest gap
};

struct Counterexample {
  unsigned k = 0;
  std::uint64_t n = 0;
  BigInt t0, t1;
  Interval gap;
};

struct ConditionReport {
  std::string instance;
  std::string t_description;
  unsigned K = 0;
  std::optional<Rational> c_requested;
  std::optional<Rational> best_c;  // every c < best_c satisfies the inequality on the tested range
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Counterexample> counterexample;
  std::vector<LevelGaps> levels;
  bool exact = false;
  SyndeticReport syndetic;
  std::string note;
};

// a_s(t_{n+1} b^-k) - a_s(t_n b^-k) > c b^(-alpha k) for 1 <= k <= K and all
// consecutive t_n < t_{n+1} <= b^k - 1
ConditionReport check_condition(ProfileLimit& limit, const TSequence& t, unsigned K,
                                std::optional<Rational> c_requested, std::string instance_id = "");

}  // namespace fraclim
