#pragma once

#include "fraclim/badic.hpp"
#include "fraclim/instance.hpp"
#include "fraclim/seq/engine.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fraclim {

class InsufficientRows : public Error {
 public:
  using Error::Error;
};

// Per-subcell enclosure of a over [t, t+1) b^-L relative to a(t b^-L), in
// units of B^-L, keyed by the sign of s(t+1) - s(t). Certified from the
// recurrence by one-step invariance of [plus_lo+phi0, plus_hi+phi0] and the
// minus counterpart.
struct RhoEnvelope {
  Rational plus_lo, plus_hi;
  Rational minus_lo, minus_hi;
  Rational phi0;
};

// throws VerificationError when the rules do not admit the envelope
RhoEnvelope certify_rho_envelope(const seq::SequenceEngine& engine);

enum class BracketMode { Envelope, Truncation };
std::string to_string(BracketMode m);
BracketMode parse_bracket_mode(std::string_view text);

struct Osc {
  Rational lower;
  Rational upper;
};

// max - min of the exact values on the b^p level-(n+p) grid points of the
// column, and a certified upper bound for the oscillation over the column
Osc column_osc(Instance& inst, const BAdicInterval& column, unsigned p, BracketMode mode = BracketMode::Envelope);

struct BoxCountRow {
  unsigned level = 0;
  Rational delta;
  BigInt count_lower;
  BigInt count_upper;
};

struct BoxCountTable {
  std::string instance;
  BAdicPoint u{2, 0, 0};
  BAdicPoint v{2, 1, 0};
  unsigned oversample = 3;
  BracketMode mode = BracketMode::Envelope;
  std::string provenance;  // free-form "key=value" pairs
  std::vector<BoxCountRow> rows;
};

// boxes per column floor(osc * b^n) + 1, summed over the level-n columns of [u, v)
BoxCountRow box_count(Instance& inst, const BAdicPoint& u, const BAdicPoint& v, unsigned n, unsigned p,
                      BracketMode mode = BracketMode::Envelope);
BoxCountTable box_count_table(Instance& inst, const BAdicPoint& u, const BAdicPoint& v, unsigned n_lo,
                              unsigned n_hi, unsigned p, BracketMode mode = BracketMode::Envelope);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double stderr_ = 0;
  std::vector<unsigned> levels;
  std::vector<double> residuals;
};

// least squares of log count against log(1/delta), count the geometric mean
// of the lower and upper counts; levels outside [lo, hi] are ignored
SlopeFit fit_dimension(const BoxCountTable& table, unsigned level_lo = 0, unsigned level_hi = ~0u);

// '#' provenance lines, then level,delta,count_lower,count_upper
void write_csv(const BoxCountTable& table, std::ostream& out);
BoxCountTable read_csv(std::istream& in);

}  // namespace fraclim
