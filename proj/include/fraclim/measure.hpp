#pragma once

#include "fraclim/instance.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fraclim {

// closed axis-parallel box [x0, x0+width] x [y0, y0+height]
struct Box {
  Rational x0, y0, width, height;
};

struct Square {
  Rational x0, y0, side;
  Box box() const { return Box{x0, y0, side, side}; }
};

// The mass distribution that gives every level-m rectangle mass b^-m,
// restricted to the root rectangle (n0, k0) and renormalized.
class CoverMeasure {
 public:
  CoverMeasure(Instance& inst, unsigned n0, std::uint64_t k0);

  Instance& instance() { return inst_; }
  unsigned n0() const { return n0_; }
  std::uint64_t k0() const { return k0_; }

  // renormalized mass of the rectangle (level, k): b^(n0-level) inside the root, else 0
  Rational cell_mass(unsigned level, const BigInt& k) const;
  // sum of renormalized masses of the level-m rectangles meeting the box
  // (boundary contact counts); m >= n0
  Rational ball_measure(const Box& S, unsigned m);
  Rational ball_measure(const Square& S, unsigned m) { return ball_measure(S.box(), m); }
  std::uint64_t last_visited() const { return visited_; }

 private:
  Instance& inst_;
  unsigned n0_;
  std::uint64_t k0_;
  std::uint64_t visited_ = 0;
};

struct MdpSample {
  unsigned level = 0;       // square side b^-level
  unsigned rect_level = 0;  // rectangle level the mass was computed at
  Square square;
  Rational mass;
  double ratio = 0;         // mass / side^t
};

struct MdpReport {
  std::string instance;
  unsigned n0 = 0;
  std::uint64_t k0 = 0;
  Rational t;
  unsigned level_lo = 0, level_hi = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double max_ratio = 0;
  std::optional<MdpSample> arg;
  std::vector<double> max_by_level;
};

// rectangles used for squares of side b^-m: level ceil(m / (alpha - beta)) + 2
unsigned mdp_rect_level(const Instance& inst, unsigned m);

// Sampled upper-ratio witness, not a proof over all balls: squares of side
// b^-m centred on graph points above b-adic abscissae of the root column.
MdpReport mdp_scan(CoverMeasure& mu, const Rational& t, unsigned level_lo, unsigned level_hi,
                   std::uint64_t samples, std::uint64_t seed);

}  // namespace fraclim
