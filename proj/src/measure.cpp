#include "fraclim/measure.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace fraclim {

namespace {

constexpr __int128 kClamp = static_cast<__int128>(1) << 120;

__int128 clamp128(const BigInt& v) {
  static const BigInt lim = BigInt(1) << 120;
  if (v >= lim) return kClamp;
  if (v <= -lim) return -kClamp;
  // |v| < 2^120: split into two 60-bit halves
  BigInt a = abs(v);
  BigInt hi = a >> 60;
  BigInt lo = a - (hi << 60);
  __int128 r = (static_cast<__int128>(to_u64(hi)) << 60) + static_cast<__int128>(to_u64(lo));
  return sgn(v) < 0 ? -r : r;
}

// integer index / numerator ranges at one level
struct LevelBounds {
  __int128 xi_lo, xi_hi, xc_lo, xc_hi;  // column index k: meets / inside the box
  __int128 yi_lo, yi_hi, yc_lo, yc_hi;  // M = s(k) - s(0) B^l: meets / inside
  __int128 offset;                      // s(0) B^l
  Rational mass;
};

// uniform integer in [0, n) by rejection, identical on every platform
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do r = rng();
  while (r >= limit);
  return r % n;
}

}  // namespace

CoverMeasure::CoverMeasure(Instance& inst, unsigned n0, std::uint64_t k0) : inst_(inst), n0_(n0), k0_(k0) {
  if (from_u64(k0) >= ipow(inst.base(), n0))
    throw DomainError(fmt::format("root index {} out of range at level {}", k0, n0));
}

Rational CoverMeasure::cell_mass(unsigned level, const BigInt& k) const {
  if (level < n0_) throw DomainError("cell above the root level");
  BigInt up = k;
  for (unsigned l = level; l > n0_; --l) up = floor_div(up, inst_.base());
  if (up != from_u64(k0_)) return 0;
  return rpow(Rational(inst_.base()), static_cast<long>(n0_) - static_cast<long>(level));
}

Rational CoverMeasure::ball_measure(const Box& S, unsigned m) {
  if (m < n0_) throw DomainError(fmt::format("rectangle level {} above the root level {}", m, n0_));
  if (sgn(S.width) < 0 || sgn(S.height) < 0) throw DomainError("box with negative size");
  const int b = inst_.base();
  const Rational bR(b), BR(inst_.B());
  std::vector<LevelBounds> lv(m + 1);
  for (unsigned l = n0_; l <= m; ++l) {
    Rational bl = rpow(bR, l), Bl = rpow(BR, l);
    Rational hB = inst_.half_height(l) * Bl;
    LevelBounds& L = lv[l];
    L.xi_lo = clamp128(ceil_of(S.x0 * bl) - 1);
    L.xi_hi = clamp128(floor_of((S.x0 + S.width) * bl));
    L.xc_lo = clamp128(ceil_of(S.x0 * bl));
    L.xc_hi = clamp128(floor_of((S.x0 + S.width) * bl) - 1);
    L.yi_lo = clamp128(ceil_of(S.y0 * Bl - hB));
    L.yi_hi = clamp128(floor_of((S.y0 + S.height) * Bl + hB));
    L.yc_lo = clamp128(ceil_of(S.y0 * Bl + hB));
    L.yc_hi = clamp128(floor_of((S.y0 + S.height) * Bl - hB));
    L.offset = clamp128(BigInt(inst_.s0() * ipow(inst_.B(), l)));
    L.mass = rpow(bR, static_cast<long>(n0_) - static_cast<long>(l));
  }
  auto& e = inst_.engine();
  visited_ = 0;
  // count of contained nodes per level; mass is summed at the end
  std::vector<std::uint64_t> taken(m + 1, 0);
  struct Node {
    unsigned l;
    __int128 k;
    seq::Window w;
  };
  std::vector<Node> stack;
  stack.push_back(Node{n0_, static_cast<__int128>(k0_), e.window(k0_)});
  while (!stack.empty()) {
    Node nd = std::move(stack.back());
    stack.pop_back();
    ++visited_;
    const LevelBounds& L = lv[nd.l];
    if (nd.k < L.xi_lo || nd.k > L.xi_hi) continue;
    const __int128 M = static_cast<__int128>(e.at(nd.w, 0)) - L.offset;
    if (M < L.yi_lo || M > L.yi_hi) continue;
    // nested rectangles: a contained node contains all its descendants
    if ((nd.k >= L.xc_lo && nd.k <= L.xc_hi && M >= L.yc_lo && M <= L.yc_hi) || nd.l == m) {
      ++taken[nd.l];
      continue;
    }
    for (int i = b - 1; i >= 0; --i) {
      Node c{nd.l + 1, nd.k * b + i, {}};
      e.child(nd.w, i, c.w);
      stack.push_back(std::move(c));
    }
  }
  Rational total = 0;
  for (unsigned l = n0_; l <= m; ++l)
    if (taken[l]) total += Rational(from_u64(taken[l])) * lv[l].mass;
  return total;
}

unsigned mdp_rect_level(const Instance& inst, unsigned m) {
  Rational q = Rational(static_cast<long>(m)) / inst.vertical_exponent();
  return static_cast<unsigned>(to_u64(ceil_of(q))) + 2;
}

MdpReport mdp_scan(CoverMeasure& mu, const Rational& t, unsigned level_lo, unsigned level_hi,
                   std::uint64_t samples, std::uint64_t seed) {
  if (sgn(t) < 0) throw DomainError("MDP exponent must be non-negative");
  if (level_lo > level_hi) throw DomainError("empty level range");
  if (level_lo < mu.n0()) throw DomainError("square levels must not be coarser than the root level");
  Instance& inst = mu.instance();
  const int b = inst.base();
  MdpReport rep;
  rep.instance = inst.id();
  rep.n0 = mu.n0();
  rep.k0 = mu.k0();
  rep.t = t;
  rep.level_lo = level_lo;
  rep.level_hi = level_hi;
  rep.samples = samples;
  rep.seed = seed;
  rep.max_by_level.assign(level_hi - level_lo + 1, 0.0);
  std::mt19937_64 rng(seed);
  const double td = to_double(t);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const unsigned m = level_lo + static_cast<unsigned>(bounded(rng, level_hi - level_lo + 1));
    // abscissa on the level-(m+2) grid of the root column, endpoints included
    const unsigned L = m + 2;
    BigInt span = ipow(b, L - mu.n0());
    if (!fits_u64(span)) throw ResourceError("sampling grid exceeds 64 bits");
    const std::uint64_t j = bounded(rng, to_u64(span) + 1);
    BAdicPoint xc(b, from_u64(mu.k0()) * span + from_u64(j), L);
    const Rational side = rpow(Rational(b), -static_cast<long>(m));
    const Rational yc = inst.value(xc);
    Square sq{xc.value() - side / 2, yc - side / 2, side};
    const unsigned mr = std::max(mdp_rect_level(inst, m), mu.n0());
    Rational mass = mu.ball_measure(sq, mr);
    double ratio = to_double(mass) * std::pow(static_cast<double>(b), td * m);
    double& lvl = rep.max_by_level[m - level_lo];
    lvl = std::max(lvl, ratio);
    if (!rep.arg || ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.arg = MdpSample{m, mr, sq, mass, ratio};
    }
  }
  return rep;
}

}  // namespace fraclim
