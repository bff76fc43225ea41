#pragma once

#include "fraclim/badic.hpp"
#include "fraclim/instance.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fraclim {

class LevelMismatch : public Error {
 public:
  using Error::Error;
};

struct Rect {
  BAdicInterval column;
  Rational mid;
  Rational half;

  Rational bottom() const { return mid - half; }
  Rational top() const { return mid + half; }
  bool contains(const Rect& o) const;
  std::string str() const;
};

enum class MidlineSource { Definition, Telescoped };

// F_{n,k} or E_{n,k}, k = 0 .. b^n - 1
struct RectFamily {
  CoverKind kind = CoverKind::F;
  std::string instance;
  int base = 4;
  unsigned level = 0;
  Rational half_height;
  std::vector<Rational> midlines;

  std::size_t size() const { return midlines.size(); }
  Rect rect(std::size_t k) const;
};

RectFamily build_family(Instance& inst, unsigned n, MidlineSource source = MidlineSource::Definition);

struct NestingViolation {
  std::uint64_t k = 0;
  int i = 0;
  Rect parent;
  Rect child;
};

struct NestingReport {
  unsigned level = 0;  // parent level
  std::uint64_t checked = 0;
  std::optional<NestingViolation> violation;
  bool pass() const { return !violation; }
};

// every child rectangle of level n+1 inside its parent of level n; the first
// violation in (k, i) order is kept
NestingReport verify_nesting(const RectFamily& parent, const RectFamily& child);

struct GraphViolation {
  std::uint64_t k = 0;
  BAdicPoint x;
  Rational value;
  Rect rect;
};

struct GraphReport {
  unsigned level = 0;
  std::uint64_t checked = 0;
  std::optional<GraphViolation> violation;
  bool pass() const { return !violation; }
};

// the limit graph at both endpoints of every column lies in its rectangle;
// the right endpoint x = 1 of the last column is skipped (the value jumps there)
GraphReport verify_graph(Instance& inst, const RectFamily& family);

}  // namespace fraclim
