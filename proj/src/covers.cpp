#include "fraclim/covers.hpp"

#include <fmt/format.h>

namespace fraclim {

bool Rect::contains(const Rect& o) const {
  if (o.column.level() < column.level()) return false;
  BigInt up = o.column.index();
  for (unsigned l = o.column.level(); l > column.level(); --l) up = floor_div(up, column.base());
  return up == column.index() && o.bottom() >= bottom() && o.top() <= top();
}

std::string Rect::str() const {
  return fmt::format("{} x [{}, {}]", column.str(), to_string(bottom()), to_string(top()));
}

Rect RectFamily::rect(std::size_t k) const {
  return Rect{BAdicInterval(base, level, from_u64(k)), midlines.at(k), half_height};
}

RectFamily build_family(Instance& inst, unsigned n, MidlineSource source) {
  check_cells(inst.base(), static_cast<int>(n), "rectangles in the level-" + std::to_string(n) + " family");
  RectFamily fam;
  fam.kind = inst.kind();
  fam.instance = inst.id();
  fam.base = inst.base();
  fam.level = n;
  fam.half_height = inst.half_height(n);
  const std::uint64_t count = to_u64(ipow(inst.base(), n));
  fam.midlines.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    BigInt kb = from_u64(k);
    fam.midlines.push_back(source == MidlineSource::Definition ? inst.midline_definition(n, kb) : inst.midline(n, kb));
  }
  return fam;
}

NestingReport verify_nesting(const RectFamily& parent, const RectFamily& child) {
  if (child.level != parent.level + 1)
    throw LevelMismatch(fmt::format("nesting needs consecutive levels, got {} and {}", parent.level, child.level));
  if (child.kind != parent.kind || child.base != parent.base || child.instance != parent.instance)
    throw LevelMismatch("nesting compares families of one instance and kind");
  NestingReport rep;
  rep.level = parent.level;
  const auto b = static_cast<std::size_t>(parent.base);
  for (std::size_t k = 0; k < parent.size(); ++k) {
    const Rational plo = parent.midlines[k] - parent.half_height;
    const Rational phi = parent.midlines[k] + parent.half_height;
    for (std::size_t i = 0; i < b; ++i) {
      const Rational& m = child.midlines[b * k + i];
      ++rep.checked;
      if (m - child.half_height < plo || m + child.half_height > phi) {
        rep.violation = NestingViolation{k, static_cast<int>(i), parent.rect(k), child.rect(b * k + i)};
        return rep;
      }
    }
  }
  return rep;
}

GraphReport verify_graph(Instance& inst, const RectFamily& fam) {
  GraphReport rep;
  rep.level = fam.level;
  const std::uint64_t count = fam.size();
  std::optional<Rational> right;  // value at k/b^n carried to the next column
  for (std::uint64_t k = 0; k < count; ++k) {
    const Rect r = fam.rect(k);
    const Rational lo = r.bottom(), hi = r.top();
    BAdicPoint xl(fam.base, from_u64(k), fam.level);
    Rational vl = right ? *right : inst.value(xl);
    ++rep.checked;
    if (vl < lo || vl > hi) {
      rep.violation = GraphViolation{k, xl, vl, r};
      return rep;
    }
    if (k + 1 == count) break;
    BAdicPoint xr(fam.base, from_u64(k + 1), fam.level);
    Rational vr = inst.value(xr);
    ++rep.checked;
    if (vr < lo || vr > hi) {
      rep.violation = GraphViolation{k, xr, vr, r};
      return rep;
    }
    right = vr;
  }
  return rep;
}

}  // namespace fraclim
