#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace dyncon {

// Axis-aligned box with closed integer endpoints, lo[i] <= hi[i] per axis.
struct GeomObject {
  int64_t id = -1;
  std::vector<int64_t> lo;
  std::vector<int64_t> hi;

  int dim() const { return static_cast<int>(lo.size()); }

  bool valid() const {
    if (lo.size() != hi.size() || lo.empty()) return false;
    for (size_t i = 0; i < lo.size(); ++i)
      if (lo[i] > hi[i]) return false;
    return true;
  }
};

// Closed-interval test on every axis: touching boundaries intersect.
inline bool intersects(const GeomObject& a, const GeomObject& b) {
  assert(a.dim() == b.dim());
  for (int i = 0; i < a.dim(); ++i)
    if (a.lo[i] > b.hi[i] || b.lo[i] > a.hi[i]) return false;
  return true;
}

}  // namespace dyncon
