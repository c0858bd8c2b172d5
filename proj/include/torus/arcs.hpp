#pragma once

#include <utility>
#include <vector>

#include "torus/numbers.hpp"

namespace torus {

// Closed arc [lo, hi] on the line; degenerate (lo == hi) arcs are points.
struct Arc {
  Rat lo, hi;
  bool degenerate() const { return lo == hi; }
  Rat length() const { return hi - lo; }
};

// Finite union of disjoint closed arcs, kept sorted. Arcs live on the real
// line; circle semantics are handled by the callers (who keep everything in
// a window like [0, 1] or [0, 2) and split seam-crossing arcs themselves).
class ArcSet {
 public:
  ArcSet() = default;
  static ArcSet single(Rat lo, Rat hi);
  static ArcSet unit() { return single(Rat(0), Rat(1)); }

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool empty() const { return arcs_.empty(); }
  Rat measure() const;
  std::size_t point_count() const;  // number of degenerate arcs

  void add(Rat lo, Rat hi);  // union with [lo, hi], merging neighbors
  bool contains(const Rat& x) const;

  ArcSet intersect(const ArcSet& o) const;

  // Removes the open arc (lo, hi); closed remainders (possibly degenerate)
  // stay.
  void subtract_open(const Rat& lo, const Rat& hi);

  // Removes every open arc of the batch in one sorted sweep; same result as
  // subtracting them one by one.
  void subtract_open_many(std::vector<std::pair<Rat, Rat>> cuts);

 private:
  std::vector<Arc> arcs_;
};

}  // namespace torus
