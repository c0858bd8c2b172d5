#include "torus/arcs.hpp"

#include <algorithm>

namespace torus {

ArcSet ArcSet::single(Rat lo, Rat hi) {
  if (lo > hi) throw std::invalid_argument("ArcSet: lo > hi");
  ArcSet s;
  s.arcs_.push_back({std::move(lo), std::move(hi)});
  return s;
}

Rat ArcSet::measure() const {
  Rat m(0);
  for (const auto& a : arcs_) m += a.length();
  return m;
}

std::size_t ArcSet::point_count() const {
  std::size_t n = 0;
  for (const auto& a : arcs_)
    if (a.degenerate()) ++n;
  return n;
}

void ArcSet::add(Rat lo, Rat hi) {
  if (lo > hi) throw std::invalid_argument("ArcSet::add: lo > hi");
  Arc arc{std::move(lo), std::move(hi)};
  // Ascending construction is the common case; keep it linear overall.
  if (arcs_.empty() || arcs_.back().hi < arc.lo) {
    arcs_.push_back(std::move(arc));
    return;
  }
  if (arcs_.back().lo <= arc.lo) {
    arcs_.back().hi = std::max(arcs_.back().hi, arc.hi);
    return;
  }
  std::vector<Arc> out;
  out.reserve(arcs_.size() + 1);
  bool placed = false;
  for (auto& a : arcs_) {
    if (a.hi < arc.lo) {
      out.push_back(std::move(a));
    } else if (arc.hi < a.lo) {
      if (!placed) {
        out.push_back(arc);
        placed = true;
      }
      out.push_back(std::move(a));
    } else {
      // Overlapping or touching: merge into the pending arc.
      arc.lo = std::min(arc.lo, a.lo);
      arc.hi = std::max(arc.hi, a.hi);
    }
  }
  if (!placed) out.push_back(arc);
  arcs_ = std::move(out);
}

bool ArcSet::contains(const Rat& x) const {
  for (const auto& a : arcs_) {
    if (x < a.lo) return false;
    if (x <= a.hi) return true;
  }
  return false;
}

ArcSet ArcSet::intersect(const ArcSet& o) const {
  ArcSet r;
  std::size_t i = 0, j = 0;
  while (i < arcs_.size() && j < o.arcs_.size()) {
    const Arc& a = arcs_[i];
    const Arc& b = o.arcs_[j];
    Rat lo = std::max(a.lo, b.lo);
    Rat hi = std::min(a.hi, b.hi);
    if (lo <= hi) r.arcs_.push_back({lo, hi});
    if (a.hi < b.hi)
      ++i;
    else
      ++j;
  }
  return r;
}

void ArcSet::subtract_open_many(std::vector<std::pair<Rat, Rat>> cuts) {
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                            [](const std::pair<Rat, Rat>& c) {
                              return c.first >= c.second;
                            }),
             cuts.end());
  if (cuts.empty()) return;
  std::sort(cuts.begin(), cuts.end());
  std::vector<Arc> out;
  out.reserve(arcs_.size() + cuts.size());
  std::size_t ci = 0;
  for (auto& a : arcs_) {
    // Cuts ending at or before this arc's start can never matter again.
    while (ci < cuts.size() && cuts[ci].second <= a.lo) ++ci;
    Rat pos = a.lo;  // left edge of the surviving remainder
    bool consumed = false;
    for (std::size_t cj = ci; cj < cuts.size() && cuts[cj].first < a.hi;
         ++cj) {
      const Rat& clo = cuts[cj].first;
      const Rat& chi = cuts[cj].second;
      if (chi <= pos) continue;
      if (clo >= pos) out.push_back({pos, clo});
      pos = chi;
      if (pos > a.hi) {
        consumed = true;
        break;
      }
    }
    if (!consumed) out.push_back({std::move(pos), std::move(a.hi)});
  }
  arcs_ = std::move(out);
}

void ArcSet::subtract_open(const Rat& lo, const Rat& hi) {
  if (lo >= hi) return;  // empty open arc
  std::vector<Arc> out;
  out.reserve(arcs_.size() + 1);
  for (auto& a : arcs_) {
    if (a.hi < lo || hi < a.lo || a.hi == lo || hi == a.lo) {
      // Disjoint, or touching only at a closed endpoint the open arc misses.
      out.push_back(std::move(a));
      continue;
    }
    if (a.lo <= lo) out.push_back({a.lo, lo});
    if (hi <= a.hi) out.push_back({hi, a.hi});
  }
  arcs_ = std::move(out);
}

}  // namespace torus
