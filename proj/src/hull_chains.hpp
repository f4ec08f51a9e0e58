// Monotone-chain building blocks shared by the hull and peeling routines.
// Inputs are accessed through a callable returning the k-th point of a
// sequence already sorted lexicographically by (x, y).
#ifndef HULLPEEL_SRC_HULL_CHAINS_HPP
#define HULLPEEL_SRC_HULL_CHAINS_HPP

#include <cstddef>
#include <vector>

#include "hullpeel/geometry.hpp"

namespace hullpeel::detail {

template <class S>
bool lex_less(const Vec2<S>& a, const Vec2<S>& b) {
  if (a.x < b.x) return true;
  if (b.x < a.x) return false;
  return a.y < b.y;
}

/// Strict lower and upper chains (no collinear interior vertices), both
/// running from the first to the last sorted point. Positions index the
/// sorted sequence.
template <class Get>
void build_chains(std::size_t n, Get&& pt, std::vector<std::size_t>& lower,
                  std::vector<std::size_t>& upper) {
  lower.clear();
  upper.clear();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = pt(k);
    while (lower.size() >= 2 &&
           orientation(pt(lower[lower.size() - 2]), pt(lower.back()), p) <= 0)
      lower.pop_back();
    lower.push_back(k);
    while (upper.size() >= 2 &&
           orientation(pt(upper[upper.size() - 2]), pt(upper.back()), p) >= 0)
      upper.pop_back();
    upper.push_back(k);
  }
}

/// Flags every sorted point lying on the boundary of the hull described by
/// `lower`/`upper`: chain vertices, points interior to an edge, and points on
/// the vertical sides at the extreme abscissae. Collinear input flags all.
template <class Get>
void mark_hull_boundary(std::size_t n, Get&& pt, const std::vector<std::size_t>& lower,
                        const std::vector<std::size_t>& upper, std::vector<char>& flag) {
  flag.assign(n, 0);
  if (n == 0) return;
  for (std::size_t k : lower) flag[k] = 1;
  for (std::size_t k : upper) flag[k] = 1;
  const auto& xmin = pt(0).x;
  const auto& xmax = pt(n - 1).x;
  std::size_t li = 0;
  std::size_t ui = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (flag[k]) continue;
    const auto& p = pt(k);
    if (p.x == xmin || p.x == xmax) {
      flag[k] = 1;
      continue;
    }
    while (pt(lower[li + 1]).x < p.x) ++li;
    if (orientation(pt(lower[li]), pt(lower[li + 1]), p) == 0) {
      flag[k] = 1;
      continue;
    }
    while (pt(upper[ui + 1]).x < p.x) ++ui;
    if (orientation(pt(upper[ui]), pt(upper[ui + 1]), p) == 0) flag[k] = 1;
  }
}

/// Lower chain over column minima only: within each run of equal x the first
/// (lowest) point is the only one with a non-vertical support from below.
template <class Get>
void build_lower_column_chain(std::size_t n, Get&& pt, std::vector<std::size_t>& lower) {
  lower.clear();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = pt(k);
    if (k > 0 && pt(k - 1).x == p.x) continue;
    while (lower.size() >= 2 &&
           orientation(pt(lower[lower.size() - 2]), pt(lower.back()), p) <= 0)
      lower.pop_back();
    lower.push_back(k);
  }
}

/// Flags points on the lower boundary traced by a column-minimum chain:
/// chain vertices, their exact duplicates, and column minima on an edge.
template <class Get>
void mark_lower_boundary(std::size_t n, Get&& pt, const std::vector<std::size_t>& lower,
                         std::vector<char>& flag) {
  flag.assign(n, 0);
  if (n == 0) return;
  std::size_t li = 0;
  std::size_t column_start = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = pt(k);
    if (k == 0 || !(pt(k - 1).x == p.x)) column_start = k;
    const auto& col = pt(column_start);
    if (!(col.y == p.y)) continue;  // strictly above its column minimum
    if (lower.size() == 1) {
      flag[k] = 1;
      continue;
    }
    while (li + 1 < lower.size() && pt(lower[li + 1]).x < p.x) ++li;
    if (li + 1 == lower.size()) {
      flag[k] = 1;  // rightmost column minimum
      continue;
    }
    if (pt(lower[li]).x == p.x || pt(lower[li + 1]).x == p.x) {
      // Same column as a chain vertex; the column minimum is that vertex.
      flag[k] = 1;
      continue;
    }
    if (orientation(pt(lower[li]), pt(lower[li + 1]), p) == 0) flag[k] = 1;
  }
}

}  // namespace hullpeel::detail

#endif  // HULLPEEL_SRC_HULL_CHAINS_HPP
