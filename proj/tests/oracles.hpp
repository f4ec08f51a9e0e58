#ifndef HULLPEEL_TESTS_ORACLES_HPP
#define HULLPEEL_TESTS_ORACLES_HPP

// Brute-force reference computations, exact in rationals. Deliberately slow
// and independent of the library's hull code.

#include <random>
#include <vector>

#include "hullpeel/geometry.hpp"
#include "hullpeel/semiconvex_peeling.hpp"

namespace oracle {

using hullpeel::Cloud2;
using hullpeel::Rational;
using hullpeel::Vec2;
using Q = Vec2<Rational>;

inline Rational dot(const Q& a, const Q& b) { return a.x * b.x + a.y * b.y; }
inline Q sub(const Q& a, const Q& b) { return {a.x - b.x, a.y - b.y}; }
inline Q perp(const Q& v) { return {-v.y, v.x}; }

// Is there a nonzero nu with nu . (q - x) <= 0 for all q, drawn from the
// admissible cone? The feasible cone's extreme rays are normal to some q - x
// or lie on the cone's own boundary, so those candidates suffice.
template <class Admissible>
bool supporting_direction(const Cloud2<Rational>& set, const Q& x, const std::vector<Q>& extra_candidates,
                          Admissible admissible) {
  std::vector<Q> cands = extra_candidates;
  for (const auto& q : set) {
    const Q v = sub(q, x);
    if (v.x == 0 && v.y == 0) continue;
    cands.push_back(perp(v));
    cands.push_back({-perp(v).x, -perp(v).y});
  }
  for (const auto& nu : cands) {
    if (!admissible(nu)) continue;
    bool ok = true;
    for (const auto& q : set)
      if (dot(nu, sub(q, x)) > 0) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

/// x in the open interior of conv(set).
inline bool in_open_hull(const Cloud2<Rational>& set, const Q& x) {
  if (set.empty()) return false;
  return !supporting_direction(set, x, {{1, 0}, {0, 1}}, [](const Q&) { return true; });
}

/// 1-based convex layer of every point by definition: a layer is every point
/// outside the open hull of the survivors.
inline std::vector<int> convex_layers(const Cloud2<Rational>& cloud) {
  std::vector<int> layer(cloud.size(), 0);
  std::vector<std::size_t> alive(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) alive[i] = i;
  for (int n = 1; !alive.empty(); ++n) {
    Cloud2<Rational> pts;
    for (auto i : alive) pts.push_back(cloud[i]);
    std::vector<std::size_t> next;
    for (auto i : alive) {
      if (in_open_hull(pts, cloud[i])) next.push_back(i);
      else layer[i] = n;
    }
    alive = next;
  }
  return layer;
}

/// h_X(x) from the oracle layers.
inline int convex_height(const Cloud2<Rational>& cloud, const std::vector<int>& layer, const Q& x) {
  int h = 0;
  for (int n = 1;; ++n) {
    Cloud2<Rational> k;
    for (std::size_t i = 0; i < cloud.size(); ++i)
      if (layer[i] >= n) k.push_back(cloud[i]);
    if (k.empty() || !in_open_hull(k, x)) return h;
    ++h;
  }
}

/// Lifted x in the open region above the lower hull of the lifted set,
/// strictly between its extreme abscissae: no supporting direction with a
/// nonpositive vertical component.
inline bool in_open_semiconvex(const Cloud2<Rational>& set, const Q& x) {
  if (set.empty()) return false;
  Cloud2<Rational> lifted;
  for (const auto& p : set) lifted.push_back(hullpeel::lift(p));
  return !supporting_direction(lifted, hullpeel::lift(x), {{1, 0}, {-1, 0}},
                               [](const Q& nu) { return nu.y <= 0; });
}

/// First semiconvex layer by direct parabolas: z is on it iff some line
/// through lift(z) has every other lifted point on or above it (the apex of
/// the matching parabola, at height z2 + (a - z1)^2 / 2, is always in H).
/// Only meaningful for distinct first coordinates.
inline bool on_first_semiconvex_layer(const Cloud2<Rational>& set, std::size_t zi) {
  const Q u = hullpeel::lift(set[zi]);
  bool has_lo = false, has_hi = false;
  Rational lo, hi;
  for (std::size_t j = 0; j < set.size(); ++j) {
    if (j == zi) continue;
    const Q w = hullpeel::lift(set[j]);
    const Rational slope = (w.y - u.y) / (w.x - u.x);
    if (w.x > u.x) {
      if (!has_hi || slope < hi) hi = slope;
      has_hi = true;
    } else {
      if (!has_lo || slope > lo) lo = slope;
      has_lo = true;
    }
  }
  return !(has_lo && has_hi) || lo <= hi;
}

inline std::vector<int> semiconvex_layers(const Cloud2<Rational>& cloud) {
  std::vector<int> layer(cloud.size(), 0);
  std::vector<std::size_t> alive(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) alive[i] = i;
  for (int n = 1; !alive.empty(); ++n) {
    Cloud2<Rational> pts;
    for (auto i : alive) pts.push_back(cloud[i]);
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < alive.size(); ++k) {
      if (on_first_semiconvex_layer(pts, k)) layer[alive[k]] = n;
      else next.push_back(alive[k]);
    }
    alive = next;
  }
  return layer;
}

inline int semiconvex_height(const Cloud2<Rational>& cloud, const std::vector<int>& layer, const Q& x) {
  int s = 0;
  for (int n = 1;; ++n) {
    Cloud2<Rational> k;
    for (std::size_t i = 0; i < cloud.size(); ++i)
      if (layer[i] >= n) k.push_back(cloud[i]);
    if (k.empty() || !in_open_semiconvex(k, x)) return s;
    ++s;
  }
}

/// k / den on a coarse grid so that ties and collinearities are common.
inline Rational grid_rational(std::mt19937_64& rng, long lo, long hi, long den) {
  Rational q(std::uniform_int_distribution<long>(lo * den, hi * den)(rng), den);
  q.canonicalize();
  return q;
}

}  // namespace oracle

#endif  // HULLPEEL_TESTS_ORACLES_HPP
