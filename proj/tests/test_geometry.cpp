#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "hullpeel/geometry.hpp"

using namespace hullpeel;
using oracle::Q;

namespace {

PointCloud planar(std::initializer_list<std::pair<double, double>> pts) {
  PointCloud c(2);
  for (auto [x, y] : pts) c.push_back({x, y});
  return c;
}

std::set<std::size_t> as_set(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

// p in the closed hull of the others: on a point, a segment or a triangle.
bool in_closed_hull_of_others(const Cloud2<Rational>& c, std::size_t p) {
  std::vector<std::size_t> o;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (i != p) o.push_back(i);
  const auto on_segment = [&](const Q& a, const Q& b) {
    if (orientation(a, b, c[p]) != 0) return false;
    return std::min(a.x, b.x) <= c[p].x && c[p].x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c[p].y &&
           c[p].y <= std::max(a.y, b.y);
  };
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (c[o[i]] == c[p]) return true;
    for (std::size_t j = i + 1; j < o.size(); ++j) {
      if (on_segment(c[o[i]], c[o[j]])) return true;
      for (std::size_t k = j + 1; k < o.size(); ++k) {
        const int s1 = orientation(c[o[i]], c[o[j]], c[p]);
        const int s2 = orientation(c[o[j]], c[o[k]], c[p]);
        const int s3 = orientation(c[o[k]], c[o[i]], c[p]);
        if ((s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0)) {
          if (orientation(c[o[i]], c[o[j]], c[o[k]]) != 0) return true;
        }
      }
    }
  }
  return false;
}

Cloud2<Rational> distinct_grid_cloud(std::mt19937_64& rng, std::size_t n, long den) {
  Cloud2<Rational> c;
  while (c.size() < n) {
    Q p{oracle::grid_rational(rng, -3, 3, den), oracle::grid_rational(rng, -3, 3, den)};
    if (std::find(c.begin(), c.end(), p) == c.end()) c.push_back(p);
  }
  return c;
}

}  // namespace

TEST_CASE("orientation signs of small simplices") {
  CHECK(orientation(planar({{0, 0}, {1, 0}, {0, 1}})) == 1);
  CHECK(orientation(planar({{0, 0}, {1, 1}, {2, 2}})) == 0);
  CHECK(orientation(planar({{0, 0}, {0, 1}, {1, 0}})) == -1);

  PointCloud tet(3);
  tet.push_back({0, 0, 0});
  tet.push_back({1, 0, 0});
  tet.push_back({0, 1, 0});
  tet.push_back({0, 0, 1});
  CHECK(orientation(tet) == 1);
  CHECK(orientation(to_exact(tet)) == 1);

  CHECK_THROWS_AS(orientation(planar({{0, 0}, {1, 0}})), std::invalid_argument);
}

TEST_CASE("orientation is antisymmetric and agrees with exact arithmetic near degeneracy") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 2000; ++i) {
    // Nearly collinear: c is a perturbation of a point on the line ab.
    const double ax = u(rng), ay = u(rng), bx = u(rng), by = u(rng), t = u(rng);
    const double cx = ax + t * (bx - ax) + (i % 2 ? 0.0 : u(rng) * 1e-17);
    const double cy = ay + t * (by - ay);
    const int fast = orient2d(ax, ay, bx, by, cx, cy);
    const int exact = orient2d(Rational(ax), Rational(ay), Rational(bx), Rational(by), Rational(cx), Rational(cy));
    CHECK(fast == exact);
    CHECK(orient2d(bx, by, ax, ay, cx, cy) == -fast);
  }
}

TEST_CASE("convex hull examples") {
  const Cloud2<double> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  auto h = convex_hull(std::span<const Vec2<double>>(square));
  CHECK(as_set(h.vertices) == std::set<std::size_t>{0, 1, 2, 3});
  CHECK(h.facets.size() == 4);

  const Cloud2<double> line{{0, 0}, {1, 0}, {2, 0}};
  h = convex_hull(std::span<const Vec2<double>>(line));
  CHECK(as_set(h.vertices) == std::set<std::size_t>{0, 2});
  CHECK(h.facets.empty());
}

TEST_CASE("every hull facet supports the whole cloud (100 points in the disk, exact check)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  Cloud2<double> c;
  while (c.size() < 100) {
    const double x = u(rng), y = u(rng);
    if (x * x + y * y < 1) c.push_back({x, y});
  }
  Cloud2<Rational> e;
  for (const auto& p : c) e.push_back({Rational(p.x), Rational(p.y)});
  const auto h = convex_hull(std::span<const Vec2<Rational>>(e));
  REQUIRE(h.facets.size() >= 3);
  for (const auto& f : h.facets) {
    for (const auto& p : e) CHECK(oracle::dot(f.outward_normal, p) <= f.offset);
    for (auto v : f.vertex_indices) CHECK(oracle::dot(f.outward_normal, e[v]) == f.offset);
  }
}

TEST_CASE("hull vertices are exactly the extreme points (brute force, n <= 30)") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = distinct_grid_cloud(rng, 3 + trial % 28, trial % 2 ? 2 : 1);
    const auto h = convex_hull(std::span<const Vec2<Rational>>(c));
    std::set<std::size_t> extreme;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!in_closed_hull_of_others(c, i)) extreme.insert(i);
    CHECK(as_set(h.vertices) == extreme);
  }
}

TEST_CASE("lower hull examples and brute force") {
  const Cloud2<double> cap{{0, 0}, {1, 1}, {2, 0}};
  CHECK(as_set(lower_hull(std::span<const Vec2<double>>(cap)).vertices) == std::set<std::size_t>{0, 2});
  const Cloud2<double> cup{{0, 0}, {1, -1}, {2, 0}};
  CHECK(as_set(lower_hull(std::span<const Vec2<double>>(cup)).vertices) == std::set<std::size_t>{0, 1, 2});

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = distinct_grid_cloud(rng, 50, 4);
    const auto hull = convex_hull(std::span<const Vec2<Rational>>(c));
    const auto lower = lower_hull(std::span<const Vec2<Rational>>(c));
    std::set<std::size_t> expected;
    for (auto v : hull.vertices) {
      // Some non-vertical line through c[v] with every point on or above it.
      bool has_lo = false, has_hi = false, blocked = false;
      Rational lo, hi;
      for (const auto& q : c) {
        if (q == c[v]) continue;
        if (q.x == c[v].x) {
          blocked = blocked || q.y < c[v].y;
          continue;
        }
        const Rational s = (q.y - c[v].y) / (q.x - c[v].x);
        if (q.x > c[v].x) {
          if (!has_hi || s < hi) hi = s;
          has_hi = true;
        } else {
          if (!has_lo || s > lo) lo = s;
          has_lo = true;
        }
      }
      if (!blocked && (!(has_lo && has_hi) || lo <= hi)) expected.insert(v);
    }
    CHECK(as_set(lower.vertices) == expected);
    for (auto v : lower.vertices) CHECK(as_set(hull.vertices).count(v) == 1);
    for (const auto& f : lower.facets) CHECK(f.outward_normal.y < 0);
  }
}

TEST_CASE("affine maps") {
  const auto id = AffineMap::identity(2);
  const auto c = planar({{1, 2}, {-3, 0.5}});
  CHECK(affine_apply(id, c) == c);

  const AffineMap twice(2, {2, 0, 0, 2}, {0, 0});
  CHECK(affine_apply(twice, planar({{1, 0}})) == planar({{2, 0}}));

  const AffineMap shear(2, {1, 1, 0, 1}, {0, 0});
  CHECK(affine_apply(shear, planar({{0, 0}, {1, 0}, {1, 1}, {0, 1}})) == planar({{0, 0}, {1, 0}, {2, 1}, {1, 1}}));

  CHECK_THROWS_AS(AffineMap(2, {1, 2, 2, 4}, {0, 0}), std::invalid_argument);
}

TEST_CASE("exact hulls commute with rational affine maps") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = distinct_grid_cloud(rng, 20, 2);
    std::vector<Rational> m(4);
    do {
      for (auto& v : m) v = oracle::grid_rational(rng, -2, 2, 3);
    } while (m[0] * m[3] - m[1] * m[2] == 0);
    const ExactAffineMap a(2, m, {oracle::grid_rational(rng, -2, 2, 5), oracle::grid_rational(rng, -2, 2, 5)});
    const auto image = as_planar(affine_apply(a, from_planar(std::span<const Vec2<Rational>>(c))));
    CHECK(as_set(convex_hull(std::span<const Vec2<Rational>>(c)).vertices) ==
          as_set(convex_hull(std::span<const Vec2<Rational>>(image)).vertices));
  }
}

TEST_CASE("cloud CSV round trip") {
  const auto c = planar({{0.1, -2}, {3e-300, 1.0 / 3}});
  std::stringstream s;
  write_cloud_csv(s, c);
  CHECK(s.str().rfind("x1,x2\n", 0) == 0);
  CHECK(read_cloud_csv(s) == c);

  std::stringstream bare("1,2\n3,4\n");
  CHECK(read_cloud_csv(bare) == planar({{1, 2}, {3, 4}}));
  std::stringstream ragged("1,2\n3\n");
  CHECK_THROWS(read_cloud_csv(ragged));
}
