#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "hullpeel/convex_peeling.hpp"
#include "hullpeel/sampling_experiments.hpp"

using namespace hullpeel;
using oracle::Q;

namespace {

Cloud2<Rational> grid_cloud(std::mt19937_64& rng, std::size_t n, long den) {
  Cloud2<Rational> c;
  for (std::size_t i = 0; i < n; ++i)
    c.push_back({oracle::grid_rational(rng, -3, 3, den), oracle::grid_rational(rng, -3, 3, den)});
  return c;
}

Cloud2<double> disk_cloud(std::uint64_t seed, std::size_t n) {
  SamplerSpec spec;
  spec.intensity = double(n);
  spec.seed = seed;
  return as_planar(sample(spec));
}

const Cloud2<double> kSquarePlusCenter{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};

}  // namespace

TEST_CASE("a triangle is one layer with height one inside") {
  const Cloud2<double> tri{{0, 0}, {4, 0}, {0, 4}};
  const auto l = peel(tri);
  CHECK(max_depth(l) == 1);
  CHECK(layer_counts(l) == std::vector<std::size_t>{3});
  CHECK(height(l, Vec2<double>{1, 1}) == 1);
  CHECK(height(l, Vec2<double>{2, 0}) == 0);
  CHECK(height(l, Vec2<double>{0, 0}) == 0);
  CHECK(height(l, Vec2<double>{5, 5}) == 0);
  CHECK(max_height(l) == 1);
}

TEST_CASE("square plus center") {
  const auto l = peel(kSquarePlusCenter);
  CHECK(layer_counts(l) == std::vector<std::size_t>{4, 1});
  CHECK(l.layer_of_point() == std::vector<int>{1, 1, 1, 1, 2});
  CHECK(height(l, Vec2<double>{0.5, 0.5}) == 1);
  CHECK(height(l, Vec2<double>{-1, 0.5}) == 0);
  // K_2 is a single point, so the maximum height is attained in K_1 only.
  CHECK(max_height(l) == 1);
}

TEST_CASE("edge-interior points leave with their layer") {
  const Cloud2<Rational> c{{0, 0}, {2, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}};
  const auto l = peel(c);
  CHECK(l.layer_of_point() == std::vector<int>{1, 1, 1, 1, 1, 2});
  CHECK(height(l, Q{2, 0}) == 0);
}

TEST_CASE("peeling matches the brute-force definition on exact grid clouds") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const auto c = grid_cloud(rng, 1 + trial % 30, trial % 3 ? 2 : 1);
    const auto expected = oracle::convex_layers(c);
    const auto l = peel(c);
    REQUIRE(l.layer_of_point() == expected);

    Cloud2<double> cd;
    for (const auto& p : c) cd.push_back({p.x.get_d(), p.y.get_d()});
    CHECK(peel(cd).layer_of_point() == expected);

    for (int k = 0; k < 10; ++k) {
      const Q x{oracle::grid_rational(rng, -3, 3, 4), oracle::grid_rational(rng, -3, 3, 4)};
      CHECK(height(l, x) == oracle::convex_height(c, expected, x));
    }
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(height(l, c[i]) == expected[i] - 1);
    const std::size_t bound = (c.size() + 2) / 3;
    CHECK(l.num_layers() <= bound);
  }
}

TEST_CASE("disk-filtered peeling agrees with the reference peel") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto c = disk_cloud(seed, 3000);
    if (seed == 3) {
      // Snap to a coarse lattice so that collinear and repeated points occur.
      for (auto& p : c) p = {std::round(p.x * 40) / 40, std::round(p.y * 40) / 40};
    }
    const auto fast = detail::peel_with_disk_filter(std::span<const Vec2<double>>(c));
    const auto ref = detail::peel_reference(std::span<const Vec2<double>>(c));
    CHECK(fast.layer_of_point() == ref.layer_of_point());
    CHECK(peel(c).layer_of_point() == ref.layer_of_point());
  }
}

TEST_CASE("peel_prefix reproduces the outer layers") {
  const auto c = disk_cloud(4, 2000);
  const auto full = peel(c);
  const auto prefix = peel_prefix(std::span<const Vec2<double>>(c), 5);
  REQUIRE(prefix.num_layers() == 5);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int lf = full.layer_of_point()[i];
    CHECK(prefix.layer_of_point()[i] == (lf <= 5 ? lf : 0));
  }
}

TEST_CASE("nested hulls and partition") {
  const auto c = disk_cloud(5, 10000);
  const auto l = peel(c);
  const auto counts = layer_counts(l);
  CHECK(std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == 10000);
  // Every point of layer n + 1 is strictly inside K_n.
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int n = l.layer_of_point()[i];
    if (n > 1) CHECK(l.in_interior(n - 1, c[i]));
    CHECK(!l.in_interior(n, c[i]));
  }
}

TEST_CASE("max layer of 1e5 uniform disk points lies in the sanity window") {
  const auto l = peel(disk_cloud(1, 100000));
  const double center = std::pow(M_PI, -2.0 / 3.0) * std::pow(1e5, 2.0 / 3.0);
  CHECK(max_depth(l) >= 0.8 * center);
  CHECK(max_depth(l) <= 1.25 * center);
}

TEST_CASE("dynamic programming principle") {
  const Cloud2<Rational> single{{0, 0}};
  CHECK(verify_dpp(std::span<const Vec2<Rational>>(single)).ok);
  const Cloud2<Rational> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {Rational(1, 2), Rational(1, 2)}};
  CHECK(verify_dpp(std::span<const Vec2<Rational>>(sq)).ok);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = grid_cloud(rng, 32, 2);
    const auto r = verify_dpp(std::span<const Vec2<Rational>>(c));
    CHECK_MESSAGE(r.ok, r.detail);
  }
  const auto big = grid_cloud(rng, 65, 2);
  CHECK_THROWS_AS(verify_dpp(std::span<const Vec2<Rational>>(big)), std::invalid_argument);
}

TEST_CASE("layer indices are affine invariant in exact mode") {
  std::mt19937_64 rng(41);
  const auto c = from_planar(std::span<const Vec2<Rational>>(grid_cloud(rng, 48, 2)));
  CHECK(check_affine_invariance(c, ExactAffineMap::identity(2)).ok);
  CHECK(check_affine_invariance(c, ExactAffineMap(2, {0, -1, 1, 0}, {0, 0})).ok);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = from_planar(std::span<const Vec2<Rational>>(grid_cloud(rng, 48, 2)));
    const ExactAffineMap shear(2, {1, oracle::grid_rational(rng, -3, 3, 7), 0, 1},
                               {oracle::grid_rational(rng, -1, 1, 3), 0});
    const auto r = check_affine_invariance(d, shear);
    CHECK_MESSAGE(r.ok, r.detail);
  }
}

TEST_CASE("heights are monotone in the cloud") {
  std::mt19937_64 rng(51);
  std::bernoulli_distribution keep(0.6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto y = grid_cloud(rng, 64, 2);
    Cloud2<Rational> x;
    for (const auto& p : y)
      if (keep(rng)) x.push_back(p);
    const auto lx = peel(x), ly = peel(y);
    for (int k = 0; k < 40; ++k) {
      const Q q{oracle::grid_rational(rng, -3, 3, 5), oracle::grid_rational(rng, -3, 3, 5)};
      CHECK(height(lx, q) <= height(ly, q));
    }
  }
}

TEST_CASE("layer CSV and SVG output") {
  const auto l = peel(kSquarePlusCenter);
  std::ostringstream csv;
  write_layers_csv(csv, l);
  CHECK(csv.str() == "point_index,layer\n0,1\n1,1\n2,1\n3,1\n4,2\n");

  CHECK(svg_layer_selection(95, 0).size() <= 10);
  CHECK(svg_layer_selection(95, 0).front() == 1);
  CHECK(svg_layer_selection(7, 3) == std::vector<std::size_t>{1, 4, 7});

  const auto big = peel(disk_cloud(6, 3000));
  for (std::size_t every : {0u, 5u}) {
    SvgOptions o;
    o.every = every;
    o.draw_points = false;
    std::ostringstream svg;
    write_layers_svg(svg, big, o);
    const std::string s = svg.str();
    std::vector<std::size_t> drawn;
    const std::string key = "data-layer=\"";
    for (auto pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + 1))
      drawn.push_back(std::stoul(s.substr(pos + key.size())));
    CHECK(drawn == svg_layer_selection(big.num_layers(), every));
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);
  }
}
