#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"

#include "hullpeel/limit_pde.hpp"

using namespace hullpeel;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Independent profile: composite Simpson after s = w^3, which removes the
// s^{(d-1)/(d+1)} cusp at the origin.
double h_simpson(double r, const std::function<double(double)>& f0, int d, double upper) {
  const double a = std::cbrt(r), b = std::cbrt(upper);
  const int n = 200000;
  const double step = (b - a) / n;
  const auto g = [&](double w) {
    const double s = w * w * w;
    const double f = f0(s);
    if (f <= 0) return 0.0;
    return std::pow(s, double(d - 1) / (d + 1)) * std::pow(f, 2.0 / (d + 1)) * 3 * w * w;
  };
  double sum = g(a) + g(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4 : 2) * g(a + i * step);
  return sum * step / 3;
}

double gaussian_f0(double s, int d) { return std::exp(-s * s / 2) / std::pow(2 * M_PI, d / 2.0); }

}  // namespace

TEST_CASE("F on the identity") {
  for (int d : {2, 3, 4}) {
    Vector e = Vector::Zero(d);
    e(d - 1) = 1;
    CHECK(F(e, -Matrix::Identity(d, d)) == doctest::Approx(1));
    CHECK(F(e, Matrix::Identity(d, d)) == 0);
    CHECK(F(Vector::Zero(d), -Matrix::Identity(d, d)) == 0);
  }
  Matrix ns(2, 2);
  ns << 0, 1, 0, 0;
  CHECK_THROWS_AS(F(vec({1, 0}), ns), std::invalid_argument);
  CHECK_THROWS_AS(F(vec({1, 0, 0}), -Matrix::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("F is affinely covariant and monotone") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 3;
    Vector p(d);
    Matrix m(d, d), b(d, d), n(d, d);
    for (int i = 0; i < d; ++i) {
      p(i) = g(rng);
      for (int j = 0; j < d; ++j) {
        m(i, j) = g(rng);
        b(i, j) = g(rng);
        n(i, j) = g(rng);
      }
    }
    const Matrix a = -(m * m.transpose());
    if (std::abs(b.determinant()) < 0.2) continue;
    const double lhs = F(b.transpose() * p, b.transpose() * a * b);
    const double rhs = b.determinant() * b.determinant() * F(p, a);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    const Matrix lower = a - n * n.transpose();
    CHECK(F(p, lower) >= F(p, a) * (1 - 1e-12));
  }
}

TEST_CASE("radial profile values") {
  const auto ball = RadialDensity::uniform_ball(2);
  CHECK(h_radial(1.0, ball) == doctest::Approx(0).epsilon(1e-15));
  CHECK(h_radial(0.0, ball) == doctest::Approx(3.0 / (4.0 * std::pow(M_PI, 2.0 / 3.0))).epsilon(1e-14));
  CHECK(h_radial(0.0, ball) == doctest::Approx(0.349650).epsilon(5e-5));
  CHECK(h_radial(2.0, ball) == 0);
  CHECK_THROWS_AS(h_radial(-0.1, ball), std::invalid_argument);

  const auto gauss = RadialDensity::gaussian(2);
  const double h0 = 0.5 * std::pow(3.0 / (2 * M_PI), 2.0 / 3.0) * std::tgamma(2.0 / 3.0);
  CHECK(h_radial(0.0, gauss) == doctest::Approx(h0).epsilon(1e-13));
  const double oracle = h_simpson(0.0, [](double s) { return gaussian_f0(s, 2); }, 2, 14.0);
  CHECK(h_radial(0.0, gauss) == doctest::Approx(oracle).epsilon(1e-9));

  for (int d : {2, 3}) {
    const auto f = RadialDensity::gaussian(d);
    for (double r : {0.3, 1.1, 2.5}) {
      const double o = h_simpson(r, [d](double s) { return gaussian_f0(s, d); }, d, 14.0);
      CHECK(h_radial(r, f) == doctest::Approx(o).epsilon(1e-9));
    }
    const auto b = RadialDensity::uniform_ball(d);
    for (double r : {0.0, 0.4, 0.9}) {
      const double o = h_simpson(r, [d](double s) { return s <= 1 ? 1 / unit_ball_volume(d) : 0.0; }, d, 1.0);
      CHECK(h_radial(r, b) == doctest::Approx(o).epsilon(1e-9));
    }
  }
}

TEST_CASE("closed forms agree with generic quadrature on 100 radii") {
  for (int d : {2, 3}) {
    for (const auto& f : {RadialDensity::uniform_ball(d), RadialDensity::gaussian(d)}) {
      const double reach = f.kind == DensityKind::gaussian ? 5.0 : 1.0;
      double prev = INFINITY;
      for (int i = 0; i < 100; ++i) {
        const double r = reach * i / 100.0;
        const double h = h_radial(r, f);
        CHECK(std::abs(h - h_radial_quadrature(r, f)) <= 1e-10);
        CHECK(h <= prev);
        prev = h;
      }
    }
  }
}

TEST_CASE("affine frames") {
  auto framed = RadialDensity::uniform_ball(2);
  framed.frame = AffineFrame{Matrix::Identity(2, 2), Vector::Zero(2)};
  const auto plain = RadialDensity::uniform_ball(2);
  CHECK(h_affine(vec({0.3, 0.4}), framed) == doctest::Approx(h_radial(0.5, plain)));

  framed.frame->b = vec({0.1, -0.2});
  CHECK(h_affine(vec({0.2, 0.3}), framed) == doctest::Approx(h_radial(std::hypot(0.3, 0.1), plain)));

  Matrix sigma(2, 2);
  sigma << 2.0, 0.5, 0.5, 1.0;
  const Vector mu = vec({0.5, -1.0});
  const auto g = RadialDensity::gaussian(mu, sigma);
  const Vector x = vec({1.2, 0.1});
  // |Sigma^{-1/2}(x - mu)| without forming the square root.
  const double q = std::sqrt((x - mu).dot(sigma.inverse() * (x - mu)));
  const double o = h_simpson(q, [](double s) { return gaussian_f0(s, 2); }, 2, 14.0);
  CHECK(h_affine(x, g) == doctest::Approx(o).epsilon(1e-9));
  CHECK(g(x) == doctest::Approx(std::exp(-q * q / 2) / (2 * M_PI * std::sqrt(sigma.determinant()))));
}

TEST_CASE("layer-count law") {
  const double alpha = 4.0 / 3.0;
  const auto ball = RadialDensity::uniform_ball(2);
  CHECK(N_of_t(0, ball, alpha) == doctest::Approx(2 * std::pow(M_PI, 2.0 / 3.0) / alpha).epsilon(1e-12));
  const double top = alpha * h_radial(0, ball);
  // Square-root vanishing at the top: N(t) / sqrt(1 - t / top) is constant.
  const double n0 = N_of_t(0, ball, alpha);
  for (double q : {0.9, 0.99, 0.999999})
    CHECK(N_of_t(q * top, ball, alpha) / std::sqrt(1 - q) == doctest::Approx(n0).epsilon(1e-6));
  CHECK_THROWS_AS(N_of_t(top * 1.01, ball, alpha), std::invalid_argument);
  CHECK_THROWS_AS(N_of_t(-0.1, ball, alpha), std::invalid_argument);

  const auto gauss = RadialDensity::gaussian(2);
  const double gtop = alpha * h_radial(0, gauss);
  for (double q : {0.1, 0.5, 0.9}) {
    const double t = q * gtop;
    // Oracle: bisection on the Simpson profile, then the radial formula.
    double lo = 0, hi = 12;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (h_simpson(mid, [](double s) { return gaussian_f0(s, 2); }, 2, 14.0) > t / alpha ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    const double expected = 2 * M_PI / alpha * std::pow(gaussian_f0(r, 2), 1.0 / 3) * std::pow(r, 2.0 / 3);
    CHECK(std::abs(N_of_t(t, gauss, alpha) - expected) <= 1e-8);
  }
}

TEST_CASE("radial mass") {
  CHECK(radial_mass(0.5, RadialDensity::uniform_ball(2)) == doctest::Approx(0.25));
  CHECK(radial_mass(2.0, RadialDensity::uniform_ball(3)) == doctest::Approx(1));
  CHECK(radial_mass(1.0, RadialDensity::gaussian(2)) == doctest::Approx(1 - std::exp(-0.5)));
  CHECK(radial_mass(1.3, RadialDensity::gaussian(3)) == doctest::Approx(boost::math::gamma_p(1.5, 1.3 * 1.3 / 2)));
}

TEST_CASE("tabulated densities") {
  // f0 = 1 - r on [0, 1], normalized.
  const auto t = RadialDensity::table(2, {0, 0.5, 1}, {1, 0.5, 0});
  CHECK(t.mass() == doctest::Approx(1).epsilon(1e-10));
  CHECK(h_radial(0.2, t) == doctest::Approx(h_radial_quadrature(0.2, t)));
  CHECK(h_radial(1.0, t) == doctest::Approx(0).epsilon(1e-12));
  CHECK_THROWS_AS(h_radial(1.5, t), std::invalid_argument);
  CHECK_THROWS_AS(RadialDensity::table(2, {0, 0.5, 0.4}, {1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(RadialDensity::table(2, {0, 1}, {1, -1}), std::invalid_argument);

  std::istringstream cfg("# cone\nkind = table\ndim = 2\ntable_r = 0, 0.5, 1\ntable_f = 1 0.5 0\n");
  const auto parsed = parse_density_config(cfg);
  CHECK(parsed.kind == DensityKind::table);
  CHECK(parsed.radial(0.25) == doctest::Approx(t.radial(0.25)));

  std::istringstream gcfg("kind = gaussian\ndim = 2\nmean = 1 2\ncovariance = 4 0 0 1\n");
  const auto g = parse_density_config(gcfg);
  REQUIRE(g.frame);
  CHECK(g.frame_radius(vec({3, 2})) == doctest::Approx(1));
}

TEST_CASE("barrier") {
  CHECK(barrier_psi(vec({0.3, 0})) == 0);
  CHECK(barrier_psi(vec({0, 0.125})) == doctest::Approx(0.5));
  const auto b = barrier_check(2);
  CHECK(b.min_F >= 1 - 1e-3);
  CHECK(b.samples > 500);
}

TEST_CASE("simple test functions") {
  const Profile id{[](double s) { return s; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
  const Profile twice{[](double s) { return 2 * s; }, [](double) { return 2.0; }, [](double) { return 0.0; }};
  for (int d : {2, 3}) {
    const Matrix I = Matrix::Identity(d, d);
    const SimpleTestFunction phi(id, I, Vector::Zero(d), true);
    const SimpleTestFunction psi(twice, I, Vector::Zero(d), true);
    Matrix shear = I;
    shear(0, d - 1) = 0.7;
    const SimpleTestFunction sheared(id, shear, Vector::Zero(d), true);
    std::mt19937_64 rng(d);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 20; ++k) {
      Vector x(d);
      for (int i = 0; i < d; ++i) x(i) = u(rng);
      CHECK(phi.F_at(x) == doctest::Approx(1));
      CHECK(psi.F_at(x) == doctest::Approx(std::pow(2.0, d + 1)));
      CHECK(sheared.F_at(x) == doctest::Approx(1));

      // Analytic jet against finite differences.
      const auto fd = finite_difference_jet([&](const Vector& y) { return psi.jet(y).value; }, x, 1e-4);
      const auto an = psi.jet(x);
      CHECK((fd.grad - an.grad).norm() <= 1e-6);
      CHECK((fd.hess - an.hess).norm() <= 1e-4);
    }
  }
  CHECK_THROWS_AS(SimpleTestFunction(id, 2 * Matrix::Identity(2, 2), Vector::Zero(2), true), std::invalid_argument);
}

TEST_CASE("geometric identity for the disk profile") {
  // h = c (1 - r^{4/3}) with f = 1 / pi: <Dh, cof(-D^2 h) Dh> = f^2 and
  // equals |Dh|^3 kappa with kappa = 1 / r for circles.
  const double c = 3.0 / (4.0 * std::pow(M_PI, 2.0 / 3.0));
  const auto ball = RadialDensity::uniform_ball(2);
  for (double r : {0.1, 0.35, 0.6, 0.95}) {
    for (double theta : {0.0, 1.0, 2.5}) {
      const Vector n = vec({std::cos(theta), std::sin(theta)});
      const Vector x = r * n;
      CHECK(h_affine(x, ball) == doctest::Approx(c * (1 - std::pow(r, 4.0 / 3.0))).epsilon(1e-12));
      const double g1 = -c * 4.0 / 3.0 * std::pow(r, 1.0 / 3.0);  // h'(r)
      const double g2 = -c * 4.0 / 9.0 * std::pow(r, -2.0 / 3.0);  // h''(r)
      const Vector grad = g1 * n;
      const Matrix P = n * n.transpose();
      const Matrix hess = g2 * P + (g1 / r) * (Matrix::Identity(2, 2) - P);
      const double lhs = grad.dot(cofactor(-hess) * grad);
      CHECK(std::abs(lhs - 1 / (M_PI * M_PI)) <= 1e-8);
      CHECK(std::abs(F(grad, hess) - 1 / (M_PI * M_PI)) <= 1e-8);
      CHECK(std::abs(std::pow(grad.norm(), 3) / r - lhs) <= 1e-8);
    }
  }
}

TEST_CASE("profile grid CSV") {
  std::ostringstream out;
  write_h_grid_csv(out, RadialDensity::uniform_ball(2), 0.5, 1.0);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "x1,x2,h");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 25);
}
