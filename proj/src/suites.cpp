#include "hullpeel/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hullpeel/convex_peeling.hpp"
#include "hullpeel/limit_pde.hpp"
#include "hullpeel/random.hpp"
#include "hullpeel/semiconvex_peeling.hpp"

namespace hullpeel {

namespace {

// k / den with den from a short list and k uniform, so values land on a
// coarse grid.
Rational random_rational(Rng& rng, long lo, long hi) {
  static constexpr long kDens[] = {1, 2, 3, 4, 6, 8};
  const long den = kDens[std::uniform_int_distribution<int>(0, 5)(rng)];
  const long k = std::uniform_int_distribution<long>(lo * den, hi * den)(rng);
  Rational q(k, den);
  q.canonicalize();
  return q;
}

std::size_t random_size(Rng& rng, std::size_t max_points) {
  return std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, max_points))(rng);
}

Cloud2<Rational> random_cloud(Rng& rng, std::size_t n) {
  Cloud2<Rational> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back({random_rational(rng, -4, 4), random_rational(rng, -4, 4)});
  return c;
}

bool has_abscissa(const Cloud2<Rational>& c, const Rational& x) {
  return std::any_of(c.begin(), c.end(), [&](const Vec2<Rational>& p) { return p.x == x; });
}

// Points with x2 > 0, optionally with pairwise distinct x1.
Cloud2<Rational> random_upper_cloud(Rng& rng, std::size_t n, bool distinct_x = false) {
  Cloud2<Rational> c;
  while (c.size() < n) {
    Vec2<Rational> p{random_rational(rng, -3, 3), random_rational(rng, 0, 4)};
    if (p.y > 0 && !(distinct_x && has_abscissa(c, p.x))) c.push_back(p);
  }
  return c;
}

std::string describe(const Cloud2<Rational>& c) {
  std::ostringstream s;
  s << "cloud {";
  for (std::size_t i = 0; i < c.size(); ++i) s << (i ? ", " : "") << '(' << c[i].x << ' ' << c[i].y << ')';
  s << '}';
  return s.str();
}

using CaseFn = std::function<std::string(Rng&, const SuiteOptions&)>;

// Empty string means the case passed.
std::string dpp_case(Rng& rng, const SuiteOptions& o) {
  const auto c = random_cloud(rng, random_size(rng, o.max_points));
  const auto r = verify_dpp(std::span<const Vec2<Rational>>(c), std::max<std::size_t>(64, c.size()));
  return r ? "" : r.detail + " in " + describe(c);
}

std::string semidpp_case(Rng& rng, const SuiteOptions& o) {
  const auto c = random_upper_cloud(rng, random_size(rng, o.max_points), true);
  const auto r = verify_semidpp(std::span<const Vec2<Rational>>(c), std::max<std::size_t>(64, c.size()));
  return r ? "" : r.detail + " in " + describe(c);
}

std::string affine_case(Rng& rng, const SuiteOptions& o) {
  const auto c = random_cloud(rng, random_size(rng, o.max_points));
  std::vector<Rational> m(4);
  do {
    for (auto& v : m) v = random_rational(rng, -3, 3);
  } while (m[0] * m[3] - m[1] * m[2] == 0);
  std::vector<Rational> b{random_rational(rng, -5, 5), random_rational(rng, -5, 5)};
  const ExactAffineMap map(2, m, b);
  const auto r = check_affine_invariance(from_planar(std::span<const Vec2<Rational>>(c)), map);
  if (r) return "";
  std::ostringstream s;
  s << r.detail << " for matrix (" << m[0] << ' ' << m[1] << "; " << m[2] << ' ' << m[3] << ") in "
    << describe(c);
  return s.str();
}

std::string monotone_case(Rng& rng, const SuiteOptions& o) {
  std::bernoulli_distribution keep(0.5);
  const std::size_t n = random_size(rng, o.max_points);
  {
    const auto y = random_cloud(rng, n);
    Cloud2<Rational> x;
    for (const auto& p : y)
      if (keep(rng)) x.push_back(p);
    auto queries = y;
    const auto extra = random_cloud(rng, 16);
    queries.insert(queries.end(), extra.begin(), extra.end());
    const auto lx = peel(x);
    const auto ly = peel(y);
    for (const auto& q : queries)
      if (height(lx, q) > height(ly, q))
        return "convex height of a subset exceeds the full cloud's at (" + q.x.get_str() + ' ' +
               q.y.get_str() + ") in " + describe(y);
  }
  {
    const auto y = random_upper_cloud(rng, n);
    Cloud2<Rational> x;
    for (const auto& p : y)
      if (keep(rng)) x.push_back(p);
    auto queries = y;
    const auto extra = random_upper_cloud(rng, 16);
    queries.insert(queries.end(), extra.begin(), extra.end());
    const auto sx = semiconvex_peel(std::span<const Vec2<Rational>>(x));
    const auto sy = semiconvex_peel(std::span<const Vec2<Rational>>(y));
    for (const auto& q : queries)
      if (s_height(sx, q) > s_height(sy, q))
        return "semiconvex height of a subset exceeds the full cloud's at (" + q.x.get_str() + ' ' +
               q.y.get_str() + ") in " + describe(y);
  }
  return "";
}

std::string correspondence_case(Rng& rng, const SuiteOptions& o) {
  const Rational T(6);
  const std::size_t n = random_size(rng, o.max_points);
  Cloud2<Rational> c;
  while (c.size() < n) {
    Vec2<Rational> p{random_rational(rng, -3, 3), random_rational(rng, 0, 6)};
    if (p.y > p.x * p.x / 2 && p.y < T && !has_abscissa(c, p.x)) c.push_back(p);
  }
  const auto r = correspondence_check(std::span<const Vec2<Rational>>(c), T);
  return r ? "" : r.detail + " in " + describe(c);
}

Vector random_vector(Rng& rng, int d) {
  std::normal_distribution<double> g;
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = g(rng);
  return v;
}

Matrix random_matrix(Rng& rng, int d) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  return m;
}

// Negative definite, indefinite, or negative on p-perp only.
Matrix random_hessian(Rng& rng, const Vector& p) {
  const int d = int(p.size());
  const Matrix m = random_matrix(rng, d);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      return -(m * m.transpose()) - 0.1 * Matrix::Identity(d, d);
    case 1:
      return 0.5 * (m + m.transpose());
    default:
      return -(m * m.transpose()) + 3.0 * p * p.transpose();
  }
}

bool close_relative(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

std::string F_case(Rng& rng, const SuiteOptions&) {
  const int d = std::uniform_int_distribution<int>(2, 4)(rng);
  const Vector p = random_vector(rng, d);
  const Matrix a = random_hessian(rng, p);
  Matrix b;
  do {
    b = random_matrix(rng, d);
  } while (std::abs(b.determinant()) < 0.2);
  const double lhs = F(b.transpose() * p, b.transpose() * a * b);
  const double rhs = b.determinant() * b.determinant() * F(p, a);
  if (!close_relative(lhs, rhs, 1e-9)) {
    std::ostringstream s;
    s << "affine covariance: F(B^T p, B^T A B) = " << lhs << " but det(B)^2 F(p, A) = " << rhs << " (d = " << d
      << ")";
    return s.str();
  }
  // A <= B in the semidefinite order.
  const Matrix upper = random_hessian(rng, p);
  const Matrix n = random_matrix(rng, d);
  const Matrix lower = upper - n * n.transpose();
  const double f_lower = F(p, lower);
  const double f_upper = F(p, upper);
  if (f_lower < f_upper && !close_relative(f_lower, f_upper, 1e-9)) {
    std::ostringstream s;
    s << "monotonicity: F(p, A) = " << f_lower << " < F(p, B) = " << f_upper << " with A <= B (d = " << d << ")";
    return s.str();
  }
  return "";
}

SuiteResult run_cases(const std::string& name, const SuiteOptions& o, Rng& rng, const CaseFn& fn) {
  SuiteResult r;
  r.name = name;
  for (std::size_t i = 0; i < o.cases; ++i) {
    ++r.cases;
    const std::string fail = fn(rng, o);
    if (!fail.empty()) {
      r.ok = false;
      r.counterexample = "case " + std::to_string(i) + ": " + fail;
      break;
    }
  }
  return r;
}

SuiteResult barrier_suite() {
  SuiteResult r;
  r.name = "barrier";
  const auto check = barrier_check(2);
  r.cases = check.samples;
  if (!(check.min_F >= 1 - 1e-3)) {
    r.ok = false;
    std::ostringstream s;
    s << "F(D psi, D^2 psi) = " << check.min_F << " at (" << check.argmin.transpose() << ")";
    r.counterexample = s.str();
  }
  return r;
}

SuiteResult quadrature_suite() {
  SuiteResult r;
  r.name = "quadrature";
  const double alpha = 4.0 / 3.0;
  for (int d : {2, 3}) {
    const RadialDensity densities[] = {RadialDensity::uniform_ball(d), RadialDensity::gaussian(d)};
    for (const auto& f : densities) {
      const double reach = f.kind == DensityKind::gaussian ? 5.0 : 1.0;
      for (int i = 0; i < 100; ++i) {
        const double x = reach * i / 100.0;
        ++r.cases;
        const double closed = h_radial(x, f);
        const double quad = h_radial_quadrature(x, f);
        if (!(std::abs(closed - quad) <= 1e-10)) {
          std::ostringstream s;
          s << to_string(f.kind) << " d = " << d << ": closed form " << closed << " vs quadrature " << quad
            << " at r = " << x;
          r.ok = false;
          r.counterexample = s.str();
          return r;
        }
      }
      const double top = alpha * h_radial(0.0, f);
      for (double q : {0.1, 0.5, 0.9}) {
        ++r.cases;
        const double closed = N_of_t(q * top, f, alpha);
        const double generic = N_of_t_generic(q * top, f, alpha);
        if (!(std::abs(closed - generic) <= 1e-8)) {
          std::ostringstream s;
          s << to_string(f.kind) << " d = " << d << ": N closed " << closed << " vs generic " << generic
            << " at t = " << q * top;
          r.ok = false;
          r.counterexample = s.str();
          return r;
        }
      }
    }
  }
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"dpp",      "semidpp",        "affine", "monotone",
                                              "correspondence", "F", "barrier", "quadrature"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
  const auto& names = suite_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::invalid_argument("unknown suite '" + name + "'");
  auto rng = trial_rng(options.seed, std::uint64_t(it - names.begin()));

  const auto start = std::chrono::steady_clock::now();
  SuiteResult r;
  if (name == "dpp") r = run_cases(name, options, rng, dpp_case);
  else if (name == "semidpp") r = run_cases(name, options, rng, semidpp_case);
  else if (name == "affine") r = run_cases(name, options, rng, affine_case);
  else if (name == "monotone") r = run_cases(name, options, rng, monotone_case);
  else if (name == "correspondence") r = run_cases(name, options, rng, correspondence_case);
  else if (name == "F") r = run_cases(name, options, rng, F_case);
  else if (name == "barrier") r = barrier_suite();
  else r = quadrature_suite();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace hullpeel
