#include "hullpeel/limit_pde.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace hullpeel {

namespace {

constexpr double kPi = std::numbers::pi;

double frac(int num, int den) { return double(num) / double(den); }

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + " must be square");
}

// Integral of g over [a, b] by adaptive 61-point Gauss-Kronrod.
template <class G>
double integrate(G&& g, double a, double b) {
  if (!(b > a)) return 0.0;
  double err = 0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, a, b, 10, 1e-13, &err);
}

// Largest r with integrand above 1e-16 for the gaussian profile.
double gaussian_cutoff(int d) {
  const double pw = frac(d - 1, d + 1);
  const double scale = std::pow(2 * kPi, -frac(d, d + 1));
  double s = 1.0;
  while (std::pow(s, pw) * scale * std::exp(-s * s / (d + 1)) >= 1e-16) s += 0.25;
  return s;
}

// Bisection for a non-increasing profile: returns r in [lo, hi] with
// profile(r) = value.
template <class P>
double bisect_profile(P&& profile, double value, double lo, double hi) {
  for (int it = 0; it < 400 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (profile(mid) > value)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string cleaned = text;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream is(cleaned);
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw std::invalid_argument("not a number: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Matrix square_from(const std::vector<double>& v, int d, const char* what) {
  if (v.size() != std::size_t(d) * std::size_t(d))
    throw std::invalid_argument(std::string(what) + " needs " + std::to_string(d * d) + " entries");
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = v[std::size_t(i * d + j)];
  return m;
}

Vector vector_from(const std::vector<double>& v, int d, const char* what) {
  if (v.size() != std::size_t(d))
    throw std::invalid_argument(std::string(what) + " needs " + std::to_string(d) + " entries");
  return Eigen::Map<const Vector>(v.data(), d);
}

}  // namespace

double unit_ball_volume(int d) {
  return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1);
}

Matrix cofactor(const Matrix& m) {
  require_square(m, "cofactor input");
  const Eigen::Index n = m.rows();
  Matrix c(n, n);
  if (n == 1) {
    c(0, 0) = 1;
    return c;
  }
  Matrix minor(n - 1, n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (Eigen::Index s = 0, cc = 0; s < n; ++s) {
          if (s == j) continue;
          minor(rr, cc++) = m(r, s);
        }
        ++rr;
      }
      c(i, j) = ((i + j) % 2 ? -1.0 : 1.0) * minor.determinant();
    }
  }
  return c;
}

double F(const Vector& p, const Matrix& A) {
  require_square(A, "Hessian argument");
  if (p.size() != A.rows()) throw std::invalid_argument("gradient and Hessian sizes differ");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("Hessian argument is not symmetric");
  const double pn = p.norm();
  if (pn == 0) return 0.0;
  const Eigen::Index d = p.size();
  if (d > 1) {
    Eigen::HouseholderQR<Matrix> qr(Matrix(p / pn));
    const Matrix q = qr.householderQ();
    const Matrix basis = q.rightCols(d - 1);
    const Matrix projected = basis.transpose() * A * basis;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (projected + projected.transpose()),
                                              Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().maxCoeff() > 1e-10 * scale) return 0.0;
  }
  return p.dot(cofactor(-A) * p);
}

std::string to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::uniform_ball:
      return "uniform_ball";
    case DensityKind::gaussian:
      return "gaussian";
    case DensityKind::table:
      return "table";
  }
  return "uniform_ball";
}

RadialDensity RadialDensity::uniform_ball(int dim, double radius) {
  RadialDensity f;
  f.kind = DensityKind::uniform_ball;
  f.dim = dim;
  f.radius = radius;
  f.validate();
  return f;
}

RadialDensity RadialDensity::gaussian(int dim) {
  RadialDensity f;
  f.kind = DensityKind::gaussian;
  f.dim = dim;
  f.validate();
  return f;
}

RadialDensity RadialDensity::gaussian(const Vector& mu, const Matrix& sigma) {
  require_square(sigma, "covariance");
  if (mu.size() != sigma.rows()) throw std::invalid_argument("mean and covariance sizes differ");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0)
    throw std::invalid_argument("covariance must be symmetric positive definite");
  RadialDensity f;
  f.kind = DensityKind::gaussian;
  f.dim = static_cast<int>(mu.size());
  const Matrix a = eig.operatorInverseSqrt();
  f.frame = AffineFrame{a, -a * mu};
  f.validate();
  return f;
}

RadialDensity RadialDensity::table(int dim, std::vector<double> r, std::vector<double> f,
                                   bool normalize) {
  RadialDensity out;
  out.kind = DensityKind::table;
  out.dim = dim;
  out.table_r = std::move(r);
  out.table_f = std::move(f);
  if (normalize) {
    out.validate(false);
    const double m = out.mass();
    if (!(m > 0)) throw std::invalid_argument("table density has zero mass");
    for (double& v : out.table_f) v /= m;
  }
  out.validate();
  return out;
}

void RadialDensity::validate(bool check_mass) const {
  if (dim < 1) throw std::invalid_argument("density dimension must be positive");
  switch (kind) {
    case DensityKind::uniform_ball:
      if (!(radius > 0) || !std::isfinite(radius))
        throw std::invalid_argument("uniform_ball radius must be positive");
      break;
    case DensityKind::gaussian:
      break;
    case DensityKind::table: {
      if (table_r.size() < 2 || table_r.size() != table_f.size())
        throw std::invalid_argument("table needs at least two (r, f) pairs of equal length");
      if (!(table_r.front() >= 0)) throw std::invalid_argument("table radii must be nonnegative");
      for (std::size_t i = 0; i < table_r.size(); ++i) {
        if (!std::isfinite(table_r[i]) || !std::isfinite(table_f[i]) || table_f[i] < 0)
          throw std::invalid_argument("table entries must be finite with f >= 0");
        if (i > 0 && !(table_r[i] > table_r[i - 1]))
          throw std::invalid_argument("table radii must be strictly increasing");
      }
      const double m = check_mass ? mass() : 1.0;
      if (std::abs(m - 1) > 1e-6)
        throw std::invalid_argument("table density integrates to " + std::to_string(m) +
                                    ", not 1");
      break;
    }
  }
  if (frame) {
    if (frame->A.rows() != dim || frame->A.cols() != dim || frame->b.size() != dim)
      throw std::invalid_argument("frame shape does not match the dimension");
    if (!(std::abs(frame->A.determinant()) > 0))
      throw std::invalid_argument("frame matrix is singular");
  }
}

double RadialDensity::radial(double r) const {
  switch (kind) {
    case DensityKind::uniform_ball:
      return r < radius ? 1.0 / (unit_ball_volume(dim) * std::pow(radius, dim)) : 0.0;
    case DensityKind::gaussian:
      return std::pow(2 * kPi, -0.5 * dim) * std::exp(-0.5 * r * r);
    case DensityKind::table: {
      if (r <= table_r.front()) return table_f.front();
      if (r > table_r.back()) return 0.0;
      const auto it = std::lower_bound(table_r.begin(), table_r.end(), r);
      const std::size_t i = std::size_t(it - table_r.begin());
      const double w = (r - table_r[i - 1]) / (table_r[i] - table_r[i - 1]);
      return (1 - w) * table_f[i - 1] + w * table_f[i];
    }
  }
  return 0.0;
}

double RadialDensity::frame_radius(const Vector& x) const {
  if (x.size() != dim) throw std::invalid_argument("point dimension does not match the density");
  if (!frame) return x.norm();
  return (frame->A * x + frame->b).norm();
}

double RadialDensity::operator()(const Vector& x) const {
  const double jac = frame ? std::abs(frame->A.determinant()) : 1.0;
  return jac * radial(frame_radius(x));
}

double RadialDensity::support_radius() const {
  switch (kind) {
    case DensityKind::uniform_ball:
      return radius;
    case DensityKind::gaussian:
      return std::numeric_limits<double>::infinity();
    case DensityKind::table:
      return table_r.back();
  }
  return 0.0;
}

double RadialDensity::mass() const {
  const double shell = dim * unit_ball_volume(dim);
  switch (kind) {
    case DensityKind::uniform_ball:
    case DensityKind::gaussian:
      return 1.0;
    case DensityKind::table: {
      const auto g = [&](double r) { return std::pow(r, dim - 1) * radial(r); };
      double total = integrate(g, 0.0, table_r.front());
      for (std::size_t i = 1; i < table_r.size(); ++i) total += integrate(g, table_r[i - 1], table_r[i]);
      return shell * total;
    }
  }
  return 0.0;
}

double radial_mass(double r, const RadialDensity& density) {
  if (!(r >= 0)) throw std::invalid_argument("radius must be nonnegative");
  const int d = density.dim;
  switch (density.kind) {
    case DensityKind::uniform_ball:
      return std::pow(std::min(r / density.radius, 1.0), d);
    case DensityKind::gaussian:
      return boost::math::gamma_p(0.5 * d, 0.5 * r * r);
    case DensityKind::table: {
      const auto g = [&](double s) { return std::pow(s, d - 1) * density.radial(s); };
      double total = integrate(g, 0.0, std::min(r, density.table_r.front()));
      for (std::size_t i = 1; i < density.table_r.size() && density.table_r[i - 1] < r; ++i)
        total += integrate(g, density.table_r[i - 1], std::min(r, density.table_r[i]));
      return d * unit_ball_volume(d) * total;
    }
  }
  return 0.0;
}

RadialDensity parse_density_config(std::istream& in) {
  std::string line;
  std::string kind = "uniform_ball";
  int dim = 2;
  double radius = 1.0;
  bool normalize = true;
  std::vector<double> tr, tf, fa, fb, mean, cov;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("density config line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "kind") {
      kind = value;
    } else if (key == "dim") {
      dim = std::stoi(value);
    } else if (key == "radius") {
      radius = std::stod(value);
    } else if (key == "normalize") {
      normalize = value == "true" || value == "1" || value == "yes";
    } else if (key == "table_r") {
      tr = parse_list(value);
    } else if (key == "table_f") {
      tf = parse_list(value);
    } else if (key == "frame_A") {
      fa = parse_list(value);
    } else if (key == "frame_b") {
      fb = parse_list(value);
    } else if (key == "mean") {
      mean = parse_list(value);
    } else if (key == "covariance") {
      cov = parse_list(value);
    } else {
      throw std::invalid_argument("density config line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }

  RadialDensity f;
  if (kind == "uniform_ball") {
    f = RadialDensity::uniform_ball(dim, radius);
  } else if (kind == "gaussian") {
    if (!mean.empty() || !cov.empty()) {
      const Vector mu = mean.empty() ? Vector(Vector::Zero(dim)) : vector_from(mean, dim, "mean");
      const Matrix sigma =
          cov.empty() ? Matrix(Matrix::Identity(dim, dim)) : square_from(cov, dim, "covariance");
      f = RadialDensity::gaussian(mu, sigma);
    } else {
      f = RadialDensity::gaussian(dim);
    }
  } else if (kind == "table") {
    f = RadialDensity::table(dim, tr, tf, normalize);
  } else {
    throw std::invalid_argument("unknown density kind '" + kind + "'");
  }
  if (!fa.empty() || !fb.empty()) {
    if (f.frame) throw std::invalid_argument("give either mean/covariance or frame_A/frame_b");
    const Matrix a = fa.empty() ? Matrix(Matrix::Identity(dim, dim)) : square_from(fa, dim, "frame_A");
    const Vector b = fb.empty() ? Vector(Vector::Zero(dim)) : vector_from(fb, dim, "frame_b");
    f.frame = AffineFrame{a, b};
  }
  f.validate();
  return f;
}

RadialDensity load_density_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_density_config(in);
}

double h_radial(double r, const RadialDensity& density) {
  if (!(r >= 0)) throw std::invalid_argument("radius must be nonnegative");
  const int d = density.dim;
  switch (density.kind) {
    case DensityKind::uniform_ball: {
      const double R = density.radius;
      if (r >= R) return 0.0;
      const double c = std::pow(density.radial(0.0), frac(2, d + 1));
      const double e = frac(2 * d, d + 1);
      return c * frac(d + 1, 2 * d) * (std::pow(R, e) - std::pow(r, e));
    }
    case DensityKind::gaussian: {
      const double a = frac(d, d + 1);
      return 0.5 * std::pow((d + 1) / (2 * kPi), a) *
             boost::math::tgamma(a, r * r / (d + 1));
    }
    case DensityKind::table:
      return h_radial_quadrature(r, density);
  }
  return 0.0;
}

double h_radial_quadrature(double r, const RadialDensity& density) {
  if (!(r >= 0)) throw std::invalid_argument("radius must be nonnegative");
  const int d = density.dim;
  if (density.kind == DensityKind::table &&
      (r < density.table_r.front() || r > density.table_r.back()))
    throw std::invalid_argument("radius " + std::to_string(r) + " is outside the table support");
  // With s = w^{d+1} the factor s^{(d-1)/(d+1)} ds becomes (d+1) w^{2d-1} dw,
  // which removes the endpoint singularity at s = 0.
  const double k = d + 1;
  const double pw = frac(2, d + 1);
  const auto g = [&](double w) {
    const double s = std::pow(w, k);
    const double f = density.radial(s);
    return f > 0 ? k * std::pow(w, 2 * d - 1) * std::pow(f, pw) : 0.0;
  };
  std::vector<double> breaks{r};
  switch (density.kind) {
    case DensityKind::uniform_ball:
      breaks.push_back(std::max(r, density.radius));
      break;
    case DensityKind::gaussian:
      breaks.push_back(std::max(r, gaussian_cutoff(d)));
      break;
    case DensityKind::table:
      for (double t : density.table_r)
        if (t > r) breaks.push_back(t);
      break;
  }
  double total = 0;
  for (std::size_t i = 1; i < breaks.size(); ++i)
    total += integrate(g, std::pow(breaks[i - 1], 1.0 / k), std::pow(breaks[i], 1.0 / k));
  return total;
}

double h_affine(const Vector& x, const RadialDensity& density) {
  return h_radial(density.frame_radius(x), density);
}

double invert_h(double value, const RadialDensity& density) {
  const double lo = density.kind == DensityKind::table ? density.table_r.front() : 0.0;
  const double h0 = h_radial(lo, density);
  if (!(value > 0) || value > h0)
    throw std::invalid_argument("invert_h needs 0 < value <= h(0)");
  double hi = std::isfinite(density.support_radius()) ? density.support_radius() : 1.0;
  while (h_radial(hi, density) > value) hi *= 2;
  return bisect_profile([&](double r) { return h_radial(r, density); }, value, lo, hi);
}

namespace {

void check_t(double t, double alpha, double h0) {
  if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
  if (!(t >= 0) || !(t < alpha * h0))
    throw std::invalid_argument("t must lie in [0, alpha h(0)) = [0, " + std::to_string(alpha * h0) +
                                ")");
}

}  // namespace

double N_of_t(double t, const RadialDensity& density, double alpha) {
  const int d = density.dim;
  const double vol = unit_ball_volume(d);
  if (density.kind == DensityKind::uniform_ball && density.radius == 1.0) {
    check_t(t, alpha, h_radial(0.0, density));
    const double c = 2 * d * std::pow(vol, frac(2, d + 1)) / (alpha * (d + 1));
    return d * std::pow(vol, frac(2, d + 1)) / alpha * std::pow(1 - c * t, 0.5 * (d - 1));
  }
  if (density.kind == DensityKind::gaussian) {
    const double h0 = h_radial(0.0, density);
    check_t(t, alpha, h0);
    const double q = t / (alpha * h0);
    const double r = q > 0 ? std::sqrt((d + 1) * boost::math::gamma_q_inv(frac(d, d + 1), q))
                           : std::numeric_limits<double>::infinity();
    if (!std::isfinite(r)) return 0.0;
    return d * vol / alpha * std::pow(r / std::sqrt(2 * kPi), frac(d * (d - 1), d + 1)) *
           std::exp(-r * r * (d - 1) / (2.0 * (d + 1)));
  }
  return N_of_t_generic(t, density, alpha);
}

double N_of_t_generic(double t, const RadialDensity& density, double alpha) {
  const int d = density.dim;
  const auto profile = [&](double r) { return h_radial_quadrature(r, density); };
  const double h0 = profile(density.kind == DensityKind::table ? density.table_r.front() : 0.0);
  check_t(t, alpha, h0);
  const double target = t / alpha;
  double r = 0;
  if (target > 0) {
    double lo = density.kind == DensityKind::table ? density.table_r.front() : 0.0;
    double hi = std::isfinite(density.support_radius()) ? density.support_radius() : 1.0;
    while (!std::isfinite(density.support_radius()) && profile(hi) > target) hi *= 2;
    r = bisect_profile(profile, target, lo, hi);
  } else {
    r = std::isfinite(density.support_radius()) ? density.support_radius() : gaussian_cutoff(d);
  }
  // At t = 0 the radius sits on the edge of the support; take f0 from inside.
  const double f = density.radial(target > 0 ? r : std::nextafter(r, 0.0));
  return d * unit_ball_volume(d) / alpha * std::pow(f, frac(d - 1, d + 1)) *
         std::pow(r, frac(d * (d - 1), d + 1));
}

double barrier_psi(const Vector& x) {
  const Eigen::Index d = x.size();
  if (d < 2) throw std::invalid_argument("barrier needs d >= 2");
  const double xd = x(d - 1);
  const double rest = 1 - 0.5 * x.head(d - 1).squaredNorm();
  if (xd <= 0) return 0.0;
  return 2 * std::pow(xd, 2.0 / double(d + 1)) * std::pow(rest, double(d - 1) / double(d + 1));
}

Jet finite_difference_jet(const std::function<double(const Vector&)>& f, const Vector& x,
                          double step) {
  const Eigen::Index d = x.size();
  Jet j;
  j.value = f(x);
  j.grad = Vector::Zero(d);
  j.hess = Matrix::Zero(d, d);
  const auto at = [&](Eigen::Index a, double sa, Eigen::Index b, double sb) {
    Vector y = x;
    y(a) += sa * step;
    y(b) += sb * step;
    return f(y);
  };
  for (Eigen::Index i = 0; i < d; ++i) {
    Vector yp = x, ym = x;
    yp(i) += step;
    ym(i) -= step;
    const double fp = f(yp), fm = f(ym);
    j.grad(i) = (fp - fm) / (2 * step);
    j.hess(i, i) = (fp - 2 * j.value + fm) / (step * step);
    for (Eigen::Index k = 0; k < i; ++k) {
      const double v = (at(i, 1, k, 1) - at(i, 1, k, -1) - at(i, -1, k, 1) + at(i, -1, k, -1)) /
                       (4 * step * step);
      j.hess(i, k) = j.hess(k, i) = v;
    }
  }
  return j;
}

BarrierCheck barrier_check(int dim, std::size_t per_axis, double radius, double min_height,
                           double step) {
  if (dim < 2) throw std::invalid_argument("barrier check needs d >= 2");
  if (per_axis < 2) throw std::invalid_argument("barrier grid needs at least two nodes per axis");
  BarrierCheck out;
  out.min_F = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(std::size_t(dim), 0);
  const double h = 2 * radius / double(per_axis - 1);
  Vector x(dim);
  while (true) {
    for (int i = 0; i < dim; ++i) x(i) = -radius + h * double(idx[std::size_t(i)]);
    if (x.norm() < radius && x(dim - 1) > min_height) {
      const Jet j = finite_difference_jet(barrier_psi, x, step);
      const double v = F(j.grad, 0.5 * (j.hess + j.hess.transpose()));
      ++out.samples;
      if (v < out.min_F) {
        out.min_F = v;
        out.argmin = x;
      }
    }
    int k = 0;
    while (k < dim && ++idx[std::size_t(k)] == per_axis) idx[std::size_t(k++)] = 0;
    if (k == dim) break;
  }
  return out;
}

SimpleTestFunction::SimpleTestFunction(Profile sigma, Matrix M, Vector c, bool upper)
    : sigma_(std::move(sigma)), M_(std::move(M)), c_(std::move(c)), upper_(upper) {
  require_square(M_, "test function frame");
  if (c_.size() != M_.rows()) throw std::invalid_argument("frame offset has the wrong size");
  if (M_.rows() < 2) throw std::invalid_argument("test functions need d >= 2");
  if (std::abs(std::abs(M_.determinant()) - 1) > 1e-12)
    throw std::invalid_argument("test function frame must have |det| = 1");
  if (!sigma_.value || !sigma_.d1 || !sigma_.d2)
    throw std::invalid_argument("profile needs sigma, sigma' and sigma''");
}

Jet SimpleTestFunction::jet(const Vector& x) const {
  const Eigen::Index d = M_.rows();
  if (x.size() != d) throw std::invalid_argument("point dimension does not match the test function");
  const Vector y = M_ * x + c_;
  const double phi = y(d - 1) - 0.5 * y.head(d - 1).squaredNorm();
  Vector dphi(d);
  dphi.head(d - 1) = -y.head(d - 1);
  dphi(d - 1) = 1;
  Matrix d2phi = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i + 1 < d; ++i) d2phi(i, i) = -1;

  const double s1 = sigma_.d1(phi);
  const double s2 = sigma_.d2(phi);
  if (s1 < 0) throw std::domain_error("sigma' must be nonnegative");
  if (upper_ ? s2 < 0 : s2 > 0)
    throw std::domain_error(upper_ ? "upper test function needs sigma'' >= 0"
                                   : "lower test function needs sigma'' <= 0");
  const Vector g = M_.transpose() * dphi;
  Jet j;
  j.value = sigma_.value(phi);
  j.grad = s1 * g;
  j.hess = s2 * g * g.transpose() + s1 * M_.transpose() * d2phi * M_;
  j.hess = 0.5 * (j.hess + j.hess.transpose());
  return j;
}

double SimpleTestFunction::F_at(const Vector& x) const {
  const Jet j = jet(x);
  return F(j.grad, j.hess);
}

void write_h_grid_csv(std::ostream& out, const RadialDensity& density, double pitch, double extent) {
  if (!(pitch > 0) || !(extent > 0)) throw std::invalid_argument("grid pitch and extent must be positive");
  const int d = density.dim;
  const auto per_axis = static_cast<std::size_t>(std::llround(2 * extent / pitch)) + 1;
  for (int i = 0; i < d; ++i) out << (i ? ",x" : "x") << i + 1;
  out << ",h\n";
  std::vector<std::size_t> idx(std::size_t(d), 0);
  Vector x(d);
  out.precision(17);
  while (true) {
    for (int i = 0; i < d; ++i) x(i) = -extent + pitch * double(idx[std::size_t(i)]);
    for (int i = 0; i < d; ++i) out << x(i) << ',';
    out << h_affine(x, density) << '\n';
    int k = 0;
    while (k < d && ++idx[std::size_t(k)] == per_axis) idx[std::size_t(k++)] = 0;
    if (k == d) break;
  }
}

}  // namespace hullpeel
