#ifndef HULLPEEL_LIMIT_PDE_HPP
#define HULLPEEL_LIMIT_PDE_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hullpeel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// Cofactor matrix (for symmetric input, the adjugate).
Matrix cofactor(const Matrix& m);

/// F(p, A) = <p, cof(-A) p> when A is negative semidefinite on the
/// orthogonal complement of p, and 0 otherwise; F(0, A) = 0. Throws
/// std::invalid_argument for non-square, mismatched or non-symmetric input.
double F(const Vector& p, const Matrix& A);

enum class DensityKind { uniform_ball, gaussian, table };

std::string to_string(DensityKind kind);

/// f(x) = |A| f0(|A x + b|).
struct AffineFrame {
  Matrix A;
  Vector b;
};

/// Radial probability density f0 on R^d with an optional affine frame.
struct RadialDensity {
  DensityKind kind = DensityKind::uniform_ball;
  int dim = 2;
  double radius = 1.0;  // uniform_ball support radius
  std::vector<double> table_r;  // strictly increasing radii
  std::vector<double> table_f;  // f0 at table_r; linear in between, 0 past the end
  std::optional<AffineFrame> frame;

  static RadialDensity uniform_ball(int dim, double radius = 1.0);
  static RadialDensity gaussian(int dim);
  /// Gaussian with mean mu and covariance sigma (frame A = sigma^{-1/2}).
  static RadialDensity gaussian(const Vector& mu, const Matrix& sigma);
  /// Rescales f so it integrates to 1 unless `normalize` is false.
  static RadialDensity table(int dim, std::vector<double> r, std::vector<double> f,
                             bool normalize = true);

  /// Throws std::invalid_argument when the invariants fail. The unit-mass
  /// check for tables can be skipped.
  void validate(bool check_mass = true) const;
  /// f0(r).
  double radial(double r) const;
  /// f(x), including the frame.
  double operator()(const Vector& x) const;
  /// |A x + b| (or |x| without a frame).
  double frame_radius(const Vector& x) const;
  /// Radius beyond which f0 vanishes; infinity for the gaussian.
  double support_radius() const;
  /// Total mass of f0 over R^d.
  double mass() const;
};

/// Reads "key = value" lines ('#' starts a comment). Keys: kind
/// (uniform_ball | gaussian | table), dim, radius, table_r, table_f,
/// normalize, frame_A (row-major), frame_b, mean, covariance (row-major;
/// gaussian only, sets the frame). Lists are comma or space separated.
RadialDensity parse_density_config(std::istream& in);
RadialDensity load_density_config(const std::string& path);

/// h(r) = integral from r to infinity of s^{(d-1)/(d+1)} f0(s)^{2/(d+1)} ds,
/// using closed forms for the uniform ball and the gaussian. Throws
/// std::invalid_argument for r < 0 or, for tables, r outside the table.
double h_radial(double r, const RadialDensity& density);

/// Same integral by adaptive Gauss-Kronrod quadrature for every kind.
double h_radial_quadrature(double r, const RadialDensity& density);

/// h(x) = h_radial(|A x + b|).
double h_affine(const Vector& x, const RadialDensity& density);

/// Mass of f0 on the ball of radius r: closed forms for the ball and the
/// gaussian, quadrature for tables.
double radial_mass(double r, const RadialDensity& density);

/// The radius r with h_radial(r) = value, by bisection (tol 1e-10 or finer).
/// Requires 0 < value <= h(0).
double invert_h(double value, const RadialDensity& density);

/// Continuum layer-count law N(t) for 0 <= t < alpha h(0). Closed forms for
/// the unit uniform ball and the standard gaussian; other densities go
/// through N_of_t_generic. The frame does not change N.
double N_of_t(double t, const RadialDensity& density, double alpha);

/// (d |B_1| / alpha) f0(r)^{(d-1)/(d+1)} r^{d(d-1)/(d+1)} with r from
/// bisection on the quadrature profile.
double N_of_t_generic(double t, const RadialDensity& density, double alpha);

/// psi(x) = 2 x_d^{2/(d+1)} (1 - |x'|^2 / 2)^{(d-1)/(d+1)} where x' drops the
/// last coordinate.
double barrier_psi(const Vector& x);

/// Value, gradient and Hessian at a point.
struct Jet {
  double value = 0;
  Vector grad;
  Matrix hess;
};

/// Central finite differences of f at x with the given step.
Jet finite_difference_jet(const std::function<double(const Vector&)>& f, const Vector& x,
                          double step = 1e-5);

struct BarrierCheck {
  double min_F = 0;
  Vector argmin;
  std::size_t samples = 0;
};

/// Minimum of F(D psi, D^2 psi) by finite differences over a regular grid with
/// `per_axis` nodes per coordinate on [-radius, radius]^d, keeping nodes in
/// the open ball of that radius with x_d > min_height.
BarrierCheck barrier_check(int dim, std::size_t per_axis = 50, double radius = 0.9,
                           double min_height = 0.05, double step = 1e-5);

/// sigma with its first two derivatives.
struct Profile {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

/// psi = sigma(phi(M x + c)) with phi(y) = y_d - |y'|^2 / 2 and det M = 1.
class SimpleTestFunction {
 public:
  /// Throws std::invalid_argument unless |det M| = 1 within 1e-12 and the
  /// shapes agree.
  SimpleTestFunction(Profile sigma, Matrix M, Vector c, bool upper);

  /// Analytic jet; throws std::domain_error where sigma' < 0, or sigma'' has
  /// the wrong sign for the kind of test function.
  Jet jet(const Vector& x) const;
  double F_at(const Vector& x) const;
  bool upper() const { return upper_; }

 private:
  Profile sigma_;
  Matrix M_;
  Vector c_;
  bool upper_;
};

/// Rows (x1, ..., xd, h) over the grid of the given pitch on [-extent, extent]^d.
void write_h_grid_csv(std::ostream& out, const RadialDensity& density, double pitch, double extent);

}  // namespace hullpeel

#endif  // HULLPEEL_LIMIT_PDE_HPP
