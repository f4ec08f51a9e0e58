#ifndef HULLPEEL_SEMICONVEX_PEELING_HPP
#define HULLPEEL_SEMICONVEX_PEELING_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hullpeel/convex_peeling.hpp"
#include "hullpeel/geometry.hpp"

// Planar semiconvex peeling. H is the open upper half-plane {x2 > 0} and P the
// parabola {x2 > x1^2 / 2}. A parabola with apex y covers the open region
// y - P = {z : y2 - z2 > (y1 - z1)^2 / 2}.

namespace hullpeel {

/// (x1, x2) -> (x1, x2 + x1^2 / 2), mapping H onto P.
template <class S>
Vec2<S> lift(const Vec2<S>& x) {
  return {x.x, x.y + x.x * x.x / 2};
}

/// Inverse of lift: (u1, u2) -> (u1, u2 - u1^2 / 2).
template <class S>
Vec2<S> project(const Vec2<S>& u) {
  return {u.x, u.y - u.x * u.x / 2};
}

struct Cylinder {
  double r = 1.0;
  double shift = 0.0;  // horizontal offset of the axis

  bool contains(const Vec2<double>& x) const {
    return x.y > 0 && x.y < r && x.x - shift > -r && x.x - shift < r;
  }
  double area() const { return 2 * r * r; }
};

template <class S>
class SemiconvexLayering;

namespace detail {
template <class S>
SemiconvexLayering<S> semiconvex_peel_impl(std::span<const Vec2<S>> cloud);
}

/// Semiconvex layers of a cloud in H. Layer n holds the points on the
/// boundary of S_n, and s(x) counts the open S_n containing x, so a point of
/// layer n has s = n - 1.
template <class S>
class SemiconvexLayering {
 public:
  SemiconvexLayering() = default;

  std::size_t size() const { return points_.size(); }
  const Cloud2<S>& points() const { return points_; }
  /// lift() of every point.
  const Cloud2<S>& lifted() const { return lifted_; }
  const std::vector<int>& layer_of_point() const { return layer_of_point_; }
  const std::vector<std::vector<std::size_t>>& layers() const { return layers_; }
  /// Lower-hull vertices of the lifted points still present at step n, left to
  /// right. The lifted S_n is the region above this chain between its first
  /// and last abscissa.
  const std::vector<std::vector<std::size_t>>& chains() const { return chains_; }
  std::size_t num_layers() const { return layers_.size(); }

  /// True if x lies in the open set int S_n (1-based).
  bool in_interior(std::size_t layer, const Vec2<S>& x) const;

 private:
  friend SemiconvexLayering detail::semiconvex_peel_impl<S>(std::span<const Vec2<S>>);

  Cloud2<S> points_;
  Cloud2<S> lifted_;
  std::vector<int> layer_of_point_;
  std::vector<std::vector<std::size_t>> layers_;
  std::vector<std::vector<std::size_t>> chains_;
};

/// Points of X on the boundary of semi(X), sorted. Throws
/// std::invalid_argument if a point has x2 <= 0.
template <class S>
std::vector<std::size_t> semiconvex_first_layer(std::span<const Vec2<S>> cloud);

template <class S>
SemiconvexLayering<S> semiconvex_peel(std::span<const Vec2<S>> cloud);

/// s_X(x) from a full layering.
template <class S>
int s_height(const SemiconvexLayering<S>& layering, const Vec2<S>& x);

/// s_X(x) without storing layers: peels until x leaves the interior.
template <class S>
int s_height_at(std::span<const Vec2<S>> cloud, const Vec2<S>& x);

/// Checks s_X(x) = inf over apexes y in x + boundary(P) of
/// sup { 1 + s_X(z) : z in X, z in y - P } (0 for an empty set) at every
/// cloud point, with apexes taken from the finite set where the value can
/// change. Throws std::invalid_argument above `max_points` or when two
/// points share a first coordinate: a point directly above another in an
/// extreme column shares its layer although every parabola through the upper
/// point contains the lower one, so the identity fails there.
template <class S>
CheckResult verify_semidpp(std::span<const Vec2<S>> cloud, std::size_t max_points = 64);

struct CorrespondenceOptions {
  /// Sentinel pairs placed high above the cloud; 0 picks 2 * #X + 4.
  std::size_t sentinel_pairs = 0;
};

/// For X inside P below height T, compares the convex layer of each x in X,
/// peeled together with far sentinels that stand in for points escaping to
/// infinity along e_2, with the semiconvex layer of project(x) in project(X).
/// Exact arithmetic throughout. Throws std::invalid_argument if X is not in
/// P intersected with {x2 < T} or two points share a first coordinate (the
/// sentinels only reproduce vertical sides through single extreme points).
CheckResult correspondence_check(std::span<const Vec2<Rational>> cloud, const Rational& truncation,
                                 const CorrespondenceOptions& options = {});
CheckResult correspondence_check(std::span<const Vec2<double>> cloud, double truncation,
                                 const CorrespondenceOptions& options = {});

/// The sentinel points used by correspondence_check.
Cloud2<Rational> correspondence_sentinels(const Rational& truncation, std::size_t pairs);

/// Points of X with |x1| < L/2, translated by j * L * e1 for |j| <= copies.
template <class S>
Cloud2<S> periodize(std::span<const Vec2<S>> cloud, const S& period, int copies);

/// Grid of synthetic points on the sides and top of Q_r with the given pitch.
Cloud2<double> cylinder_shell(const Cylinder& q, double pitch);

enum class AlphaRoute { cell, maxdepth, profile };

std::string to_string(AlphaRoute route);
AlphaRoute parse_alpha_route(const std::string& name);

struct AlphaEstimate {
  double alpha_hat = 0;
  double std_error = 0;  // reported as "stderr"
  std::size_t trials = 0;
  double r = 0;
  AlphaRoute route = AlphaRoute::cell;
};

struct CellConfig {
  double r = 40;
  double beta = 3;
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Horizontal shift of the query point and cylinder.
  double shift = 0;
};

struct CellTrial {
  std::size_t trial = 0;
  double r = 0;
  double beta = 0;
  int s_value = 0;
  std::size_t n_points = 0;
  double wall_ms = 0;
};

struct CellResult {
  CellConfig config;
  AlphaEstimate estimate;        // cylinder Q_{beta r}
  AlphaEstimate estimate_wider;  // cylinder Q_{(beta + 1) r}, same samples
  std::vector<CellTrial> trials;  // both radii, trial-major
};

/// Per trial, samples a unit-intensity Poisson cloud on Q_{(beta+1) r} and
/// records s at r e_2 for the cloud and for its restriction to Q_{beta r}.
/// alpha_hat is the mean of s / r. Throws std::invalid_argument if
/// trials = 0, r <= 0 or beta < 1.
CellResult cell_estimate(const CellConfig& config);

/// Weighted least-squares fit of alpha_hat(r) = alpha + a / sqrt(r) over the
/// estimates; returns the intercept with its standard error. With a single
/// estimate it is returned unchanged.
AlphaEstimate extrapolate_alpha(const std::vector<AlphaEstimate>& by_r);

void write_cell_trials_csv(std::ostream& out, const std::vector<CellTrial>& trials);

extern template class SemiconvexLayering<double>;
extern template class SemiconvexLayering<Rational>;

}  // namespace hullpeel

#endif  // HULLPEEL_SEMICONVEX_PEELING_HPP
