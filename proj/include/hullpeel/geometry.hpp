#ifndef HULLPEEL_GEOMETRY_HPP
#define HULLPEEL_GEOMETRY_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hullpeel/predicates.hpp"

namespace hullpeel {

/// Ambient dimensions this build can peel. Orientation, sampling and the
/// limit-shape evaluators accept d = 3 as well; hulls and peeling are planar.
inline constexpr bool kPeelingSupportsDim3 = false;

enum class ScalarMode { floating, exact_rational };

template <class S>
struct Vec2 {
  S x;
  S y;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

template <class S>
using Cloud2 = std::vector<Vec2<S>>;

/// Finite list of points in R^d stored row-major.
template <class S>
class BasicPointCloud {
 public:
  BasicPointCloud() = default;
  explicit BasicPointCloud(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("point cloud dimension must be positive");
  }
  BasicPointCloud(int dim, std::vector<S> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim < 1) throw std::invalid_argument("point cloud dimension must be positive");
    if (coords_.size() % static_cast<std::size_t>(dim) != 0)
      throw std::invalid_argument("coordinate count is not a multiple of the dimension");
  }

  int dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / static_cast<std::size_t>(dim_); }
  bool empty() const { return coords_.empty(); }

  std::span<const S> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  std::span<S> point(std::size_t i) {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }

  void push_back(std::span<const S> p) {
    if (p.size() != static_cast<std::size_t>(dim_))
      throw std::invalid_argument("point has wrong dimension");
    coords_.insert(coords_.end(), p.begin(), p.end());
  }
  void push_back(std::initializer_list<S> p) { push_back(std::span<const S>(p.begin(), p.size())); }
  void reserve(std::size_t n) { coords_.reserve(n * static_cast<std::size_t>(dim_)); }

  const std::vector<S>& coords() const { return coords_; }

  friend bool operator==(const BasicPointCloud&, const BasicPointCloud&) = default;

 private:
  int dim_ = 2;
  std::vector<S> coords_;
};

using PointCloud = BasicPointCloud<double>;
using ExactPointCloud = BasicPointCloud<Rational>;

/// Views a 2-dimensional cloud as planar points. Throws for d != 2.
template <class S>
Cloud2<S> as_planar(const BasicPointCloud<S>& cloud);

template <class S>
BasicPointCloud<S> from_planar(std::span<const Vec2<S>> pts);

/// Exact conversion of a floating cloud (every double is a dyadic rational).
ExactPointCloud to_exact(const PointCloud& cloud);
PointCloud to_floating(const ExactPointCloud& cloud);

/// Sign of the determinant of the edge matrix [p1 - p0; ...; pd - p0] for a
/// simplex of d + 1 points given as a cloud. Throws on dimension mismatch
/// or d outside {2, 3}.
int orientation(const PointCloud& simplex);
int orientation(const ExactPointCloud& simplex);

template <class S>
inline int orientation(const Vec2<S>& a, const Vec2<S>& b, const Vec2<S>& c) {
  return orient2d(a.x, a.y, b.x, b.y, c.x, c.y);
}

/// Supporting line {x : x . normal = offset} of a hull edge; the cloud lies in
/// {x . normal <= offset}. The normal is not normalized (exact in rationals).
template <class S>
struct HullFacet {
  std::vector<std::size_t> vertex_indices;
  Vec2<S> outward_normal;
  S offset;
};

template <class S>
struct Hull {
  /// Extreme points, counterclockwise for convex_hull and left to right for
  /// lower_hull.
  std::vector<std::size_t> vertices;
  std::vector<HullFacet<S>> facets;
};

/// Extreme points and edges of conv(pts). Collinear input yields the two
/// endpoints and no facets; a single distinct location yields one vertex.
template <class S>
Hull<S> convex_hull(std::span<const Vec2<S>> pts);

/// Part of the hull visible from below: vertices that admit a non-vertical
/// supporting line with the cloud on or above it, and the edges whose outward
/// normal points strictly downward.
template <class S>
Hull<S> lower_hull(std::span<const Vec2<S>> pts);

/// x -> matrix * x + offset on R^d.
template <class S>
class BasicAffineMap {
 public:
  /// `matrix` is row-major d x d. Throws std::invalid_argument if singular.
  BasicAffineMap(int dim, std::vector<S> matrix, std::vector<S> offset);

  static BasicAffineMap identity(int dim);

  int dim() const { return dim_; }
  const std::vector<S>& matrix() const { return matrix_; }
  const std::vector<S>& offset() const { return offset_; }
  const S& det_abs() const { return det_abs_; }

  void apply(std::span<const S> x, std::span<S> out) const;

 private:
  int dim_;
  std::vector<S> matrix_;
  std::vector<S> offset_;
  S det_abs_;
};

using AffineMap = BasicAffineMap<double>;
using ExactAffineMap = BasicAffineMap<Rational>;

template <class S>
BasicPointCloud<S> affine_apply(const BasicAffineMap<S>& map, const BasicPointCloud<S>& cloud);

/// Determinant by Gaussian elimination (exact for rationals).
template <class S>
S determinant(int dim, std::vector<S> m);

// CSV: one point per row, comma separated, optional header "x1,...,xd".
PointCloud read_cloud_csv(std::istream& in);
PointCloud read_cloud_csv_file(const std::string& path);
void write_cloud_csv(std::ostream& out, const PointCloud& cloud, bool header = true);

}  // namespace hullpeel

#endif  // HULLPEEL_GEOMETRY_HPP
