#ifndef HULLPEEL_CONVEX_PEELING_HPP
#define HULLPEEL_CONVEX_PEELING_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hullpeel/geometry.hpp"

namespace hullpeel {

/// Outcome of an executable property check. `detail` names the first
/// counterexample when `ok` is false.
struct CheckResult {
  bool ok = true;
  std::string detail;

  explicit operator bool() const { return ok; }
};

template <class S>
class ConvexLayering;

/// Clouds at least this large take the disk-filtered double-precision path.
inline constexpr std::size_t kFastPeelThreshold = 512;

namespace detail {
// Peels by rescanning every surviving point for each layer.
template <class S>
ConvexLayering<S> peel_reference(std::span<const Vec2<S>> cloud, std::size_t max_layers = 0);
// Same layering; each layer only rescans points outside a disk certified to
// lie strictly inside the current hull.
ConvexLayering<double> peel_with_disk_filter(std::span<const Vec2<double>> cloud,
                                             std::size_t max_layers = 0);
}  // namespace detail

/// Convex layers of a planar cloud.
///
/// Layer n holds the cloud points on the boundary of K_n, where K_1 is the
/// hull of the cloud and K_{n+1} is the hull of the cloud points strictly
/// inside K_n. Layer indices are 1-based. The height h(x) counts the open
/// hull interiors containing x, so a point of layer n has height n - 1.
template <class S>
class ConvexLayering {
 public:
  ConvexLayering() = default;

  std::size_t size() const { return points_.size(); }
  const Cloud2<S>& points() const { return points_; }

  /// 1-based layer index of each cloud point.
  const std::vector<int>& layer_of_point() const { return layer_of_point_; }
  /// Point indices on the boundary of each K_n (index 0 is layer 1).
  const std::vector<std::vector<std::size_t>>& layers() const { return layers_; }
  /// Strictly convex counterclockwise vertex indices of each K_n. Fewer than
  /// three vertices means K_n has empty interior.
  const std::vector<std::vector<std::size_t>>& hull_vertices() const { return hulls_; }

  std::size_t num_layers() const { return layers_.size(); }

  /// Facets of K_n (1-based), outward normals as in HullFacet.
  std::vector<HullFacet<S>> facets(std::size_t layer) const;

  /// True if x lies in the open interior of K_n (1-based).
  bool in_interior(std::size_t layer, const Vec2<S>& x) const;

 private:
  template <class T>
  friend ConvexLayering<T> detail::peel_reference(std::span<const Vec2<T>> cloud,
                                                  std::size_t max_layers);
  friend ConvexLayering<double> detail::peel_with_disk_filter(std::span<const Vec2<double>> cloud,
                                                              std::size_t max_layers);

  Cloud2<S> points_;
  std::vector<int> layer_of_point_;
  std::vector<std::vector<std::size_t>> layers_;
  std::vector<std::vector<std::size_t>> hulls_;
};

template <class S>
ConvexLayering<S> peel(std::span<const Vec2<S>> cloud);

template <class S>
ConvexLayering<S> peel(const Cloud2<S>& cloud) {
  return peel(std::span<const Vec2<S>>(cloud));
}

/// Peels only the first `max_layers` layers. Points left inside have layer
/// index 0, and in_interior/height are meaningful up to the last peeled layer.
template <class S>
ConvexLayering<S> peel_prefix(std::span<const Vec2<S>> cloud, std::size_t max_layers);

/// Runtime-dimension entry point; throws std::invalid_argument unless d = 2.
ConvexLayering<double> peel(const PointCloud& cloud);
ConvexLayering<Rational> peel(const ExactPointCloud& cloud);

/// h_X(x) = #{n : x in int K_n}.
template <class S>
int height(const ConvexLayering<S>& layering, const Vec2<S>& x);

/// Largest layer index (0 for an empty cloud).
template <class S>
int max_depth(const ConvexLayering<S>& layering) {
  return static_cast<int>(layering.num_layers());
}

/// max_x h_X(x): the layer count, less one if the innermost hull is flat.
template <class S>
int max_height(const ConvexLayering<S>& layering);

/// Number of cloud points on each layer, outermost first.
template <class S>
std::vector<std::size_t> layer_counts(const ConvexLayering<S>& layering);

/// Checks the half-space dynamic programming principle at every cloud point:
/// h(x) equals the minimum over directions p of the largest 1 + h(y) among
/// cloud points y with p . (y - x) > 0 (0 when there are none), the minimum
/// taken over the finite set of directions normal to x - z for z in the
/// cloud. Also checks that an outward facet normal of x's own layer attains
/// it. Throws std::invalid_argument above `max_points`.
template <class S>
CheckResult verify_dpp(std::span<const Vec2<S>> cloud, std::size_t max_points = 64);

/// Compares layer indices of the cloud and of its affine image.
template <class S>
CheckResult check_affine_invariance(const BasicPointCloud<S>& cloud, const BasicAffineMap<S>& map);

/// Serializes (point_index, layer) rows with a header line.
template <class S>
void write_layers_csv(std::ostream& out, const ConvexLayering<S>& layering);

struct SvgOptions {
  /// Outline every k-th layer starting from the first; 0 picks k so that at
  /// most ten outlines are drawn.
  std::size_t every = 0;
  double size_px = 600.0;
  bool draw_points = true;
};

/// Layer indices (1-based) that write_layers_svg draws for the given options.
std::vector<std::size_t> svg_layer_selection(std::size_t num_layers, std::size_t every);

void write_layers_svg(std::ostream& out, const ConvexLayering<double>& layering,
                      const SvgOptions& options = {});

extern template class ConvexLayering<double>;
extern template class ConvexLayering<Rational>;

}  // namespace hullpeel

#endif  // HULLPEEL_CONVEX_PEELING_HPP
