#include "hullpeel/convex_peeling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "hull_chains.hpp"

namespace hullpeel {

namespace {

template <class S>
struct Item {
  Vec2<S> p;
  std::size_t idx;
};

template <class S>
std::string describe(const Vec2<S>& p) {
  std::ostringstream os;
  os << '(' << p.x << ", " << p.y << ')';
  return os.str();
}

}  // namespace

template <class S>
ConvexLayering<S> peel(std::span<const Vec2<S>> cloud) {
  if constexpr (std::is_same_v<S, double>) {
    if (cloud.size() >= kFastPeelThreshold) return detail::peel_with_disk_filter(cloud);
  }
  return detail::peel_reference(cloud);
}

template <class S>
ConvexLayering<S> peel_prefix(std::span<const Vec2<S>> cloud, std::size_t max_layers) {
  if (max_layers == 0) return peel(cloud);
  if constexpr (std::is_same_v<S, double>) {
    if (cloud.size() >= kFastPeelThreshold) return detail::peel_with_disk_filter(cloud, max_layers);
  }
  return detail::peel_reference(cloud, max_layers);
}

namespace detail {

template <class S>
ConvexLayering<S> peel_reference(std::span<const Vec2<S>> cloud, std::size_t max_layers) {
  ConvexLayering<S> out;
  out.points_.assign(cloud.begin(), cloud.end());
  out.layer_of_point_.assign(cloud.size(), 0);

  std::vector<Item<S>> active;
  active.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) active.push_back({cloud[i], i});
  std::sort(active.begin(), active.end(),
            [](const Item<S>& a, const Item<S>& b) {
              if (detail::lex_less(a.p, b.p)) return true;
              return !detail::lex_less(b.p, a.p) && a.idx < b.idx;
            });

  std::vector<std::size_t> lower;
  std::vector<std::size_t> upper;
  std::vector<char> on_boundary;
  int layer = 0;
  while (!active.empty() && (max_layers == 0 || std::size_t(layer) < max_layers)) {
    ++layer;
    const std::size_t n = active.size();
    const auto pt = [&](std::size_t k) -> const Vec2<S>& { return active[k].p; };
    detail::build_chains(n, pt, lower, upper);
    detail::mark_hull_boundary(n, pt, lower, upper, on_boundary);

    std::vector<std::size_t> poly;
    if (pt(0) == pt(n - 1)) {
      poly.push_back(active[0].idx);
    } else {
      for (std::size_t k : lower) poly.push_back(active[k].idx);
      for (std::size_t i = upper.size() - 1; i-- > 1;) poly.push_back(active[upper[i]].idx);
    }
    out.hulls_.push_back(std::move(poly));

    std::vector<std::size_t> members;
    std::size_t kept = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (on_boundary[k]) {
        members.push_back(active[k].idx);
        out.layer_of_point_[active[k].idx] = layer;
      } else {
        if (kept != k) active[kept] = std::move(active[k]);
        ++kept;
      }
    }
    active.resize(kept);
    std::sort(members.begin(), members.end());
    out.layers_.push_back(std::move(members));
  }
  return out;
}

namespace {

struct Ranked {
  Vec2<double> p;
  double d2;  // squared distance to the filter center
  std::size_t idx;
};

}  // namespace

ConvexLayering<double> peel_with_disk_filter(std::span<const Vec2<double>> cloud,
                                             std::size_t max_layers) {
  ConvexLayering<double> out;
  out.points_.assign(cloud.begin(), cloud.end());
  out.layer_of_point_.assign(cloud.size(), 0);

  double scale = 0;
  for (const auto& p : cloud) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});

  std::vector<Ranked> rem;
  rem.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) rem.push_back({cloud[i], 0.0, i});

  Vec2<double> c{0, 0};
  std::size_t centered_at = 0;
  const auto recenter = [&] {
    double sx = 0, sy = 0;
    for (const auto& r : rem) {
      sx += r.p.x;
      sy += r.p.y;
    }
    c = {sx / double(rem.size()), sy / double(rem.size())};
    for (auto& r : rem) {
      const double dx = r.p.x - c.x, dy = r.p.y - c.y;
      r.d2 = dx * dx + dy * dy;
    }
    std::sort(rem.begin(), rem.end(), [](const Ranked& a, const Ranked& b) { return a.d2 < b.d2; });
    centered_at = rem.size();
  };

  std::vector<std::size_t> order;
  std::vector<std::size_t> lower;
  std::vector<std::size_t> upper;
  std::vector<char> on_boundary;
  std::size_t last_count = 0;
  int layer = 0;
  while (!rem.empty() && (max_layers == 0 || std::size_t(layer) < max_layers)) {
    ++layer;
    if (2 * rem.size() <= centered_at || centered_at == 0) recenter();
    const std::size_t n = rem.size();
    std::size_t want = std::max<std::size_t>(256, 4 * last_count + 64);

    std::size_t start = 0;
    while (true) {
      const std::size_t k = std::min(n, want);
      start = n - k;
      order.resize(k);
      for (std::size_t j = 0; j < k; ++j) order[j] = start + j;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (detail::lex_less(rem[a].p, rem[b].p)) return true;
        return !detail::lex_less(rem[b].p, rem[a].p) && rem[a].idx < rem[b].idx;
      });
      const auto pt = [&](std::size_t j) -> const Vec2<double>& { return rem[order[j]].p; };
      detail::build_chains(k, pt, lower, upper);
      if (start == 0) break;

      // Every point closer to c than the candidates must lie strictly inside
      // the candidate hull; the disk of that radius around c certifies it.
      std::vector<std::size_t> poly(lower.begin(), lower.end());
      for (std::size_t i = upper.size() - 1; i-- > 1;) poly.push_back(upper[i]);
      bool ok = poly.size() >= 3;
      double rho = std::numeric_limits<double>::infinity();
      for (std::size_t e = 0; ok && e < poly.size(); ++e) {
        const auto& a = pt(poly[e]);
        const auto& b = pt(poly[(e + 1) % poly.size()]);
        if (orientation(a, b, c) <= 0) {
          ok = false;
          break;
        }
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double cross = ex * (c.y - a.y) - ey * (c.x - a.x);
        rho = std::min(rho, cross / std::hypot(ex, ey));
      }
      if (ok) {
        const double inner = std::sqrt(rem[start - 1].d2);
        ok = inner + 1e-9 * rho + 1e-12 * scale < rho;
      }
      if (ok) break;
      want = 2 * k;
    }

    const std::size_t k = n - start;
    const auto pt = [&](std::size_t j) -> const Vec2<double>& { return rem[order[j]].p; };
    detail::mark_hull_boundary(k, pt, lower, upper, on_boundary);

    std::vector<std::size_t> poly;
    if (pt(0) == pt(k - 1)) {
      poly.push_back(rem[order[0]].idx);
    } else {
      for (std::size_t j : lower) poly.push_back(rem[order[j]].idx);
      for (std::size_t i = upper.size() - 1; i-- > 1;) poly.push_back(rem[order[upper[i]]].idx);
    }
    out.hulls_.push_back(std::move(poly));

    std::vector<char> removed(k, 0);
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < k; ++j) {
      if (!on_boundary[j]) continue;
      removed[order[j] - start] = 1;
      members.push_back(rem[order[j]].idx);
      out.layer_of_point_[rem[order[j]].idx] = layer;
    }
    std::size_t kept = start;
    for (std::size_t j = start; j < n; ++j) {
      if (removed[j - start]) continue;
      if (kept != j) rem[kept] = rem[j];
      ++kept;
    }
    rem.resize(kept);
    last_count = members.size();
    std::sort(members.begin(), members.end());
    out.layers_.push_back(std::move(members));
  }
  return out;
}

}  // namespace detail

ConvexLayering<double> peel(const PointCloud& cloud) {
  const auto pts = as_planar(cloud);
  return peel(std::span<const Vec2<double>>(pts));
}

ConvexLayering<Rational> peel(const ExactPointCloud& cloud) {
  const auto pts = as_planar(cloud);
  return peel(std::span<const Vec2<Rational>>(pts));
}

template <class S>
std::vector<HullFacet<S>> ConvexLayering<S>::facets(std::size_t layer) const {
  std::vector<HullFacet<S>> out;
  const auto& h = hulls_.at(layer - 1);
  if (h.size() < 3) return out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto a = h[i];
    const auto b = h[(i + 1) % h.size()];
    const Vec2<S> n{points_[b].y - points_[a].y, points_[a].x - points_[b].x};
    S offset = n.x * points_[a].x + n.y * points_[a].y;
    out.push_back(HullFacet<S>{{a, b}, n, offset});
  }
  return out;
}

template <class S>
bool ConvexLayering<S>::in_interior(std::size_t layer, const Vec2<S>& x) const {
  const auto& h = hulls_[layer - 1];
  const std::size_t m = h.size();
  if (m < 3) return false;
  const auto v = [&](std::size_t i) -> const Vec2<S>& { return points_[h[i]]; };
  if (orientation(v(0), v(1), x) <= 0) return false;
  if (orientation(v(0), v(m - 1), x) >= 0) return false;
  std::size_t lo = 1;
  std::size_t hi = m - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (orientation(v(0), v(mid), x) > 0)
      lo = mid;
    else
      hi = mid;
  }
  return orientation(v(lo), v(hi), x) > 0;
}

template <class S>
int height(const ConvexLayering<S>& layering, const Vec2<S>& x) {
  // int K_{n+1} is contained in int K_n, so membership is monotone in n.
  std::size_t lo = 0;
  std::size_t hi = layering.num_layers() + 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (layering.in_interior(mid, x))
      lo = mid;
    else
      hi = mid;
  }
  return static_cast<int>(lo);
}

template <class S>
int max_height(const ConvexLayering<S>& layering) {
  const auto n = layering.num_layers();
  if (n == 0) return 0;
  return layering.hull_vertices().back().size() >= 3 ? static_cast<int>(n)
                                                      : static_cast<int>(n) - 1;
}

template <class S>
std::vector<std::size_t> layer_counts(const ConvexLayering<S>& layering) {
  std::vector<std::size_t> counts;
  counts.reserve(layering.num_layers());
  for (const auto& l : layering.layers()) counts.push_back(l.size());
  return counts;
}

template <class S>
CheckResult verify_dpp(std::span<const Vec2<S>> cloud, std::size_t max_points) {
  if (cloud.size() > max_points)
    throw std::invalid_argument("verify_dpp: cloud has " + std::to_string(cloud.size()) +
                                " points, bound is " + std::to_string(max_points));
  const auto layering = peel(cloud);
  const std::size_t n = cloud.size();
  std::vector<int> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = layering.layer_of_point()[i] - 1;

  // Value of the half-space {y : side(y) > 0} for the maximizing player.
  const auto value = [&](auto&& side) {
    int best = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (side(cloud[j]) > 0) best = std::max(best, 1 + h[j]);
    return best;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = cloud[i];
    int best = std::numeric_limits<int>::max();
    for (std::size_t k = 0; k < n; ++k) {
      if (cloud[k] == x) continue;
      const auto& z = cloud[k];
      for (int s : {1, -1}) {
        const int v = value([&](const Vec2<S>& y) { return s * orientation(x, z, y); });
        best = std::min(best, v);
      }
    }
    if (best == std::numeric_limits<int>::max()) best = 0;  // every point coincides with x
    if (best != h[i]) {
      return {false, "dpp inf-sup value " + std::to_string(best) + " != height " +
                         std::to_string(h[i]) + " at point " + std::to_string(i) + " " +
                         describe(x)};
    }

    // Player I's move along an outward normal of x's own layer.
    const auto layer = static_cast<std::size_t>(layering.layer_of_point()[i]);
    const auto& hv = layering.hull_vertices()[layer - 1];
    int facet_best = std::numeric_limits<int>::max();
    if (hv.size() >= 3) {
      for (std::size_t e = 0; e < hv.size(); ++e) {
        const auto& a = cloud[hv[e]];
        const auto& b = cloud[hv[(e + 1) % hv.size()]];
        if (orientation(a, b, x) != 0) continue;
        facet_best = std::min(
            facet_best, value([&](const Vec2<S>& y) { return -orientation(a, b, y); }));
      }
    } else if (hv.size() == 2) {
      const auto& a = cloud[hv[0]];
      const auto& b = cloud[hv[1]];
      for (int s : {1, -1})
        facet_best = std::min(
            facet_best, value([&](const Vec2<S>& y) { return s * orientation(a, b, y); }));
    } else {
      facet_best = value([&](const Vec2<S>& y) { return y.x > x.x ? 1 : 0; });
    }
    if (facet_best != h[i]) {
      return {false, "facet normal of layer " + std::to_string(layer) + " gives " +
                         std::to_string(facet_best) + ", height is " + std::to_string(h[i]) +
                         " at point " + std::to_string(i) + " " + describe(x)};
    }
  }
  return {};
}

template <class S>
CheckResult check_affine_invariance(const BasicPointCloud<S>& cloud,
                                    const BasicAffineMap<S>& map) {
  const auto before = peel(cloud);
  const auto after = peel(affine_apply(map, cloud));
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const int a = before.layer_of_point()[i];
    const int b = after.layer_of_point()[i];
    if (a != b)
      return {false, "point " + std::to_string(i) + " has layer " + std::to_string(a) +
                         " before and " + std::to_string(b) + " after the map"};
  }
  return {};
}

template <class S>
void write_layers_csv(std::ostream& out, const ConvexLayering<S>& layering) {
  out << "point_index,layer\n";
  for (std::size_t i = 0; i < layering.size(); ++i)
    out << i << ',' << layering.layer_of_point()[i] << '\n';
}

std::vector<std::size_t> svg_layer_selection(std::size_t num_layers, std::size_t every) {
  if (every == 0) every = std::max<std::size_t>(1, (num_layers + 9) / 10);
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n <= num_layers; n += every) out.push_back(n);
  return out;
}

void write_layers_svg(std::ostream& out, const ConvexLayering<double>& layering,
                      const SvgOptions& options) {
  const auto& pts = layering.points();
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!pts.empty()) {
    xmin = xmax = pts[0].x;
    ymin = ymax = pts[0].y;
    for (const auto& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double margin = 0.05 * options.size_px;
  const double scale = (options.size_px - 2 * margin) / span;
  const auto sx = [&](double x) { return margin + (x - xmin) * scale; };
  const auto sy = [&](double y) { return options.size_px - margin - (y - ymin) * scale; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.size_px
      << "\" height=\"" << options.size_px << "\" viewBox=\"0 0 " << options.size_px << ' '
      << options.size_px << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (options.draw_points) {
    out << "<g fill=\"#bbbbbb\" stroke=\"none\">\n";
    const double r = pts.size() > 5000 ? 0.4 : 1.5;
    for (const auto& p : pts)
      out << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"" << r << "\"/>\n";
    out << "</g>\n";
  }
  out << "<g fill=\"none\" stroke=\"black\" stroke-width=\"1\">\n";
  for (std::size_t layer : svg_layer_selection(layering.num_layers(), options.every)) {
    const auto& hv = layering.hull_vertices()[layer - 1];
    out << (hv.size() >= 3 ? "<polygon" : "<polyline") << " data-layer=\"" << layer
        << "\" points=\"";
    for (std::size_t i = 0; i < hv.size(); ++i)
      out << (i ? " " : "") << sx(pts[hv[i]].x) << ',' << sy(pts[hv[i]].y);
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

#define HULLPEEL_INSTANTIATE_PEELING(S)                                                      \
  template class ConvexLayering<S>;                                                          \
  template ConvexLayering<S> peel<S>(std::span<const Vec2<S>>);                              \
  template ConvexLayering<S> detail::peel_reference<S>(std::span<const Vec2<S>>, std::size_t); \
  template ConvexLayering<S> peel_prefix<S>(std::span<const Vec2<S>>, std::size_t);          \
  template int height<S>(const ConvexLayering<S>&, const Vec2<S>&);                          \
  template int max_height<S>(const ConvexLayering<S>&);                                      \
  template std::vector<std::size_t> layer_counts<S>(const ConvexLayering<S>&);               \
  template CheckResult verify_dpp<S>(std::span<const Vec2<S>>, std::size_t);                 \
  template CheckResult check_affine_invariance<S>(const BasicPointCloud<S>&,                 \
                                                  const BasicAffineMap<S>&);                 \
  template void write_layers_csv<S>(std::ostream&, const ConvexLayering<S>&);

HULLPEEL_INSTANTIATE_PEELING(double)
HULLPEEL_INSTANTIATE_PEELING(Rational)

#undef HULLPEEL_INSTANTIATE_PEELING

}  // namespace hullpeel
