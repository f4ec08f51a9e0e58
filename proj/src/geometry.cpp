#include "hullpeel/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hull_chains.hpp"

namespace hullpeel {

template <class S>
Cloud2<S> as_planar(const BasicPointCloud<S>& cloud) {
  if (cloud.dim() != 2)
    throw std::invalid_argument("planar routine called with a " + std::to_string(cloud.dim()) +
                                "-dimensional cloud");
  Cloud2<S> out;
  out.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    out.push_back({p[0], p[1]});
  }
  return out;
}

template <class S>
BasicPointCloud<S> from_planar(std::span<const Vec2<S>> pts) {
  std::vector<S> coords;
  coords.reserve(2 * pts.size());
  for (const auto& p : pts) {
    coords.push_back(p.x);
    coords.push_back(p.y);
  }
  return BasicPointCloud<S>(2, std::move(coords));
}

ExactPointCloud to_exact(const PointCloud& cloud) {
  std::vector<Rational> coords(cloud.coords().begin(), cloud.coords().end());
  return ExactPointCloud(cloud.dim(), std::move(coords));
}

PointCloud to_floating(const ExactPointCloud& cloud) {
  std::vector<double> coords;
  coords.reserve(cloud.coords().size());
  for (const auto& c : cloud.coords()) coords.push_back(c.get_d());
  return PointCloud(cloud.dim(), std::move(coords));
}

namespace {

template <class S>
int orientation_impl(const BasicPointCloud<S>& simplex) {
  const int d = simplex.dim();
  if (simplex.size() != static_cast<std::size_t>(d) + 1)
    throw std::invalid_argument("orientation needs d + 1 points, got " +
                                std::to_string(simplex.size()));
  if (d == 2) {
    const auto a = simplex.point(0), b = simplex.point(1), c = simplex.point(2);
    return orient2d(a[0], a[1], b[0], b[1], c[0], c[1]);
  }
  if (d == 3)
    return orient3d(simplex.point(0).data(), simplex.point(1).data(), simplex.point(2).data(),
                    simplex.point(3).data());
  throw std::invalid_argument("orientation supports d = 2 and d = 3 only");
}

template <class S>
std::vector<std::size_t> sorted_order(std::span<const Vec2<S>> pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return detail::lex_less(pts[a], pts[b]); });
  return order;
}

template <class S>
HullFacet<S> make_facet(std::span<const Vec2<S>> pts, std::size_t a, std::size_t b) {
  // Edge a -> b traversed with the interior on the left.
  const Vec2<S> n{pts[b].y - pts[a].y, pts[a].x - pts[b].x};
  S offset = n.x * pts[a].x + n.y * pts[a].y;
  return HullFacet<S>{{a, b}, n, offset};
}

}  // namespace

int orientation(const PointCloud& simplex) { return orientation_impl(simplex); }
int orientation(const ExactPointCloud& simplex) { return orientation_impl(simplex); }

template <class S>
Hull<S> convex_hull(std::span<const Vec2<S>> pts) {
  Hull<S> hull;
  if (pts.empty()) return hull;
  const auto order = sorted_order(pts);
  const auto pt = [&](std::size_t k) -> const Vec2<S>& { return pts[order[k]]; };
  std::vector<std::size_t> lower;
  std::vector<std::size_t> upper;
  detail::build_chains(order.size(), pt, lower, upper);

  if (pt(0) == pt(order.size() - 1)) {
    hull.vertices.push_back(order[0]);
    return hull;
  }
  for (std::size_t k : lower) hull.vertices.push_back(order[k]);
  for (std::size_t i = upper.size() - 1; i-- > 1;) hull.vertices.push_back(order[upper[i]]);
  if (hull.vertices.size() < 3) return hull;  // collinear: endpoints only

  for (std::size_t i = 0; i < hull.vertices.size(); ++i)
    hull.facets.push_back(
        make_facet(pts, hull.vertices[i], hull.vertices[(i + 1) % hull.vertices.size()]));
  return hull;
}

template <class S>
Hull<S> lower_hull(std::span<const Vec2<S>> pts) {
  Hull<S> hull;
  if (pts.empty()) return hull;
  const auto order = sorted_order(pts);
  const auto pt = [&](std::size_t k) -> const Vec2<S>& { return pts[order[k]]; };
  std::vector<std::size_t> lower;
  detail::build_lower_column_chain(order.size(), pt, lower);
  for (std::size_t k : lower) hull.vertices.push_back(order[k]);
  for (std::size_t i = 0; i + 1 < hull.vertices.size(); ++i)
    hull.facets.push_back(make_facet(pts, hull.vertices[i], hull.vertices[i + 1]));
  return hull;
}

template <class S>
S determinant(int dim, std::vector<S> m) {
  const auto n = static_cast<std::size_t>(dim);
  if (m.size() != n * n) throw std::invalid_argument("matrix size does not match dimension");
  S det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col; r < n; ++r) {
      using std::abs;
      if (abs(m[r * n + col]) > abs(m[pivot * n + col])) pivot = r;
    }
    if (m[pivot * n + col] == 0) return S(0);
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[pivot * n + c], m[col * n + c]);
      det = -det;
    }
    det *= m[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const S factor = m[r * n + col] / m[col * n + col];
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= factor * m[col * n + c];
    }
  }
  return det;
}

template <class S>
BasicAffineMap<S>::BasicAffineMap(int dim, std::vector<S> matrix, std::vector<S> offset)
    : dim_(dim), matrix_(std::move(matrix)), offset_(std::move(offset)) {
  const auto n = static_cast<std::size_t>(dim);
  if (dim < 1 || matrix_.size() != n * n || offset_.size() != n)
    throw std::invalid_argument("affine map shape does not match dimension");
  using std::abs;
  det_abs_ = abs(determinant(dim, matrix_));
  if (det_abs_ == 0) throw std::invalid_argument("affine map is singular");
}

template <class S>
BasicAffineMap<S> BasicAffineMap<S>::identity(int dim) {
  const auto n = static_cast<std::size_t>(dim);
  std::vector<S> m(n * n, S(0));
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1;
  return BasicAffineMap(dim, std::move(m), std::vector<S>(n, S(0)));
}

template <class S>
void BasicAffineMap<S>::apply(std::span<const S> x, std::span<S> out) const {
  const auto n = static_cast<std::size_t>(dim_);
  for (std::size_t r = 0; r < n; ++r) {
    S acc = offset_[r];
    for (std::size_t c = 0; c < n; ++c) acc += matrix_[r * n + c] * x[c];
    out[r] = acc;
  }
}

template <class S>
BasicPointCloud<S> affine_apply(const BasicAffineMap<S>& map, const BasicPointCloud<S>& cloud) {
  if (map.dim() != cloud.dim()) throw std::invalid_argument("affine map and cloud dimensions differ");
  std::vector<S> coords(cloud.coords().size());
  const auto d = static_cast<std::size_t>(cloud.dim());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    map.apply(cloud.point(i), std::span<S>(coords.data() + i * d, d));
  return BasicPointCloud<S>(cloud.dim(), std::move(coords));
}

namespace {

bool parse_double(std::string_view tok, double& out) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r'))
    tok.remove_suffix(1);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

PointCloud read_cloud_csv(std::istream& in) {
  std::string line;
  int dim = 0;
  std::vector<double> coords;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_commas(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (auto f : fields) {
      double v;
      if (!parse_double(f, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (dim == 0 && coords.empty()) {
        dim = static_cast<int>(fields.size());  // header line
        continue;
      }
      throw std::runtime_error("non-numeric value on CSV line " + std::to_string(line_no));
    }
    if (dim == 0) dim = static_cast<int>(row.size());
    if (row.size() != static_cast<std::size_t>(dim))
      throw std::runtime_error("CSV line " + std::to_string(line_no) + " has " +
                               std::to_string(row.size()) + " columns, expected " +
                               std::to_string(dim));
    for (double v : row)
      if (!std::isfinite(v))
        throw std::runtime_error("non-finite coordinate on CSV line " + std::to_string(line_no));
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (dim == 0) dim = 2;
  return PointCloud(dim, std::move(coords));
}

PointCloud read_cloud_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_cloud_csv(in);
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud, bool header) {
  if (header) {
    for (int j = 0; j < cloud.dim(); ++j) out << (j ? ",x" : "x") << (j + 1);
    out << '\n';
  }
  char buf[32];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (std::size_t j = 0; j < p.size(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), p[j]);
      if (j) out << ',';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

#define HULLPEEL_INSTANTIATE_GEOMETRY(S)                                                   \
  template Cloud2<S> as_planar<S>(const BasicPointCloud<S>&);                              \
  template BasicPointCloud<S> from_planar<S>(std::span<const Vec2<S>>);                    \
  template Hull<S> convex_hull<S>(std::span<const Vec2<S>>);                               \
  template Hull<S> lower_hull<S>(std::span<const Vec2<S>>);                                \
  template S determinant<S>(int, std::vector<S>);                                          \
  template class BasicAffineMap<S>;                                                        \
  template BasicPointCloud<S> affine_apply<S>(const BasicAffineMap<S>&, const BasicPointCloud<S>&);

HULLPEEL_INSTANTIATE_GEOMETRY(double)
HULLPEEL_INSTANTIATE_GEOMETRY(Rational)

#undef HULLPEEL_INSTANTIATE_GEOMETRY

}  // namespace hullpeel
