#include "hullpeel/predicates.hpp"

#include <array>

namespace hullpeel {
namespace detail {

namespace {

struct TwoTerm {
  double hi;
  double lo;
};

TwoTerm exact_diff(double a, double b) {
  TwoTerm t{};
  two_sum(a, -b, t.hi, t.lo);
  return t;
}

// Accumulates sign * (x.hi + x.lo) * (y.hi + y.lo) into the expansion.
int accumulate_product(const TwoTerm& x, const TwoTerm& y, double sign, double* e, int n,
                       double* scratch) {
  const std::array<double, 2> xs{x.hi, x.lo};
  const std::array<double, 2> ys{y.hi, y.lo};
  for (double xv : xs) {
    for (double yv : ys) {
      double hi;
      double lo;
      two_product(sign * xv, yv, hi, lo);
      n = grow_expansion(e, n, lo, scratch);
      std::copy(scratch, scratch + n, e);
      n = grow_expansion(e, n, hi, scratch);
      std::copy(scratch, scratch + n, e);
    }
  }
  return n;
}

}  // namespace

int orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy) {
  const TwoTerm acx = exact_diff(ax, cx);
  const TwoTerm bcx = exact_diff(bx, cx);
  const TwoTerm acy = exact_diff(ay, cy);
  const TwoTerm bcy = exact_diff(by, cy);

  // 16 product terms at most, plus growth slack.
  std::array<double, 40> e{};
  std::array<double, 40> scratch{};
  int n = 0;
  n = accumulate_product(acx, bcy, 1.0, e.data(), n, scratch.data());
  n = accumulate_product(acy, bcx, -1.0, e.data(), n, scratch.data());
  return sign_of(e[static_cast<std::size_t>(n - 1)]);
}

int orient3d_exact(const double* a, const double* b, const double* c, const double* d) {
  std::array<Rational, 3> pa;
  std::array<Rational, 3> pb;
  std::array<Rational, 3> pc;
  std::array<Rational, 3> pd;
  for (int i = 0; i < 3; ++i) {
    pa[i] = a[i];
    pb[i] = b[i];
    pc[i] = c[i];
    pd[i] = d[i];
  }
  return orient3d(pa.data(), pb.data(), pc.data(), pd.data());
}

}  // namespace detail

int orient3d(const double* a, const double* b, const double* c, const double* d) {
  const double bx = b[0] - a[0], by = b[1] - a[1], bz = b[2] - a[2];
  const double cx = c[0] - a[0], cy = c[1] - a[1], cz = c[2] - a[2];
  const double dx = d[0] - a[0], dy = d[1] - a[1], dz = d[2] - a[2];
  const double t1 = bx * (cy * dz - cz * dy);
  const double t2 = by * (cz * dx - cx * dz);
  const double t3 = bz * (cx * dy - cy * dx);
  const double det = t1 + t2 + t3;
  const double permanent =
      std::fabs(bx) * (std::fabs(cy * dz) + std::fabs(cz * dy)) +
      std::fabs(by) * (std::fabs(cz * dx) + std::fabs(cx * dz)) +
      std::fabs(bz) * (std::fabs(cx * dy) + std::fabs(cy * dx));
  // Loose bound; the differences b - a etc. are themselves rounded, so we
  // use a generous constant and defer to exact evaluation otherwise.
  constexpr double kErrBound = 1.0e-14;
  const double bound = kErrBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return detail::orient3d_exact(a, b, c, d);
}

int orient3d(const Rational* a, const Rational* b, const Rational* c, const Rational* d) {
  const Rational bx = b[0] - a[0], by = b[1] - a[1], bz = b[2] - a[2];
  const Rational cx = c[0] - a[0], cy = c[1] - a[1], cz = c[2] - a[2];
  const Rational dx = d[0] - a[0], dy = d[1] - a[1], dz = d[2] - a[2];
  const Rational det = bx * (cy * dz - cz * dy) + by * (cz * dx - cx * dz) + bz * (cx * dy - cy * dx);
  return sgn(det);
}

}  // namespace hullpeel
