#ifndef HULLPEEL_PREDICATES_HPP
#define HULLPEEL_PREDICATES_HPP

#include <cmath>

#include <gmpxx.h>

namespace hullpeel {

using Rational = mpq_class;

namespace detail {

// Error-free transformations. Both outputs together represent the exact
// result; `lo` is the rounding error of `hi`.
inline void two_sum(double a, double b, double& hi, double& lo) {
  hi = a + b;
  const double bv = hi - a;
  const double av = hi - bv;
  lo = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& hi, double& lo) {
  hi = a * b;
  lo = std::fma(a, b, -hi);
}

// Adds `b` to the nonoverlapping expansion `e[0..n)` (increasing magnitude),
// dropping zero components. Returns the new length; `h` needs n + 1 slots.
inline int grow_expansion(const double* e, int n, double b, double* h) {
  double q = b;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    double hh;
    two_sum(q, e[i], q, hh);
    if (hh != 0.0) h[k++] = hh;
  }
  if (q != 0.0 || k == 0) h[k++] = q;
  return k;
}

int orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy);
int orient3d_exact(const double* a, const double* b, const double* c, const double* d);

}  // namespace detail

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }
inline int sign_of(const Rational& v) { return sgn(v); }

/// Sign of det[b - a; c - a]: +1 for a counterclockwise turn, -1 for
/// clockwise, 0 for collinear. Uses a floating-point filter and falls back
/// to exact expansion arithmetic when the filter cannot certify the sign.
inline int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
  const double detleft = (ax - cx) * (by - cy);
  const double detright = (ay - cy) * (bx - cx);
  const double det = detleft - detright;
  // (3 + 16 eps) eps with eps = 2^-53
  constexpr double kErrBound = 3.3306690738754716e-16;
  const double bound = kErrBound * (std::fabs(detleft) + std::fabs(detright));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return detail::orient2d_exact(ax, ay, bx, by, cx, cy);
}

inline int orient2d(const Rational& ax, const Rational& ay, const Rational& bx,
                    const Rational& by, const Rational& cx, const Rational& cy) {
  return sgn((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

/// Sign of det[b - a; c - a; d - a].
int orient3d(const double* a, const double* b, const double* c, const double* d);
int orient3d(const Rational* a, const Rational* b, const Rational* c, const Rational* d);

}  // namespace hullpeel

#endif  // HULLPEEL_PREDICATES_HPP
