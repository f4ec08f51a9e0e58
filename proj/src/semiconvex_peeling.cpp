#include "hullpeel/semiconvex_peeling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hull_chains.hpp"
#include "hullpeel/random.hpp"

namespace hullpeel {

namespace {

template <class S>
struct Lifted {
  Vec2<S> u;
  std::size_t idx;
};

template <class S>
std::string describe(const Vec2<S>& p) {
  std::ostringstream os;
  os << '(' << p.x << ", " << p.y << ')';
  return os.str();
}

// Both the dynamic programming identity and the sentinel emulation need
// distinct abscissae: with two points in one column, the upper one can sit on
// a vertical side of S_n that no single parabola realizes.
template <class S>
void require_distinct_abscissae(std::span<const Vec2<S>> cloud, const char* what) {
  std::vector<S> xs;
  xs.reserve(cloud.size());
  for (const auto& p : cloud) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
    throw std::invalid_argument(std::string(what) + " needs distinct first coordinates");
}

template <class S>
std::vector<Lifted<S>> lifted_sorted(std::span<const Vec2<S>> cloud) {
  std::vector<Lifted<S>> out;
  out.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!(cloud[i].y > 0))
      throw std::invalid_argument("point " + std::to_string(i) + " " + describe(cloud[i]) +
                                  " is not in the open upper half-plane");
    out.push_back({lift(cloud[i]), i});
  }
  std::sort(out.begin(), out.end(), [](const Lifted<S>& a, const Lifted<S>& b) {
    if (detail::lex_less(a.u, b.u)) return true;
    return !detail::lex_less(b.u, a.u) && a.idx < b.idx;
  });
  return out;
}

// Height of the apex of the parabola whose lifted support line through u has
// slope a. Positive means the apex lies in H.
template <class S>
S apex_height(const Vec2<S>& u, const S& a) {
  return u.y - a * u.x + a * a / 2;
}

template <class S>
S slope(const Vec2<S>& a, const Vec2<S>& b) {
  return (b.y - a.y) / (b.x - a.x);
}

// One peeling step on lexicographically sorted lifted points: the lower chain
// (positions into `active`) and the boundary flags of semi(active).
template <class S>
void semiconvex_step(const std::vector<Lifted<S>>& active, std::vector<std::size_t>& chain,
                     std::vector<char>& flag) {
  const std::size_t n = active.size();
  const auto pt = [&](std::size_t k) -> const Vec2<S>& { return active[k].u; };
  detail::build_lower_column_chain(n, pt, chain);
  detail::mark_lower_boundary(n, pt, chain, flag);
  if (n == 0) return;

  // Points in the extreme columns lie on the vertical sides of the lifted set.
  const S& xl = pt(0).x;
  const S& xr = pt(n - 1).x;
  std::size_t li = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = pt(k);
    if (p.x == xl || p.x == xr) {
      flag[k] = 1;
      continue;
    }
    if (!flag[k]) continue;
    // Keep the point only if some support line through it comes from a
    // parabola with apex in H. The apex height is convex in the slope, so
    // checking the ends of the interval of support slopes suffices.
    while (pt(chain[li + 1]).x <= p.x) ++li;
    S best;
    if (pt(chain[li]).x == p.x) {
      best = std::max(apex_height(p, slope(pt(chain[li - 1]), pt(chain[li]))),
                      apex_height(p, slope(pt(chain[li]), pt(chain[li + 1]))));
    } else {
      best = apex_height(p, slope(pt(chain[li]), pt(chain[li + 1])));
    }
    if (!(best > 0)) flag[k] = 0;
  }
}

// x strictly above the chain and strictly between its end abscissae.
template <class S, class Get>
bool above_chain(const std::vector<std::size_t>& chain, Get&& pt, const Vec2<S>& u) {
  if (chain.size() < 2) return false;
  if (!(pt(chain.front()).x < u.x && u.x < pt(chain.back()).x)) return false;
  std::size_t lo = 0;
  std::size_t hi = chain.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (pt(chain[mid]).x <= u.x)
      lo = mid;
    else
      hi = mid;
  }
  return orientation(pt(chain[lo]), pt(chain[hi]), u) > 0;
}

template <class S>
std::size_t remove_flagged(std::vector<Lifted<S>>& active, const std::vector<char>& flag) {
  std::size_t kept = 0;
  for (std::size_t k = 0; k < active.size(); ++k) {
    if (flag[k]) continue;
    if (kept != k) active[kept] = std::move(active[k]);
    ++kept;
  }
  const std::size_t removed = active.size() - kept;
  active.resize(kept);
  if (removed == 0) throw std::logic_error("semiconvex peeling made no progress");
  return removed;
}

}  // namespace

namespace detail {

template <class S>
SemiconvexLayering<S> semiconvex_peel_impl(std::span<const Vec2<S>> cloud) {
  SemiconvexLayering<S> out;
  auto active = lifted_sorted(cloud);
  out.points_.assign(cloud.begin(), cloud.end());
  out.lifted_.resize(cloud.size());
  for (const auto& a : active) out.lifted_[a.idx] = a.u;
  out.layer_of_point_.assign(cloud.size(), 0);

  std::vector<std::size_t> chain;
  std::vector<char> flag;
  int layer = 0;
  while (!active.empty()) {
    ++layer;
    semiconvex_step(active, chain, flag);
    std::vector<std::size_t> chain_idx;
    chain_idx.reserve(chain.size());
    for (std::size_t k : chain) chain_idx.push_back(active[k].idx);
    out.chains_.push_back(std::move(chain_idx));
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (!flag[k]) continue;
      members.push_back(active[k].idx);
      out.layer_of_point_[active[k].idx] = layer;
    }
    std::sort(members.begin(), members.end());
    out.layers_.push_back(std::move(members));
    remove_flagged(active, flag);
  }
  return out;
}

}  // namespace detail

template <class S>
bool SemiconvexLayering<S>::in_interior(std::size_t layer, const Vec2<S>& x) const {
  const auto pt = [&](std::size_t i) -> const Vec2<S>& { return lifted_[i]; };
  return above_chain(chains_[layer - 1], pt, lift(x));
}

template <class S>
std::vector<std::size_t> semiconvex_first_layer(std::span<const Vec2<S>> cloud) {
  const auto active = lifted_sorted(cloud);
  std::vector<std::size_t> chain;
  std::vector<char> flag;
  semiconvex_step(active, chain, flag);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < active.size(); ++k)
    if (flag[k]) out.push_back(active[k].idx);
  std::sort(out.begin(), out.end());
  return out;
}

template <class S>
SemiconvexLayering<S> semiconvex_peel(std::span<const Vec2<S>> cloud) {
  return detail::semiconvex_peel_impl(cloud);
}

template <class S>
int s_height(const SemiconvexLayering<S>& layering, const Vec2<S>& x) {
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
int s_height_at(std::span<const Vec2<S>> cloud, const Vec2<S>& x) {
  auto active = lifted_sorted(cloud);
  const Vec2<S> u = lift(x);
  std::vector<std::size_t> chain;
  std::vector<char> flag;
  int count = 0;
  while (!active.empty()) {
    semiconvex_step(active, chain, flag);
    const auto pt = [&](std::size_t k) -> const Vec2<S>& { return active[k].u; };
    if (!above_chain(chain, pt, u)) break;
    ++count;
    remove_flagged(active, flag);
  }
  return count;
}

template <class S>
CheckResult verify_semidpp(std::span<const Vec2<S>> cloud, std::size_t max_points) {
  if (cloud.size() > max_points)
    throw std::invalid_argument("verify_semidpp: cloud has " + std::to_string(cloud.size()) +
                                " points, bound is " + std::to_string(max_points));
  require_distinct_abscissae(cloud, "verify_semidpp");
  const auto layering = semiconvex_peel(cloud);
  const auto& u = layering.lifted();
  const std::size_t n = cloud.size();
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = layering.layer_of_point()[i] - 1;

  const auto value = [&](auto&& inside) {
    int best = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (inside(u[j])) best = std::max(best, 1 + s[j]);
    return best;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = u[i];
    // Apexes far to the right or left: the region tends to one side of x.
    int best = value([&](const Vec2<S>& z) { return x.x < z.x || (z.x == x.x && z.y < x.y); });
    best = std::min(best,
                    value([&](const Vec2<S>& z) { return z.x < x.x || (z.x == x.x && z.y < x.y); }));
    // Apexes whose parabola also passes through another cloud point.
    for (std::size_t k = 0; k < n; ++k) {
      if (u[k].x == x.x) continue;
      const auto& a = u[k].x < x.x ? u[k] : x;
      const auto& b = u[k].x < x.x ? x : u[k];
      best = std::min(best, value([&](const Vec2<S>& z) { return orientation(a, b, z) < 0; }));
    }
    if (best != s[i])
      return {false, "semiconvex dpp value " + std::to_string(best) + " != s " +
                         std::to_string(s[i]) + " at point " + std::to_string(i) + " " +
                         describe(cloud[i])};
  }
  return {};
}

Cloud2<Rational> correspondence_sentinels(const Rational& truncation, std::size_t pairs) {
  // Pair k sits at (+-eps * 4^k, T * 2^(64 + k)). Heights double while the
  // offsets quadruple, so only the top pair and at most one bottom sentinel
  // are hull vertices at any step, and every hull edge reaching a sentinel is
  // steep enough to act as a vertical ray over the cloud.
  Cloud2<Rational> out;
  mpz_class width_unit = 1;
  mpz_class height_unit = 1;
  height_unit <<= 64;
  const Rational eps = truncation / Rational(mpz_class(1) << 256);
  for (std::size_t k = 1; k <= pairs; ++k) {
    width_unit <<= 2;
    height_unit <<= 1;
    const Rational x = eps * Rational(width_unit);
    const Rational y = truncation * Rational(height_unit);
    out.push_back({x, y});
    out.push_back({-x, y});
  }
  return out;
}

CheckResult correspondence_check(std::span<const Vec2<Rational>> cloud, const Rational& truncation,
                                 const CorrespondenceOptions& options) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& x = cloud[i];
    if (!(x.y > x.x * x.x / 2) || !(x.y < truncation))
      throw std::invalid_argument("point " + std::to_string(i) + " " + describe(x) +
                                  " is not inside the truncated parabola");
  }
  require_distinct_abscissae(cloud, "correspondence_check");
  const std::size_t pairs =
      options.sentinel_pairs ? options.sentinel_pairs : 2 * cloud.size() + 4;
  Cloud2<Rational> augmented(cloud.begin(), cloud.end());
  const auto sentinels = correspondence_sentinels(truncation, pairs);
  augmented.insert(augmented.end(), sentinels.begin(), sentinels.end());
  const auto convex = detail::peel_reference(std::span<const Vec2<Rational>>(augmented));

  Cloud2<Rational> projected;
  projected.reserve(cloud.size());
  for (const auto& x : cloud) projected.push_back(project(x));
  const auto semi = semiconvex_peel(std::span<const Vec2<Rational>>(projected));

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const int a = convex.layer_of_point()[i];
    const int b = semi.layer_of_point()[i];
    if (a != b)
      return {false, "point " + std::to_string(i) + " " + describe(cloud[i]) + ": convex layer " +
                         std::to_string(a) + ", semiconvex layer " + std::to_string(b)};
  }
  return {};
}

CheckResult correspondence_check(std::span<const Vec2<double>> cloud, double truncation,
                                 const CorrespondenceOptions& options) {
  Cloud2<Rational> exact;
  exact.reserve(cloud.size());
  for (const auto& p : cloud) exact.push_back({Rational(p.x), Rational(p.y)});
  return correspondence_check(std::span<const Vec2<Rational>>(exact), Rational(truncation), options);
}

template <class S>
Cloud2<S> periodize(std::span<const Vec2<S>> cloud, const S& period, int copies) {
  if (!(period > 0)) throw std::invalid_argument("period must be positive");
  if (copies < 0) throw std::invalid_argument("copies must be nonnegative");
  Cloud2<S> base;
  const S half = period / 2;
  for (const auto& p : cloud)
    if (-half < p.x && p.x < half) base.push_back(p);
  Cloud2<S> out(base.begin(), base.end());
  for (int j = 1; j <= copies; ++j) {
    for (int sign : {-1, 1}) {
      const S dx = period * S(sign * j);
      for (const auto& p : base) out.push_back({p.x + dx, p.y});
    }
  }
  return out;
}

Cloud2<double> cylinder_shell(const Cylinder& q, double pitch) {
  if (!(pitch > 0)) throw std::invalid_argument("shell pitch must be positive");
  Cloud2<double> out;
  const auto steps = static_cast<long>(std::floor(q.r / pitch + 1e-9));
  for (long k = 1; k <= steps; ++k) {
    const double y = std::min(q.r, double(k) * pitch);
    out.push_back({q.shift - q.r, y});
    out.push_back({q.shift + q.r, y});
  }
  const auto across = static_cast<long>(std::floor(2 * q.r / pitch + 1e-9));
  for (long k = 1; k < across; ++k) out.push_back({q.shift - q.r + double(k) * pitch, q.r});
  return out;
}

std::string to_string(AlphaRoute route) {
  switch (route) {
    case AlphaRoute::cell:
      return "cell";
    case AlphaRoute::maxdepth:
      return "maxdepth";
    case AlphaRoute::profile:
      return "profile";
  }
  return "cell";
}

AlphaRoute parse_alpha_route(const std::string& name) {
  if (name == "cell") return AlphaRoute::cell;
  if (name == "maxdepth") return AlphaRoute::maxdepth;
  if (name == "profile") return AlphaRoute::profile;
  throw std::invalid_argument("unknown route '" + name + "' (expected cell, maxdepth or profile)");
}

namespace {

AlphaEstimate mean_estimate(const std::vector<double>& values, double r) {
  AlphaEstimate e;
  e.trials = values.size();
  e.r = r;
  e.route = AlphaRoute::cell;
  const double n = double(values.size());
  e.alpha_hat = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() >= 2) {
    double ss = 0;
    for (double v : values) ss += (v - e.alpha_hat) * (v - e.alpha_hat);
    e.std_error = std::sqrt(ss / (n - 1) / n);
  }
  return e;
}

}  // namespace

CellResult cell_estimate(const CellConfig& config) {
  if (config.trials == 0) throw std::invalid_argument("cell_estimate needs at least one trial");
  if (!(config.r > 0)) throw std::invalid_argument("cell radius must be positive");
  if (!(config.beta >= 1)) throw std::invalid_argument("beta must be at least 1");

  const Cylinder narrow{config.beta * config.r, config.shift};
  const Cylinder wide{(config.beta + 1) * config.r, config.shift};
  const Vec2<double> query{config.shift, config.r};

  struct Pair {
    CellTrial narrow;
    CellTrial wide;
  };
  const auto trials = run_trials(config.trials, config.threads, [&](std::size_t t) {
    auto rng = trial_rng(config.seed, t);
    std::poisson_distribution<long long> count(wide.area());
    std::uniform_real_distribution<double> ux(wide.shift - wide.r, wide.shift + wide.r);
    std::uniform_real_distribution<double> uy(0.0, wide.r);
    const long long n = count(rng);
    Cloud2<double> cloud;
    cloud.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
      Vec2<double> p{ux(rng), uy(rng)};
      if (!wide.contains(p)) {
        --i;  // endpoints of the half-open draws
        continue;
      }
      cloud.push_back(p);
    }
    Cloud2<double> inner;
    for (const auto& p : cloud)
      if (narrow.contains(p)) inner.push_back(p);

    using clock = std::chrono::steady_clock;
    Pair out;
    auto t0 = clock::now();
    const int s_inner = s_height_at(std::span<const Vec2<double>>(inner), query);
    auto t1 = clock::now();
    const int s_wide = s_height_at(std::span<const Vec2<double>>(cloud), query);
    auto t2 = clock::now();
    out.narrow = {t, config.r, config.beta, s_inner, inner.size(),
                  std::chrono::duration<double, std::milli>(t1 - t0).count()};
    out.wide = {t, config.r, config.beta + 1, s_wide, cloud.size(),
                std::chrono::duration<double, std::milli>(t2 - t1).count()};
    return out;
  });

  CellResult result;
  result.config = config;
  std::vector<double> a_narrow;
  std::vector<double> a_wide;
  for (const auto& p : trials) {
    a_narrow.push_back(p.narrow.s_value / config.r);
    a_wide.push_back(p.wide.s_value / config.r);
    result.trials.push_back(p.narrow);
    result.trials.push_back(p.wide);
  }
  result.estimate = mean_estimate(a_narrow, config.r);
  result.estimate_wider = mean_estimate(a_wide, config.r);
  return result;
}

AlphaEstimate extrapolate_alpha(const std::vector<AlphaEstimate>& by_r) {
  if (by_r.empty()) throw std::invalid_argument("extrapolate_alpha needs at least one estimate");
  if (by_r.size() == 1) return by_r.front();
  // Weighted least squares for y = alpha + a x with x = r^{-1/2}.
  bool weighted = true;
  for (const auto& e : by_r) weighted = weighted && e.std_error > 0;
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t trials = 0;
  double r_max = 0;
  for (const auto& e : by_r) {
    const double w = weighted ? 1.0 / (e.std_error * e.std_error) : 1.0;
    const double x = 1.0 / std::sqrt(e.r);
    sw += w;
    sx += w * x;
    sy += w * e.alpha_hat;
    sxx += w * x * x;
    sxy += w * x * e.alpha_hat;
    trials += e.trials;
    r_max = std::max(r_max, e.r);
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0)) throw std::invalid_argument("extrapolate_alpha needs at least two distinct r");
  const double intercept = (sxx * sy - sx * sxy) / det;
  const double slope_fit = (sw * sxy - sx * sy) / det;
  double var = sxx / det;
  if (!weighted) {
    double rss = 0;
    for (const auto& e : by_r) {
      const double res = e.alpha_hat - intercept - slope_fit / std::sqrt(e.r);
      rss += res * res;
    }
    const double dof = double(by_r.size()) - 2;
    var *= dof > 0 ? rss / dof : 0.0;
  }
  AlphaEstimate out;
  out.alpha_hat = intercept;
  out.std_error = std::sqrt(std::max(0.0, var));
  out.trials = trials;
  out.r = std::numeric_limits<double>::infinity();
  out.route = AlphaRoute::cell;
  return out;
}

void write_cell_trials_csv(std::ostream& out, const std::vector<CellTrial>& trials) {
  out << "trial,r,beta,s_value,n_points,wall_ms\n";
  for (const auto& t : trials)
    out << t.trial << ',' << t.r << ',' << t.beta << ',' << t.s_value << ',' << t.n_points << ','
        << t.wall_ms << '\n';
}

#define HULLPEEL_INSTANTIATE_SEMICONVEX(S)                                                 \
  template class SemiconvexLayering<S>;                                                    \
  template SemiconvexLayering<S> detail::semiconvex_peel_impl<S>(std::span<const Vec2<S>>); \
  template std::vector<std::size_t> semiconvex_first_layer<S>(std::span<const Vec2<S>>);   \
  template SemiconvexLayering<S> semiconvex_peel<S>(std::span<const Vec2<S>>);             \
  template int s_height<S>(const SemiconvexLayering<S>&, const Vec2<S>&);                  \
  template int s_height_at<S>(std::span<const Vec2<S>>, const Vec2<S>&);                   \
  template CheckResult verify_semidpp<S>(std::span<const Vec2<S>>, std::size_t);           \
  template Cloud2<S> periodize<S>(std::span<const Vec2<S>>, const S&, int);

HULLPEEL_INSTANTIATE_SEMICONVEX(double)
HULLPEEL_INSTANTIATE_SEMICONVEX(Rational)

#undef HULLPEEL_INSTANTIATE_SEMICONVEX

}  // namespace hullpeel
