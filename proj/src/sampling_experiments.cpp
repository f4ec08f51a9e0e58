#include "hullpeel/sampling_experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/LU>

#include "hullpeel/convex_peeling.hpp"

#ifndef HULLPEEL_BUILD_ID
#define HULLPEEL_BUILD_ID "unknown"
#endif

namespace hullpeel {

std::string build_id() { return HULLPEEL_BUILD_ID; }

std::string to_string(SamplingMode mode) { return mode == SamplingMode::poisson ? "poisson" : "iid"; }

SamplingMode parse_sampling_mode(const std::string& name) {
  if (name == "poisson") return SamplingMode::poisson;
  if (name == "iid") return SamplingMode::iid;
  throw std::invalid_argument("unknown sampling mode '" + name + "' (poisson | iid)");
}

namespace {

// Counterclockwise strictly convex vertices of the domain.
Cloud2<double> domain_polygon(const ConvexDomain& domain) {
  const auto hull = convex_hull(std::span<const Vec2<double>>(domain.vertices));
  if (hull.vertices.size() < 3) throw std::invalid_argument("convex domain has empty interior");
  Cloud2<double> poly;
  for (auto i : hull.vertices) poly.push_back(domain.vertices[i]);
  return poly;
}

bool inside_polygon(const Cloud2<double>& poly, const Vec2<double>& p) {
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (orientation(poly[i], poly[(i + 1) % poly.size()], p) <= 0) return false;
  return true;
}

std::size_t draw_count(const SamplerSpec& spec, Rng& rng) {
  if (spec.mode == SamplingMode::iid) return static_cast<std::size_t>(std::llround(spec.intensity));
  if (spec.intensity == 0) return 0;
  std::poisson_distribution<long long> count(spec.intensity);
  return static_cast<std::size_t>(count(rng));
}

PointCloud sample_radial(const RadialDensity& f, std::size_t n, Rng& rng) {
  const int d = f.dim;
  PointCloud out(d);
  out.reserve(n);
  std::optional<Matrix> inverse;
  if (f.frame) inverse = f.frame->A.inverse();

  double box = 0;
  double f_max = 0;
  switch (f.kind) {
    case DensityKind::uniform_ball:
      box = f.radius;
      break;
    case DensityKind::gaussian:
      break;
    case DensityKind::table:
      box = f.table_r.back();
      f_max = *std::max_element(f.table_f.begin(), f.table_f.end());
      break;
  }
  std::uniform_real_distribution<double> side(-box, box);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  Vector z(d);
  std::vector<double> x(static_cast<std::size_t>(d));
  while (out.size() < n) {
    if (f.kind == DensityKind::gaussian) {
      for (int i = 0; i < d; ++i) z(i) = normal(rng);
    } else {
      for (int i = 0; i < d; ++i) z(i) = side(rng);
      const double r = z.norm();
      if (f.kind == DensityKind::uniform_ball && !(r < f.radius)) continue;
      if (f.kind == DensityKind::table && !(unit(rng) * f_max < f.radial(r))) continue;
    }
    if (inverse) z = *inverse * (z - f.frame->b);
    for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = z(i);
    out.push_back(std::span<const double>(x));
  }
  return out;
}

PointCloud sample_domain(const ConvexDomain& domain, std::size_t n, Rng& rng) {
  const auto poly = domain_polygon(domain);
  double x0 = poly[0].x, x1 = poly[0].x, y0 = poly[0].y, y1 = poly[0].y;
  for (const auto& p : poly) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  std::uniform_real_distribution<double> ux(x0, x1);
  std::uniform_real_distribution<double> uy(y0, y1);
  PointCloud out(2);
  out.reserve(n);
  while (out.size() < n) {
    const Vec2<double> p{ux(rng), uy(rng)};
    if (inside_polygon(poly, p)) out.push_back({p.x, p.y});
  }
  return out;
}

std::uint64_t stream_seed(std::uint64_t seed, std::size_t schedule_index, std::size_t trial) {
  return splitmix64(splitmix64(seed + schedule_index) ^ splitmix64(trial));
}

Estimate mean_and_error(const std::vector<double>& v) {
  Estimate e;
  if (v.empty()) return e;
  const double n = double(v.size());
  e.value = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() >= 2) {
    double ss = 0;
    for (double x : v) ss += (x - e.value) * (x - e.value);
    e.std_error = std::sqrt(ss / (n - 1) / n);
  }
  return e;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

double peak_height(const RadialDensity& f) { return h_radial(0.0, f); }

void require_trials(std::size_t trials) {
  if (trials < 2) throw std::invalid_argument("experiments need at least two trials");
}

void require_planar(int dim) {
  if (dim != 2)
    throw std::invalid_argument("peeling experiments run in d = 2 only (got d = " + std::to_string(dim) +
                                ")");
}

std::size_t as_count(double n, const char* what) {
  if (!(n >= 1) || std::abs(n - std::round(n)) > 1e-9 || n > 1e12)
    throw std::invalid_argument(std::string(what) + " must be a positive integer");
  return static_cast<std::size_t>(std::llround(n));
}

Cloud2<double> planar_sample(const RadialDensity& f, SamplingMode mode, double intensity,
                             std::uint64_t seed) {
  SamplerSpec spec;
  spec.mode = mode;
  spec.intensity = intensity;
  spec.density = f;
  spec.seed = seed;
  Rng rng(seed);
  return as_planar(sample(spec, rng));
}

std::string csv_double(double v) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

Json estimate_json(const Estimate& e) { return Json{{"value", e.value}, {"stderr", e.std_error}}; }

Json fit_json(const LinearFit& f) {
  return Json{{"slope", estimate_json(f.slope)}, {"intercept", estimate_json(f.intercept)}};
}

}  // namespace

int SamplerSpec::dim() const {
  if (const auto* f = std::get_if<RadialDensity>(&density)) return f->dim;
  return 2;
}

void SamplerSpec::validate() const {
  if (!(intensity >= 0) || !std::isfinite(intensity))
    throw std::invalid_argument("intensity must be finite and nonnegative");
  if (mode == SamplingMode::iid) as_count(intensity, "iid point count");
  if (const auto* f = std::get_if<RadialDensity>(&density)) {
    f->validate();
    if (f->frame && std::abs(f->frame->A.determinant()) == 0)
      throw std::invalid_argument("density frame is singular");
  } else {
    domain_polygon(std::get<ConvexDomain>(density));
  }
}

PointCloud sample(const SamplerSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t n = draw_count(spec, rng);
  if (const auto* f = std::get_if<RadialDensity>(&spec.density)) return sample_radial(*f, n, rng);
  return sample_domain(std::get<ConvexDomain>(spec.density), n, rng);
}

PointCloud sample(const SamplerSpec& spec) {
  Rng rng(splitmix64(spec.seed));
  return sample(spec, rng);
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line needs two or more points");
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) throw std::invalid_argument("fit_line needs distinct abscissae");
  LinearFit fit;
  fit.slope.value = sxy / sxx;
  fit.intercept.value = my - fit.slope.value * mx;
  if (x.size() >= 3) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept.value - fit.slope.value * x[i];
      rss += r * r;
    }
    const double s2 = rss / (n - 2);
    fit.slope.std_error = std::sqrt(s2 / sxx);
    fit.intercept.std_error = std::sqrt(s2 * (1 / n + mx * mx / sxx));
  }
  return fit;
}

GridProfile limit_shape_grid(const RadialDensity& density, double pitch, double extent) {
  require_planar(density.dim);
  if (!(pitch > 0)) throw std::invalid_argument("grid pitch must be positive");
  const double support = density.support_radius();
  const double reach = std::isfinite(support) ? support : extent;
  if (!(reach > 0)) throw std::invalid_argument("grid extent must be positive");

  Vector centre = Vector::Zero(2);
  Vector half = Vector::Constant(2, reach);
  if (density.frame) {
    const Matrix inv = density.frame->A.inverse();
    centre = -inv * density.frame->b;
    for (int i = 0; i < 2; ++i) half(i) = reach * inv.row(i).norm();
  }
  GridProfile g;
  const long i0 = long(std::ceil((centre(0) - half(0)) / pitch));
  const long i1 = long(std::floor((centre(0) + half(0)) / pitch));
  const long j0 = long(std::ceil((centre(1) - half(1)) / pitch));
  const long j1 = long(std::floor((centre(1) + half(1)) / pitch));
  Vector x(2);
  for (long i = i0; i <= i1; ++i) {
    for (long j = j0; j <= j1; ++j) {
      x << double(i) * pitch, double(j) * pitch;
      const double r = density.frame_radius(x);
      if (r > reach) continue;
      g.grid.push_back({x(0), x(1)});
      g.h_exact.push_back(h_radial(r, density));
    }
  }
  return g;
}

MaxDepthReport exp_max_depth_scaling(const MaxDepthConfig& config) {
  require_trials(config.trials);
  require_planar(config.density.dim);
  config.density.validate();
  if (config.n_schedule.empty()) throw std::invalid_argument("n schedule is empty");
  std::vector<std::size_t> ns;
  for (double n : config.n_schedule) {
    ns.push_back(as_count(n, "n"));
    if (ns.back() < 3) throw std::invalid_argument("n must be at least 3");
    if (ns.size() > 1 && ns.back() <= ns[ns.size() - 2])
      throw std::invalid_argument("n schedule must be strictly increasing");
  }
  const int d = config.density.dim;
  const double exponent = 2.0 / (d + 1);
  const double h0 = peak_height(config.density);

  MaxDepthReport report;
  report.config = config;
  report.records = run_trials(ns.size() * config.trials, config.threads, [&](std::size_t idx) {
    MaxDepthRecord rec;
    const std::size_t k = idx / config.trials;
    rec.n = ns[k];
    rec.trial = idx % config.trials;
    rec.stream_seed = stream_seed(config.seed, k, rec.trial);
    const auto cloud = planar_sample(config.density, SamplingMode::iid, double(rec.n), rec.stream_seed);
    const auto layering = peel(cloud);
    rec.layers = max_depth(layering);
    rec.max_height = max_height(layering);
    rec.implied_alpha = rec.max_height / (std::pow(double(rec.n), exponent) * h0);
    return rec;
  });

  std::vector<double> log_n, log_h;
  double sw = 0, swl = 0;
  bool weighted = true;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    std::vector<double> heights, alphas;
    for (std::size_t t = 0; t < config.trials; ++t) {
      const auto& rec = report.records[k * config.trials + t];
      heights.push_back(rec.max_height);
      alphas.push_back(rec.implied_alpha);
    }
    MaxDepthRow row{ns[k], mean_and_error(heights), mean_and_error(alphas)};
    report.rows.push_back(row);
    log_n.push_back(std::log(double(ns[k])));
    log_h.push_back(std::log(row.max_height.value));
    weighted = weighted && row.implied_alpha.std_error > 0;
  }
  report.log_fit = fit_line(log_n, log_h);

  for (const auto& row : report.rows) {
    const double rel = row.implied_alpha.std_error / row.implied_alpha.value;
    const double w = weighted ? 1.0 / (rel * rel) : 1.0;
    sw += w;
    swl += w * std::log(row.implied_alpha.value);
  }
  report.alpha.route = AlphaRoute::maxdepth;
  report.alpha.alpha_hat = std::exp(swl / sw);
  report.alpha.trials = ns.size() * config.trials;
  if (weighted) {
    report.alpha.std_error = report.alpha.alpha_hat / std::sqrt(sw);
  } else {
    std::vector<double> la;
    for (const auto& row : report.rows) la.push_back(row.implied_alpha.value);
    report.alpha.std_error = mean_and_error(la).std_error;
  }
  return report;
}

LimitShapeReport exp_limit_shape(const LimitShapeConfig& config) {
  require_trials(config.trials);
  require_planar(config.density.dim);
  config.density.validate();
  if (config.m_schedule.empty()) throw std::invalid_argument("m schedule is empty");
  for (double m : config.m_schedule)
    if (!(m > 0)) throw std::invalid_argument("m must be positive");
  if (config.mode == SamplingMode::iid)
    for (double m : config.m_schedule) as_count(m, "n");
  if (!(config.alpha > 0)) throw std::invalid_argument("alpha must be positive");

  const auto grid = limit_shape_grid(config.density, config.pitch, config.extent);
  if (grid.grid.empty()) throw std::invalid_argument("grid has no points; reduce the pitch");
  const int d = config.density.dim;
  const std::size_t K = config.m_schedule.size();

  LimitShapeReport report;
  report.config = config;
  report.grid_points = grid.grid.size();
  report.alpha_h0 = config.alpha * peak_height(config.density);
  double hh = 0;
  for (double h : grid.h_exact) hh += h * h;

  report.records = run_trials(K * config.trials, config.threads, [&](std::size_t idx) {
    LimitShapeRecord rec;
    const std::size_t k = idx / config.trials;
    rec.m = config.m_schedule[k];
    rec.trial = idx % config.trials;
    rec.stream_seed = stream_seed(config.seed, k, rec.trial);
    const auto cloud = planar_sample(config.density, config.mode, rec.m, rec.stream_seed);
    rec.n_points = cloud.size();
    const auto layering = peel(cloud);
    const double scale = std::pow(rec.m, -2.0 / (d + 1));
    double yh = 0;
    for (std::size_t i = 0; i < grid.grid.size(); ++i) {
      const double y = scale * height(layering, grid.grid[i]);
      const double e = std::abs(y - config.alpha * grid.h_exact[i]);
      if (e > rec.sup_error) {
        rec.sup_error = e;
        rec.argmax = grid.grid[i];
      }
      yh += y * grid.h_exact[i];
    }
    rec.profile_alpha = hh > 0 ? yh / hh : 0.0;
    return rec;
  });

  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> errs, alphas;
    for (std::size_t t = 0; t < config.trials; ++t) {
      const auto& rec = report.records[k * config.trials + t];
      errs.push_back(rec.sup_error);
      alphas.push_back(rec.profile_alpha);
    }
    LimitShapeRow row;
    row.m = config.m_schedule[k];
    row.median_sup_error = median(errs);
    row.mean_sup_error = mean_and_error(errs).value;
    row.max_sup_error = *std::max_element(errs.begin(), errs.end());
    row.median_relative = row.median_sup_error / report.alpha_h0;
    row.profile_alpha = mean_and_error(alphas);
    report.rows.push_back(row);
  }
  report.strictly_decreasing = true;
  for (std::size_t k = 1; k < K; ++k)
    report.strictly_decreasing =
        report.strictly_decreasing && report.rows[k].median_sup_error < report.rows[k - 1].median_sup_error;
  return report;
}

LayerCountsReport exp_layer_counts(const LayerCountsConfig& config) {
  require_trials(config.trials);
  require_planar(config.density.dim);
  config.density.validate();
  if (config.density.kind == DensityKind::table)
    throw std::invalid_argument("layer counts need the uniform ball or the gaussian");
  if (config.mode == SamplingMode::iid) as_count(config.n, "n");
  if (!(config.n > 0)) throw std::invalid_argument("n must be positive");
  if (!(config.alpha > 0)) throw std::invalid_argument("alpha must be positive");
  if (!(0 <= config.bulk_lo && config.bulk_lo < config.bulk_hi && config.bulk_hi <= 1))
    throw std::invalid_argument("bulk region must satisfy 0 <= lo < hi <= 1");

  const int d = config.density.dim;
  const double m = config.n;
  const double t_step = std::pow(m, -2.0 / (d + 1));
  const double count_scale = std::pow(m, -double(d - 1) / (d + 1));
  const double h0 = peak_height(config.density);
  const double ah0 = config.alpha * h0;
  const auto law = [&](double t) { return t < ah0 ? N_of_t(t, config.density, config.alpha) : 0.0; };
  const auto in_bulk = [&](double t) { return t >= config.bulk_lo * ah0 && t <= config.bulk_hi * ah0; };
  const auto relative_l1 = [&](const std::vector<double>& scaled) {
    double num = 0, den = 0;
    // Layers past the end of the observed ones have zero count.
    for (std::size_t i = 0;; ++i) {
      const double t = double(i) * t_step;
      if (t > config.bulk_hi * ah0) break;
      if (!in_bulk(t)) continue;
      const double y = i < scaled.size() ? scaled[i] : 0.0;
      const double p = law(t);
      num += std::abs(y - p);
      den += p;
    }
    return den > 0 ? num / den : 0.0;
  };

  LayerCountsReport report;
  report.config = config;
  report.alpha_h0 = ah0;
  report.records = run_trials(config.trials, config.threads, [&](std::size_t t) {
    LayerCountsRecord rec;
    rec.trial = t;
    rec.stream_seed = stream_seed(config.seed, 0, t);
    const auto cloud = planar_sample(config.density, config.mode, m, rec.stream_seed);
    rec.n_points = cloud.size();
    rec.counts = layer_counts(peel(cloud));
    std::vector<double> scaled;
    for (auto c : rec.counts) scaled.push_back(double(c) * count_scale);
    rec.bulk_l1 = relative_l1(scaled);
    return rec;
  });

  std::size_t layers = 0;
  for (const auto& rec : report.records) {
    layers = std::max(layers, rec.counts.size());
    const auto total = std::accumulate(rec.counts.begin(), rec.counts.end(), std::size_t{0});
    report.counts_sum_to_size = report.counts_sum_to_size && total == rec.n_points;
  }
  std::vector<double> mean_scaled(layers, 0.0);
  for (const auto& rec : report.records)
    for (std::size_t i = 0; i < rec.counts.size(); ++i) mean_scaled[i] += double(rec.counts[i]);
  for (std::size_t i = 0; i < layers; ++i) {
    mean_scaled[i] *= count_scale / double(config.trials);
    const double t = double(i) * t_step;
    report.curve.push_back({i + 1, t, mean_scaled[i], law(t)});
  }
  report.bulk_l1 = relative_l1(mean_scaled);

  const auto radius_at = [&](double t) {
    if (t <= 0) return std::numeric_limits<double>::infinity();
    if (t >= ah0) return 0.0;
    return invert_h(t / config.alpha, config.density);
  };
  const auto mass = [&](double r) { return std::isfinite(r) ? radial_mass(r, config.density) : 1.0; };
  for (const auto& [wa, wb] : config.windows) {
    if (!(0 <= wa && wa < wb)) throw std::invalid_argument("layer windows need 0 <= a < b");
    LayerWindow w;
    w.a = wa * ah0;
    w.b = wb * ah0;
    std::vector<double> fractions;
    for (const auto& rec : report.records) {
      double sum = 0;
      for (std::size_t i = 0; i < rec.counts.size(); ++i) {
        const double t = double(i) * t_step;
        if (t >= w.a && t <= w.b) sum += double(rec.counts[i]);
      }
      fractions.push_back(rec.n_points ? sum / double(rec.n_points) : 0.0);
    }
    w.empirical = mean_and_error(fractions).value;
    w.predicted = mass(radius_at(w.a)) - mass(radius_at(w.b));
    w.relative_error = w.predicted > 0 ? std::abs(w.empirical - w.predicted) / w.predicted : 0.0;
    report.windows.push_back(w);
  }
  return report;
}

BoundaryLayerReport exp_boundary_layer(const BoundaryLayerConfig& config) {
  require_trials(config.trials);
  require_planar(config.density.dim);
  config.density.validate();
  if (config.layers < 2) throw std::invalid_argument("boundary layer report needs at least two layers");
  if (!(config.factor > 0)) throw std::invalid_argument("factor must be positive");
  std::vector<std::size_t> ns;
  for (double n : config.n_schedule) ns.push_back(as_count(n, "n"));
  if (ns.empty()) throw std::invalid_argument("n schedule is empty");

  const std::size_t L = config.layers;
  const auto counts = run_trials(ns.size() * config.trials, config.threads, [&](std::size_t idx) {
    const std::size_t k = idx / config.trials;
    const auto seed = stream_seed(config.seed, k, idx % config.trials);
    const auto cloud = planar_sample(config.density, config.mode, double(ns[k]), seed);
    const auto layering = peel_prefix(std::span<const Vec2<double>>(cloud), L);
    std::vector<double> c(L, 0.0);
    for (std::size_t i = 0; i < std::min(L, layering.num_layers()); ++i)
      c[i] = double(layering.layers()[i].size());
    return c;
  });

  BoundaryLayerReport report;
  report.config = config;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    BoundaryLayerRow row;
    row.n = ns[k];
    for (std::size_t i = 0; i < L; ++i) {
      std::vector<double> v;
      for (std::size_t t = 0; t < config.trials; ++t) v.push_back(counts[k * config.trials + t][i]);
      row.mean_counts.push_back(mean_and_error(v));
    }
    const double first = row.mean_counts[0].value;
    double next = 0;
    const std::size_t hi = std::min<std::size_t>(5, L);
    for (std::size_t i = 1; i < hi; ++i) next += row.mean_counts[i].value;
    next /= double(hi - 1);
    if (next > 0) row.ratio_to_next = first / next;
    row.exceeds_factor = first > config.factor * next;
    row.first_exceeds_second = first > row.mean_counts[1].value;
    report.rows.push_back(row);
  }
  return report;
}

AlphaRun estimate_alpha(const AlphaParams& params) {
  require_planar(params.dim);
  require_trials(params.trials);
  AlphaRun run;
  switch (params.route) {
    case AlphaRoute::maxdepth: {
      MaxDepthConfig c;
      c.n_schedule = params.n_schedule;
      c.trials = params.trials;
      c.seed = params.seed;
      c.threads = params.threads;
      const auto report = exp_max_depth_scaling(c);
      run.estimate = report.alpha;
      run.details = to_json(report);
      break;
    }
    case AlphaRoute::profile: {
      LimitShapeConfig c;
      c.m_schedule = {params.profile_n};
      c.trials = params.trials;
      c.pitch = params.pitch;
      c.mode = SamplingMode::iid;
      c.seed = params.seed;
      c.threads = params.threads;
      const auto report = exp_limit_shape(c);
      run.estimate.route = AlphaRoute::profile;
      run.estimate.alpha_hat = report.rows[0].profile_alpha.value;
      run.estimate.std_error = report.rows[0].profile_alpha.std_error;
      run.estimate.trials = params.trials;
      run.details = to_json(report);
      break;
    }
    case AlphaRoute::cell: {
      if (params.r_schedule.empty()) throw std::invalid_argument("r schedule is empty");
      Json cells = Json::array();
      for (std::size_t k = 0; k < params.r_schedule.size(); ++k) {
        CellConfig c;
        c.r = params.r_schedule[k];
        c.beta = params.beta;
        c.trials = params.trials;
        c.seed = splitmix64(params.seed + k);
        c.threads = params.threads;
        const auto result = cell_estimate(c);
        run.by_r.push_back(result.estimate);
        cells.push_back(to_json(result));
      }
      run.estimate = extrapolate_alpha(run.by_r);
      run.details = Json{{"cells", cells}, {"extrapolation", "alpha + a / sqrt(r), weighted least squares"}};
      break;
    }
  }
  return run;
}

Json cross_route_report(const std::vector<AlphaEstimate>& estimates) {
  Json out = Json::array();
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    for (std::size_t j = i + 1; j < estimates.size(); ++j) {
      const auto& a = estimates[i];
      const auto& b = estimates[j];
      const double gap = std::abs(a.alpha_hat - b.alpha_hat);
      const double se = std::hypot(a.std_error, b.std_error);
      out.push_back(Json{{"routes", {to_string(a.route), to_string(b.route)}},
                         {"gap", gap},
                         {"combined_stderr", se},
                         {"within_two_stderr", gap <= 2 * se}});
    }
  }
  return out;
}

Json to_json(const RadialDensity& f) {
  Json j{{"kind", to_string(f.kind)}, {"dim", f.dim}};
  if (f.kind == DensityKind::uniform_ball) j["radius"] = f.radius;
  if (f.kind == DensityKind::table) {
    j["table_r"] = f.table_r;
    j["table_f"] = f.table_f;
  }
  if (f.frame) {
    std::vector<double> a;
    for (int r = 0; r < f.frame->A.rows(); ++r)
      for (int c = 0; c < f.frame->A.cols(); ++c) a.push_back(f.frame->A(r, c));
    j["frame_A"] = a;
    j["frame_b"] = std::vector<double>(f.frame->b.data(), f.frame->b.data() + f.frame->b.size());
  }
  return j;
}

Json to_json(const AlphaEstimate& e) {
  Json j{{"route", to_string(e.route)}, {"alpha_hat", e.alpha_hat}, {"stderr", e.std_error},
         {"trials", e.trials}};
  if (e.route == AlphaRoute::cell) j["r"] = std::isfinite(e.r) ? Json(e.r) : Json("inf");
  return j;
}

Json to_json(const MaxDepthReport& r) {
  Json recs = Json::array();
  for (const auto& x : r.records)
    recs.push_back(Json{{"n", x.n}, {"trial", x.trial}, {"seed", x.stream_seed}, {"max_height", x.max_height},
                        {"layers", x.layers}, {"implied_alpha", x.implied_alpha}});
  Json rows = Json::array();
  for (const auto& x : r.rows)
    rows.push_back(Json{{"n", x.n}, {"mean_max_height", estimate_json(x.max_height)},
                        {"implied_alpha", estimate_json(x.implied_alpha)}});
  return Json{{"config",
               {{"n_schedule", r.config.n_schedule}, {"trials", r.config.trials},
                {"density", to_json(r.config.density)}, {"seed", r.config.seed}, {"threads", r.config.threads}}},
              {"rows", rows},
              {"log_fit", fit_json(r.log_fit)},
              {"alpha", to_json(r.alpha)},
              {"alpha_hat", r.alpha.alpha_hat},
              {"records", recs}};
}

Json to_json(const LimitShapeReport& r) {
  Json recs = Json::array();
  for (const auto& x : r.records)
    recs.push_back(Json{{"m", x.m}, {"trial", x.trial}, {"seed", x.stream_seed}, {"n_points", x.n_points},
                        {"sup_error", x.sup_error}, {"argmax", {x.argmax.x, x.argmax.y}},
                        {"profile_alpha", x.profile_alpha}});
  Json rows = Json::array();
  for (const auto& x : r.rows)
    rows.push_back(Json{{"m", x.m}, {"median_sup_error", x.median_sup_error},
                        {"mean_sup_error", x.mean_sup_error}, {"max_sup_error", x.max_sup_error},
                        {"median_relative", x.median_relative},
                        {"profile_alpha", estimate_json(x.profile_alpha)}});
  return Json{{"config",
               {{"density", to_json(r.config.density)}, {"m_schedule", r.config.m_schedule},
                {"trials", r.config.trials}, {"alpha", r.config.alpha}, {"pitch", r.config.pitch},
                {"extent", r.config.extent}, {"mode", to_string(r.config.mode)}, {"seed", r.config.seed},
                {"threads", r.config.threads}}},
              {"grid_points", r.grid_points},
              {"alpha_h0", r.alpha_h0},
              {"rows", rows},
              {"strictly_decreasing", r.strictly_decreasing},
              {"records", recs}};
}

Json to_json(const LayerCountsReport& r) {
  Json recs = Json::array();
  for (const auto& x : r.records)
    recs.push_back(Json{{"trial", x.trial}, {"seed", x.stream_seed}, {"n_points", x.n_points},
                        {"layers", x.counts.size()}, {"bulk_l1", x.bulk_l1}, {"counts", x.counts}});
  Json curve = Json::array();
  for (const auto& c : r.curve)
    curve.push_back(Json{{"layer", c.layer}, {"t", c.t}, {"mean_scaled", c.mean_scaled}, {"N", c.predicted}});
  Json windows = Json::array();
  for (const auto& w : r.windows)
    windows.push_back(Json{{"a", w.a}, {"b", w.b}, {"empirical", w.empirical}, {"predicted", w.predicted},
                           {"relative_error", w.relative_error}});
  Json win_cfg = Json::array();
  for (const auto& [a, b] : r.config.windows) win_cfg.push_back({a, b});
  return Json{{"config",
               {{"density", to_json(r.config.density)}, {"n", r.config.n}, {"trials", r.config.trials},
                {"alpha", r.config.alpha}, {"bulk", {r.config.bulk_lo, r.config.bulk_hi}},
                {"windows", win_cfg}, {"mode", to_string(r.config.mode)}, {"seed", r.config.seed},
                {"threads", r.config.threads}}},
              {"comparison", "qualitative: the layer-count law is a heuristic, not a proved limit"},
              {"alpha_h0", r.alpha_h0},
              {"bulk_l1", r.bulk_l1},
              {"counts_sum_to_size", r.counts_sum_to_size},
              {"windows", windows},
              {"curve", curve},
              {"records", recs}};
}

Json to_json(const BoundaryLayerReport& r) {
  Json rows = Json::array();
  for (const auto& x : r.rows) {
    Json means = Json::array();
    for (const auto& e : x.mean_counts) means.push_back(estimate_json(e));
    rows.push_back(Json{{"n", x.n},
                        {"mean_counts", means},
                        {"ratio_to_next", x.ratio_to_next ? Json(*x.ratio_to_next) : Json(nullptr)},
                        {"exceeds_factor", x.exceeds_factor},
                        {"first_exceeds_second", x.first_exceeds_second}});
  }
  return Json{{"config",
               {{"density", to_json(r.config.density)}, {"n_schedule", r.config.n_schedule},
                {"trials", r.config.trials}, {"layers", r.config.layers}, {"factor", r.config.factor},
                {"mode", to_string(r.config.mode)}, {"seed", r.config.seed}, {"threads", r.config.threads}}},
              {"rows", rows}};
}

Json to_json(const CellResult& r) {
  Json trials = Json::array();
  for (const auto& t : r.trials)
    trials.push_back(Json{{"trial", t.trial}, {"r", t.r}, {"beta", t.beta}, {"s_value", t.s_value},
                          {"n_points", t.n_points}, {"wall_ms", t.wall_ms}});
  return Json{{"config",
               {{"r", r.config.r}, {"beta", r.config.beta}, {"trials", r.config.trials},
                {"seed", r.config.seed}, {"threads", r.config.threads}, {"shift", r.config.shift}}},
              {"estimate", to_json(r.estimate)},
              {"estimate_wider", to_json(r.estimate_wider)},
              {"trials", trials}};
}

Json report_header(const std::string& command) {
  return Json{{"tool", "hullpeel"}, {"command", command}, {"build_id", build_id()},
              {"rng_algorithm", kRngAlgorithm}};
}

void write_records_csv(std::ostream& out, const MaxDepthReport& r) {
  out << "n,trial,seed,max_height,layers,implied_alpha\n";
  for (const auto& x : r.records)
    out << x.n << ',' << x.trial << ',' << x.stream_seed << ',' << x.max_height << ',' << x.layers << ','
        << csv_double(x.implied_alpha) << '\n';
}

void write_records_csv(std::ostream& out, const LimitShapeReport& r) {
  out << "m,trial,seed,n_points,sup_error,argmax_x,argmax_y,profile_alpha\n";
  for (const auto& x : r.records)
    out << csv_double(x.m) << ',' << x.trial << ',' << x.stream_seed << ',' << x.n_points << ','
        << csv_double(x.sup_error) << ',' << csv_double(x.argmax.x) << ',' << csv_double(x.argmax.y) << ','
        << csv_double(x.profile_alpha) << '\n';
}

void write_records_csv(std::ostream& out, const LayerCountsReport& r) {
  out << "trial,seed,layer,count\n";
  for (const auto& x : r.records)
    for (std::size_t i = 0; i < x.counts.size(); ++i)
      out << x.trial << ',' << x.stream_seed << ',' << i + 1 << ',' << x.counts[i] << '\n';
}

void write_records_csv(std::ostream& out, const BoundaryLayerReport& r) {
  out << "n,layer,mean_count,stderr\n";
  for (const auto& x : r.rows)
    for (std::size_t i = 0; i < x.mean_counts.size(); ++i)
      out << x.n << ',' << i + 1 << ',' << csv_double(x.mean_counts[i].value) << ','
          << csv_double(x.mean_counts[i].std_error) << '\n';
}

}  // namespace hullpeel
