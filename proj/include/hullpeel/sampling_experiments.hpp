#ifndef HULLPEEL_SAMPLING_EXPERIMENTS_HPP
#define HULLPEEL_SAMPLING_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hullpeel/geometry.hpp"
#include "hullpeel/limit_pde.hpp"
#include "hullpeel/random.hpp"
#include "hullpeel/semiconvex_peeling.hpp"

namespace hullpeel {

using Json = nlohmann::ordered_json;

/// Source revision baked in at configure time ("unknown" outside git).
std::string build_id();

/// Uniform probability density on the convex hull of the vertices (d = 2).
struct ConvexDomain {
  Cloud2<double> vertices;
};

enum class SamplingMode { poisson, iid };

std::string to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(const std::string& name);

struct SamplerSpec {
  SamplingMode mode = SamplingMode::iid;
  /// Intensity m for poisson, point count n for iid.
  double intensity = 1000;
  std::variant<RadialDensity, ConvexDomain> density = RadialDensity::uniform_ball(2);
  std::uint64_t seed = 1;

  int dim() const;
  /// Throws std::invalid_argument for a negative or non-integral iid count,
  /// a density that fails validation or a domain with empty interior.
  void validate() const;
};

/// Poisson mode draws N ~ Poisson(m) (every density has unit mass) and then
/// N independent points; iid mode draws exactly n. Bounded densities are
/// sampled by rejection from a box around their support, the gaussian
/// directly, and a frame maps z to A^{-1}(z - b).
PointCloud sample(const SamplerSpec& spec, Rng& rng);
/// Same, with the stream seeded from spec.seed.
PointCloud sample(const SamplerSpec& spec);

struct Estimate {
  double value = 0;
  double std_error = 0;
};

/// Ordinary least squares y = intercept + slope x with standard errors from
/// the residuals. Needs three or more points for the errors (else 0).
struct LinearFit {
  Estimate slope;
  Estimate intercept;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Grid points with the limit profile h at each.
struct GridProfile {
  Cloud2<double> grid;
  std::vector<double> h_exact;  // h at each grid point
};

/// Lattice of the given pitch intersected with the closure of the support,
/// or with {|A x + b| <= extent} for the gaussian.
GridProfile limit_shape_grid(const RadialDensity& density, double pitch, double extent);

// -- max depth scaling ------------------------------------------------------

struct MaxDepthConfig {
  std::vector<double> n_schedule{1e3, 3162, 1e4, 31623, 1e5};
  std::size_t trials = 20;
  RadialDensity density = RadialDensity::uniform_ball(2);
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct MaxDepthRecord {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t stream_seed = 0;
  int max_height = 0;
  int layers = 0;
  double implied_alpha = 0;
};

struct MaxDepthRow {
  std::size_t n = 0;
  Estimate max_height;
  Estimate implied_alpha;
};

struct MaxDepthReport {
  MaxDepthConfig config;
  std::vector<MaxDepthRecord> records;  // schedule-major, then trial
  std::vector<MaxDepthRow> rows;
  LinearFit log_fit;  // log mean max height against log n
  /// Prefactor with the slope held at 2/(d+1): inverse-variance weighted
  /// mean of log(implied alpha) over the schedule.
  AlphaEstimate alpha;
};

/// Throws std::invalid_argument unless the schedule is strictly increasing
/// with n >= 3, trials >= 2 and d = 2.
MaxDepthReport exp_max_depth_scaling(const MaxDepthConfig& config);

// -- limit shape -------------------------------------------------------------

struct LimitShapeConfig {
  RadialDensity density = RadialDensity::uniform_ball(2);
  std::vector<double> m_schedule{1e3, 1e4, 1e5};
  std::size_t trials = 20;
  double alpha = 4.0 / 3.0;
  double pitch = 0.02;
  double extent = 3.0;  // grid half-width for unbounded support
  SamplingMode mode = SamplingMode::poisson;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct LimitShapeRecord {
  double m = 0;
  std::size_t trial = 0;
  std::uint64_t stream_seed = 0;
  std::size_t n_points = 0;
  double sup_error = 0;
  Vec2<double> argmax{0, 0};
  /// Least-squares slope of m^{-2/(d+1)} h_X against h over the grid.
  double profile_alpha = 0;
};

struct LimitShapeRow {
  double m = 0;
  double median_sup_error = 0;
  double mean_sup_error = 0;
  double max_sup_error = 0;
  /// Median divided by alpha h(0).
  double median_relative = 0;
  Estimate profile_alpha;
};

struct LimitShapeReport {
  LimitShapeConfig config;
  std::size_t grid_points = 0;
  double alpha_h0 = 0;
  std::vector<LimitShapeRecord> records;
  std::vector<LimitShapeRow> rows;
  /// Median sup-error strictly decreases along the schedule.
  bool strictly_decreasing = false;
};

LimitShapeReport exp_limit_shape(const LimitShapeConfig& config);

// -- layer counts ------------------------------------------------------------

struct LayerCountsConfig {
  RadialDensity density = RadialDensity::uniform_ball(2);
  double n = 1e5;
  std::size_t trials = 10;
  double alpha = 4.0 / 3.0;
  /// Bulk region as fractions of alpha h(0).
  double bulk_lo = 0.1;
  double bulk_hi = 0.9;
  /// Windows [a, b] for the summed counts, as fractions of alpha h(0).
  std::vector<std::pair<double, double>> windows{{0.1, 0.3}, {0.3, 0.5}, {0.5, 0.7}, {0.7, 0.9}};
  SamplingMode mode = SamplingMode::iid;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct LayerCountsRecord {
  std::size_t trial = 0;
  std::uint64_t stream_seed = 0;
  std::size_t n_points = 0;
  std::vector<std::size_t> counts;
  double bulk_l1 = 0;
};

struct LayerCurvePoint {
  std::size_t layer = 0;
  double t = 0;            // (layer - 1) m^{-2/(d+1)}
  double mean_scaled = 0;  // mean count times m^{-(d-1)/(d+1)}
  double predicted = 0;    // N(t), 0 past alpha h(0)
};

struct LayerWindow {
  double a = 0;  // in units of t
  double b = 0;
  double empirical = 0;  // mean fraction of the points on those layers
  double predicted = 0;  // mass of {a <= alpha h <= b}
  double relative_error = 0;
};

struct LayerCountsReport {
  LayerCountsConfig config;
  double alpha_h0 = 0;
  std::vector<LayerCountsRecord> records;
  std::vector<LayerCurvePoint> curve;
  /// Relative L1 distance of the mean curve from N on the bulk region.
  double bulk_l1 = 0;
  std::vector<LayerWindow> windows;
  bool counts_sum_to_size = true;
};

/// Throws std::invalid_argument unless the density is the uniform ball or
/// the gaussian and trials >= 2.
LayerCountsReport exp_layer_counts(const LayerCountsConfig& config);

// -- boundary layer ----------------------------------------------------------

struct BoundaryLayerConfig {
  RadialDensity density = RadialDensity::uniform_ball(2);
  std::vector<double> n_schedule{1e5};
  std::size_t trials = 100;
  std::size_t layers = 20;
  double factor = 1.2;
  SamplingMode mode = SamplingMode::iid;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct BoundaryLayerRow {
  std::size_t n = 0;
  std::vector<Estimate> mean_counts;  // layers 1..config.layers
  /// Layer-1 mean over the mean of layers 2..5; empty when that mean is 0.
  std::optional<double> ratio_to_next;
  bool exceeds_factor = false;
  bool first_exceeds_second = false;
};

struct BoundaryLayerReport {
  BoundaryLayerConfig config;
  std::vector<BoundaryLayerRow> rows;
};

/// Small clouds are allowed; missing layers count as empty.
BoundaryLayerReport exp_boundary_layer(const BoundaryLayerConfig& config);

// -- alpha -------------------------------------------------------------------

struct AlphaParams {
  AlphaRoute route = AlphaRoute::maxdepth;
  int dim = 2;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// maxdepth route.
  std::vector<double> n_schedule{1e3, 3162, 1e4, 31623, 1e5};
  /// profile route.
  double profile_n = 1e5;
  double pitch = 0.02;
  /// cell route.
  std::vector<double> r_schedule{20, 40, 80};
  double beta = 3;
};

struct AlphaRun {
  AlphaEstimate estimate;
  /// Per-r estimates (cell route only), in schedule order.
  std::vector<AlphaEstimate> by_r;
  Json details;
};

/// Throws std::invalid_argument for d != 2 or fewer than two trials.
AlphaRun estimate_alpha(const AlphaParams& params);

/// Pairwise gaps between route estimates, each against twice the combined
/// standard error sqrt(se_a^2 + se_b^2).
Json cross_route_report(const std::vector<AlphaEstimate>& estimates);

// -- reports -----------------------------------------------------------------

Json to_json(const RadialDensity& density);
Json to_json(const AlphaEstimate& estimate);
Json to_json(const MaxDepthReport& report);
Json to_json(const LimitShapeReport& report);
Json to_json(const LayerCountsReport& report);
Json to_json(const BoundaryLayerReport& report);
Json to_json(const CellResult& result);

/// Header fields shared by every report: tool, build id, rng algorithm.
Json report_header(const std::string& command);

/// Per-trial records as CSV.
void write_records_csv(std::ostream& out, const MaxDepthReport& report);
void write_records_csv(std::ostream& out, const LimitShapeReport& report);
void write_records_csv(std::ostream& out, const LayerCountsReport& report);
void write_records_csv(std::ostream& out, const BoundaryLayerReport& report);

}  // namespace hullpeel

#endif  // HULLPEEL_SAMPLING_EXPERIMENTS_HPP
