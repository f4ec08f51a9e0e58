// Command-line front end: peel, sample, estimate-alpha, limit-shape,
// layer-counts, boundary-layer, verify, cell.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hullpeel/convex_peeling.hpp"
#include "hullpeel/geometry.hpp"
#include "hullpeel/limit_pde.hpp"
#include "hullpeel/random.hpp"
#include "hullpeel/sampling_experiments.hpp"
#include "hullpeel/semiconvex_peeling.hpp"
#include "hullpeel/suites.hpp"

namespace fs = std::filesystem;
using namespace hullpeel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerifyFailed = 2;

// Thrown for flag combinations CLI11 cannot reject on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  int dim = 2;
  unsigned threads = default_threads();
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format,
                const std::vector<std::string>& formats) {
  c.format = default_format;
  sub->add_option("--seed", c.seed, "Base seed of the run")->capture_default_str();
  sub->add_option("--out", c.out,
                  "Output file ('-' for stdout). Defaults to $HULLPEEL_OUT_DIR/<command>.<ext>, else stdout");
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  sub->add_option("--dim", c.dim, "Ambient dimension")->check(CLI::IsMember({2, 3}))->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads for trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void require_planar(const Common& c, const std::string& command) {
  if (c.dim != 2) throw UsageError(command + " supports --dim 2 only");
}

// "a:b:k" gives k log-spaced values from a to b; otherwise a comma list.
std::vector<double> parse_schedule(const std::string& text, bool integral) {
  std::vector<double> out;
  const auto finish = [&](double v) { out.push_back(integral ? std::round(v) : v); };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("schedule '" + text + "' is not of the form a:b:k");
    const double a = std::stod(parts[0]);
    const double b = std::stod(parts[1]);
    const int k = std::stoi(parts[2]);
    if (!(a > 0 && b > 0) || k < 1) throw UsageError("schedule '" + text + "' needs a, b > 0 and k >= 1");
    if (k == 1) {
      finish(a);
    } else {
      const double la = std::log10(a);
      const double lb = std::log10(b);
      for (int i = 0; i < k; ++i) finish(std::pow(10.0, la + (lb - la) * i / (k - 1)));
    }
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');)
      if (!p.empty()) finish(std::stod(p));
  }
  if (out.empty()) throw UsageError("empty schedule");
  return out;
}

RadialDensity density_from_flag(const std::string& name, const Common& c, bool dim_given) {
  if (name == "ball" || name == "uniform_ball") return RadialDensity::uniform_ball(c.dim);
  if (name == "gaussian") return RadialDensity::gaussian(c.dim);
  auto f = load_density_config(name);
  if (dim_given && f.dim != c.dim)
    throw UsageError("density file has dim " + std::to_string(f.dim) + " but --dim is " + std::to_string(c.dim));
  return f;
}

// Vertices "x,y;x,y;...".
ConvexDomain parse_domain(const std::string& text) {
  ConvexDomain d;
  std::stringstream ss(text);
  for (std::string v; std::getline(ss, v, ';');) {
    const auto comma = v.find(',');
    if (comma == std::string::npos) throw UsageError("domain vertex '" + v + "' is not x,y");
    d.vertices.push_back({std::stod(v.substr(0, comma)), std::stod(v.substr(comma + 1))});
  }
  return d;
}

std::string extension(const std::string& format) { return format == "json" ? ".json" : "." + format; }

// Resolves --out, falling back on $HULLPEEL_OUT_DIR. Empty means stdout.
std::string output_path(const Common& c, const std::string& command) {
  if (c.out == "-") return "";
  if (!c.out.empty()) return c.out;
  if (const char* dir = std::getenv("HULLPEEL_OUT_DIR"); dir && *dir) {
    fs::create_directories(dir);
    return (fs::path(dir) / (command + extension(c.format))).string();
  }
  return "";
}

class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw std::runtime_error("cannot write " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  bool to_file() const { return static_cast<bool>(file_); }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  body(out);
}

// report.json -> report.records.csv
std::string companion_path(const std::string& path) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + ".records.csv")).string();
}

// Every option of the subcommand after defaults, config file and flags.
Json effective_config(const CLI::App* sub) {
  Json out = Json::object();
  std::istringstream lines(sub->config_to_str(true, false));
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      out[key] = Json::parse(value);
    } catch (const Json::parse_error&) {
      out[key] = value;
    }
  }
  return out;
}

// Writes the JSON report (or the CSV records) and the companion CSV.
void emit(const Common& c, const std::string& command, const CLI::App* sub, Json body,
          const std::function<void(std::ostream&)>& records) {
  const std::string path = output_path(c, command);
  Sink sink(path);
  if (c.format == "csv") {
    records(sink.stream());
    return;
  }
  Json report = report_header(command);
  report["effective_config"] = effective_config(sub);
  for (auto& [k, v] : body.items()) report[k] = v;
  sink.stream() << report.dump(2) << '\n';
  if (sink.to_file()) write_file(companion_path(path), records);
}

// -- peel ----------------------------------------------------------------------

struct PeelArgs {
  Common common;
  std::string in;
  std::string svg;
  std::size_t every = 0;
  bool exact = false;
};

template <class S>
Json layering_json(const ConvexLayering<S>& l) {
  return Json{{"points", l.size()},
              {"layers", l.num_layers()},
              {"max_height", max_height(l)},
              {"layer_counts", layer_counts(l)},
              {"layer_of_point", l.layer_of_point()}};
}

int run_peel(const PeelArgs& a, const CLI::App* sub) {
  if (a.common.dim != 2) throw UsageError("peel supports --dim 2 only");
  const PointCloud cloud = a.in == "-" ? read_cloud_csv(std::cin) : read_cloud_csv_file(a.in);
  if (cloud.dim() != 2) throw UsageError("input has " + std::to_string(cloud.dim()) + " columns, expected 2");
  const auto layering = peel(cloud);
  std::optional<ConvexLayering<Rational>> exact;
  if (a.exact) exact = peel(to_exact(cloud));

  SvgOptions svg;
  svg.every = a.every;
  const auto layers_csv = [&](std::ostream& out) {
    if (exact) write_layers_csv(out, *exact);
    else write_layers_csv(out, layering);
  };
  if (!a.svg.empty()) write_file(a.svg, [&](std::ostream& out) { write_layers_svg(out, layering, svg); });

  const std::string path = output_path(a.common, "peel");
  Sink sink(path);
  if (a.common.format == "svg") {
    write_layers_svg(sink.stream(), layering, svg);
  } else if (a.common.format == "csv") {
    layers_csv(sink.stream());
  } else {
    Json report = report_header("peel");
    report["effective_config"] = effective_config(sub);
    report["input"] = a.in;
    report["mode"] = a.exact ? "exact" : "floating";
    report["layering"] = exact ? layering_json(*exact) : layering_json(layering);
    report["svg_layers"] = svg_layer_selection(layering.num_layers(), a.every);
    sink.stream() << report.dump(2) << '\n';
    if (sink.to_file()) write_file(companion_path(path), layers_csv);
  }
  return kExitOk;
}

// -- sample --------------------------------------------------------------------

struct SampleArgs {
  Common common;
  std::string mode = "iid";
  double intensity = 1000;
  std::string density = "ball";
  std::string domain;
};

int run_sample(const SampleArgs& a, const CLI::App* sub) {
  SamplerSpec spec;
  spec.mode = parse_sampling_mode(a.mode);
  spec.intensity = a.intensity;
  spec.seed = a.common.seed;
  if (!a.domain.empty()) {
    if (a.common.dim != 2) throw UsageError("--domain needs --dim 2");
    spec.density = parse_domain(a.domain);
  } else {
    spec.density = density_from_flag(a.density, a.common, sub->count("--dim") > 0);
  }
  spec.validate();
  const PointCloud cloud = sample(spec);

  const std::string path = output_path(a.common, "sample");
  Sink sink(path);
  if (a.common.format == "csv") {
    write_cloud_csv(sink.stream(), cloud);
    return kExitOk;
  }
  Json report = report_header("sample");
  report["effective_config"] = effective_config(sub);
  Json cfg{{"mode", to_string(spec.mode)}, {"intensity", spec.intensity}, {"seed", spec.seed}};
  if (const auto* f = std::get_if<RadialDensity>(&spec.density)) cfg["density"] = to_json(*f);
  else cfg["domain"] = a.domain;
  report["config"] = cfg;
  report["dim"] = cloud.dim();
  report["n_points"] = cloud.size();
  Json pts = Json::array();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    pts.push_back(std::vector<double>(p.begin(), p.end()));
  }
  report["points"] = pts;
  sink.stream() << report.dump(2) << '\n';
  if (sink.to_file()) write_file(companion_path(path), [&](std::ostream& out) { write_cloud_csv(out, cloud); });
  return kExitOk;
}

// -- estimate-alpha ------------------------------------------------------------

struct AlphaArgs {
  Common common;
  std::string route = "maxdepth";
  std::string n_schedule = "1e3:1e5:5";
  std::size_t trials = 20;
  double profile_n = 1e5;
  double pitch = 0.02;
  std::string r_schedule = "20,40,80";
  double beta = 3;
};

int run_estimate_alpha(const AlphaArgs& a, const CLI::App* sub) {
  require_planar(a.common, "estimate-alpha");
  AlphaParams p;
  p.dim = a.common.dim;
  p.trials = a.trials;
  p.seed = a.common.seed;
  p.threads = a.common.threads;
  p.n_schedule = parse_schedule(a.n_schedule, true);
  p.profile_n = a.profile_n;
  p.pitch = a.pitch;
  p.r_schedule = parse_schedule(a.r_schedule, false);
  p.beta = a.beta;

  std::vector<AlphaRoute> routes;
  if (a.route == "all") routes = {AlphaRoute::maxdepth, AlphaRoute::profile, AlphaRoute::cell};
  else routes = {parse_alpha_route(a.route)};

  std::vector<AlphaRun> runs;
  for (auto r : routes) {
    p.route = r;
    runs.push_back(estimate_alpha(p));
  }

  Json body;
  body["config"] = Json{{"route", a.route},          {"dim", p.dim},
                        {"trials", p.trials},        {"seed", p.seed},
                        {"threads", p.threads},      {"n_schedule", p.n_schedule},
                        {"profile_n", p.profile_n},  {"pitch", p.pitch},
                        {"r_schedule", p.r_schedule}, {"beta", p.beta}};
  const auto& first = runs.front().estimate;
  body["route"] = to_string(first.route);
  body["alpha_hat"] = first.alpha_hat;
  body["stderr"] = first.std_error;
  body["trials"] = first.trials;
  Json estimates = Json::array();
  std::vector<AlphaEstimate> flat;
  for (const auto& run : runs) {
    Json e = to_json(run.estimate);
    if (!run.by_r.empty()) {
      Json by_r = Json::array();
      for (const auto& x : run.by_r) by_r.push_back(to_json(x));
      e["by_r"] = by_r;
    }
    e["details"] = run.details;
    estimates.push_back(e);
    flat.push_back(run.estimate);
  }
  body["estimates"] = estimates;
  if (runs.size() > 1) body["cross_route"] = cross_route_report(flat);

  emit(a.common, "estimate-alpha", sub, body, [&](std::ostream& out) {
    out << std::setprecision(17) << "route,alpha_hat,stderr,trials,r\n";
    for (const auto& run : runs) {
      const auto rows = run.by_r.empty() ? std::vector<AlphaEstimate>{} : run.by_r;
      for (const auto& x : rows)
        out << to_string(x.route) << "_r," << x.alpha_hat << ',' << x.std_error << ',' << x.trials << ',' << x.r
            << '\n';
      const auto& e = run.estimate;
      out << to_string(e.route) << ',' << e.alpha_hat << ',' << e.std_error << ',' << e.trials << ','
          << (e.route == AlphaRoute::cell ? e.r : 0.0) << '\n';
    }
  });
  return kExitOk;
}

// -- limit-shape ---------------------------------------------------------------

struct LimitShapeArgs {
  Common common;
  std::string density = "ball";
  std::string m_schedule = "1e3,1e4,1e5";
  std::size_t trials = 20;
  double alpha = 4.0 / 3.0;
  double pitch = 0.02;
  double extent = 3.0;
  std::string mode = "poisson";
  std::string h_grid;
};

int run_limit_shape(const LimitShapeArgs& a, const CLI::App* sub) {
  require_planar(a.common, "limit-shape");
  LimitShapeConfig c;
  c.density = density_from_flag(a.density, a.common, sub->count("--dim") > 0);
  c.m_schedule = parse_schedule(a.m_schedule, false);
  c.trials = a.trials;
  c.alpha = a.alpha;
  c.pitch = a.pitch;
  c.extent = a.extent;
  c.mode = parse_sampling_mode(a.mode);
  c.seed = a.common.seed;
  c.threads = a.common.threads;
  if (!a.h_grid.empty())
    write_file(a.h_grid, [&](std::ostream& out) { write_h_grid_csv(out, c.density, c.pitch, c.extent); });
  const auto report = exp_limit_shape(c);
  emit(a.common, "limit-shape", sub, to_json(report), [&](std::ostream& out) { write_records_csv(out, report); });
  return kExitOk;
}

// -- layer-counts --------------------------------------------------------------

struct LayerCountsArgs {
  Common common;
  std::string density = "ball";
  double n = 1e5;
  std::size_t trials = 10;
  double alpha = 4.0 / 3.0;
  std::vector<double> bulk{0.1, 0.9};
  std::string mode = "iid";
};

int run_layer_counts(const LayerCountsArgs& a, const CLI::App* sub) {
  require_planar(a.common, "layer-counts");
  LayerCountsConfig c;
  c.density = density_from_flag(a.density, a.common, sub->count("--dim") > 0);
  c.n = a.n;
  c.trials = a.trials;
  c.alpha = a.alpha;
  c.bulk_lo = a.bulk.at(0);
  c.bulk_hi = a.bulk.at(1);
  c.mode = parse_sampling_mode(a.mode);
  c.seed = a.common.seed;
  c.threads = a.common.threads;
  const auto report = exp_layer_counts(c);
  emit(a.common, "layer-counts", sub, to_json(report), [&](std::ostream& out) { write_records_csv(out, report); });
  return kExitOk;
}

// -- boundary-layer ------------------------------------------------------------

struct BoundaryArgs {
  Common common;
  std::string density = "ball";
  std::string n_schedule = "1e5";
  std::size_t trials = 100;
  std::size_t layers = 20;
  double factor = 1.2;
  std::string mode = "iid";
};

int run_boundary_layer(const BoundaryArgs& a, const CLI::App* sub) {
  require_planar(a.common, "boundary-layer");
  BoundaryLayerConfig c;
  c.density = density_from_flag(a.density, a.common, sub->count("--dim") > 0);
  c.n_schedule = parse_schedule(a.n_schedule, true);
  c.trials = a.trials;
  c.layers = a.layers;
  c.factor = a.factor;
  c.mode = parse_sampling_mode(a.mode);
  c.seed = a.common.seed;
  c.threads = a.common.threads;
  const auto report = exp_boundary_layer(c);
  emit(a.common, "boundary-layer", sub, to_json(report),
       [&](std::ostream& out) { write_records_csv(out, report); });
  return kExitOk;
}

// -- verify --------------------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::vector<std::string> suites;
  std::size_t n = 48;
  std::size_t cases = 200;
};

int run_verify(const VerifyArgs& a, const CLI::App* sub) {
  require_planar(a.common, "verify");
  SuiteOptions o;
  o.max_points = a.n;
  o.cases = a.cases;
  o.seed = a.common.seed;
  const auto names = a.suites.empty() ? suite_names() : a.suites;

  std::vector<SuiteResult> results;
  for (const auto& name : names) {
    results.push_back(run_suite(name, o));
    if (!results.back().ok) break;
  }
  const bool ok = std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.ok; });

  const std::string path = output_path(a.common, "verify");
  Sink sink(path);
  if (a.common.format == "json") {
    Json report = report_header("verify");
    report["effective_config"] = effective_config(sub);
    Json rows = Json::array();
    for (const auto& r : results)
      rows.push_back(Json{{"suite", r.name},
                          {"ok", r.ok},
                          {"cases", r.cases},
                          {"seconds", r.seconds},
                          {"counterexample", r.counterexample}});
    report["suites"] = rows;
    report["ok"] = ok;
    sink.stream() << report.dump(2) << '\n';
  } else {
    sink.stream() << "suite,ok,cases,seconds\n";
    for (const auto& r : results) sink.stream() << r.name << ',' << int(r.ok) << ',' << r.cases << ',' << r.seconds << '\n';
  }
  for (const auto& r : results)
    if (!r.ok) std::cerr << "verify: suite " << r.name << " failed: " << r.counterexample << '\n';
  return ok ? kExitOk : kExitVerifyFailed;
}

// -- cell ----------------------------------------------------------------------

struct CellArgs {
  Common common;
  double r = 40;
  double beta = 3;
  std::size_t trials = 50;
  double shift = 0;
};

int run_cell(const CellArgs& a, const CLI::App* sub) {
  require_planar(a.common, "cell");
  CellConfig c;
  c.r = a.r;
  c.beta = a.beta;
  c.trials = a.trials;
  // Same stream derivation as the first entry of an estimate-alpha r schedule.
  c.seed = splitmix64(a.common.seed);
  c.threads = a.common.threads;
  c.shift = a.shift;
  const auto result = cell_estimate(c);
  Json body = to_json(result);
  body["base_seed"] = a.common.seed;
  body["alpha_hat"] = result.estimate.alpha_hat;
  body["stderr"] = result.estimate.std_error;
  emit(a.common, "cell", sub, body, [&](std::ostream& out) { write_cell_trials_csv(out, result.trials); });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex and semiconvex peeling of random point clouds, with limit-shape experiments"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "TOML/INI file; a [command] section sets that command's flags. Flags override it");
  app.set_version_flag("--version", "hullpeel " + build_id());

  PeelArgs peel_a;
  auto* peel_cmd = app.add_subcommand("peel", "Convex layers of a planar CSV cloud");
  add_common(peel_cmd, peel_a.common, "csv", {"csv", "json", "svg"});
  peel_cmd->add_option("--in", peel_a.in, "Input CSV with columns x1,x2 ('-' for stdin)")->required();
  peel_cmd->add_option("--svg", peel_a.svg, "Also write an SVG drawing of selected layers");
  peel_cmd->add_option("--every", peel_a.every, "Outline every k-th layer (0: at most ten outlines)")
      ->capture_default_str();
  peel_cmd->add_flag("--exact", peel_a.exact, "Peel in exact rational arithmetic");

  SampleArgs sample_a;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a Poisson or iid cloud");
  add_common(sample_cmd, sample_a.common, "csv", {"csv", "json"});
  sample_cmd->add_option("--mode", sample_a.mode)->check(CLI::IsMember({"poisson", "iid"}))->capture_default_str();
  sample_cmd->add_option("--m,--n", sample_a.intensity, "Intensity m (poisson) or count n (iid)")
      ->capture_default_str();
  sample_cmd->add_option("--density", sample_a.density, "ball, gaussian or a density config file")
      ->capture_default_str();
  sample_cmd->add_option("--domain", sample_a.domain, "Uniform density on a convex polygon 'x,y;x,y;...'");

  AlphaArgs alpha_a;
  auto* alpha_cmd = app.add_subcommand("estimate-alpha", "Estimate the peeling constant alpha");
  add_common(alpha_cmd, alpha_a.common, "json", {"csv", "json"});
  alpha_cmd->add_option("--route", alpha_a.route)
      ->check(CLI::IsMember({"cell", "maxdepth", "profile", "all"}))
      ->capture_default_str();
  alpha_cmd->add_option("--n", alpha_a.n_schedule, "maxdepth schedule: a:b:k log-spaced or a comma list")
      ->capture_default_str();
  alpha_cmd->add_option("--trials", alpha_a.trials)->check(CLI::Range(2, 1 << 20))->capture_default_str();
  alpha_cmd->add_option("--profile-n", alpha_a.profile_n, "profile route cloud size")->capture_default_str();
  alpha_cmd->add_option("--pitch", alpha_a.pitch, "profile route grid pitch")->capture_default_str();
  alpha_cmd->add_option("--r", alpha_a.r_schedule, "cell route radii")->capture_default_str();
  alpha_cmd->add_option("--beta", alpha_a.beta, "cell route cylinder factor")->capture_default_str();

  LimitShapeArgs shape_a;
  auto* shape_cmd = app.add_subcommand("limit-shape", "Sup-norm error of the rescaled height against alpha h");
  add_common(shape_cmd, shape_a.common, "json", {"csv", "json"});
  shape_cmd->add_option("--density", shape_a.density, "ball, gaussian or a density config file")
      ->capture_default_str();
  shape_cmd->add_option("--m", shape_a.m_schedule, "Intensity schedule")->capture_default_str();
  shape_cmd->add_option("--trials", shape_a.trials)->check(CLI::Range(2, 1 << 20))->capture_default_str();
  shape_cmd->add_option("--alpha", shape_a.alpha)->capture_default_str();
  shape_cmd->add_option("--pitch", shape_a.pitch)->capture_default_str();
  shape_cmd->add_option("--extent", shape_a.extent, "Grid half-width for unbounded support")
      ->capture_default_str();
  shape_cmd->add_option("--mode", shape_a.mode)->check(CLI::IsMember({"poisson", "iid"}))->capture_default_str();
  shape_cmd->add_option("--h-grid", shape_a.h_grid, "Also write the exact profile h on the grid as CSV");

  LayerCountsArgs counts_a;
  auto* counts_cmd = app.add_subcommand("layer-counts", "Rescaled layer-count histogram against N(t)");
  add_common(counts_cmd, counts_a.common, "json", {"csv", "json"});
  counts_cmd->add_option("--density", counts_a.density, "ball or gaussian")->capture_default_str();
  counts_cmd->add_option("--n", counts_a.n)->capture_default_str();
  counts_cmd->add_option("--trials", counts_a.trials)->check(CLI::Range(2, 1 << 20))->capture_default_str();
  counts_cmd->add_option("--alpha", counts_a.alpha)->capture_default_str();
  counts_cmd->add_option("--bulk", counts_a.bulk, "Bulk region as fractions of alpha h(0)")
      ->expected(2)
      ->capture_default_str();
  counts_cmd->add_option("--mode", counts_a.mode)->check(CLI::IsMember({"poisson", "iid"}))->capture_default_str();

  BoundaryArgs boundary_a;
  auto* boundary_cmd = app.add_subcommand("boundary-layer", "Mean counts on the outermost layers");
  add_common(boundary_cmd, boundary_a.common, "json", {"csv", "json"});
  boundary_cmd->add_option("--density", boundary_a.density, "ball, gaussian or a density config file")
      ->capture_default_str();
  boundary_cmd->add_option("--n", boundary_a.n_schedule, "Cloud sizes")->capture_default_str();
  boundary_cmd->add_option("--trials", boundary_a.trials)->check(CLI::Range(2, 1 << 20))->capture_default_str();
  boundary_cmd->add_option("--layers", boundary_a.layers)->check(CLI::Range(2, 1 << 20))->capture_default_str();
  boundary_cmd->add_option("--factor", boundary_a.factor)->capture_default_str();
  boundary_cmd->add_option("--mode", boundary_a.mode)
      ->check(CLI::IsMember({"poisson", "iid"}))
      ->capture_default_str();

  VerifyArgs verify_a;
  auto* verify_cmd = app.add_subcommand("verify", "Exact property suites");
  add_common(verify_cmd, verify_a.common, "csv", {"csv", "json"});
  verify_cmd->add_option("--suite", verify_a.suites, "Comma-separated suites (default: all)")
      ->delimiter(',')
      ->check(CLI::IsMember(suite_names()));
  verify_cmd->add_option("--n", verify_a.n, "Largest random cloud")->check(CLI::Range(1, 64))->capture_default_str();
  verify_cmd->add_option("--cases", verify_a.cases, "Random instances per suite")->capture_default_str();

  CellArgs cell_a;
  auto* cell_cmd = app.add_subcommand("cell", "Cell-problem estimate of alpha at one radius");
  add_common(cell_cmd, cell_a.common, "json", {"csv", "json"});
  cell_cmd->add_option("--r", cell_a.r)->capture_default_str();
  cell_cmd->add_option("--beta", cell_a.beta)->capture_default_str();
  cell_cmd->add_option("--trials", cell_a.trials)->capture_default_str();
  cell_cmd->add_option("--shift", cell_a.shift, "Horizontal shift of the query point")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (peel_cmd->parsed()) return run_peel(peel_a, peel_cmd);
    if (sample_cmd->parsed()) return run_sample(sample_a, sample_cmd);
    if (alpha_cmd->parsed()) return run_estimate_alpha(alpha_a, alpha_cmd);
    if (shape_cmd->parsed()) return run_limit_shape(shape_a, shape_cmd);
    if (counts_cmd->parsed()) return run_layer_counts(counts_a, counts_cmd);
    if (boundary_cmd->parsed()) return run_boundary_layer(boundary_a, boundary_cmd);
    if (verify_cmd->parsed()) return run_verify(verify_a, verify_cmd);
    if (cell_cmd->parsed()) return run_cell(cell_a, cell_cmd);
  } catch (const UsageError& e) {
    std::cerr << "hullpeel: " << e.what() << "\nRun with --help for usage.\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "hullpeel: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
