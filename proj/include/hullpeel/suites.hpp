#ifndef HULLPEEL_SUITES_HPP
#define HULLPEEL_SUITES_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hullpeel {

/// Randomized instances per suite. `cases` applies to every randomized suite
/// and `max_points` bounds the cloud sizes.
struct SuiteOptions {
  std::size_t max_points = 48;
  std::size_t cases = 200;
  std::uint64_t seed = 1;
};

struct SuiteResult {
  std::string name;
  bool ok = true;
  std::size_t cases = 0;
  /// First failing instance, empty on success.
  std::string counterexample;
  double seconds = 0;
};

/// dpp, semidpp, affine, monotone, correspondence, F, barrier, quadrature.
const std::vector<std::string>& suite_names();

/// Runs one suite. Clouds are exact rationals on a coarse grid so that
/// collinear points and repeated coordinates show up often; the semidpp and
/// correspondence clouds keep first coordinates distinct. Throws
/// std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options = {});

}  // namespace hullpeel

#endif  // HULLPEEL_SUITES_HPP
