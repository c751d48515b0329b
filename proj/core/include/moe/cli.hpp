#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace moe::cli {

/// Stable exit codes: 0 success, 1 usage/config error, 2 assertion failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAssertion = 2;

struct RunOptions {
  std::string config_path;
  std::string out_dir = ".";  // output paths in the config resolve under this
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
};

/// Runs the configured experiment, writes the CSV and JSON reports, and
/// evaluates any embedded assertions.
int cmd_run(const RunOptions& options);

struct CheckGatesOptions {
  std::size_t k_max = 8;
  std::size_t d_max = 3;
  std::size_t trials = 100;
  std::size_t probes = 1000;
  std::uint64_t seed = 42;
  double tolerance = 1e-10;
  std::string out_path;  // optional copy of the summary line
  /// Test hook: corrupts one converted parameter so the harness can verify
  /// that a broken conversion is detected (expected exit 2).
  bool corrupt = false;
};

/// Gate-class conversion identities on random parameters, both directions.
/// Prints the max deviation; exit 0 iff it is within tolerance.
int cmd_check_gates(const CheckGatesOptions& options);

struct CheckIndicatorsOptions {
  std::size_t n = 4;
  std::vector<double> sharpness_ladder = {10.0, 100.0, 1000.0};
  double p = 1.0;
  std::size_t grid_points = 8192;
  std::string out_path;  // optional copy of the printed table
};

/// Prints sup-over-cells L_p errors and exceedance measures of the sharp
/// gates along the sharpness ladder; exit 0 iff strictly decreasing.
int cmd_check_indicators(const CheckIndicatorsOptions& options);

}  // namespace moe::cli
