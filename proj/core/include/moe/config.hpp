#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moe/pipeline.hpp"

namespace moe {

/// Assertions a run config may embed; violations make cmd_run exit 2 with
/// the failing rung named on stderr.
struct RunAssertions {
  bool total_strictly_decreasing = false;
  bool exceedance_strictly_decreasing = false;
  std::optional<double> s1_max = {};       // every rung must satisfy s1 <= s1_max
  bool bound_holds = false;                // KL-L2 bound must hold on every rung
};

/// One experiment: target + kernel + refinement ladder + measurement grids.
struct ExperimentConfig {
  std::string target_name;
  std::map<std::string, double> target_params;
  std::string kernel = "gaussian";
  double p = 2.0;
  std::vector<Schedule> ladder;
  std::size_t x_points = 512;
  std::size_t y_points = 512;
  std::size_t normalizer_points = 512;
  std::vector<double> exceedance_thresholds = {0.05};
  std::optional<double> kappa;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string csv_path = "report.csv";
  std::string json_path = "report.json";
  RunAssertions assertions;
};

/// Parses and validates a config document. Throws std::invalid_argument with
/// field diagnostics (JSON pointer + reason) on any violation: unknown
/// fields, non-refining ladders (n must be nondecreasing), or out-of-range
/// numerics.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace moe
