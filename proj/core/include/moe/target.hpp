#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "moe/box.hpp"

namespace moe {

/// A continuous conditional density f(y|x) on x_domain x y_domain. Targets
/// are specified through a nonnegative continuous raw(x, y); the per-x
/// normalizer is computed lazily by midpoint quadrature over y_domain so that
/// the conditional integrates to 1 for every probed x.
///
/// The normalizer cache is safe for concurrent population: a given x always
/// maps to the same deterministic quadrature value, so racing writers insert
/// identical entries. All evaluation is reentrant.
class TargetDensity {
 public:
  using RawFn = std::function<double(std::span<const double> x, std::span<const double> y)>;

  TargetDensity(std::string name, Box x_domain, Box y_domain, RawFn raw,
                std::size_t normalizer_points_per_axis = 512);

  /// Normalized density f(y|x). Throws std::domain_error off the domain.
  double operator()(std::span<const double> x, std::span<const double> y) const;

  double raw(std::span<const double> x, std::span<const double> y) const;
  /// Per-x normalization constant (cached).
  double normalizer(std::span<const double> x) const;

  const std::string& name() const { return name_; }
  const Box& x_domain() const { return x_domain_; }
  const Box& y_domain() const { return y_domain_; }
  std::size_t normalizer_points() const { return normalizer_points_; }

 private:
  std::string name_;
  Box x_domain_;
  Box y_domain_;
  RawFn raw_;
  std::size_t normalizer_points_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::vector<double>, double> normalizer_cache_;
};

/// Builds a registered target. Known names:
///   "uniform"        params: y_lower (0), y_upper (1)
///   "sine_gauss"     params: amplitude (0.8), scale (0.4), y_lower (-3), y_upper (3)
///   "gated_bimodal"  params: center1 (-1), center2 (1), scale1 (0.5), scale2 (0.5),
///                            y_lower (-3), y_upper (3)
/// All targets have X = [0,1]; unknown names or parameters throw
/// std::invalid_argument.
TargetDensity make_target(const std::string& name,
                          const std::map<std::string, double>& params = {},
                          std::size_t normalizer_points_per_axis = 512);

/// Names accepted by make_target.
std::vector<std::string> registered_targets();

}  // namespace moe
