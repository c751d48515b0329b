#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moe/kernel.hpp"

namespace moe {

/// Location-scale transform of a kernel family:
///   density(y) = sigma^{-q} * psi((y - mu) / sigma),  sigma > 0.
/// Evaluation goes through log space (log psi - q log sigma) and converts to
/// the linear scale once at the end.
class LocationScaleExpert {
 public:
  LocationScaleExpert(KernelFamily kernel, std::vector<double> mu, double sigma);

  std::size_t dim() const { return mu_.size(); }
  double density(std::span<const double> y) const;
  double log_density(std::span<const double> y) const;  // may be -inf

  const KernelFamily& kernel() const { return kernel_; }
  const std::vector<double>& mu() const { return mu_; }
  double sigma() const { return sigma_; }

 private:
  KernelFamily kernel_;
  std::vector<double> mu_;
  double sigma_;
  double log_scale_;  // -q * log(sigma), cached
};

/// Convex combination of location-scale experts with weights on the open
/// simplex (every weight > 0, sum within 1e-12 of 1).
class FiniteMixture {
 public:
  FiniteMixture(std::vector<double> weights, std::vector<LocationScaleExpert> experts);

  std::size_t size() const { return experts_.size(); }
  std::size_t dim() const { return experts_.front().dim(); }
  double density(std::span<const double> y) const;
  double log_density(std::span<const double> y) const;

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<LocationScaleExpert>& experts() const { return experts_; }

 private:
  std::vector<double> weights_;
  std::vector<LocationScaleExpert> experts_;
};

}  // namespace moe
