#include "moe/expert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace moe {

LocationScaleExpert::LocationScaleExpert(KernelFamily kernel, std::vector<double> mu,
                                         double sigma)
    : kernel_(std::move(kernel)), mu_(std::move(mu)), sigma_(sigma) {
  if (mu_.empty()) throw std::invalid_argument("LocationScaleExpert: empty mu");
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_))
    throw std::invalid_argument("LocationScaleExpert: sigma must be positive, got " +
                                std::to_string(sigma));
  for (double m : mu_)
    if (!std::isfinite(m)) throw std::invalid_argument("LocationScaleExpert: non-finite mu");
  log_scale_ = -static_cast<double>(mu_.size()) * std::log(sigma_);
}

double LocationScaleExpert::log_density(std::span<const double> y) const {
  if (y.size() != mu_.size())
    throw std::invalid_argument("LocationScaleExpert: y has dimension " +
                                std::to_string(y.size()) + ", expected " +
                                std::to_string(mu_.size()));
  double u[8];
  const std::size_t q = mu_.size();
  if (q > 8) {
    std::vector<double> big(q);
    for (std::size_t i = 0; i < q; ++i) big[i] = (y[i] - mu_[i]) / sigma_;
    return kernel_.log_density(big) + log_scale_;
  }
  for (std::size_t i = 0; i < q; ++i) u[i] = (y[i] - mu_[i]) / sigma_;
  return kernel_.log_density(std::span<const double>(u, q)) + log_scale_;
}

double LocationScaleExpert::density(std::span<const double> y) const {
  return std::exp(log_density(y));
}

FiniteMixture::FiniteMixture(std::vector<double> weights,
                             std::vector<LocationScaleExpert> experts)
    : weights_(std::move(weights)), experts_(std::move(experts)) {
  if (experts_.empty()) throw std::invalid_argument("FiniteMixture: empty mixture");
  if (weights_.size() != experts_.size())
    throw std::invalid_argument("FiniteMixture: weight/expert count mismatch");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("FiniteMixture: weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("FiniteMixture: weights sum to " + std::to_string(sum) +
                                ", expected 1 within 1e-12");
  const std::size_t q = experts_.front().dim();
  for (const auto& e : experts_)
    if (e.dim() != q) throw std::invalid_argument("FiniteMixture: mixed expert dimensions");
}

double FiniteMixture::density(std::span<const double> y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < experts_.size(); ++i)
    s += weights_[i] * experts_[i].density(y);
  return s;
}

double FiniteMixture::log_density(std::span<const double> y) const {
  // log-sum-exp over log(w_i) + log expert_i; stable when all terms underflow
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(experts_.size());
  for (std::size_t i = 0; i < experts_.size(); ++i) {
    terms[i] = std::log(weights_[i]) + experts_[i].log_density(y);
    best = std::max(best, terms[i]);
  }
  if (!std::isfinite(best)) return best;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - best);
  return best + std::log(s);
}

}  // namespace moe
