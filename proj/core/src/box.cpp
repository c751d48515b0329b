#include "moe/box.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace moe {

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size())
    throw std::invalid_argument("Box: lower/upper must be nonempty and equal length");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i]))
      throw std::invalid_argument("Box: need finite lower[" + std::to_string(i) +
                                  "] < upper[" + std::to_string(i) + "]");
  }
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) v *= upper_[i] - lower_[i];
  return v;
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lower_.size()) return false;
  for (std::size_t i = 0; i < lower_.size(); ++i)
    if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
  return true;
}

Box Box::unit_cube(std::size_t d) {
  return Box(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
}

}  // namespace moe
