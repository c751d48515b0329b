#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace moe {

/// Axis-aligned compact box: the product of [lower[i], upper[i]] intervals.
/// Invariant: lower[i] < upper[i] for every coordinate, so the volume is
/// finite and strictly positive.
class Box {
 public:
  Box(std::vector<double> lower, std::vector<double> upper);

  std::size_t dim() const { return lower_.size(); }
  double volume() const;
  double length(std::size_t axis) const { return upper_[axis] - lower_[axis]; }
  bool contains(std::span<const double> x) const;

  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  static Box unit_cube(std::size_t d);
  static Box interval(double lo, double hi) { return Box({lo}, {hi}); }

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

}  // namespace moe
