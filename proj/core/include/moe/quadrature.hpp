#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "moe/box.hpp"
#include "moe/errors.hpp"
#include "moe/parallel.hpp"

namespace moe {

/// Midpoint tensor-product rule on a box: points_per_axis midpoints per axis,
/// uniform weight volume / num_nodes. Weights are positive and no node sits
/// on a partition cell boundary.
class QuadratureGrid {
 public:
  QuadratureGrid(Box box, std::size_t points_per_axis);

  const Box& box() const { return box_; }
  std::size_t dim() const { return box_.dim(); }
  std::size_t points_per_axis() const { return points_per_axis_; }
  std::size_t num_nodes() const { return num_nodes_; }
  /// Uniform midpoint weight; weights sum to the box volume exactly.
  double node_weight() const { return weight_; }

  /// Decodes node i (row-major over axes) into `out`; out.size() == dim().
  void node(std::size_t i, std::span<double> out) const;
  std::vector<double> node(std::size_t i) const;
  /// The per-axis midpoint coordinates.
  std::vector<double> axis_nodes(std::size_t axis) const;

  /// Halved-resolution grid used for doubling-delta tolerance estimates.
  QuadratureGrid coarsened() const;

 private:
  Box box_;
  std::size_t points_per_axis_;
  std::size_t num_nodes_;
  double weight_;
};

inline QuadratureGrid::QuadratureGrid(Box box, std::size_t points_per_axis)
    : box_(std::move(box)), points_per_axis_(points_per_axis) {
  if (points_per_axis_ == 0)
    throw std::invalid_argument("QuadratureGrid: points_per_axis must be >= 1");
  if (box_.dim() > 8)
    throw std::invalid_argument("QuadratureGrid: dimension capped at 8");
  num_nodes_ = 1;
  for (std::size_t a = 0; a < box_.dim(); ++a) {
    if (num_nodes_ > (std::size_t{1} << 28) / points_per_axis_)
      throw ResourceError("QuadratureGrid: node count exceeds budget");
    num_nodes_ *= points_per_axis_;
  }
  weight_ = box_.volume() / static_cast<double>(num_nodes_);
}

inline void QuadratureGrid::node(std::size_t i, std::span<double> out) const {
  const std::size_t d = box_.dim();
  for (std::size_t a = d; a-- > 0;) {
    const std::size_t idx = i % points_per_axis_;
    i /= points_per_axis_;
    out[a] = box_.lower()[a] +
             (static_cast<double>(idx) + 0.5) * box_.length(a) /
                 static_cast<double>(points_per_axis_);
  }
}

inline std::vector<double> QuadratureGrid::node(std::size_t i) const {
  std::vector<double> out(box_.dim());
  node(i, out);
  return out;
}

inline std::vector<double> QuadratureGrid::axis_nodes(std::size_t axis) const {
  std::vector<double> out(points_per_axis_);
  for (std::size_t j = 0; j < points_per_axis_; ++j)
    out[j] = box_.lower()[axis] +
             (static_cast<double>(j) + 0.5) * box_.length(axis) /
                 static_cast<double>(points_per_axis_);
  return out;
}

inline QuadratureGrid QuadratureGrid::coarsened() const {
  return QuadratureGrid(box_, points_per_axis_ > 1 ? points_per_axis_ / 2 : 1);
}

namespace detail {
inline void throw_nonfinite(const QuadratureGrid& grid, std::size_t i, double v) {
  std::string where = "node " + std::to_string(i) + " at (";
  const auto x = grid.node(i);
  for (std::size_t a = 0; a < x.size(); ++a)
    where += (a ? ", " : "") + std::to_string(x[a]);
  where += ")";
  throw NumericError("non-finite sample " + std::to_string(v) + " at " + where);
}
}  // namespace detail

/// L_p norm (sum_nodes w * |g|^p)^{1/p}, p >= 1 finite, computed with the
/// deterministic pairwise reduction. Throws NumericError (naming the node)
/// on a non-finite sample.
template <class Fn>
double lp_norm(Fn&& g, const QuadratureGrid& grid, double p, unsigned workers = 1) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lp_norm: p must be finite and >= 1");
  const std::size_t d = grid.dim();
  auto term = [&](std::size_t i) {
    std::array<double, 8> buf;
    grid.node(i, std::span<double>(buf.data(), d));
    const double v = g(std::span<const double>(buf.data(), d));
    if (!std::isfinite(v)) detail::throw_nonfinite(grid, i, v);
    const double a = std::abs(v);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
  };
  const double s = pairwise_sum(0, grid.num_nodes(), term, workers);
  return std::pow(s * grid.node_weight(), 1.0 / p);
}

/// Grid max of |g|: a lower bound on the true sup norm whose accuracy knob is
/// the grid density.
template <class Fn>
double sup_norm(Fn&& g, const QuadratureGrid& grid) {
  const std::size_t d = grid.dim();
  double best = 0.0;
  std::array<double, 8> buf;
  for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
    grid.node(i, std::span<double>(buf.data(), d));
    const double v = g(std::span<const double>(buf.data(), d));
    if (!std::isfinite(v)) detail::throw_nonfinite(grid, i, v);
    best = std::max(best, std::abs(v));
  }
  return best;
}

/// Quadrature measure of the exceedance set {|g| > eps}.
template <class Fn>
double exceedance_measure(Fn&& g, const QuadratureGrid& grid, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("exceedance_measure: eps must be > 0");
  const std::size_t d = grid.dim();
  std::size_t count = 0;
  std::array<double, 8> buf;
  for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
    grid.node(i, std::span<double>(buf.data(), d));
    const double v = g(std::span<const double>(buf.data(), d));
    if (!std::isfinite(v)) detail::throw_nonfinite(grid, i, v);
    if (std::abs(v) > eps) ++count;
  }
  return static_cast<double>(count) * grid.node_weight();
}

}  // namespace moe
