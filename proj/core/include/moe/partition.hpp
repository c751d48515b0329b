#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace moe {

/// Decomposition of [0,1]^d into n^d congruent boxes, half-open on every axis
/// except the last interval, which closes at 1. Cells are addressed by a
/// 1-based flat index k in [1, n^d] through the lexicographic mixed-radix
/// bijection (first coordinate most significant). Immutable; all queries are
/// pure.
class FinePartition {
 public:
  /// Throws ResourceError when n^d exceeds max_cells.
  FinePartition(std::size_t n, std::size_t d, std::size_t max_cells = 1u << 22);

  std::size_t n() const { return n_; }
  std::size_t dim() const { return d_; }
  std::size_t num_cells() const { return num_cells_; }

  /// Lebesgue measure of each cell, n^{-d}.
  double cell_volume() const;
  /// Common cell diameter sqrt(d)/n.
  double diameter() const;

  /// Flat index of a multi-index (each entry in [1, n]).
  std::size_t flat_index(std::span<const std::size_t> multi) const;
  /// Inverse of flat_index.
  std::vector<std::size_t> multi_index(std::size_t k) const;

  /// The unique cell containing x in [0,1]^d; per-coordinate index is
  /// min(floor(n*x_i) + 1, n) so that x_i = 1 lands in the last interval.
  /// Throws std::domain_error outside the unit cube.
  std::size_t cell_of(std::span<const double> x) const;

  /// Representative point of cell k (the center).
  std::vector<double> representative(std::size_t k) const;

  /// 1 iff cell_of(x) == k. Throws std::invalid_argument on a bad k.
  double indicator(std::size_t k, std::span<const double> x) const;

  /// Lower/upper corners of cell k.
  std::pair<std::vector<double>, std::vector<double>> cell_bounds(std::size_t k) const;

 private:
  void check_cell_index(std::size_t k) const;

  std::size_t n_;
  std::size_t d_;
  std::size_t num_cells_;
};

}  // namespace moe
