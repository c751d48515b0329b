#include "moe/partition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "moe/errors.hpp"

namespace moe {

FinePartition::FinePartition(std::size_t n, std::size_t d, std::size_t max_cells)
    : n_(n), d_(d) {
  if (n_ == 0 || d_ == 0)
    throw std::invalid_argument("FinePartition: n and d must be >= 1");
  num_cells_ = 1;
  for (std::size_t a = 0; a < d_; ++a) {
    if (num_cells_ > max_cells / n_)
      throw ResourceError("FinePartition: n^d = " + std::to_string(n_) + "^" +
                          std::to_string(d_) + " exceeds the cell budget " +
                          std::to_string(max_cells));
    num_cells_ *= n_;
  }
}

double FinePartition::cell_volume() const {
  return 1.0 / static_cast<double>(num_cells_);
}

double FinePartition::diameter() const {
  return std::sqrt(static_cast<double>(d_)) / static_cast<double>(n_);
}

std::size_t FinePartition::flat_index(std::span<const std::size_t> multi) const {
  if (multi.size() != d_) throw std::invalid_argument("FinePartition: bad multi-index rank");
  std::size_t flat = 0;
  for (std::size_t a = 0; a < d_; ++a) {
    if (multi[a] < 1 || multi[a] > n_)
      throw std::invalid_argument("FinePartition: multi-index entry out of [1, n]");
    flat = flat * n_ + (multi[a] - 1);
  }
  return flat + 1;
}

std::vector<std::size_t> FinePartition::multi_index(std::size_t k) const {
  check_cell_index(k);
  std::vector<std::size_t> multi(d_);
  std::size_t rest = k - 1;
  for (std::size_t a = d_; a-- > 0;) {
    multi[a] = rest % n_ + 1;
    rest /= n_;
  }
  return multi;
}

std::size_t FinePartition::cell_of(std::span<const double> x) const {
  if (x.size() != d_) throw std::domain_error("FinePartition: point has wrong dimension");
  std::size_t flat = 0;
  for (std::size_t a = 0; a < d_; ++a) {
    if (!(x[a] >= 0.0 && x[a] <= 1.0))
      throw std::domain_error("FinePartition: coordinate " + std::to_string(a) +
                              " outside [0,1]");
    const auto idx = static_cast<std::size_t>(std::floor(static_cast<double>(n_) * x[a]));
    flat = flat * n_ + std::min(idx, n_ - 1);
  }
  return flat + 1;
}

std::vector<double> FinePartition::representative(std::size_t k) const {
  const auto multi = multi_index(k);
  std::vector<double> center(d_);
  for (std::size_t a = 0; a < d_; ++a)
    center[a] = (static_cast<double>(multi[a]) - 0.5) / static_cast<double>(n_);
  return center;
}

double FinePartition::indicator(std::size_t k, std::span<const double> x) const {
  check_cell_index(k);
  return cell_of(x) == k ? 1.0 : 0.0;
}

std::pair<std::vector<double>, std::vector<double>> FinePartition::cell_bounds(
    std::size_t k) const {
  const auto multi = multi_index(k);
  std::vector<double> lo(d_), hi(d_);
  for (std::size_t a = 0; a < d_; ++a) {
    lo[a] = static_cast<double>(multi[a] - 1) / static_cast<double>(n_);
    hi[a] = static_cast<double>(multi[a]) / static_cast<double>(n_);
  }
  return {lo, hi};
}

void FinePartition::check_cell_index(std::size_t k) const {
  if (k < 1 || k > num_cells_)
    throw std::invalid_argument("FinePartition: cell index " + std::to_string(k) +
                                " outside [1, " + std::to_string(num_cells_) + "]");
}

}  // namespace moe
