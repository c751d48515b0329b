#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace moe {

/// Square matrix as rows; used for gating covariances.
using SquareMatrix = std::vector<std::vector<double>>;

/// Soft-max gating with K components on R^d:
///   Gate_k(x) = exp(a_k + b_k.x) / sum_l exp(a_l + b_l.x).
/// Evaluation always subtracts the max score before exponentiation, so the
/// large-sharpness regime saturates instead of overflowing.
class SoftmaxGating {
 public:
  SoftmaxGating(std::vector<double> a, std::vector<std::vector<double>> b);

  std::size_t size() const { return a_.size(); }
  std::size_t dim() const { return b_.front().size(); }

  /// Gate vector at x; entries positive (up to floating-point saturation)
  /// and summing to 1 within 1e-12.
  std::vector<double> evaluate(std::span<const double> x) const;
  /// Raw affine scores a_k + b_k.x, before normalization.
  void scores(std::span<const double> x, std::span<double> out) const;

  const std::vector<double>& intercepts() const { return a_; }
  const std::vector<std::vector<double>>& slopes() const { return b_; }

 private:
  std::vector<double> a_;
  std::vector<std::vector<double>> b_;
};

namespace detail {
/// Cached Cholesky data for one SPD covariance.
struct SpdFactor {
  std::vector<double> chol_lower;  // d x d, column-major lower triangle
  double log_det = 0.0;            // log det(Sigma)
};
SpdFactor factor_spd(const SquareMatrix& sigma, const std::string& what);
/// log N(x; nu, Sigma) through the cached factor (triangular solve).
double log_gaussian(std::span<const double> x, std::span<const double> nu,
                    const SpdFactor& f);
}  // namespace detail

/// Gaussian gating: Gate_k(x) = pi_k N(x; nu_k, Sigma_k) / sum_l (...).
/// Covariances are validated (symmetry to 1e-12, successful factorization)
/// and factored once at construction.
class GaussianGating {
 public:
  GaussianGating(std::vector<double> pi, std::vector<std::vector<double>> nu,
                 std::vector<SquareMatrix> sigma);

  std::size_t size() const { return pi_.size(); }
  std::size_t dim() const { return nu_.front().size(); }
  std::vector<double> evaluate(std::span<const double> x) const;
  /// log(pi_k N(x; nu_k, Sigma_k)) for all k, before normalization.
  void log_scores(std::span<const double> x, std::span<double> out) const;

  const std::vector<double>& weights() const { return pi_; }
  const std::vector<std::vector<double>>& means() const { return nu_; }
  const std::vector<SquareMatrix>& covariances() const { return sigma_; }

 private:
  std::vector<double> pi_;
  std::vector<std::vector<double>> nu_;
  std::vector<SquareMatrix> sigma_;
  std::vector<detail::SpdFactor> factors_;
};

/// Gaussian gating whose components share one covariance matrix.
class EqualCovGaussianGating {
 public:
  EqualCovGaussianGating(std::vector<double> pi, std::vector<std::vector<double>> nu,
                         SquareMatrix sigma);

  std::size_t size() const { return pi_.size(); }
  std::size_t dim() const { return nu_.front().size(); }
  std::vector<double> evaluate(std::span<const double> x) const;

  const std::vector<double>& weights() const { return pi_; }
  const std::vector<std::vector<double>>& means() const { return nu_; }
  const SquareMatrix& covariance() const { return sigma_; }
  const detail::SpdFactor& factor() const { return factor_; }

 private:
  std::vector<double> pi_;
  std::vector<std::vector<double>> nu_;
  SquareMatrix sigma_;
  detail::SpdFactor factor_;
};

/// Rewrites a soft-max gating as a Gaussian gating that evaluates identically
/// at every x: nu_k = b_k, Sigma_k = I, pi = softmax(a_k + b_k.b_k / 2).
GaussianGating softmax_to_gaussian(const SoftmaxGating& g);

/// Rewrites an equal-covariance Gaussian gating as a soft-max gating that
/// evaluates identically at every x:
///   a_k = log pi_k - nu_k' Sigma^{-1} nu_k / 2,   b_k = Sigma^{-1} nu_k,
/// computed by solving the SPD system (never by explicit inversion).
SoftmaxGating equalcov_gaussian_to_softmax(const EqualCovGaussianGating& g);

/// Center sequence for the sharp one-dimensional gates below. `aligned`
/// places every pairwise score crossing exactly on a cell boundary k/n
/// (centers (k-1)/(2n)); `componentwise` scales each center by its own index
/// (centers (k-1)/(2k)), which collapses all crossings to x = 1/2 and is kept
/// only for the diagnostic that documents the difference.
enum class SharpCenterRule { aligned, componentwise };

/// One-dimensional soft-max gating (K = n) with scores l*k*(x - c_k). As the
/// sharpness l grows, Gate_k converges to the indicator of
/// [(k-1)/n, k/n) pointwise away from cell boundaries.
SoftmaxGating sharp_gates(std::size_t n, double sharpness,
                          SharpCenterRule rule = SharpCenterRule::aligned);

/// For each cell midpoint, the 1-based index of the maximal score. With the
/// aligned rule the argmax equals the cell index for every cell.
std::vector<std::pair<std::size_t, std::size_t>> gate_argmax_cells(
    std::size_t n, SharpCenterRule rule = SharpCenterRule::aligned);

}  // namespace moe
