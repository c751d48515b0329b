#include "moe/gating.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace moe {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

void check_simplex(const std::vector<double>& pi, const char* what) {
  if (pi.empty()) throw std::invalid_argument(std::string(what) + ": empty weight vector");
  double sum = 0.0;
  for (double p : pi) {
    if (!(p > 0.0) || !std::isfinite(p))
      throw std::invalid_argument(std::string(what) + ": weights must be strictly positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(what) + ": weights must sum to 1 within 1e-12");
}

// softmax with max subtraction; saturates instead of overflowing
std::vector<double> stable_softmax(std::vector<double> scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    sum += s;
  }
  for (double& s : scores) s /= sum;
  return scores;
}

}  // namespace

SoftmaxGating::SoftmaxGating(std::vector<double> a, std::vector<std::vector<double>> b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.empty() || a_.size() != b_.size())
    throw std::invalid_argument("SoftmaxGating: need K >= 1 with matching a/b lengths");
  const std::size_t d = b_.front().size();
  if (d == 0) throw std::invalid_argument("SoftmaxGating: zero-dimensional slopes");
  check_finite(a_, "SoftmaxGating");
  for (const auto& bk : b_) {
    if (bk.size() != d)
      throw std::invalid_argument("SoftmaxGating: slope vectors must share one dimension");
    check_finite(bk, "SoftmaxGating");
  }
}

void SoftmaxGating::scores(std::span<const double> x, std::span<double> out) const {
  if (x.size() != dim())
    throw std::invalid_argument("SoftmaxGating: x has wrong dimension");
  check_finite(x, "SoftmaxGating");
  for (std::size_t k = 0; k < a_.size(); ++k) {
    double s = a_[k];
    for (std::size_t i = 0; i < x.size(); ++i) s += b_[k][i] * x[i];
    out[k] = s;
  }
}

std::vector<double> SoftmaxGating::evaluate(std::span<const double> x) const {
  std::vector<double> s(size());
  scores(x, s);
  return stable_softmax(std::move(s));
}

namespace detail {

SpdFactor factor_spd(const SquareMatrix& sigma, const std::string& what) {
  const std::size_t d = sigma.size();
  if (d == 0) throw std::invalid_argument(what + ": empty covariance");
  Eigen::MatrixXd S(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (sigma[i].size() != d) throw std::invalid_argument(what + ": covariance not square");
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(sigma[i][j]))
        throw std::invalid_argument(what + ": non-finite covariance entry");
      S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sigma[i][j];
    }
  }
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument(what + ": covariance not symmetric within 1e-12");
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(what + ": covariance not positive definite");
  SpdFactor f;
  f.chol_lower.resize(d * d);
  Eigen::Map<Eigen::MatrixXd>(f.chol_lower.data(), d, d) = llt.matrixL();
  f.log_det = 0.0;
  const Eigen::MatrixXd L = llt.matrixL();
  for (std::size_t i = 0; i < d; ++i) f.log_det += 2.0 * std::log(L(i, i));
  return f;
}

double log_gaussian(std::span<const double> x, std::span<const double> nu,
                    const SpdFactor& f) {
  const auto d = static_cast<Eigen::Index>(x.size());
  Eigen::Map<const Eigen::MatrixXd> L(f.chol_lower.data(), d, d);
  Eigen::VectorXd t(d);
  for (Eigen::Index i = 0; i < d; ++i) t[i] = x[i] - nu[i];
  L.triangularView<Eigen::Lower>().solveInPlace(t);
  return -0.5 * (static_cast<double>(d) * kLog2Pi + f.log_det + t.squaredNorm());
}

}  // namespace detail

GaussianGating::GaussianGating(std::vector<double> pi, std::vector<std::vector<double>> nu,
                               std::vector<SquareMatrix> sigma)
    : pi_(std::move(pi)), nu_(std::move(nu)), sigma_(std::move(sigma)) {
  check_simplex(pi_, "GaussianGating");
  if (nu_.size() != pi_.size() || sigma_.size() != pi_.size())
    throw std::invalid_argument("GaussianGating: pi/nu/sigma length mismatch");
  const std::size_t d = nu_.front().size();
  if (d == 0) throw std::invalid_argument("GaussianGating: zero-dimensional means");
  factors_.reserve(pi_.size());
  for (std::size_t k = 0; k < pi_.size(); ++k) {
    if (nu_[k].size() != d)
      throw std::invalid_argument("GaussianGating: mean vectors must share one dimension");
    check_finite(nu_[k], "GaussianGating");
    factors_.push_back(detail::factor_spd(sigma_[k], "GaussianGating"));
  }
}

void GaussianGating::log_scores(std::span<const double> x, std::span<double> out) const {
  if (x.size() != dim()) throw std::invalid_argument("GaussianGating: x has wrong dimension");
  check_finite(x, "GaussianGating");
  for (std::size_t k = 0; k < pi_.size(); ++k)
    out[k] = std::log(pi_[k]) + detail::log_gaussian(x, nu_[k], factors_[k]);
}

std::vector<double> GaussianGating::evaluate(std::span<const double> x) const {
  std::vector<double> s(size());
  log_scores(x, s);
  return stable_softmax(std::move(s));
}

EqualCovGaussianGating::EqualCovGaussianGating(std::vector<double> pi,
                                               std::vector<std::vector<double>> nu,
                                               SquareMatrix sigma)
    : pi_(std::move(pi)), nu_(std::move(nu)), sigma_(std::move(sigma)) {
  check_simplex(pi_, "EqualCovGaussianGating");
  if (nu_.size() != pi_.size())
    throw std::invalid_argument("EqualCovGaussianGating: pi/nu length mismatch");
  const std::size_t d = nu_.front().size();
  for (const auto& nk : nu_) {
    if (nk.size() != d)
      throw std::invalid_argument("EqualCovGaussianGating: mean vectors must share one dimension");
    check_finite(nk, "EqualCovGaussianGating");
  }
  factor_ = detail::factor_spd(sigma_, "EqualCovGaussianGating");
}

std::vector<double> EqualCovGaussianGating::evaluate(std::span<const double> x) const {
  if (x.size() != dim())
    throw std::invalid_argument("EqualCovGaussianGating: x has wrong dimension");
  check_finite(x, "EqualCovGaussianGating");
  std::vector<double> s(size());
  for (std::size_t k = 0; k < pi_.size(); ++k)
    s[k] = std::log(pi_[k]) + detail::log_gaussian(x, nu_[k], factor_);
  return stable_softmax(std::move(s));
}

GaussianGating softmax_to_gaussian(const SoftmaxGating& g) {
  const std::size_t K = g.size();
  const std::size_t d = g.dim();
  std::vector<double> tau(K);
  for (std::size_t k = 0; k < K; ++k) {
    double sq = 0.0;
    for (double bi : g.slopes()[k]) sq += bi * bi;
    tau[k] = g.intercepts()[k] + 0.5 * sq;
  }
  std::vector<double> pi = stable_softmax(std::move(tau));
  SquareMatrix identity(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) identity[i][i] = 1.0;
  return GaussianGating(std::move(pi), g.slopes(),
                        std::vector<SquareMatrix>(K, identity));
}

SoftmaxGating equalcov_gaussian_to_softmax(const EqualCovGaussianGating& g) {
  const std::size_t K = g.size();
  const auto d = static_cast<Eigen::Index>(g.dim());
  Eigen::Map<const Eigen::MatrixXd> L(g.factor().chol_lower.data(), d, d);
  std::vector<double> a(K);
  std::vector<std::vector<double>> b(K, std::vector<double>(g.dim()));
  for (std::size_t k = 0; k < K; ++k) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = g.means()[k][i];
    // Sigma^{-1} nu_k through the two triangular solves of the Cholesky factor
    Eigen::VectorXd z = L.triangularView<Eigen::Lower>().solve(v);
    Eigen::VectorXd bk = L.transpose().triangularView<Eigen::Upper>().solve(z);
    double quad = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      b[k][static_cast<std::size_t>(i)] = bk[i];
      quad += v[i] * bk[i];
    }
    a[k] = std::log(g.weights()[k]) - 0.5 * quad;
  }
  return SoftmaxGating(std::move(a), std::move(b));
}

namespace {
double sharp_center(std::size_t k, std::size_t n, SharpCenterRule rule) {
  // k is 1-based
  if (rule == SharpCenterRule::aligned)
    return static_cast<double>(k - 1) / (2.0 * static_cast<double>(n));
  return static_cast<double>(k - 1) / (2.0 * static_cast<double>(k));
}
}  // namespace

SoftmaxGating sharp_gates(std::size_t n, double sharpness, SharpCenterRule rule) {
  if (n == 0) throw std::invalid_argument("sharp_gates: n must be >= 1");
  if (!(sharpness >= 0.0) || !std::isfinite(sharpness))
    throw std::invalid_argument("sharp_gates: sharpness must be finite and >= 0");
  std::vector<double> a(n);
  std::vector<std::vector<double>> b(n, std::vector<double>(1));
  for (std::size_t k = 1; k <= n; ++k) {
    const double slope = sharpness * static_cast<double>(k);
    a[k - 1] = -slope * sharp_center(k, n, rule);
    b[k - 1][0] = slope;
  }
  return SoftmaxGating(std::move(a), std::move(b));
}

std::vector<std::pair<std::size_t, std::size_t>> gate_argmax_cells(std::size_t n,
                                                                   SharpCenterRule rule) {
  if (n == 0) throw std::invalid_argument("gate_argmax_cells: n must be >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(n);
  for (std::size_t cell = 1; cell <= n; ++cell) {
    const double x = (static_cast<double>(cell) - 0.5) / static_cast<double>(n);
    std::size_t best = 1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= n; ++j) {
      const double score = static_cast<double>(j) * (x - sharp_center(j, n, rule));
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    out.emplace_back(cell, best);
  }
  return out;
}

}  // namespace moe
