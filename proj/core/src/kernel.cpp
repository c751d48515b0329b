#include "moe/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace moe {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Normalizer of exp(-1/(1-t^2)) on (-1,1). The extension by zero is smooth,
// so the midpoint rule converges superalgebraically; 1<<15 points is far
// below 1e-14 absolute error.
double bump_norm_1d() {
  static const double c = [] {
    const std::size_t n = 1u << 15;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = -1.0 + (i + 0.5) * (2.0 / n);
      s += std::exp(-1.0 / (1.0 - t * t));
    }
    return s * (2.0 / n);
  }();
  return c;
}

}  // namespace

const KernelFamily& gaussian_kernel() {
  static const KernelFamily k{
      "gaussian",
      [](std::span<const double> u) {
        double s = 0.0;
        for (double ui : u) s += ui * ui;
        return -0.5 * s - static_cast<double>(u.size()) * kLogSqrt2Pi;
      },
      true, kInf};
  return k;
}

const KernelFamily& laplace_kernel() {
  static const KernelFamily k{
      "laplace",
      [](std::span<const double> u) {
        double s = 0.0;
        for (double ui : u) s += std::abs(ui);
        return -s - static_cast<double>(u.size()) * std::numbers::ln2;
      },
      true, kInf};
  return k;
}

const KernelFamily& bump_kernel() {
  static const KernelFamily k{
      "bump",
      [](std::span<const double> u) {
        const double log_c = std::log(bump_norm_1d());
        double s = 0.0;
        for (double ui : u) {
          if (std::abs(ui) >= 1.0) return kNegInf;
          s += -1.0 / (1.0 - ui * ui) - log_c;
        }
        return s;
      },
      false, 1.0};
  return k;
}

const KernelFamily& kernel_by_name(const std::string& name) {
  if (name == "gaussian") return gaussian_kernel();
  if (name == "laplace") return laplace_kernel();
  if (name == "bump") return bump_kernel();
  throw std::invalid_argument("unknown kernel family: " + name);
}

}  // namespace moe
