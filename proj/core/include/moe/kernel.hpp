#pragma once

#include <functional>
#include <span>
#include <string>

namespace moe {

/// A continuous probability density psi on R^q, given through its log density.
/// log_density may return -infinity where psi vanishes (compactly supported
/// families); it must be finite wherever psi > 0. Built-in families factor as
/// products of one-dimensional kernels, so a single object serves every q.
struct KernelFamily {
  std::string name;
  std::function<double(std::span<const double>)> log_density;
  /// True when psi > 0 on all of R^q. Divergence-based checks are restricted
  /// to full-support families.
  bool full_support = true;
  /// Per-coordinate half-width of the support; infinity when unbounded.
  double support_radius = 0.0;
};

/// Standard normal product kernel.
const KernelFamily& gaussian_kernel();
/// Standard Laplace product kernel (heavy tails).
const KernelFamily& laplace_kernel();
/// Smooth compactly supported bump exp(-1/(1-u^2)) on (-1,1), normalized.
const KernelFamily& bump_kernel();

/// Lookup by name ("gaussian" | "laplace" | "bump").
const KernelFamily& kernel_by_name(const std::string& name);

}  // namespace moe
