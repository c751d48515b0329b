#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moe/pipeline.hpp"
#include "moe/quadrature.hpp"
#include "moe/target.hpp"

namespace moe {

/// Conditional density as a plain callable (x, y) -> value >= 0.
using ConditionalFn =
    std::function<double(std::span<const double> x, std::span<const double> y)>;

/// Integrated conditional Kullback-Leibler divergence
///   int_X int_Y f log(f/m) dy dx
/// by midpoint quadrature over both grids. Contributions with f = 0 are 0;
/// m = 0 where f > 0 raises DivergenceError naming the node.
double integrated_kl(const ConditionalFn& f, const ConditionalFn& m,
                     const QuadratureGrid& x_grid, const QuadratureGrid& y_grid,
                     unsigned workers = 1);
double integrated_kl(const TargetDensity& f, const FlatMoE& m,
                     const QuadratureGrid& x_grid, const QuadratureGrid& y_grid,
                     unsigned workers = 1);

struct KlBoundCheck {
  double kl = 0.0;
  double l2_sq = 0.0;        // ||f - m||_{2,Z}^2
  double kappa_sq_l2 = 0.0;  // kappa^2 * l2_sq
  double tolerance = 0.0;    // combined doubling-delta tolerance
  double min_f = 0.0;        // grid minimum of f
  bool holds = false;        // kl <= kappa_sq_l2 + tolerance
};

/// Checks the divergence-vs-L2 relation kl <= kappa^2 ||f-m||_2^2 at the
/// given grids. Precondition (verified on the grid): min f >= 1/kappa;
/// violation raises PreconditionError naming the witness node. The combined
/// tolerance is the doubling delta of both sides at half resolution.
KlBoundCheck kl_l2_bound_check(const ConditionalFn& f, const ConditionalFn& m,
                               double kappa, const QuadratureGrid& x_grid,
                               const QuadratureGrid& y_grid, unsigned workers = 1);
KlBoundCheck kl_l2_bound_check(const TargetDensity& f, const FlatMoE& m, double kappa,
                               const QuadratureGrid& x_grid, const QuadratureGrid& y_grid,
                               unsigned workers = 1);

struct IndicatorGateError {
  std::vector<double> per_cell;  // ||1_cell_k - Gate_k||_{p,[0,1]}
  double sup = 0.0;              // max over k
};

/// L_p distance between each sharp gate and its cell indicator on [0,1]
/// (d = 1 construction), on the given x grid.
IndicatorGateError indicator_gate_error(std::size_t n, double sharpness, double p,
                                        const QuadratureGrid& x_grid,
                                        unsigned workers = 1);

/// One refinement rung of a convergence run.
struct ConvergenceEntry {
  std::size_t n = 0;
  double sharpness = 0.0;
  std::size_t m = 0;
  double rho = 0.0;
  std::size_t components = 0;  // K_n
  double s1 = 0.0;             // ||f - upsilon||_p
  double s2 = 0.0;             // ||upsilon - eta||_p
  double s3 = 0.0;             // ||eta - model||_p
  double total = 0.0;          // ||f - model||_p
  double sup_error = 0.0;      // grid sup of |f - model|
  std::vector<double> exceedance;  // one per configured threshold
  std::optional<double> kl;        // absent for non-full-support kernels
  std::optional<double> kappa_sq_l2;
  std::optional<bool> bound_holds;
  double quad_tol = 0.0;  // doubling delta of the total error norm
};

struct ConvergenceReport {
  std::string schema_version;
  std::string target;
  std::string kernel;
  double p = 2.0;
  std::vector<double> exceedance_thresholds;
  std::optional<double> kappa;
  std::vector<ConvergenceEntry> entries;
};

struct ConvergenceOptions {
  double p = 2.0;
  std::size_t x_points = 512;
  std::size_t y_points = 512;
  std::vector<double> exceedance_thresholds = {0.05};
  std::optional<double> kappa;  // enables the KL-L2 bound columns
  unsigned workers = 1;
};

/// Runs the construction across a strictly refining ladder (n nondecreasing)
/// and measures every stage: the epsilon/3 decomposition (s1, s2, s3), the
/// total L_p error, the grid sup error, exceedance measures, integrated KL
/// (full-support kernels only) and the KL-L2 bound when kappa is set.
/// Entries are ordered by schedule. Identical inputs produce bit-identical
/// reports for any worker count.
ConvergenceReport run_convergence(const TargetDensity& f, const std::vector<Schedule>& ladder,
                                  const KernelFamily& kernel, const ConvergenceOptions& options);

}  // namespace moe
