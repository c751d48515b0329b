#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "moe/box.hpp"
#include "moe/expert.hpp"
#include "moe/gating.hpp"
#include "moe/partition.hpp"
#include "moe/target.hpp"

namespace moe {

/// A frozen conditional slice y -> f(y | x_rep).
struct ConditionalSlice {
  std::vector<double> x_rep;
  std::function<double(std::span<const double>)> density;
};

/// Piecewise-constant-in-x surrogate: dispatches x to its cell and evaluates
/// that cell's frozen slice. Slices hold callables that reference the target
/// they were built from; the target must outlive this object.
struct PiecewiseConditional {
  FinePartition partition;
  std::vector<ConditionalSlice> slices;  // cell order, size n^d

  double operator()(std::span<const double> x, std::span<const double> y) const;
};

/// Gate-blended surrogate: sum_k Gate_k(x) * slice_k(y).
struct GatedBlend {
  SoftmaxGating gating;
  std::vector<ConditionalSlice> slices;

  double operator()(std::span<const double> x, std::span<const double> y) const;
};

/// Two-level model: soft-max gates over cells, one finite mixture per cell.
struct HierarchicalMoE {
  SoftmaxGating gating;
  std::vector<FiniteMixture> cell_mixtures;

  std::size_t component_count() const;  // sum of mixture sizes
  double density(std::span<const double> x, std::span<const double> y) const;
};

/// Single-level model: one gate per expert. The gating is soft-max when
/// produced by flatten_moe and Gaussian after to_gaussian_gated.
struct FlatMoE {
  std::variant<SoftmaxGating, GaussianGating> gating;
  std::vector<LocationScaleExpert> experts;

  std::size_t component_count() const { return experts.size(); }
  std::vector<double> gate_values(std::span<const double> x) const;
  double density(std::span<const double> x, std::span<const double> y) const;
  double log_density(std::span<const double> x, std::span<const double> y) const;
};

/// Freezes f at each cell representative.
PiecewiseConditional build_upsilon(const TargetDensity& f, const FinePartition& p);

/// Replaces the indicator dispatch with soft-max gates (gating size must be
/// the cell count).
GatedBlend build_eta(const PiecewiseConditional& u, SoftmaxGating gating);

/// Kernel quantization of a continuous density slice on a compact box:
/// component means on the uniform points_per_axis^q midpoint grid, common
/// bandwidth sigma = rho * (largest per-axis grid spacing), weights
/// proportional to the slice values at the means, renormalized. Grid points
/// where the slice vanishes are dropped (weights live on the open simplex);
/// throws std::invalid_argument when every grid value vanishes.
FiniteMixture approximate_slice(
    const std::function<double(std::span<const double>)>& slice,
    const Box& y_domain, const KernelFamily& kernel, std::size_t points_per_axis,
    double rho);

/// Pairs gates with per-cell mixtures (lengths must match).
HierarchicalMoE assemble_moe(SoftmaxGating gating, std::vector<FiniteMixture> mixtures);

/// Algebraic rewrite of the two-level model into a single soft-max level:
/// component (k, i) gets intercept log(c_i^k) + a_k and slope b_k. Evaluates
/// identically to the input at every (x, y).
FlatMoE flatten_moe(const HierarchicalMoE& h);

/// Converts a soft-max-gated flat model to a Gaussian-gated one that
/// evaluates identically everywhere.
FlatMoE to_gaussian_gated(const FlatMoE& m);

/// One refinement stage: n cells, gate sharpness, per-cell mixture grid size
/// (points per y-axis) and bandwidth ratio.
struct Schedule {
  std::size_t n = 1;
  double sharpness = 0.0;
  std::size_t m = 2;
  double rho = 1.5;
};

/// Every stage of one construction, kept for stagewise error measurement.
struct ConstructionStages {
  Schedule schedule;
  PiecewiseConditional upsilon;
  GatedBlend eta;
  HierarchicalMoE hierarchical;
  FlatMoE flat;

  std::size_t component_count() const { return flat.component_count(); }
};

/// Runs the full construction for a 1-D input target (X = [0,1]):
/// partition -> sharp gates -> upsilon -> eta -> per-cell slice mixtures ->
/// hierarchical assembly -> flattening. Per-cell approximation is
/// independent across cells and dispatched over `workers`; cell order in the
/// result is deterministic regardless of the worker count. The returned
/// stages reference `f`, which must outlive them.
ConstructionStages construct_approximant(const TargetDensity& f, const Schedule& schedule,
                                         const KernelFamily& kernel, unsigned workers = 1);

}  // namespace moe
