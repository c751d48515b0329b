#include "moe/pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "moe/parallel.hpp"
#include "moe/quadrature.hpp"

namespace moe {

double PiecewiseConditional::operator()(std::span<const double> x,
                                        std::span<const double> y) const {
  return slices[partition.cell_of(x) - 1].density(y);
}

double GatedBlend::operator()(std::span<const double> x, std::span<const double> y) const {
  const auto gates = gating.evaluate(x);
  double s = 0.0;
  for (std::size_t k = 0; k < gates.size(); ++k) s += gates[k] * slices[k].density(y);
  return s;
}

std::size_t HierarchicalMoE::component_count() const {
  std::size_t c = 0;
  for (const auto& m : cell_mixtures) c += m.size();
  return c;
}

double HierarchicalMoE::density(std::span<const double> x, std::span<const double> y) const {
  const auto gates = gating.evaluate(x);
  double s = 0.0;
  for (std::size_t k = 0; k < gates.size(); ++k)
    s += gates[k] * cell_mixtures[k].density(y);
  return s;
}

std::vector<double> FlatMoE::gate_values(std::span<const double> x) const {
  return std::visit([&](const auto& g) { return g.evaluate(x); }, gating);
}

double FlatMoE::density(std::span<const double> x, std::span<const double> y) const {
  const auto gates = gate_values(x);
  double s = 0.0;
  for (std::size_t i = 0; i < experts.size(); ++i) s += gates[i] * experts[i].density(y);
  return s;
}

double FlatMoE::log_density(std::span<const double> x, std::span<const double> y) const {
  return std::log(density(x, y));
}

PiecewiseConditional build_upsilon(const TargetDensity& f, const FinePartition& p) {
  if (f.x_domain() != Box::unit_cube(p.dim()))
    throw std::invalid_argument("build_upsilon: target x-domain must be [0,1]^" +
                                std::to_string(p.dim()));
  std::vector<ConditionalSlice> slices;
  slices.reserve(p.num_cells());
  for (std::size_t k = 1; k <= p.num_cells(); ++k) {
    auto rep = p.representative(k);
    slices.push_back(ConditionalSlice{
        rep, [&f, rep](std::span<const double> y) {
          return f(std::span<const double>(rep.data(), rep.size()), y);
        }});
  }
  return PiecewiseConditional{p, std::move(slices)};
}

GatedBlend build_eta(const PiecewiseConditional& u, SoftmaxGating gating) {
  if (gating.size() != u.slices.size())
    throw std::invalid_argument("build_eta: gating size " + std::to_string(gating.size()) +
                                " != cell count " + std::to_string(u.slices.size()));
  return GatedBlend{std::move(gating), u.slices};
}

FiniteMixture approximate_slice(
    const std::function<double(std::span<const double>)>& slice, const Box& y_domain,
    const KernelFamily& kernel, std::size_t points_per_axis, double rho) {
  if (points_per_axis < 2)
    throw std::invalid_argument("approximate_slice: need at least 2 points per axis");
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("approximate_slice: rho must be positive");
  const QuadratureGrid mean_grid(y_domain, points_per_axis);
  double spacing = 0.0;
  for (std::size_t a = 0; a < y_domain.dim(); ++a)
    spacing = std::max(spacing, y_domain.length(a) / static_cast<double>(points_per_axis));
  const double sigma = rho * spacing;

  std::vector<double> weights;
  std::vector<LocationScaleExpert> experts;
  weights.reserve(mean_grid.num_nodes());
  double total = 0.0;
  for (std::size_t i = 0; i < mean_grid.num_nodes(); ++i) {
    auto mu = mean_grid.node(i);
    const double w = slice(std::span<const double>(mu.data(), mu.size()));
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("approximate_slice: slice returned an invalid value");
    if (w == 0.0) continue;  // open-simplex weights: drop vanishing grid points
    total += w;
    weights.push_back(w);
    experts.emplace_back(kernel, std::move(mu), sigma);
  }
  if (experts.empty() || !(total > 0.0))
    throw std::invalid_argument("approximate_slice: slice vanishes on the whole mean grid");
  for (double& w : weights) w /= total;
  // exact unit sum after the division
  double sum = 0.0;
  for (double w : weights) sum += w;
  weights.back() += 1.0 - sum;
  return FiniteMixture(std::move(weights), std::move(experts));
}

HierarchicalMoE assemble_moe(SoftmaxGating gating, std::vector<FiniteMixture> mixtures) {
  if (gating.size() != mixtures.size())
    throw std::invalid_argument("assemble_moe: gate count " + std::to_string(gating.size()) +
                                " != mixture count " + std::to_string(mixtures.size()));
  return HierarchicalMoE{std::move(gating), std::move(mixtures)};
}

FlatMoE flatten_moe(const HierarchicalMoE& h) {
  std::vector<double> a;
  std::vector<std::vector<double>> b;
  std::vector<LocationScaleExpert> experts;
  const std::size_t total = h.component_count();
  a.reserve(total);
  b.reserve(total);
  experts.reserve(total);
  for (std::size_t k = 0; k < h.cell_mixtures.size(); ++k) {
    const auto& mix = h.cell_mixtures[k];
    for (std::size_t i = 0; i < mix.size(); ++i) {
      const double c = mix.weights()[i];
      if (!(c > 0.0))
        throw std::invalid_argument("flatten_moe: zero mixture weight in cell " +
                                    std::to_string(k + 1));
      a.push_back(std::log(std::max(c, 1e-300)) + h.gating.intercepts()[k]);
      b.push_back(h.gating.slopes()[k]);
      experts.push_back(mix.experts()[i]);
    }
  }
  return FlatMoE{SoftmaxGating(std::move(a), std::move(b)), std::move(experts)};
}

FlatMoE to_gaussian_gated(const FlatMoE& m) {
  const auto* softmax = std::get_if<SoftmaxGating>(&m.gating);
  if (softmax == nullptr)
    throw std::invalid_argument("to_gaussian_gated: model is already Gaussian-gated");
  return FlatMoE{softmax_to_gaussian(*softmax), m.experts};
}

ConstructionStages construct_approximant(const TargetDensity& f, const Schedule& schedule,
                                         const KernelFamily& kernel, unsigned workers) {
  if (f.x_domain().dim() != 1 || f.x_domain() != Box::unit_cube(1))
    throw std::invalid_argument("construct_approximant: sharp gates require X = [0,1]");
  const FinePartition partition(schedule.n, 1);
  PiecewiseConditional upsilon = build_upsilon(f, partition);
  GatedBlend eta = build_eta(upsilon, sharp_gates(schedule.n, schedule.sharpness));

  std::vector<FiniteMixture> mixtures(partition.num_cells(),
                                      FiniteMixture({1.0}, {LocationScaleExpert(kernel, {0.0}, 1.0)}));
  parallel_for_index(
      partition.num_cells(),
      [&](std::size_t k) {
        mixtures[k] = approximate_slice(upsilon.slices[k].density, f.y_domain(), kernel,
                                        schedule.m, schedule.rho);
      },
      workers);

  HierarchicalMoE hierarchical = assemble_moe(eta.gating, std::move(mixtures));
  FlatMoE flat = flatten_moe(hierarchical);
  return ConstructionStages{schedule, std::move(upsilon), std::move(eta),
                            std::move(hierarchical), std::move(flat)};
}

}  // namespace moe
