#include <benchmark/benchmark.h>

#include <cmath>

#include "moe/quadrature.hpp"

namespace {

void BM_LpNorm(benchmark::State& state) {
  const moe::QuadratureGrid grid(moe::Box::unit_cube(1),
                                 static_cast<std::size_t>(state.range(0)));
  const auto g = [](std::span<const double> x) { return std::sin(5.0 * x[0]); };
  for (auto _ : state) benchmark::DoNotOptimize(moe::lp_norm(g, grid, 2.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LpNorm)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

void BM_LpNormParallel(benchmark::State& state) {
  const moe::QuadratureGrid grid(moe::Box::unit_cube(1), 1 << 18);
  const auto g = [](std::span<const double> x) { return std::sin(5.0 * x[0]); };
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(moe::lp_norm(g, grid, 2.0, workers));
}
BENCHMARK(BM_LpNormParallel)->Arg(1)->Arg(2)->Arg(4);

void BM_Exceedance2D(benchmark::State& state) {
  const moe::QuadratureGrid grid(moe::Box::unit_cube(2),
                                 static_cast<std::size_t>(state.range(0)));
  const auto g = [](std::span<const double> x) { return x[0] * x[1]; };
  for (auto _ : state) benchmark::DoNotOptimize(moe::exceedance_measure(g, grid, 0.5));
}
BENCHMARK(BM_Exceedance2D)->Arg(128)->Arg(512);

}  // namespace
