#include <benchmark/benchmark.h>

#include "moe/analysis.hpp"
#include "moe/pipeline.hpp"

namespace {

const std::map<std::string, double> kParams{{"amplitude", 0.1}, {"scale", 0.5}};

void BM_ConstructApproximant(benchmark::State& state) {
  const moe::TargetDensity f = moe::make_target("sine_gauss", kParams);
  const moe::Schedule schedule{static_cast<std::size_t>(state.range(0)),
                               250.0 * static_cast<double>(state.range(0)),
                               16 * static_cast<std::size_t>(state.range(0)), 1.5};
  for (auto _ : state)
    benchmark::DoNotOptimize(moe::construct_approximant(f, schedule, moe::gaussian_kernel()));
}
BENCHMARK(BM_ConstructApproximant)->Arg(2)->Arg(4)->Arg(8);

void BM_FlatDensity(benchmark::State& state) {
  const moe::TargetDensity f = moe::make_target("sine_gauss", kParams);
  const auto stages =
      moe::construct_approximant(f, moe::Schedule{8, 2000.0, 128, 1.5}, moe::gaussian_kernel());
  const double x = 0.41, y = -0.3;
  const std::span<const double> xs(&x, 1), ys(&y, 1);
  for (auto _ : state) benchmark::DoNotOptimize(stages.flat.density(xs, ys));
}
BENCHMARK(BM_FlatDensity);

void BM_ConvergenceRung(benchmark::State& state) {
  const moe::TargetDensity f = moe::make_target("sine_gauss", kParams);
  moe::ConvergenceOptions opts;
  opts.x_points = static_cast<std::size_t>(state.range(0));
  opts.y_points = opts.x_points;
  const std::vector<moe::Schedule> ladder{{4, 1000.0, 64, 1.5}};
  for (auto _ : state)
    benchmark::DoNotOptimize(moe::run_convergence(f, ladder, moe::gaussian_kernel(), opts));
}
BENCHMARK(BM_ConvergenceRung)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
