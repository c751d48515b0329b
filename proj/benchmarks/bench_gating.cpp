#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "moe/gating.hpp"

namespace {

moe::SoftmaxGating make_softmax(std::size_t k, std::size_t d) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> a(k);
  std::vector<std::vector<double>> b(k, std::vector<double>(d));
  for (auto& v : a) v = u(gen);
  for (auto& row : b)
    for (auto& v : row) v = u(gen);
  return moe::SoftmaxGating(a, b);
}

void BM_SoftmaxEvaluate(benchmark::State& state) {
  const auto g = make_softmax(static_cast<std::size_t>(state.range(0)), 2);
  const std::vector<double> x{0.3, -0.7};
  for (auto _ : state) benchmark::DoNotOptimize(g.evaluate(x));
}
BENCHMARK(BM_SoftmaxEvaluate)->Arg(8)->Arg(64)->Arg(1024);

void BM_SharpGates(benchmark::State& state) {
  const auto g = moe::sharp_gates(static_cast<std::size_t>(state.range(0)), 2000.0);
  const std::vector<double> x{0.37};
  for (auto _ : state) benchmark::DoNotOptimize(g.evaluate(x));
}
BENCHMARK(BM_SharpGates)->Arg(4)->Arg(16)->Arg(64);

void BM_GaussianGateEvaluate(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto g = moe::softmax_to_gaussian(make_softmax(k, 3));
  const std::vector<double> x{0.1, 0.2, -0.4};
  for (auto _ : state) benchmark::DoNotOptimize(g.evaluate(x));
}
BENCHMARK(BM_GaussianGateEvaluate)->Arg(8)->Arg(64);

void BM_EqualCovToSoftmax(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto gaussian = moe::softmax_to_gaussian(make_softmax(k, 3));
  moe::SquareMatrix identity(3, std::vector<double>(3, 0.0));
  for (std::size_t i = 0; i < 3; ++i) identity[i][i] = 1.0;
  const moe::EqualCovGaussianGating equalcov(gaussian.weights(), gaussian.means(), identity);
  for (auto _ : state) benchmark::DoNotOptimize(moe::equalcov_gaussian_to_softmax(equalcov));
}
BENCHMARK(BM_EqualCovToSoftmax)->Arg(8)->Arg(64);

}  // namespace
