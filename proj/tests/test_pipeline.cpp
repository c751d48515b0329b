#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "moe/pipeline.hpp"
#include "moe/quadrature.hpp"
#include "moe/rng.hpp"

using namespace moe;

namespace {

std::span<const double> s1v(const double& v) { return std::span<const double>(&v, 1); }

FiniteMixture random_mixture(Rng& rng, std::size_t count, const KernelFamily& kernel) {
  std::vector<double> w(count);
  double sum = 0.0;
  for (double& v : w) {
    v = rng.uniform(0.1, 1.0);
    sum += v;
  }
  for (double& v : w) v /= sum;
  double check = 0.0;
  for (double v : w) check += v;
  w.back() += 1.0 - check;
  std::vector<LocationScaleExpert> experts;
  for (std::size_t i = 0; i < count; ++i)
    experts.emplace_back(kernel, std::vector<double>{rng.uniform(-2.0, 2.0)},
                         rng.uniform(0.3, 1.5));
  return FiniteMixture(w, experts);
}

double y_mass(const FlatMoE& model, double x, const Box& y_domain) {
  const QuadratureGrid grid(y_domain, 512);
  return grid.node_weight() * pairwise_sum(0, grid.num_nodes(), [&](std::size_t i) {
           const double y = grid.node(i)[0];
           return model.density(s1v(x), s1v(y));
         });
}

}  // namespace

TEST_CASE("single-cell surrogate reproduces the frozen slice") {
  const TargetDensity f = make_target("sine_gauss");
  const FinePartition p(1, 1);
  const auto u = build_upsilon(f, p);
  const double rep = 0.5;
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const double x = rng.uniform(0.0, 1.0);
    const double y = rng.uniform(-3.0, 3.0);
    CHECK(u(s1v(x), s1v(y)) == f(s1v(rep), s1v(y)));
  }
}

TEST_CASE("surrogate is exact at representatives and for x-constant targets") {
  const TargetDensity f = make_target("sine_gauss");
  const FinePartition p(4, 1);
  const auto u = build_upsilon(f, p);
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto rep = p.representative(k);
    for (double y : {-1.0, 0.0, 2.0})
      CHECK(u(rep, s1v(y)) == f(rep, s1v(y)));
  }

  const TargetDensity uni = make_target("uniform");
  const auto uu = build_upsilon(uni, FinePartition(3, 1));
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    const double x = rng.uniform(0.0, 1.0), y = rng.uniform(0.0, 1.0);
    CHECK(uu(s1v(x), s1v(y)) == doctest::Approx(uni(s1v(x), s1v(y))).epsilon(1e-15));
  }
}

TEST_CASE("surrogate construction rejects mismatched domains") {
  const TargetDensity f = make_target("sine_gauss");  // X = [0,1]
  CHECK_THROWS_AS(build_upsilon(f, FinePartition(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(construct_approximant(
                      TargetDensity("shifted", Box::interval(-1.0, 1.0),
                                    Box::interval(0.0, 1.0),
                                    [](std::span<const double>, std::span<const double>) {
                                      return 1.0;
                                    }),
                      Schedule{2, 10.0, 8, 1.0}, gaussian_kernel()),
                  std::invalid_argument);
}

TEST_CASE("gated blend: sizes, limits, normalization") {
  const TargetDensity f = make_target("sine_gauss");
  const FinePartition p(4, 1);
  const auto u = build_upsilon(f, p);
  CHECK_THROWS_AS(build_eta(u, sharp_gates(3, 10.0)), std::invalid_argument);

  const auto eta = build_eta(u, sharp_gates(4, 4000.0));
  // sharp gates approach the indicator dispatch away from boundaries
  for (double x : {0.1, 0.3, 0.6, 0.9})
    for (double y : {-0.5, 0.5})
      CHECK(eta(s1v(x), s1v(y)) == doctest::Approx(u(s1v(x), s1v(y))).epsilon(1e-9));

  // convex blends of slices stay normalized
  const auto soft = build_eta(u, sharp_gates(4, 3.0));
  const QuadratureGrid yg(f.y_domain(), 512);
  for (double x : {0.05, 0.5, 0.77}) {
    const double mass =
        yg.node_weight() * pairwise_sum(0, yg.num_nodes(), [&](std::size_t i) {
          const double y = yg.node(i)[0];
          return soft(s1v(x), s1v(y));
        });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }

  const auto single = build_eta(build_upsilon(f, FinePartition(1, 1)), sharp_gates(1, 10.0));
  const double x0 = 0.3, y0 = 0.2;
  CHECK(single(s1v(x0), s1v(y0)) ==
        doctest::Approx(f(s1v(0.5), s1v(y0))).epsilon(1e-15));
}

TEST_CASE("slice quantization: uniform slice gives equal weights") {
  const Box y(Box::interval(0.0, 1.0));
  const auto mix = approximate_slice([](std::span<const double>) { return 1.0; }, y,
                                     gaussian_kernel(), 16, 1.0);
  CHECK(mix.size() == 16);
  for (double w : mix.weights()) CHECK(w == 1.0 / 16);
}

TEST_CASE("slice quantization: error shrinks along the grid ladder") {
  const TargetDensity f = make_target("sine_gauss", {{"amplitude", 0.0}, {"scale", 1.0}});
  const auto slice = [&](std::span<const double> yy) { return f(s1v(0.5), yy); };
  const QuadratureGrid eval(f.y_domain(), 1024);
  double prev = 1e9;
  for (std::size_t m : {8u, 16u, 32u, 64u}) {
    const auto mix = approximate_slice(slice, f.y_domain(), gaussian_kernel(), m, 3.0);
    CHECK(mix.size() == m);
    double sup = 0.0;
    for (std::size_t i = 0; i < eval.num_nodes(); ++i) {
      const double yy = eval.node(i)[0];
      sup = std::max(sup, std::abs(slice(s1v(yy)) - mix.density(s1v(yy))));
    }
    CHECK(sup < prev);
    prev = sup;
  }
}

TEST_CASE("slice quantization: degenerate and partial slices") {
  const Box y(Box::interval(0.0, 1.0));
  CHECK_THROWS_AS(approximate_slice([](std::span<const double>) { return 0.0; }, y,
                                    gaussian_kernel(), 8, 1.0),
                  std::invalid_argument);
  // vanishing half of the grid is dropped, not fatal
  const auto mix = approximate_slice(
      [](std::span<const double> yy) { return yy[0] < 0.5 ? 0.0 : 2.0; }, y,
      gaussian_kernel(), 8, 1.0);
  CHECK(mix.size() == 4);
  CHECK_THROWS_AS(approximate_slice([](std::span<const double>) { return 1.0; }, y,
                                    gaussian_kernel(), 8, -1.0),
                  std::invalid_argument);
}

TEST_CASE("assembly and flattening counts") {
  Rng rng(9);
  const auto gating = sharp_gates(2, 25.0);
  std::vector<FiniteMixture> mixtures{random_mixture(rng, 2, gaussian_kernel()),
                                      random_mixture(rng, 3, gaussian_kernel())};
  const auto h = assemble_moe(gating, mixtures);
  CHECK(h.component_count() == 5);
  const auto flat = flatten_moe(h);
  CHECK(flat.component_count() == 5);
  CHECK_THROWS_AS(assemble_moe(sharp_gates(3, 1.0), mixtures), std::invalid_argument);
}

TEST_CASE("flattening preserves the density everywhere probed") {
  Rng rng(10);
  const FiniteMixture m1 = random_mixture(rng, 2, gaussian_kernel());
  const FiniteMixture m2 = random_mixture(rng, 4, gaussian_kernel());
  const auto h = assemble_moe(sharp_gates(2, 8.0), {m1, m2});
  const auto flat = flatten_moe(h);
  const QuadratureGrid xg(Box::unit_cube(1), 32);
  const QuadratureGrid yg(Box::interval(-4.0, 4.0), 32);
  double worst = 0.0;
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 32; ++j) {
      const double x = xg.node(i)[0], y = yg.node(j)[0];
      worst = std::max(worst, std::abs(h.density(s1v(x), s1v(y)) -
                                       flat.density(s1v(x), s1v(y))));
    }
  CHECK(worst <= 1e-12);
}

TEST_CASE("degenerate flattening cases") {
  Rng rng(12);
  // one component per cell: flat slopes equal the cell slopes, intercepts get log(1)=0
  std::vector<FiniteMixture> singletons{random_mixture(rng, 1, gaussian_kernel()),
                                        random_mixture(rng, 1, gaussian_kernel())};
  const auto gating = sharp_gates(2, 5.0);
  const auto flat = flatten_moe(assemble_moe(gating, singletons));
  const auto* soft = std::get_if<SoftmaxGating>(&flat.gating);
  REQUIRE(soft != nullptr);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(soft->intercepts()[k] == gating.intercepts()[k]);
    CHECK(soft->slopes()[k] == gating.slopes()[k]);
  }

  // identical mixtures make the model independent of x
  const FiniteMixture shared = random_mixture(rng, 3, gaussian_kernel());
  const auto constant = assemble_moe(sharp_gates(4, 7.0), {shared, shared, shared, shared});
  const double y = 0.4;
  const double ref = constant.density(s1v(0.1), s1v(y));
  for (double x : {0.3, 0.5, 0.99})
    CHECK(constant.density(s1v(x), s1v(y)) == doctest::Approx(ref).epsilon(1e-13));

  // single cell, single expert: density equals the expert, independent of x
  const LocationScaleExpert e(gaussian_kernel(), {0.3}, 0.7);
  const auto one = flatten_moe(assemble_moe(sharp_gates(1, 3.0), {FiniteMixture({1.0}, {e})}));
  for (double x : {0.0, 0.6})
    CHECK(one.density(s1v(x), s1v(y)) == doctest::Approx(e.density(s1v(y))).epsilon(1e-15));
}

TEST_CASE("gaussian-gated rewrite evaluates identically") {
  Rng rng(14);
  const auto h = assemble_moe(sharp_gates(3, 12.0),
                              {random_mixture(rng, 2, gaussian_kernel()),
                               random_mixture(rng, 3, gaussian_kernel()),
                               random_mixture(rng, 2, gaussian_kernel())});
  const auto flat = flatten_moe(h);
  const auto gauss = to_gaussian_gated(flat);
  CHECK(gauss.component_count() == flat.component_count());
  CHECK(std::holds_alternative<GaussianGating>(gauss.gating));
  double worst = 0.0;
  const QuadratureGrid xg(Box::unit_cube(1), 32);
  const QuadratureGrid yg(Box::interval(-4.0, 4.0), 32);
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 32; ++j) {
      const double x = xg.node(i)[0], y = yg.node(j)[0];
      worst = std::max(worst,
                       std::abs(flat.density(s1v(x), s1v(y)) - gauss.density(s1v(x), s1v(y))));
    }
  CHECK(worst <= 1e-10);
  CHECK_THROWS_AS(to_gaussian_gated(gauss), std::invalid_argument);

  const auto single = flatten_moe(assemble_moe(
      sharp_gates(1, 1.0),
      {FiniteMixture({1.0}, {LocationScaleExpert(gaussian_kernel(), {0.0}, 1.0)})}));
  const auto gsingle = to_gaussian_gated(single);
  const double x0 = 0.4;
  CHECK(gsingle.gate_values(s1v(x0))[0] == doctest::Approx(1.0));
}

TEST_CASE("full construction: counts, domain guard, normalization") {
  const TargetDensity f =
      make_target("sine_gauss", {{"amplitude", 0.1}, {"scale", 0.5}});
  const Schedule schedule{2, 500.0, 32, 1.5};
  const auto stages = construct_approximant(f, schedule, gaussian_kernel());
  CHECK(stages.component_count() == 64);
  CHECK(stages.upsilon.partition.num_cells() == 2);
  CHECK(stages.eta.gating.size() == 2);

  Rng rng(15);
  for (int i = 0; i < 10; ++i) {
    const double x = rng.uniform(0.0, 1.0);
    CHECK(y_mass(stages.flat, x, f.y_domain()) == doctest::Approx(1.0).epsilon(1e-6));
  }

  // constant-in-x target: upsilon is exact at every probe
  const TargetDensity uni = make_target("uniform");
  const auto ustages = construct_approximant(uni, Schedule{2, 100.0, 16, 1.0},
                                             gaussian_kernel());
  for (int i = 0; i < 20; ++i) {
    const double x = rng.uniform(0.0, 1.0), y = rng.uniform(0.0, 1.0);
    CHECK(ustages.upsilon(s1v(x), s1v(y)) ==
          doctest::Approx(uni(s1v(x), s1v(y))).epsilon(1e-14));
  }
}

TEST_CASE("construction is deterministic across worker counts") {
  const TargetDensity f =
      make_target("sine_gauss", {{"amplitude", 0.1}, {"scale", 0.5}});
  const Schedule schedule{4, 200.0, 16, 1.5};
  const auto one = construct_approximant(f, schedule, gaussian_kernel(), 1);
  const auto four = construct_approximant(f, schedule, gaussian_kernel(), 4);
  Rng rng(16);
  for (int i = 0; i < 50; ++i) {
    const double x = rng.uniform(0.0, 1.0), y = rng.uniform(-3.0, 3.0);
    CHECK(one.flat.density(s1v(x), s1v(y)) == four.flat.density(s1v(x), s1v(y)));
  }
}
