#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "moe/analysis.hpp"
#include "moe/errors.hpp"
#include "moe/report.hpp"
#include "moe/rng.hpp"

using namespace moe;

namespace {

double first(std::span<const double> x) { return x[0]; }

}  // namespace

TEST_CASE("lp_norm closed forms") {
  const QuadratureGrid square(Box::unit_cube(2), 64);
  for (double p : {1.0, 2.0, 3.0})
    CHECK(lp_norm([](std::span<const double>) { return 1.0; }, square, p) ==
          doctest::Approx(1.0).epsilon(1e-13));

  const QuadratureGrid line(Box::unit_cube(1), 512);
  CHECK(lp_norm(first, line, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lp_norm(first, line, 2.0) ==
        doctest::Approx(0.5773502691896258).epsilon(1e-5));
  CHECK_THROWS_AS(lp_norm(first, line, 0.5), std::invalid_argument);
}

TEST_CASE("lp_norm names the offending node") {
  const QuadratureGrid line(Box::unit_cube(1), 64);
  const auto bad = [](std::span<const double> x) {
    return x[0] > 0.9 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  };
  CHECK_THROWS_WITH_AS(lp_norm(bad, line, 1.0), doctest::Contains("node"), NumericError);
}

TEST_CASE("sup_norm is a grid max with Lipschitz accuracy") {
  const QuadratureGrid line(Box::unit_cube(1), 512);
  CHECK(sup_norm(first, line) == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(sup_norm([](std::span<const double>) { return -2.5; }, line) == 2.5);
  // |grid max - true sup| <= Lip * h/2 for sin(3x), true sup 1 at x = pi/6
  const double h = 1.0 / 512;
  const double measured = sup_norm(
      [](std::span<const double> x) { return std::sin(3.0 * x[0]); }, line);
  CHECK(std::abs(measured - 1.0) <= 3.0 * h / 2);
}

TEST_CASE("exceedance measure closed forms and monotonicity") {
  const QuadratureGrid square(Box::unit_cube(2), 64);
  CHECK(exceedance_measure([](std::span<const double>) { return 0.0; }, square, 0.1) == 0.0);
  CHECK(exceedance_measure([](std::span<const double>) { return 0.2; }, square, 0.1) ==
        doctest::Approx(1.0).epsilon(1e-13));

  const QuadratureGrid line(Box::unit_cube(1), 512);
  CHECK(exceedance_measure(first, line, 0.75) == doctest::Approx(0.25).epsilon(1e-12));
  double prev = 2.0;
  for (double eps : {0.1, 0.3, 0.5, 0.9}) {
    const double m = exceedance_measure(first, line, eps);
    CHECK(m <= prev);
    prev = m;
  }
  CHECK_THROWS_AS(exceedance_measure(first, line, 0.0), std::invalid_argument);
}

TEST_CASE("integrated KL: identity, positivity, closed form") {
  const QuadratureGrid xg(Box::unit_cube(1), 64);
  const QuadratureGrid yg(Box::interval(-8.0, 8.0), 2048);

  // truncated standard normal against itself
  const double z = 0.9999999999999998;  // mass of N(0,1) on [-8,8], effectively 1
  const ConditionalFn f = [&](std::span<const double>, std::span<const double> y) {
    return std::exp(-0.5 * y[0] * y[0]) / std::sqrt(2 * std::numbers::pi) / z;
  };
  CHECK(std::abs(integrated_kl(f, f, xg, yg)) <= 1e-12);

  // closed form: KL(N(0,1) || N(0.5,1)) = 0.125; truncation effects ~ 1e-15
  const ConditionalFn m = [&](std::span<const double>, std::span<const double> y) {
    const double t = y[0] - 0.5;
    return std::exp(-0.5 * t * t) / std::sqrt(2 * std::numbers::pi) / z;
  };
  CHECK(integrated_kl(f, m, xg, yg) == doctest::Approx(0.125).epsilon(1e-3));
  CHECK(integrated_kl(f, m, xg, yg) >= -1e-12);

  const ConditionalFn zero = [](std::span<const double>, std::span<const double> y) {
    return y[0] > 0.0 ? 1.0 : 0.0;
  };
  CHECK_THROWS_AS(integrated_kl(f, zero, xg, yg), DivergenceError);
}

TEST_CASE("integrated KL over multi-dimensional grids") {
  // f uniform on a product of unit squares, m perturbed along one y axis;
  // the integrand is constant in the other three coordinates, so the value
  // matches the one-dimensional reference
  const QuadratureGrid xg(Box::unit_cube(2), 24);
  const QuadratureGrid yg(Box::unit_cube(2), 24);
  const ConditionalFn f = [](std::span<const double>, std::span<const double>) {
    return 1.0;
  };
  const ConditionalFn m = [](std::span<const double>, std::span<const double> y) {
    return 1.0 + 0.1 * std::sin(2 * std::numbers::pi * y[0]);
  };
  const double kl = integrated_kl(f, m, xg, yg);
  CHECK(kl >= -1e-12);
  CHECK(kl == doctest::Approx(0.0025094).epsilon(1e-3));
}

TEST_CASE("KL-L2 bound check") {
  const QuadratureGrid xg(Box::unit_cube(1), 128);
  const QuadratureGrid yg(Box::unit_cube(1), 128);
  const ConditionalFn f = [](std::span<const double>, std::span<const double>) {
    return 1.0;
  };

  const auto self = kl_l2_bound_check(f, f, 1.0, xg, yg);
  CHECK(self.holds);
  CHECK(std::abs(self.kl) <= 1e-12);
  CHECK(self.min_f == 1.0);

  const ConditionalFn perturbed = [](std::span<const double>, std::span<const double> y) {
    return 1.0 + 0.1 * std::sin(2 * std::numbers::pi * y[0]);
  };
  const auto mild = kl_l2_bound_check(f, perturbed, 1.0, xg, yg);
  CHECK(mild.holds);
  CHECK(mild.kl == doctest::Approx(0.0025094).epsilon(1e-3));
  CHECK(mild.kappa_sq_l2 == doctest::Approx(0.005).epsilon(1e-3));

  CHECK_THROWS_WITH_AS(kl_l2_bound_check(perturbed, f, 1.0, xg, yg),
                       doctest::Contains("1/kappa"), PreconditionError);
}

TEST_CASE("indicator gate errors") {
  const QuadratureGrid grid(Box::unit_cube(1), 8192);

  const auto flat = indicator_gate_error(2, 0.0, 1.0, grid);
  CHECK(flat.per_cell[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(flat.per_cell[1] == doctest::Approx(0.5).epsilon(1e-12));

  // frozen reference ladder (independent numpy oracle, same grid)
  const std::vector<double> frozen{0.220662265133, 0.0277258251239, 0.00277196770549};
  const std::vector<double> ladder{10.0, 100.0, 1000.0};
  double prev = 1e9;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const auto err = indicator_gate_error(4, ladder[i], 1.0, grid);
    CHECK(err.sup == doctest::Approx(frozen[i]).epsilon(1e-9));
    CHECK(err.sup < prev);
    prev = err.sup;
  }

  const auto whole = indicator_gate_error(1, 123.0, 1.0, grid);
  CHECK(whole.sup == 0.0);
}

TEST_CASE("norm ordering on the unit-volume box") {
  const QuadratureGrid line(Box::unit_cube(1), 256);
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(1.0, 9.0);
    const auto g = [&](std::span<const double> x) {
      return a * std::exp(-b * (x[0] - 0.4) * (x[0] - 0.4));
    };
    const double n1 = lp_norm(g, line, 1.0);
    const double n2 = lp_norm(g, line, 2.0);
    const double ns = sup_norm(g, line);
    CHECK(n1 <= n2 + 1e-12);
    CHECK(n2 <= ns + 1e-12);
  }
}

TEST_CASE("grid refinement converges") {
  const auto g = [](std::span<const double> x) { return std::cos(3.0 * x[0]); };
  const double c0 = lp_norm(g, QuadratureGrid(Box::unit_cube(1), 64), 2.0);
  const double c1 = lp_norm(g, QuadratureGrid(Box::unit_cube(1), 128), 2.0);
  const double c2 = lp_norm(g, QuadratureGrid(Box::unit_cube(1), 256), 2.0);
  CHECK(std::abs(c2 - c1) < std::abs(c1 - c0));
}

TEST_CASE("pairwise sums are worker-count independent") {
  const QuadratureGrid line(Box::unit_cube(1), 4096);
  const auto g = [](std::span<const double> x) {
    return std::sin(7.0 * x[0]) + 0.1 * x[0];
  };
  const double w1 = lp_norm(g, line, 2.0, 1);
  const double w2 = lp_norm(g, line, 2.0, 2);
  const double w8 = lp_norm(g, line, 2.0, 8);
  CHECK(w1 == w2);
  CHECK(w1 == w8);
}

TEST_CASE("convergence run: x-constant target makes stage one vanish") {
  const TargetDensity f = make_target("uniform");
  ConvergenceOptions opts;
  opts.x_points = 128;
  opts.y_points = 128;
  const std::vector<Schedule> ladder{{1, 10.0, 8, 1.0}, {2, 20.0, 16, 1.0}};
  const auto report = run_convergence(f, ladder, gaussian_kernel(), opts);
  REQUIRE(report.entries.size() == 2);
  for (const auto& e : report.entries) {
    CHECK(e.s1 == 0.0);
    CHECK(e.total <= e.s1 + e.s2 + e.s3 + 2 * e.quad_tol + 1e-15);
    CHECK(e.kl.has_value());
    CHECK(*e.kl >= -1e-12);
  }
  CHECK(report.entries[0].components == 8);
  CHECK(report.entries[1].components == 32);
}

TEST_CASE("convergence run: errors shrink along a refinement ladder") {
  const TargetDensity f =
      make_target("sine_gauss", {{"amplitude", 0.1}, {"scale", 0.5}}, 256);
  ConvergenceOptions opts;
  opts.x_points = 256;
  opts.y_points = 256;
  opts.exceedance_thresholds = {0.02, 0.05};
  const std::vector<Schedule> ladder{{2, 500.0, 32, 1.5}, {4, 1000.0, 64, 1.5}};
  const auto report = run_convergence(f, ladder, gaussian_kernel(), opts);
  CHECK(report.entries[1].total < report.entries[0].total);
  CHECK(report.entries[1].sup_error < report.entries[0].sup_error);
  for (const auto& e : report.entries) {
    CHECK(e.exceedance[1] <= e.exceedance[0]);  // nonincreasing in eps
    CHECK(e.total <= e.s1 + e.s2 + e.s3 + 2 * e.quad_tol + 1e-15);
  }
}

TEST_CASE("convergence run: kappa columns") {
  const TargetDensity f = make_target("uniform", {}, 128);
  ConvergenceOptions opts;
  opts.x_points = 128;
  opts.y_points = 128;
  opts.kappa = 3.0;
  const std::vector<Schedule> ladder{{2, 500.0, 16, 1.0}};
  const auto report = run_convergence(f, ladder, gaussian_kernel(), opts);
  REQUIRE(report.entries[0].kappa_sq_l2.has_value());
  REQUIRE(report.entries[0].bound_holds.has_value());
  CHECK(*report.entries[0].bound_holds);

  opts.kappa = 0.5;  // 1/kappa = 2 > f = 1
  CHECK_THROWS_AS(run_convergence(f, ladder, gaussian_kernel(), opts), PreconditionError);
}

TEST_CASE("gating stage error obeys the factorized bound") {
  // ||upsilon - eta||_p <= sup_k ||1_k - Gate_k||_{p,X} * sum_k ||slice_k||_{p,Y}
  const TargetDensity f =
      make_target("sine_gauss", {{"amplitude", 0.1}, {"scale", 0.5}}, 256);
  ConvergenceOptions opts;
  opts.x_points = 256;
  opts.y_points = 256;
  const std::size_t n = 4;
  const double sharpness = 200.0;
  const auto report =
      run_convergence(f, {{n, sharpness, 16, 1.5}}, gaussian_kernel(), opts);
  const double s2 = report.entries[0].s2;

  const QuadratureGrid xg(Box::unit_cube(1), 256);
  const QuadratureGrid yg(f.y_domain(), 256);
  const double gate_sup = indicator_gate_error(n, sharpness, opts.p, xg).sup;
  const FinePartition part(n, 1);
  double slice_sum = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const auto rep = part.representative(k);
    slice_sum += lp_norm(
        [&](std::span<const double> y) { return f(rep, y); }, yg, opts.p);
  }
  CHECK(s2 <= gate_sup * slice_sum + 1e-12);
}

TEST_CASE("midpoint weights tile the box exactly") {
  const QuadratureGrid square(Box::unit_cube(2), 64);
  CHECK(square.node_weight() * static_cast<double>(square.num_nodes()) == 1.0);
  const QuadratureGrid wide(Box::interval(-3.0, 3.0), 512);
  CHECK(wide.node_weight() * static_cast<double>(wide.num_nodes()) == 6.0);
}

TEST_CASE("convergence run supports the L1 norm") {
  const TargetDensity f =
      make_target("sine_gauss", {{"amplitude", 0.1}, {"scale", 0.5}}, 128);
  ConvergenceOptions opts;
  opts.p = 1.0;
  opts.x_points = 128;
  opts.y_points = 128;
  const auto report =
      run_convergence(f, {{2, 500.0, 32, 1.5}, {4, 1000.0, 64, 1.5}}, gaussian_kernel(), opts);
  CHECK(report.entries[1].total < report.entries[0].total);
  for (const auto& e : report.entries)
    CHECK(e.total <= e.s1 + e.s2 + e.s3 + 2 * e.quad_tol + 1e-15);
}

TEST_CASE("convergence run: ladder validation") {
  const TargetDensity f = make_target("uniform", {}, 64);
  ConvergenceOptions opts;
  opts.x_points = 64;
  opts.y_points = 64;
  CHECK_THROWS_AS(run_convergence(f, {}, gaussian_kernel(), opts), std::invalid_argument);
  CHECK_THROWS_AS(
      run_convergence(f, {{4, 1.0, 8, 1.0}, {2, 1.0, 8, 1.0}}, gaussian_kernel(), opts),
      std::invalid_argument);
  opts.p = 0.3;
  CHECK_THROWS_AS(run_convergence(f, {{2, 1.0, 8, 1.0}}, gaussian_kernel(), opts),
                  std::invalid_argument);
}

TEST_CASE("convergence run is bit-stable across worker counts") {
  const TargetDensity f =
      make_target("sine_gauss", {{"amplitude", 0.1}, {"scale", 0.5}}, 128);
  ConvergenceOptions opts;
  opts.x_points = 128;
  opts.y_points = 128;
  const std::vector<Schedule> ladder{{2, 100.0, 16, 1.5}};
  ConvergenceOptions opts3 = opts;
  opts3.workers = 3;
  const auto r1 = run_convergence(f, ladder, gaussian_kernel(), opts);
  const auto r3 = run_convergence(f, ladder, gaussian_kernel(), opts3);
  CHECK(report_to_csv(r1) == report_to_csv(r3));
}

TEST_CASE("compact-support kernels skip the divergence column") {
  const TargetDensity f = make_target("uniform", {}, 64);
  ConvergenceOptions opts;
  opts.x_points = 64;
  opts.y_points = 64;
  const auto report = run_convergence(f, {{2, 50.0, 16, 1.0}}, bump_kernel(), opts);
  CHECK_FALSE(report.entries[0].kl.has_value());
  CHECK(report.entries[0].total > 0.0);
}

TEST_CASE("conditional KL wrapper over target and model") {
  const TargetDensity f =
      make_target("sine_gauss", {{"amplitude", 0.1}, {"scale", 0.5}}, 256);
  const auto stages = construct_approximant(f, Schedule{2, 500.0, 32, 1.5},
                                            gaussian_kernel());
  const QuadratureGrid xg(Box::unit_cube(1), 256);
  const QuadratureGrid yg(f.y_domain(), 256);
  const double kl = integrated_kl(f, stages.flat, xg, yg);
  CHECK(kl >= -1e-12);
  CHECK(kl == doctest::Approx(0.02063).epsilon(0.05));
}
