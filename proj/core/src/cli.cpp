#include "moe/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <vector>

#include "moe/analysis.hpp"
#include "moe/config.hpp"
#include "moe/gating.hpp"
#include "moe/kernel.hpp"
#include "moe/report.hpp"
#include "moe/rng.hpp"
#include "moe/target.hpp"

namespace moe::cli {

namespace {

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

int check_run_assertions(const ExperimentConfig& cfg, const ConvergenceReport& report) {
  const auto& entries = report.entries;
  if (cfg.assertions.total_strictly_decreasing) {
    for (std::size_t r = 1; r < entries.size(); ++r)
      if (!(entries[r].total < entries[r - 1].total)) {
        std::cerr << "assertion total_strictly_decreasing failed at rung n="
                  << entries[r].n << " (total=" << format_double(entries[r].total)
                  << ", previous=" << format_double(entries[r - 1].total) << ")\n";
        return kExitAssertion;
      }
  }
  if (cfg.assertions.exceedance_strictly_decreasing) {
    for (std::size_t t = 0; t < report.exceedance_thresholds.size(); ++t)
      for (std::size_t r = 1; r < entries.size(); ++r)
        if (!(entries[r].exceedance[t] < entries[r - 1].exceedance[t])) {
          std::cerr << "assertion exceedance_strictly_decreasing failed at rung n="
                    << entries[r].n << " (threshold "
                    << format_double(report.exceedance_thresholds[t]) << ")\n";
          return kExitAssertion;
        }
  }
  if (cfg.assertions.s1_max) {
    for (const auto& e : entries)
      if (!(e.s1 <= *cfg.assertions.s1_max)) {
        std::cerr << "assertion s1_max failed at rung n=" << e.n
                  << " (s1=" << format_double(e.s1) << " > "
                  << format_double(*cfg.assertions.s1_max) << ")\n";
        return kExitAssertion;
      }
  }
  if (cfg.assertions.bound_holds) {
    for (const auto& e : entries)
      if (!e.bound_holds || !*e.bound_holds) {
        std::cerr << "assertion bound_holds failed at rung n=" << e.n << "\n";
        return kExitAssertion;
      }
  }
  return kExitOk;
}

}  // namespace

int cmd_run(const RunOptions& options) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(options.config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  if (options.seed) cfg.seed = *options.seed;
  if (options.workers) cfg.workers = *options.workers;

  try {
    const TargetDensity target =
        make_target(cfg.target_name, cfg.target_params, cfg.normalizer_points);
    const KernelFamily& kernel = kernel_by_name(cfg.kernel);

    ConvergenceOptions run_opts;
    run_opts.p = cfg.p;
    run_opts.x_points = cfg.x_points;
    run_opts.y_points = cfg.y_points;
    run_opts.exceedance_thresholds = cfg.exceedance_thresholds;
    run_opts.kappa = cfg.kappa;
    run_opts.workers = cfg.workers;

    const ConvergenceReport report = run_convergence(target, cfg.ladder, kernel, run_opts);

    const auto out_dir = std::filesystem::path(options.out_dir);
    std::filesystem::create_directories(out_dir);
    const auto csv_path = (out_dir / cfg.csv_path).string();
    const auto json_path = (out_dir / cfg.json_path).string();
    write_file(csv_path, report_to_csv(report));
    write_file(json_path, report_to_json(report));

    for (const auto& e : report.entries)
      std::cout << "rung n=" << e.n << " K_n=" << e.components
                << " total=" << format_double(e.total)
                << " sup=" << format_double(e.sup_error) << "\n";
    std::cout << "wrote " << csv_path << " and " << json_path << "\n";

    return check_run_assertions(cfg, report);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitAssertion;
  }
}

namespace {

std::vector<double> random_simplex(Rng& rng, std::size_t k) {
  std::vector<double> pi(k);
  double sum = 0.0;
  for (double& p : pi) {
    p = rng.uniform(0.2, 1.0);
    sum += p;
  }
  for (double& p : pi) p /= sum;
  double check = 0.0;
  for (double p : pi) check += p;
  pi.back() += 1.0 - check;
  return pi;
}

SquareMatrix random_spd(Rng& rng, std::size_t d) {
  // A A^T / d + I/2: symmetric, well conditioned
  std::vector<std::vector<double>> a(d, std::vector<double>(d));
  for (auto& row : a)
    for (double& v : row) v = rng.uniform(-1.0, 1.0);
  SquareMatrix s(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double dot = 0.0;
      for (std::size_t r = 0; r < d; ++r) dot += a[i][r] * a[j][r];
      s[i][j] = dot / static_cast<double>(d) + (i == j ? 0.5 : 0.0);
    }
  // enforce bitwise symmetry
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) s[j][i] = s[i][j];
  return s;
}

}  // namespace

int cmd_check_gates(const CheckGatesOptions& options) {
  if (options.k_max == 0 || options.d_max == 0 || options.trials == 0 || options.probes == 0) {
    std::cerr << "check-gates: k/d/trials/probes must be >= 1\n";
    return kExitUsage;
  }
  Rng rng(options.seed);
  double worst = 0.0;

  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const auto K = static_cast<std::size_t>(rng.integer(1, options.k_max));
    const auto d = static_cast<std::size_t>(rng.integer(1, options.d_max));

    // softmax -> gaussian
    std::vector<double> a(K);
    std::vector<std::vector<double>> b(K, std::vector<double>(d));
    for (double& v : a) v = rng.uniform(-2.0, 2.0);
    for (auto& row : b)
      for (double& v : row) v = rng.uniform(-2.0, 2.0);
    const SoftmaxGating softmax(a, b);
    GaussianGating converted = softmax_to_gaussian(softmax);
    if (options.corrupt && trial == 0) {
      auto nu = converted.means();
      nu[0][0] += 1e-3;
      converted = GaussianGating(converted.weights(), nu, converted.covariances());
    }

    // equal-covariance gaussian -> softmax
    const auto pi = random_simplex(rng, K);
    std::vector<std::vector<double>> nu(K, std::vector<double>(d));
    for (auto& row : nu)
      for (double& v : row) v = rng.uniform(-2.0, 2.0);
    const EqualCovGaussianGating equalcov(pi, nu, random_spd(rng, d));
    const SoftmaxGating back = equalcov_gaussian_to_softmax(equalcov);

    std::vector<double> x(d);
    for (std::size_t probe = 0; probe < options.probes; ++probe) {
      for (double& v : x) v = rng.uniform(-2.0, 2.0);
      const auto g1 = softmax.evaluate(x);
      const auto g2 = converted.evaluate(x);
      const auto g3 = equalcov.evaluate(x);
      const auto g4 = back.evaluate(x);
      for (std::size_t k = 0; k < K; ++k) {
        worst = std::max(worst, std::abs(g1[k] - g2[k]));
        worst = std::max(worst, std::abs(g3[k] - g4[k]));
      }
    }
  }

  std::ostringstream summary;
  summary << "check-gates: " << options.trials << " trials (K<=" << options.k_max
          << ", d<=" << options.d_max << ", " << options.probes << " probes), generator "
          << Rng::kName << " seed " << options.seed << ", max deviation "
          << format_double(worst) << "\n";
  std::cout << summary.str();
  if (!options.out_path.empty()) write_file(options.out_path, summary.str());
  if (worst <= options.tolerance) return kExitOk;
  std::cerr << "check-gates: deviation " << format_double(worst) << " exceeds tolerance "
            << format_double(options.tolerance) << "\n";
  return kExitAssertion;
}

int cmd_check_indicators(const CheckIndicatorsOptions& options) {
  if (options.n == 0 || options.sharpness_ladder.empty() || options.grid_points < 2) {
    std::cerr << "check-indicators: need n >= 1, a nonempty ladder and >= 2 grid points\n";
    return kExitUsage;
  }
  if (!(options.p >= 1.0) || !std::isfinite(options.p)) {
    std::cerr << "check-indicators: p must be finite and >= 1\n";
    return kExitUsage;
  }
  const QuadratureGrid grid(Box::unit_cube(1), options.grid_points);
  const FinePartition part(options.n, 1);
  const double eps = 0.05;

  std::ostringstream table;
  std::vector<double> sups;
  for (double l : options.sharpness_ladder) {
    const auto err = indicator_gate_error(options.n, l, options.p, grid);
    // measure of {x : max_k |1_k - Gate_k| > eps}
    const SoftmaxGating gates = sharp_gates(options.n, l);
    std::size_t count = 0;
    for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
      const double x = grid.node(i)[0];
      const auto g = gates.evaluate(std::span<const double>(&x, 1));
      const std::size_t cell = part.cell_of(std::span<const double>(&x, 1)) - 1;
      double worst = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k)
        worst = std::max(worst, std::abs((k == cell ? 1.0 : 0.0) - g[k]));
      if (worst > eps) ++count;
    }
    const double exceed = static_cast<double>(count) * grid.node_weight();
    table << "l=" << format_double(l) << " sup_k L" << format_double(options.p)
          << " error=" << format_double(err.sup) << " exceedance@" << format_double(eps)
          << "=" << format_double(exceed) << "\n";
    sups.push_back(err.sup);
  }
  std::cout << table.str();
  if (!options.out_path.empty()) write_file(options.out_path, table.str());

  if (sups.size() == 1) {
    std::cout << "warning: single-element ladder, monotonicity is vacuous\n";
    return kExitOk;
  }
  if (strictly_decreasing(sups)) return kExitOk;
  std::cerr << "check-indicators: sup errors are not strictly decreasing\n";
  return kExitAssertion;
}

}  // namespace moe::cli
