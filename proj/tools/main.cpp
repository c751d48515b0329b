// Batch front end: `run` drives a configured convergence experiment and emits
// CSV/JSON reports; `check-gates` and `check-indicators` are self-contained
// verification commands. Exit codes: 0 ok, 1 usage/config error, 2 assertion
// failure.

#include <CLI11.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "moe/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mixture-of-experts conditional density approximation toolkit"};
  app.require_subcommand(1);

  moe::cli::RunOptions run_opts;
  std::uint64_t run_seed = 0;
  unsigned run_workers = 0;
  auto* run = app.add_subcommand("run", "run a configured experiment ladder");
  run->add_option("--config", run_opts.config_path, "experiment config (JSON)")
      ->required();
  run->add_option("--out", run_opts.out_dir, "output directory (default .)");
  auto* seed_opt = run->add_option("--seed", run_seed, "override the config seed");
  auto* workers_opt =
      run->add_option("--workers", run_workers, "override the config worker count");

  moe::cli::CheckGatesOptions gate_opts;
  auto* gates = app.add_subcommand("check-gates", "gate-class conversion identities");
  gates->add_option("--k-max", gate_opts.k_max, "max component count (default 8)");
  gates->add_option("--d-max", gate_opts.d_max, "max input dimension (default 3)");
  gates->add_option("--trials", gate_opts.trials, "random instances (default 100)");
  gates->add_option("--probes", gate_opts.probes, "probe points per instance (default 1000)");
  gates->add_option("--seed", gate_opts.seed, "generator seed (default 42)");
  gates->add_option("--tolerance", gate_opts.tolerance, "max allowed deviation (default 1e-10)");
  gates->add_option("--out", gate_opts.out_path, "also write the summary to this file");
  gates->add_flag("--corrupt", gate_opts.corrupt,
                  "test hook: corrupt one conversion (expect exit 2)");

  moe::cli::CheckIndicatorsOptions ind_opts;
  auto* indicators =
      app.add_subcommand("check-indicators", "sharp-gate indicator approximation");
  indicators->add_option("--n", ind_opts.n, "cell count (default 4)");
  indicators->add_option("--l", ind_opts.sharpness_ladder,
                         "sharpness ladder (default 10 100 1000)");
  indicators->add_option("--p", ind_opts.p, "norm exponent (default 1)");
  indicators->add_option("--grid", ind_opts.grid_points, "grid points (default 8192)");
  indicators->add_option("--out", ind_opts.out_path, "also write the table to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : moe::cli::kExitUsage;
  }

  if (run->parsed()) {
    if (!seed_opt->empty()) run_opts.seed = run_seed;
    if (!workers_opt->empty()) run_opts.workers = run_workers;
    return moe::cli::cmd_run(run_opts);
  }
  if (gates->parsed()) return moe::cli::cmd_check_gates(gate_opts);
  return moe::cli::cmd_check_indicators(ind_opts);
}
