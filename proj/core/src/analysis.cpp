#include "moe/analysis.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "moe/errors.hpp"
#include "moe/parallel.hpp"

namespace moe {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

std::string point_label(std::span<const double> p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? ", " : "") + std::to_string(p[i]);
  return out + ")";
}

std::string node_label(std::span<const double> x, std::span<const double> y) {
  return "(x=" + point_label(x) + ", y=" + point_label(y) + ")";
}

using Nodes = std::vector<std::vector<double>>;

Nodes enumerate_nodes(const QuadratureGrid& grid) {
  Nodes out;
  out.reserve(grid.num_nodes());
  for (std::size_t i = 0; i < grid.num_nodes(); ++i) out.push_back(grid.node(i));
  return out;
}

// Row-wise stable softmax of affine scores over the x nodes.
MatrixXd softmax_grid(const SoftmaxGating& g, const Nodes& xs, unsigned workers) {
  MatrixXd out(static_cast<Index>(xs.size()), static_cast<Index>(g.size()));
  parallel_for_index(
      xs.size(),
      [&](std::size_t i) {
        std::vector<double> row(g.size());
        g.scores(xs[i], row);
        const double top = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (double& s : row) {
          s = std::exp(s - top);
          sum += s;
        }
        for (std::size_t k = 0; k < row.size(); ++k)
          out(static_cast<Index>(i), static_cast<Index>(k)) = row[k] / sum;
      },
      workers);
  return out;
}

MatrixXd gaussian_gate_grid(const GaussianGating& g, const Nodes& xs, unsigned workers) {
  MatrixXd out(static_cast<Index>(xs.size()), static_cast<Index>(g.size()));
  parallel_for_index(
      xs.size(),
      [&](std::size_t i) {
        const auto row = g.evaluate(xs[i]);
        for (std::size_t k = 0; k < row.size(); ++k)
          out(static_cast<Index>(i), static_cast<Index>(k)) = row[k];
      },
      workers);
  return out;
}

MatrixXd flat_gate_grid(const FlatMoE& m, const Nodes& xs, unsigned workers) {
  if (const auto* s = std::get_if<SoftmaxGating>(&m.gating))
    return softmax_grid(*s, xs, workers);
  return gaussian_gate_grid(std::get<GaussianGating>(m.gating), xs, workers);
}

MatrixXd slice_grid(const std::vector<ConditionalSlice>& slices, const Nodes& ys,
                    unsigned workers) {
  MatrixXd out(static_cast<Index>(slices.size()), static_cast<Index>(ys.size()));
  parallel_for_index(
      slices.size(),
      [&](std::size_t k) {
        for (std::size_t j = 0; j < ys.size(); ++j)
          out(static_cast<Index>(k), static_cast<Index>(j)) = slices[k].density(ys[j]);
      },
      workers);
  return out;
}

MatrixXd expert_grid(const std::vector<LocationScaleExpert>& experts, const Nodes& ys,
                     unsigned workers) {
  MatrixXd out(static_cast<Index>(experts.size()), static_cast<Index>(ys.size()));
  parallel_for_index(
      experts.size(),
      [&](std::size_t c) {
        for (std::size_t j = 0; j < ys.size(); ++j)
          out(static_cast<Index>(c), static_cast<Index>(j)) = experts[c].density(ys[j]);
      },
      workers);
  return out;
}

MatrixXd target_grid(const TargetDensity& f, const Nodes& xs, const Nodes& ys,
                     unsigned workers) {
  MatrixXd out(static_cast<Index>(xs.size()), static_cast<Index>(ys.size()));
  parallel_for_index(
      xs.size(),
      [&](std::size_t i) {
        const double z = f.normalizer(xs[i]);
        for (std::size_t j = 0; j < ys.size(); ++j)
          out(static_cast<Index>(i), static_cast<Index>(j)) = f.raw(xs[i], ys[j]) / z;
      },
      workers);
  return out;
}

// ||A||_p over the product grid via the deterministic pairwise reduction.
double matrix_lp(const MatrixXd& A, double w, double p, unsigned workers) {
  const auto* data = A.data();
  const std::size_t count = static_cast<std::size_t>(A.size());
  const double s = pairwise_sum(
      0, count,
      [&](std::size_t i) {
        const double a = std::abs(data[i]);
        if (p == 1.0) return a;
        if (p == 2.0) return a * a;
        return std::pow(a, p);
      },
      workers);
  return std::pow(s * w, 1.0 / p);
}

double matrix_sup(const MatrixXd& A) { return A.cwiseAbs().maxCoeff(); }

double matrix_exceedance(const MatrixXd& A, double w, double eps) {
  std::size_t count = 0;
  const auto* data = A.data();
  for (std::size_t i = 0; i < static_cast<std::size_t>(A.size()); ++i)
    if (std::abs(data[i]) > eps) ++count;
  return static_cast<double>(count) * w;
}

// sum of F*log(F/M) with the 0*log0 = 0 convention; nodes with M <= 0 where
// F > 0 are reported with their coordinates.
double matrix_kl(const MatrixXd& F, const MatrixXd& M, double w, const Nodes& xs,
                 const Nodes& ys, unsigned workers) {
  const double s = pairwise_sum(
      0, static_cast<std::size_t>(F.size()),
      [&](std::size_t idx) {
        // column-major flat index
        const Index i = static_cast<Index>(idx) % F.rows();
        const Index j = static_cast<Index>(idx) / F.rows();
        const double fv = F(i, j);
        if (fv == 0.0) return 0.0;
        const double mv = M(i, j);
        if (!(mv > 0.0))
          throw DivergenceError("integrated_kl: model density vanishes at node " +
                                node_label(xs[static_cast<std::size_t>(i)],
                                           ys[static_cast<std::size_t>(j)]) +
                                " where the target is positive");
        return fv * (std::log(fv) - std::log(mv));
      },
      workers);
  return s * w;
}

struct GridNodes {
  Nodes xs;
  Nodes ys;
  double w = 0.0;
};

GridNodes grid_nodes(const QuadratureGrid& xg, const QuadratureGrid& yg) {
  return GridNodes{enumerate_nodes(xg), enumerate_nodes(yg),
                   xg.node_weight() * yg.node_weight()};
}

MatrixXd conditional_grid(const ConditionalFn& f, const GridNodes& gv, unsigned workers) {
  MatrixXd out(static_cast<Index>(gv.xs.size()), static_cast<Index>(gv.ys.size()));
  parallel_for_index(
      gv.xs.size(),
      [&](std::size_t i) {
        for (std::size_t j = 0; j < gv.ys.size(); ++j)
          out(static_cast<Index>(i), static_cast<Index>(j)) = f(gv.xs[i], gv.ys[j]);
      },
      workers);
  return out;
}

MatrixXd flat_moe_grid(const FlatMoE& m, const GridNodes& gv, unsigned workers) {
  const MatrixXd gates = flat_gate_grid(m, gv.xs, workers);
  const MatrixXd ex = expert_grid(m.experts, gv.ys, workers);
  return gates * ex;
}

}  // namespace

double integrated_kl(const ConditionalFn& f, const ConditionalFn& m,
                     const QuadratureGrid& x_grid, const QuadratureGrid& y_grid,
                     unsigned workers) {
  const auto gv = grid_nodes(x_grid, y_grid);
  const MatrixXd F = conditional_grid(f, gv, workers);
  const MatrixXd M = conditional_grid(m, gv, workers);
  return matrix_kl(F, M, gv.w, gv.xs, gv.ys, workers);
}

double integrated_kl(const TargetDensity& f, const FlatMoE& m,
                     const QuadratureGrid& x_grid, const QuadratureGrid& y_grid,
                     unsigned workers) {
  const auto gv = grid_nodes(x_grid, y_grid);
  const MatrixXd F = target_grid(f, gv.xs, gv.ys, workers);
  const MatrixXd M = flat_moe_grid(m, gv, workers);
  return matrix_kl(F, M, gv.w, gv.xs, gv.ys, workers);
}

namespace {

KlBoundCheck bound_check_on_grids(const std::function<MatrixXd(const GridNodes&)>& eval_f,
                                  const std::function<MatrixXd(const GridNodes&)>& eval_m,
                                  double kappa, const QuadratureGrid& xg,
                                  const QuadratureGrid& yg, unsigned workers) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kl_l2_bound_check: kappa must be > 0");
  const auto gv = grid_nodes(xg, yg);
  const MatrixXd F = eval_f(gv);
  const MatrixXd M = eval_m(gv);

  Index wi = 0, wj = 0;
  const double min_f = F.minCoeff(&wi, &wj);
  if (!(min_f >= 1.0 / kappa))
    throw PreconditionError(
        "kl_l2_bound_check: f = " + std::to_string(min_f) + " < 1/kappa = " +
        std::to_string(1.0 / kappa) + " at node " +
        node_label(gv.xs[static_cast<std::size_t>(wi)], gv.ys[static_cast<std::size_t>(wj)]));

  KlBoundCheck out;
  out.min_f = min_f;
  out.kl = matrix_kl(F, M, gv.w, gv.xs, gv.ys, workers);
  out.l2_sq = pairwise_sum(
                  0, static_cast<std::size_t>(F.size()),
                  [&](std::size_t i) {
                    const double d = F.data()[i] - M.data()[i];
                    return d * d;
                  },
                  workers) *
              gv.w;
  out.kappa_sq_l2 = kappa * kappa * out.l2_sq;

  // doubling-delta tolerance from the coarsened grids
  const auto gvc = grid_nodes(xg.coarsened(), yg.coarsened());
  const MatrixXd Fc = eval_f(gvc);
  const MatrixXd Mc = eval_m(gvc);
  const double kl_c = matrix_kl(Fc, Mc, gvc.w, gvc.xs, gvc.ys, workers);
  double l2_c = 0.0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(Fc.size()); ++i) {
    const double d = Fc.data()[i] - Mc.data()[i];
    l2_c += d * d;
  }
  l2_c *= gvc.w;
  out.tolerance = std::abs(out.kl - kl_c) + kappa * kappa * std::abs(out.l2_sq - l2_c) + 1e-12;
  out.holds = out.kl <= out.kappa_sq_l2 + out.tolerance;
  return out;
}

}  // namespace

KlBoundCheck kl_l2_bound_check(const ConditionalFn& f, const ConditionalFn& m, double kappa,
                               const QuadratureGrid& x_grid, const QuadratureGrid& y_grid,
                               unsigned workers) {
  return bound_check_on_grids(
      [&](const GridNodes& gv) { return conditional_grid(f, gv, workers); },
      [&](const GridNodes& gv) { return conditional_grid(m, gv, workers); }, kappa,
      x_grid, y_grid, workers);
}

KlBoundCheck kl_l2_bound_check(const TargetDensity& f, const FlatMoE& m, double kappa,
                               const QuadratureGrid& x_grid, const QuadratureGrid& y_grid,
                               unsigned workers) {
  return bound_check_on_grids(
      [&](const GridNodes& gv) { return target_grid(f, gv.xs, gv.ys, workers); },
      [&](const GridNodes& gv) { return flat_moe_grid(m, gv, workers); }, kappa, x_grid,
      y_grid, workers);
}

IndicatorGateError indicator_gate_error(std::size_t n, double sharpness, double p,
                                        const QuadratureGrid& x_grid, unsigned workers) {
  if (x_grid.dim() != 1 || x_grid.box() != Box::unit_cube(1))
    throw std::invalid_argument("indicator_gate_error: grid must cover [0,1]");
  const Nodes xs = enumerate_nodes(x_grid);
  const MatrixXd G = softmax_grid(sharp_gates(n, sharpness), xs, workers);
  const FinePartition part(n, 1);
  std::vector<Index> cell(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    cell[i] = static_cast<Index>(part.cell_of(xs[i]) - 1);

  IndicatorGateError out;
  out.per_cell.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = pairwise_sum(
        0, xs.size(),
        [&](std::size_t i) {
          const double ind = cell[i] == static_cast<Index>(k) ? 1.0 : 0.0;
          const double a = std::abs(ind - G(static_cast<Index>(i), static_cast<Index>(k)));
          if (p == 1.0) return a;
          if (p == 2.0) return a * a;
          return std::pow(a, p);
        },
        workers);
    out.per_cell[k] = std::pow(s * x_grid.node_weight(), 1.0 / p);
  }
  out.sup = *std::max_element(out.per_cell.begin(), out.per_cell.end());
  return out;
}

namespace {

struct RungMeasure {
  double s1, s2, s3, total, sup;
  std::vector<double> exceedance;
  std::optional<double> kl;
  double l2_sq;  // always the p=2 square, for the bound columns
};

RungMeasure measure_rung(const MatrixXd& F, const ConstructionStages& stages,
                         const GridNodes& gv, const ConvergenceOptions& opts,
                         bool want_kl, unsigned workers) {
  const auto& part = stages.upsilon.partition;
  const MatrixXd S = slice_grid(stages.upsilon.slices, gv.ys, workers);
  MatrixXd U(F.rows(), F.cols());
  for (std::size_t i = 0; i < gv.xs.size(); ++i) {
    const auto k = part.cell_of(gv.xs[i]) - 1;
    U.row(static_cast<Index>(i)) = S.row(static_cast<Index>(k));
  }
  const MatrixXd G = softmax_grid(stages.eta.gating, gv.xs, workers);
  const MatrixXd E = G * S;
  const MatrixXd M = flat_moe_grid(stages.flat, gv, workers);

  RungMeasure r{};
  r.s1 = matrix_lp(F - U, gv.w, opts.p, workers);
  r.s2 = matrix_lp(U - E, gv.w, opts.p, workers);
  r.s3 = matrix_lp(E - M, gv.w, opts.p, workers);
  const MatrixXd D = F - M;
  r.total = matrix_lp(D, gv.w, opts.p, workers);
  r.sup = matrix_sup(D);
  for (double eps : opts.exceedance_thresholds)
    r.exceedance.push_back(matrix_exceedance(D, gv.w, eps));
  if (want_kl) r.kl = matrix_kl(F, M, gv.w, gv.xs, gv.ys, workers);
  r.l2_sq = pairwise_sum(
                0, static_cast<std::size_t>(D.size()),
                [&](std::size_t i) { return D.data()[i] * D.data()[i]; }, workers) *
            gv.w;
  return r;
}

}  // namespace

ConvergenceReport run_convergence(const TargetDensity& f, const std::vector<Schedule>& ladder,
                                  const KernelFamily& kernel,
                                  const ConvergenceOptions& options) {
  if (ladder.empty()) throw std::invalid_argument("run_convergence: empty ladder");
  for (std::size_t r = 1; r < ladder.size(); ++r)
    if (ladder[r].n < ladder[r - 1].n)
      throw std::invalid_argument("run_convergence: ladder must be refining (n nondecreasing)");
  if (!(options.p >= 1.0) || !std::isfinite(options.p))
    throw std::invalid_argument("run_convergence: p must be finite and >= 1");
  for (double eps : options.exceedance_thresholds)
    if (!(eps > 0.0))
      throw std::invalid_argument("run_convergence: exceedance thresholds must be > 0");

  const unsigned workers = options.workers == 0 ? 1 : options.workers;
  const QuadratureGrid xg(Box::unit_cube(1), options.x_points);
  const QuadratureGrid yg(f.y_domain(), options.y_points);
  const auto gv = grid_nodes(xg, yg);
  const auto gvc = grid_nodes(xg.coarsened(), yg.coarsened());
  const MatrixXd F = target_grid(f, gv.xs, gv.ys, workers);
  const MatrixXd Fc = target_grid(f, gvc.xs, gvc.ys, workers);

  if (options.kappa) {
    Index wi = 0, wj = 0;
    const double min_f = F.minCoeff(&wi, &wj);
    if (!(min_f >= 1.0 / *options.kappa))
      throw PreconditionError(
          "run_convergence: f = " + std::to_string(min_f) + " < 1/kappa at node " +
          node_label(gv.xs[static_cast<std::size_t>(wi)], gv.ys[static_cast<std::size_t>(wj)]));
  }

  ConvergenceReport report;
  report.schema_version = "1";
  report.target = f.name();
  report.kernel = kernel.name;
  report.p = options.p;
  report.exceedance_thresholds = options.exceedance_thresholds;
  report.kappa = options.kappa;

  for (const Schedule& schedule : ladder) {
    const ConstructionStages stages = construct_approximant(f, schedule, kernel, workers);
    const bool want_kl = kernel.full_support;
    const RungMeasure full = measure_rung(F, stages, gv, options, want_kl, workers);
    const RungMeasure coarse = measure_rung(Fc, stages, gvc, options, want_kl, workers);

    ConvergenceEntry e;
    e.n = schedule.n;
    e.sharpness = schedule.sharpness;
    e.m = schedule.m;
    e.rho = schedule.rho;
    e.components = stages.component_count();
    e.s1 = full.s1;
    e.s2 = full.s2;
    e.s3 = full.s3;
    e.total = full.total;
    e.sup_error = full.sup;
    e.exceedance = full.exceedance;
    e.kl = full.kl;
    e.quad_tol = std::abs(full.total - coarse.total);
    if (options.kappa) {
      const double k2 = *options.kappa * *options.kappa;
      e.kappa_sq_l2 = k2 * full.l2_sq;
      if (full.kl && coarse.kl) {
        const double tol =
            std::abs(*full.kl - *coarse.kl) + k2 * std::abs(full.l2_sq - coarse.l2_sq) + 1e-12;
        e.bound_holds = *full.kl <= *e.kappa_sq_l2 + tol;
      }
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace moe
