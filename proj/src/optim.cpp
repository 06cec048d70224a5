#include "mnchange/optim.hpp"

#include <cmath>

namespace mnchange {

namespace {

double penalty(const ParameterVector& theta, double lambda) {
  double s = 0.0;
  for (int t = 0; t < theta.pairs(); ++t) s += theta.block_norm(t);
  return lambda * s;
}

void prox_all(ParameterVector& theta, double step, double lambda) {
  if (lambda <= 0.0) return;
  const double thresh = step * lambda;
  for (int t = 0; t < theta.pairs(); ++t) {
    auto blk = theta.block(t);
    const double norm = blk.norm();
    if (norm <= thresh) {
      blk.setZero();
    } else {
      blk *= 1.0 - thresh / norm;
    }
  }
}

}  // namespace

Vector prox_group(const Eigen::Ref<const Vector>& v, double t, double lambda) {
  if (!(t > 0)) throw std::invalid_argument("prox_group: step must be positive");
  const double norm = v.norm();
  const double thresh = t * lambda;
  if (norm <= thresh) return Vector::Zero(v.size());
  return (1.0 - thresh / norm) * v;
}

double lambda_max(const KliepProblem& problem) {
  ParameterVector zero(problem.m(), problem.b());
  ParameterVector g = gradient(problem, zero);
  double out = 0.0;
  for (int t = 0; t < g.pairs(); ++t) out = std::max(out, g.block_norm(t));
  return out;
}

double lambda_scaling(int n_p, double m, double C) {
  if (n_p < 1 || m < 2) throw std::invalid_argument("lambda_scaling: need n_p >= 1, m >= 2");
  return C * std::sqrt(std::log(m) / n_p);
}

double kkt_residual(const KliepProblem& problem, const ParameterVector& theta, double lambda) {
  ParameterVector g = gradient(problem, theta);
  double worst = 0.0;
  for (int t = 0; t < theta.pairs(); ++t) {
    const double norm = theta.block_norm(t);
    double r;
    if (norm > 0.0) {
      r = (g.block(t) + lambda / norm * theta.block(t)).norm();
    } else {
      r = std::max(0.0, g.block(t).norm() - lambda);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

SolverReport solve(const KliepProblem& problem, const SolverConfig& config) {
  return solve(problem, config, ParameterVector(problem.m(), problem.b()));
}

SolverReport solve(const KliepProblem& problem, const SolverConfig& config, const ParameterVector& init) {
  if (init.dim() != problem.dim()) throw std::invalid_argument("solve: init dimension mismatch");
  if (config.lambda < 0) throw std::invalid_argument("solve: lambda must be non-negative");
  const double kkt_tol = 1e-4 * std::max(1.0, config.lambda);
  // Exit gate tightens with the objective tolerance so a strict tol yields a
  // correspondingly strict first-order residual; certification stays at
  // kkt_tol.
  const double kkt_gate = kkt_tol * std::min(1.0, config.tol / 1e-8);

  ParameterVector x = init;
  ParameterVector y = x;
  ParameterVector z(x.m, x.b);
  double fx_obj = loss(problem, x) + penalty(x, config.lambda);
  double lip = 1.0 / config.initial_step;
  double momentum = 1.0;

  SolverReport report;
  report.lambda = config.lambda;
  report.objective_trace.push_back(fx_obj);

  for (int iter = 0; iter < config.max_iters; ++iter) {
    const double fy = loss(problem, y);
    ParameterVector gy = gradient(problem, y);

    // Backtracking on the smooth part.
    double fz;
    for (;;) {
      z.flat = y.flat - gy.flat / lip;
      prox_all(z, 1.0 / lip, config.lambda);
      fz = loss(problem, z);
      Vector d = z.flat - y.flat;
      const double quad = fy + gy.flat.dot(d) + 0.5 * lip * d.squaredNorm();
      if (fz <= quad + 1e-12 * std::max(1.0, std::abs(quad))) break;
      lip /= config.backtrack_factor;
      if (lip > 1e18) break;
    }
    const double fz_obj = fz + penalty(z, config.lambda);

    ParameterVector x_prev = x;
    if (fz_obj <= fx_obj) {
      x = z;
    }  // else keep x: the trace stays monotone, z still feeds the momentum
    const double obj = std::min(fx_obj, fz_obj);

    if (config.restart && fz_obj > fx_obj) {
      momentum = 1.0;
      y = x;
    } else {
      const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y.flat = x.flat + (momentum / momentum_next) * (z.flat - x.flat) +
               ((momentum - 1.0) / momentum_next) * (x.flat - x_prev.flat);
      momentum = momentum_next;
    }

    report.objective_trace.push_back(obj);
    report.iterations = iter + 1;

    // A rejected step changes nothing; testing convergence there would stop
    // on the restart itself rather than on actual progress.
    const bool accepted = fz_obj <= fx_obj;
    const double change = std::abs(fx_obj - obj);
    fx_obj = obj;
    if (accepted && change <= config.tol * std::max(1.0, std::abs(obj))) {
      if (kkt_residual(problem, x, config.lambda) <= kkt_gate) {
        report.converged = true;
        break;
      }
    }
  }

  if (!report.converged)
    report.converged = kkt_residual(problem, x, config.lambda) <= kkt_tol;
  report.theta_hat = x;
  report.support = x.support();
  return report;
}

std::vector<double> default_lambda_grid(const KliepProblem& problem, const PathConfig& path) {
  if (!path.lambda_grid.empty()) return path.lambda_grid;
  const double lmax = lambda_max(problem);
  const double hi = lmax > 0 ? lmax : 1.0;
  const double lo = hi * path.grid_min_ratio;
  std::vector<double> grid(static_cast<size_t>(path.grid_points));
  for (int i = 0; i < path.grid_points; ++i) {
    const double frac = path.grid_points == 1 ? 0.0 : static_cast<double>(i) / (path.grid_points - 1);
    grid[static_cast<size_t>(i)] = hi * std::pow(lo / hi, frac);
  }
  return grid;
}

std::vector<SolverReport> solve_path(const KliepProblem& problem, const PathConfig& path,
                                     const SolverConfig& config) {
  std::vector<double> grid = default_lambda_grid(problem, path);
  if (grid.empty()) throw std::invalid_argument("solve_path: empty lambda grid");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] < grid[i - 1])) throw std::invalid_argument("solve_path: grid must be strictly decreasing");
  }

  std::vector<SolverReport> reports;
  ParameterVector warm(problem.m(), problem.b());
  for (double lambda : grid) {
    SolverConfig cfg = config;
    cfg.lambda = lambda;
    SolverReport rep = path.warm_start ? solve(problem, cfg, warm) : solve(problem, cfg);
    if (path.warm_start) warm = rep.theta_hat;
    const size_t support_size = rep.support.size();
    reports.push_back(std::move(rep));
    if (path.target_support_size && static_cast<int>(support_size) > *path.target_support_size) break;
  }
  return reports;
}

}  // namespace mnchange
