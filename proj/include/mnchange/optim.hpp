#ifndef MNCHANGE_OPTIM_HPP
#define MNCHANGE_OPTIM_HPP

#include "mnchange/kliep.hpp"

#include <optional>

namespace mnchange {

struct SolverConfig {
  double lambda = 0.0;
  int max_iters = 2000;
  double tol = 1e-8;             // relative objective-change tolerance
  double backtrack_factor = 0.5;
  double initial_step = 1.0;
  bool restart = true;           // function-value restart of the momentum
};

struct SolverReport {
  ParameterVector theta_hat;
  PairSet support;
  std::vector<double> objective_trace;
  bool converged = false;
  int iterations = 0;
  double lambda = 0.0;
};

struct PathConfig {
  std::vector<double> lambda_grid;  // strictly decreasing; empty = default grid
  int grid_points = 40;             // used when lambda_grid is empty
  double grid_min_ratio = 1e-3;     // lambda_min = ratio * lambda_max
  bool warm_start = true;
  std::optional<int> target_support_size;  // stop once |S_hat| exceeds this
};

// Blockwise group soft-thresholding: scales v by max(0, 1 - t*lambda/||v||).
Vector prox_group(const Eigen::Ref<const Vector>& v, double t, double lambda);

// Largest block gradient norm at theta = 0; solutions are identically zero
// for lambda at or above this value.
double lambda_max(const KliepProblem& problem);

// lambda = C * sqrt(log(m) / n_p)
double lambda_scaling(int n_p, double m, double C);

// Monotone FISTA with backtracking on the smooth part. converged=true means
// the first-order condition held at exit:
//   nonzero blocks:  ||grad_t + lambda * theta_t/||theta_t|| || <= kkt_tol
//   zero blocks:     ||grad_t|| <= lambda + kkt_tol
// with kkt_tol = 1e-4 * max(1, lambda).
SolverReport solve(const KliepProblem& problem, const SolverConfig& config, const ParameterVector& init);
SolverReport solve(const KliepProblem& problem, const SolverConfig& config);

// KKT residual of the condition above (max over blocks of the violation).
double kkt_residual(const KliepProblem& problem, const ParameterVector& theta, double lambda);

std::vector<double> default_lambda_grid(const KliepProblem& problem, const PathConfig& path);

// One report per lambda in grid order, warm-started; honors the stop rule.
std::vector<SolverReport> solve_path(const KliepProblem& problem, const PathConfig& path,
                                     const SolverConfig& config);

}  // namespace mnchange

#endif
