#ifndef MNCHANGE_BASELINE_HPP
#define MNCHANGE_BASELINE_HPP

#include "mnchange/model.hpp"

namespace mnchange {

// min ||Delta||_1  s.t.  ||Sigma_p Delta Sigma_q + Sigma_p - Sigma_q||_inf <= eps
struct DiffNetProblem {
  Matrix sigma_p;
  Matrix sigma_q;
  double epsilon = 0.01;
};

struct AdmmConfig {
  double rho = 1.0;
  int max_iters = 5000;
  double tol = 1e-6;  // primal and dual residual (inf-norm)
};

struct DiffNetSolution {
  Matrix delta;
  double feasibility_gap = 0.0;  // max(0, ||residual||_inf - eps)
  bool converged = false;
  int iterations = 0;

  double objective() const { return delta.cwiseAbs().sum(); }
};

// Zero-mean convention: (1/n) X^T X.
Matrix sample_covariance(const SampleMatrix& data);

// Linearized ADMM with an l1 prox on Delta and a clamp onto the inf-norm
// constraint set; iterates are symmetrized.
DiffNetSolution solve_diffnet(const DiffNetProblem& problem, const AdmmConfig& config = {});

// { (u,v), u>v : |delta_uv| >= tau }
PairSet threshold(const Matrix& delta, double tau);

}  // namespace mnchange

#endif
