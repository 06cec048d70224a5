#include "mnchange/baseline.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace mnchange {

Matrix sample_covariance(const SampleMatrix& data) {
  const double n = static_cast<double>(data.n());
  Matrix cov = data.values.transpose() * data.values / n;
  return 0.5 * (cov + cov.transpose()).eval();
}

namespace {

Matrix soft_threshold(const Matrix& x, double thresh) {
  return x.unaryExpr([thresh](double v) {
    if (v > thresh) return v - thresh;
    if (v < -thresh) return v + thresh;
    return 0.0;
  });
}

}  // namespace

DiffNetSolution solve_diffnet(const DiffNetProblem& problem, const AdmmConfig& config) {
  if (!(problem.epsilon > 0)) throw std::invalid_argument("solve_diffnet: epsilon must be positive");
  const int m = static_cast<int>(problem.sigma_p.rows());
  const Matrix& sp = problem.sigma_p;
  const Matrix& sq = problem.sigma_q;
  const Matrix c = sp - sq;

  // Operator Delta -> Sp Delta Sq is self-adjoint-free; its adjoint on a
  // residual R is Sp R Sq (both covariances symmetric). Spectral norm is
  // lmax(Sp) * lmax(Sq).
  auto apply = [&](const Matrix& d) -> Matrix { return sp * d * sq; };
  const double norm_sp = Eigen::SelfAdjointEigenSolver<Matrix>(sp).eigenvalues().maxCoeff();
  const double norm_sq = Eigen::SelfAdjointEigenSolver<Matrix>(sq).eigenvalues().maxCoeff();
  const double op_norm = std::max(norm_sp * norm_sq, 1e-12);
  double rho = config.rho;
  double mu = 1.01 * rho * op_norm * op_norm;

  Matrix x = Matrix::Zero(m, m);
  Matrix y = Matrix::Zero(m, m);
  Matrix u = Matrix::Zero(m, m);  // scaled dual

  DiffNetSolution sol;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    // prox of ||.||_1 restricted to symmetric matrices: symmetrize the
    // gradient-step argument, then soft-threshold.
    const Matrix residual = apply(x) + c - y + u;
    Matrix step = x - (rho / mu) * (sp * residual * sq);
    step = 0.5 * (step + step.transpose()).eval();
    x = soft_threshold(step, 1.0 / mu);

    const Matrix ax_c = apply(x) + c;
    Matrix y_new = (ax_c + u).cwiseMax(-problem.epsilon).cwiseMin(problem.epsilon);
    const double dual_res = rho * (sp * (y_new - y) * sq).cwiseAbs().maxCoeff();
    y = y_new;
    u += ax_c - y;

    const double primal_res = (ax_c - y).cwiseAbs().maxCoeff();
    sol.iterations = iter + 1;
    if (primal_res <= config.tol && dual_res <= config.tol) {
      sol.converged = true;
      break;
    }

    // Residual balancing keeps the penalty matched to the problem scale;
    // the scaled dual shrinks by the same factor the penalty grows.
    if ((iter + 1) % 10 == 0) {
      if (primal_res > 10.0 * dual_res) {
        rho *= 2.0;
        u /= 2.0;
      } else if (dual_res > 10.0 * primal_res) {
        rho /= 2.0;
        u *= 2.0;
      }
      mu = 1.01 * rho * op_norm * op_norm;
    }
  }
  sol.delta = x;
  const double resid_inf = (apply(x) + c).cwiseAbs().maxCoeff();
  sol.feasibility_gap = std::max(0.0, resid_inf - problem.epsilon);
  return sol;
}

PairSet threshold(const Matrix& delta, double tau) {
  PairSet out;
  const int m = static_cast<int>(delta.rows());
  for (int v = 1; v <= m; ++v) {
    for (int u = v + 1; u <= m; ++u) {
      const double val = delta(u - 1, v - 1);
      if (val != 0.0 && std::abs(val) >= tau) out.insert({u, v});
    }
  }
  return out;
}

}  // namespace mnchange
