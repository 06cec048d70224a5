// Test-only reference implementations, independent of the library's
// computation paths.

#ifndef MNCHANGE_TESTS_ORACLES_HPP
#define MNCHANGE_TESTS_ORACLES_HPP

#include "mnchange/kliep.hpp"
#include "mnchange/optim.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace oracles {

using mnchange::KliepProblem;
using mnchange::Matrix;
using mnchange::ParameterVector;
using mnchange::Vector;

// Central finite differences of the loss.
inline Vector fd_gradient(const KliepProblem& problem, const ParameterVector& theta, double h = 1e-5) {
  Vector out(theta.dim());
  ParameterVector probe = theta;
  for (int j = 0; j < theta.dim(); ++j) {
    probe.flat(j) = theta.flat(j) + h;
    const double up = mnchange::loss(problem, probe);
    probe.flat(j) = theta.flat(j) - h;
    const double down = mnchange::loss(problem, probe);
    probe.flat(j) = theta.flat(j);
    out(j) = (up - down) / (2 * h);
  }
  return out;
}

// Central finite differences of the analytic gradient.
inline Matrix fd_hessian(const KliepProblem& problem, const ParameterVector& theta, double h = 1e-5) {
  Matrix out(theta.dim(), theta.dim());
  ParameterVector probe = theta;
  for (int j = 0; j < theta.dim(); ++j) {
    probe.flat(j) = theta.flat(j) + h;
    Vector up = mnchange::gradient(problem, probe).flat;
    probe.flat(j) = theta.flat(j) - h;
    Vector down = mnchange::gradient(problem, probe).flat;
    probe.flat(j) = theta.flat(j);
    out.col(j) = (up - down) / (2 * h);
  }
  return 0.5 * (out + out.transpose()).eval();
}

// Explicit pairwise Laplacian assembly of the log-sum-exp Hessian:
//   (1/2) sum_{i != j} (F_i - F_j)(F_i - F_j)^T e_i e_j / s^2.
inline Matrix laplacian_hessian(const KliepProblem& problem, const ParameterVector& theta) {
  const Matrix& F = problem.q_features.features;  // n_q x k
  const int n = static_cast<int>(F.rows());
  Vector g = F * theta.flat;
  const double gmax = g.maxCoeff();
  Vector e = (g.array() - gmax).exp();
  const double s = e.sum();
  Matrix out = Matrix::Zero(F.cols(), F.cols());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Vector diff = (F.row(i) - F.row(j)).transpose();
      out += 0.5 * e(i) * e(j) / (s * s) * diff * diff.transpose();
    }
  }
  return out;
}

// Cyclic blockwise proximal coordinate descent on the group-lasso KLIEP
// objective, with a per-block backtracking step.
inline ParameterVector coordinate_descent(const KliepProblem& problem, double lambda,
                                          double tol = 1e-10, int max_sweeps = 20000) {
  const int b = problem.b();
  ParameterVector theta(problem.m(), b);
  auto objective = [&](const ParameterVector& t) {
    double pen = 0.0;
    for (int k = 0; k < t.pairs(); ++k) pen += t.block_norm(k);
    return mnchange::loss(problem, t) + lambda * pen;
  };
  double obj = objective(theta);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int k = 0; k < theta.pairs(); ++k) {
      Vector grad_block = mnchange::gradient(problem, theta).flat.segment(k * b, b);
      double step = 1.0;
      Vector old_block = theta.block(k);
      for (int bt = 0; bt < 60; ++bt) {
        Vector cand = mnchange::prox_group(old_block - step * grad_block, step, lambda);
        theta.block(k) = cand;
        const double cand_obj = objective(theta);
        if (cand_obj <= obj + 1e-15) {
          obj = cand_obj;
          break;
        }
        theta.block(k) = old_block;
        step *= 0.5;
      }
    }
    const double new_obj = objective(theta);
    if (std::abs(obj - new_obj) <= tol * std::max(1.0, std::abs(new_obj)) &&
        mnchange::kkt_residual(problem, theta, lambda) <= 1e-9 * std::max(1.0, lambda)) {
      break;
    }
    obj = new_obj;
  }
  return theta;
}

// Dense simplex solver for  min c^T x  s.t.  A x <= b, x >= 0  (b >= 0 not
// required; uses the big-M method). Small instances only.
struct LpResult {
  bool ok = false;
  double objective = 0.0;
  Vector x;
};

inline LpResult solve_lp(const Matrix& a, const Vector& rhs, const Vector& cost) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const double big_m = 1e7;

  // Standard form with slack s (Ax + s = b); rows with negative rhs are
  // negated and get an artificial variable.
  int n_art = 0;
  for (int i = 0; i < m; ++i) {
    if (rhs(i) < 0) ++n_art;
  }
  const int cols = n + m + n_art;
  Matrix tab = Matrix::Zero(m + 1, cols + 1);
  std::vector<int> basis(m);
  int art = 0;
  for (int i = 0; i < m; ++i) {
    const double sign = rhs(i) < 0 ? -1.0 : 1.0;
    tab.row(i).head(n) = sign * a.row(i);
    tab(i, n + i) = sign;  // slack
    tab(i, cols) = sign * rhs(i);
    if (sign < 0) {
      tab(i, n + m + art) = 1.0;
      basis[i] = n + m + art;
      ++art;
    } else {
      basis[i] = n + i;
    }
  }
  tab.row(m).head(n) = cost.transpose();
  for (int j = n + m; j < cols; ++j) tab(m, j) = big_m;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n + m) tab.row(m) -= big_m * tab.row(i);
  }

  for (int iter = 0; iter < 20000; ++iter) {
    int pivot_col = -1;
    double best = -1e-9;
    for (int j = 0; j < cols; ++j) {
      if (tab(m, j) < best) {
        best = tab(m, j);
        pivot_col = j;
      }
    }
    if (pivot_col < 0) break;
    int pivot_row = -1;
    double best_ratio = 0;
    for (int i = 0; i < m; ++i) {
      if (tab(i, pivot_col) > 1e-11) {
        const double ratio = tab(i, cols) / tab(i, pivot_col);
        if (pivot_row < 0 || ratio < best_ratio) {
          best_ratio = ratio;
          pivot_row = i;
        }
      }
    }
    if (pivot_row < 0) return {};  // unbounded
    tab.row(pivot_row) /= tab(pivot_row, pivot_col);
    for (int i = 0; i <= m; ++i) {
      if (i != pivot_row && std::abs(tab(i, pivot_col)) > 1e-14) {
        tab.row(i) -= tab(i, pivot_col) * tab.row(pivot_row);
      }
    }
    basis[pivot_row] = pivot_col;
  }

  LpResult out;
  out.x = Vector::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n + m && tab(i, cols) > 1e-6) return {};  // infeasible
    if (basis[i] < n) out.x(basis[i]) = tab(i, cols);
  }
  out.objective = cost.dot(out.x);
  out.ok = true;
  return out;
}

// LP oracle for the differential-network problem over symmetric Delta,
// parameterized by the lower triangle and split into Dp - Dn:
//   min sum w (dp + dn)  s.t.  |A S (dp - dn) + c| <= eps elementwise,
// where S expands free entries into vec(Delta) and w counts off-diagonal
// entries twice (their two appearances in ||Delta||_1).
inline LpResult diffnet_lp(const Matrix& sigma_p, const Matrix& sigma_q, double eps) {
  const int m = static_cast<int>(sigma_p.rows());
  const int k = m * m;
  const int f = m * (m + 1) / 2;  // free entries
  Matrix kron = Matrix::Zero(k, k);  // vec(Sp D Sq) = (Sq^T kron Sp) vec(D)
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      kron.block(j * m, i * m, m, m) = sigma_q(i, j) * sigma_p;
  Vector c(k);
  Matrix diff = sigma_p - sigma_q;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) c(j * m + i) = diff(i, j);

  Matrix expand = Matrix::Zero(k, f);
  Vector weight(f);
  int idx = 0;
  for (int j = 0; j < m; ++j) {
    for (int i = j; i < m; ++i) {
      expand(j * m + i, idx) = 1.0;
      if (i != j) expand(i * m + j, idx) = 1.0;
      weight(idx) = (i == j) ? 1.0 : 2.0;
      ++idx;
    }
  }
  Matrix sym = kron * expand;  // k x f

  // variables x = [dp; dn] >= 0; constraints A S (dp-dn)+c <= eps and
  // -(A S (dp-dn)+c) <= eps.
  Matrix a(2 * k, 2 * f);
  a.topLeftCorner(k, f) = sym;
  a.topRightCorner(k, f) = -sym;
  a.bottomLeftCorner(k, f) = -sym;
  a.bottomRightCorner(k, f) = sym;
  Vector rhs(2 * k);
  rhs.head(k) = Vector::Constant(k, eps) - c;
  rhs.tail(k) = Vector::Constant(k, eps) + c;
  Vector cost(2 * f);
  cost.head(f) = weight;
  cost.tail(f) = weight;

  LpResult lp = solve_lp(a, rhs, cost);
  if (lp.ok) {
    Vector free_delta = lp.x.head(f) - lp.x.tail(f);
    lp.x = expand * free_delta;  // vec of the symmetric solution
    lp.objective = free_delta.cwiseAbs().dot(weight);
  }
  return lp;
}

// Random small KLIEP problems for property tests.
inline KliepProblem random_problem(std::mt19937_64& rng, int m, int b, int n_p, int n_q) {
  std::normal_distribution<double> normal(0.0, 1.0);
  mnchange::SampleMatrix p, q;
  p.values.resize(n_p, m);
  q.values.resize(n_q, m);
  for (int i = 0; i < n_p; ++i)
    for (int j = 0; j < m; ++j) p.values(i, j) = normal(rng);
  for (int i = 0; i < n_q; ++i)
    for (int j = 0; j < m; ++j) q.values(i, j) = normal(rng);
  mnchange::FeatureMap fmap =
      b == 1 ? mnchange::FeatureMap::quadratic()
             : mnchange::FeatureMap::custom_map(b, [b](double xu, double xv, double* out) {
                 out[0] = xu * xv;
                 if (b > 1) out[1] = std::tanh(xu) * std::tanh(xv);
                 if (b > 2) out[2] = std::sin(xu + xv);
                 for (int k = 3; k < b; ++k) out[k] = std::cos(k * xu) * xv;
               });
  return KliepProblem::make(p, q, fmap);
}

inline ParameterVector random_theta(std::mt19937_64& rng, int m, int b, double scale = 0.3) {
  std::normal_distribution<double> normal(0.0, scale);
  ParameterVector theta(m, b);
  for (int j = 0; j < theta.dim(); ++j) theta.flat(j) = normal(rng);
  return theta;
}

}  // namespace oracles

#endif
