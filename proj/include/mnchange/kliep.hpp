#ifndef MNCHANGE_KLIEP_HPP
#define MNCHANGE_KLIEP_HPP

#include "mnchange/model.hpp"

namespace mnchange {

// Features of both sample sets, evaluated once. The P feature mean is cached
// for the loss/gradient; the solver never touches raw samples again.
//
// Gaussian note: with the Quadratic feature this objective is the quadratic
// change model. Blocks of theta play the role of the negated entries of the
// precision-difference matrix (diagonal blocks carry the full quadratic
// coefficient, off-diagonal blocks the cross term). We store theta directly
// and never expose the matrix parameterization.
struct KliepProblem {
  FeatureTensor p_features;
  FeatureTensor q_features;
  Vector p_feature_mean;  // column mean of p_features

  static KliepProblem make(const SampleMatrix& p_data, const SampleMatrix& q_data, const FeatureMap& fmap);
  static KliepProblem from_features(FeatureTensor p, FeatureTensor q);

  int m() const { return p_features.m; }
  int b() const { return p_features.b; }
  int dim() const { return p_features.dim(); }
};

// Sample Fisher information: Hessian of the loss, assembled as the
// importance-weighted feature covariance over Q.
struct FisherInfo {
  int m = 0;
  int b = 1;
  Matrix matrix;
};

// -(1/n_p) sum_i <theta, f(x_p^(i))> + log N_hat(theta)
double loss(const KliepProblem& problem, const ParameterVector& theta);

// Blockwise: -mean_p psi + sum_i softmax_i psi(x_q^(i))
ParameterVector gradient(const KliepProblem& problem, const ParameterVector& theta);

// Weighted covariance E_w[f f^T] - E_w[f] E_w[f]^T with w = softmax(F_q theta).
// Guard: refuses to materialize more than max_cols columns.
FisherInfo hessian(const KliepProblem& problem, const ParameterVector& theta, int max_cols = 5000);

// Extracts the b x b blocks for the requested pair lists, preserving order.
Matrix submatrix(const FisherInfo& info, const std::vector<PairIndex>& rows,
                 const std::vector<PairIndex>& cols);

}  // namespace mnchange

#endif
