#include "mnchange/kliep.hpp"

#include <cmath>

namespace mnchange {

KliepProblem KliepProblem::make(const SampleMatrix& p_data, const SampleMatrix& q_data, const FeatureMap& fmap) {
  if (p_data.m() != q_data.m()) throw std::invalid_argument("KliepProblem: P and Q dimension mismatch");
  return from_features(featurize(p_data, fmap), featurize(q_data, fmap));
}

KliepProblem KliepProblem::from_features(FeatureTensor p, FeatureTensor q) {
  if (p.m != q.m || p.b != q.b) throw std::invalid_argument("KliepProblem: feature tensors disagree on m or b");
  if (p.n() < 1 || q.n() < 1) throw std::invalid_argument("KliepProblem: need at least one sample per side");
  KliepProblem out;
  out.p_feature_mean = p.features.colwise().mean().transpose();
  out.p_features = std::move(p);
  out.q_features = std::move(q);
  return out;
}

double loss(const KliepProblem& problem, const ParameterVector& theta) {
  if (theta.dim() != problem.dim()) throw std::invalid_argument("loss: dimension mismatch");
  const double linear = problem.p_feature_mean.dot(theta.flat);
  Vector g = problem.q_features.features * theta.flat;
  const double log_norm = log_sum_exp(g) - std::log(static_cast<double>(problem.q_features.n()));
  return -linear + log_norm;
}

ParameterVector gradient(const KliepProblem& problem, const ParameterVector& theta) {
  if (theta.dim() != problem.dim()) throw std::invalid_argument("gradient: dimension mismatch");
  Vector g = problem.q_features.features * theta.flat;
  Vector w = softmax(g);
  ParameterVector out(theta.m, theta.b);
  out.flat = problem.q_features.features.transpose() * w - problem.p_feature_mean;
  return out;
}

FisherInfo hessian(const KliepProblem& problem, const ParameterVector& theta, int max_cols) {
  const int k = problem.dim();
  if (k > max_cols) {
    throw std::runtime_error("hessian: " + std::to_string(k) + " columns exceeds guard of " +
                             std::to_string(max_cols));
  }
  if (theta.dim() != k) throw std::invalid_argument("hessian: dimension mismatch");
  Vector g = problem.q_features.features * theta.flat;
  Vector w = softmax(g);
  w /= w.sum();  // kill accumulated drift before the covariance assembly
  const Matrix& F = problem.q_features.features;
  Vector mean = F.transpose() * w;
  Matrix weighted = w.asDiagonal() * F;
  FisherInfo out;
  out.m = problem.m();
  out.b = problem.b();
  out.matrix = F.transpose() * weighted - mean * mean.transpose();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  return out;
}

Matrix submatrix(const FisherInfo& info, const std::vector<PairIndex>& rows,
                 const std::vector<PairIndex>& cols) {
  const int b = info.b;
  Matrix out(static_cast<Eigen::Index>(rows.size()) * b, static_cast<Eigen::Index>(cols.size()) * b);
  for (size_t i = 0; i < rows.size(); ++i) {
    const int ri = pair_index_flatten(rows[i].u, rows[i].v, info.m);
    for (size_t j = 0; j < cols.size(); ++j) {
      const int cj = pair_index_flatten(cols[j].u, cols[j].v, info.m);
      out.block(static_cast<Eigen::Index>(i) * b, static_cast<Eigen::Index>(j) * b, b, b) =
          info.matrix.block(static_cast<Eigen::Index>(ri) * b, static_cast<Eigen::Index>(cj) * b, b, b);
    }
  }
  return out;
}

}  // namespace mnchange
