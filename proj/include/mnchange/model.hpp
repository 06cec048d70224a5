#ifndef MNCHANGE_MODEL_HPP
#define MNCHANGE_MODEL_HPP

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mnchange {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Edge/pair (u, v) with 1 <= v <= u <= m. Diagonal pairs (u, u) are valid
// parameter groups.
struct PairIndex {
  int u = 0;
  int v = 0;

  friend bool operator==(const PairIndex&, const PairIndex&) = default;
  friend auto operator<=>(const PairIndex&, const PairIndex&) = default;
};

using PairSet = std::set<PairIndex>;

inline int num_pairs(int m) { return m * (m + 1) / 2; }

// Column-major lower-triangular order: (1,1),(2,1),...,(m,1),(2,2),...,(m,m).
int pair_index_flatten(int u, int v, int m);
PairIndex pair_index_unflatten(int flat, int m);
std::vector<PairIndex> all_pairs(int m);

// Bivariate basis function applied to every pair of coordinates.
struct FeatureMap {
  enum class Kind { Quadratic, Rbf, Custom };

  Kind kind = Kind::Quadratic;
  int b = 1;
  double bandwidth = 0.5;  // Rbf only
  std::function<void(double, double, double*)> custom;  // writes b values

  static FeatureMap quadratic();
  static FeatureMap rbf(double bandwidth);
  static FeatureMap custom_map(int b, std::function<void(double, double, double*)> fn);

  void eval(double xu, double xv, double* out) const;
};

// n x m data matrix, one sample per row.
struct SampleMatrix {
  Matrix values;  // n x m

  int n() const { return static_cast<int>(values.rows()); }
  int m() const { return static_cast<int>(values.cols()); }
};

// Headerless CSV, one sample per row. Throws std::runtime_error with row and
// column on malformed input.
SampleMatrix load_csv(const std::string& path);
void save_csv(const SampleMatrix& data, const std::string& path);

// Grouped change parameters: m(m+1)/2 blocks of length b, stored flat in
// pair-flattening order.
struct ParameterVector {
  int m = 0;
  int b = 1;
  Vector flat;

  ParameterVector() = default;
  ParameterVector(int m_, int b_) : m(m_), b(b_), flat(Vector::Zero(static_cast<Eigen::Index>(b_) * num_pairs(m_))) {}

  int dim() const { return static_cast<int>(flat.size()); }
  int pairs() const { return num_pairs(m); }

  auto block(int flat_pair) { return flat.segment(static_cast<Eigen::Index>(flat_pair) * b, b); }
  auto block(int flat_pair) const { return flat.segment(static_cast<Eigen::Index>(flat_pair) * b, b); }
  double block_norm(int flat_pair) const { return block(flat_pair).norm(); }

  // Groups with exactly nonzero norm.
  PairSet support() const;
};

// Cached per-sample features: row i is f(x^(i)), pair blocks in flattening
// order.
struct FeatureTensor {
  int m = 0;
  int b = 1;
  Matrix features;  // n x (b * m(m+1)/2)

  int n() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }
};

// Evaluates the feature map on every sample and pair. Throws on non-finite
// feature values, naming the sample and pair.
FeatureTensor featurize(const SampleMatrix& data, const FeatureMap& fmap);

// <theta, f(x^(i))>
double log_ratio_unnormalized(const ParameterVector& theta, const FeatureTensor& features, int i);

// log((1/n_q) sum_i exp(<theta, f(x_q^(i))>)), max-subtracted.
double empirical_log_normalizer(const ParameterVector& theta, const FeatureTensor& q_features);

// exp(<theta, f(x)> - log N_hat(theta)); averaging over the Q sample gives 1.
double empirical_ratio(const ParameterVector& theta, const FeatureTensor& q_features,
                       const Eigen::Ref<const Vector>& x_features);

// Stable log(sum(exp(g_i))) over a vector of exponents.
double log_sum_exp(const Eigen::Ref<const Vector>& g);

// softmax(g), i.e. weights r_hat_i / n_q; sums to 1.
Vector softmax(const Eigen::Ref<const Vector>& g);

}  // namespace mnchange

#endif
