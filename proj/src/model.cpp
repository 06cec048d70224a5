#include "mnchange/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mnchange {

int pair_index_flatten(int u, int v, int m) {
  if (v < 1 || u < v || u > m) {
    throw std::out_of_range("pair_index_flatten: need 1 <= v <= u <= m, got (" +
                            std::to_string(u) + "," + std::to_string(v) + "), m=" + std::to_string(m));
  }
  // Column v holds pairs (v,v),(v+1,v),...,(m,v); columns 1..v-1 come first.
  // Offset of column v: sum_{j=1}^{v-1} (m - j + 1).
  int offset = (v - 1) * m - (v - 1) * (v - 2) / 2;
  return offset + (u - v);
}

PairIndex pair_index_unflatten(int flat, int m) {
  if (flat < 0 || flat >= num_pairs(m)) {
    throw std::out_of_range("pair_index_unflatten: flat index out of range");
  }
  int v = 1;
  int remaining = flat;
  while (remaining >= m - v + 1) {
    remaining -= m - v + 1;
    ++v;
  }
  return {v + remaining, v};
}

std::vector<PairIndex> all_pairs(int m) {
  std::vector<PairIndex> out;
  out.reserve(num_pairs(m));
  for (int v = 1; v <= m; ++v)
    for (int u = v; u <= m; ++u) out.push_back({u, v});
  return out;
}

FeatureMap FeatureMap::quadratic() { return FeatureMap{Kind::Quadratic, 1, 0.5, nullptr}; }

FeatureMap FeatureMap::rbf(double bandwidth) {
  if (!(bandwidth > 0)) throw std::invalid_argument("FeatureMap::rbf: bandwidth must be positive");
  return FeatureMap{Kind::Rbf, 1, bandwidth, nullptr};
}

FeatureMap FeatureMap::custom_map(int b, std::function<void(double, double, double*)> fn) {
  if (b < 1) throw std::invalid_argument("FeatureMap::custom_map: b must be positive");
  return FeatureMap{Kind::Custom, b, 0.5, std::move(fn)};
}

void FeatureMap::eval(double xu, double xv, double* out) const {
  switch (kind) {
    case Kind::Quadratic:
      out[0] = xu * xv;
      break;
    case Kind::Rbf: {
      double d = xu - xv;
      out[0] = std::exp(-d * d / bandwidth);
      break;
    }
    case Kind::Custom:
      custom(xu, xv, out);
      break;
  }
}

SampleMatrix load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      ++col;
      try {
        size_t pos = 0;
        double val = std::stod(cell, &pos);
        row.push_back(val);
      } catch (const std::exception&) {
        throw std::runtime_error("load_csv: bad value at row " + std::to_string(lineno) +
                                 ", column " + std::to_string(col) + " in " + path);
      }
      if (!std::isfinite(row.back())) {
        throw std::runtime_error("load_csv: non-finite value at row " + std::to_string(lineno) +
                                 ", column " + std::to_string(col) + " in " + path);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("load_csv: ragged row " + std::to_string(lineno) + " in " + path +
                               " (expected " + std::to_string(rows.front().size()) + " columns, got " +
                               std::to_string(row.size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("load_csv: empty file " + path);
  SampleMatrix out;
  out.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return out;
}

void save_csv(const SampleMatrix& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_csv: cannot open " + path);
  out.precision(17);
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.m(); ++j) {
      if (j) out << ',';
      out << data.values(i, j);
    }
    out << '\n';
  }
}

PairSet ParameterVector::support() const {
  PairSet out;
  for (int t = 0; t < pairs(); ++t) {
    // Coefficient-wise test: a squared norm can underflow to zero for tiny
    // but nonzero entries.
    if ((block(t).array() != 0.0).any()) out.insert(pair_index_unflatten(t, m));
  }
  return out;
}

FeatureTensor featurize(const SampleMatrix& data, const FeatureMap& fmap) {
  const int n = data.n();
  const int m = data.m();
  if (m < 2) throw std::invalid_argument("featurize: need m >= 2");
  FeatureTensor out;
  out.m = m;
  out.b = fmap.b;
  out.features.resize(n, static_cast<Eigen::Index>(fmap.b) * num_pairs(m));
  std::vector<double> buf(static_cast<size_t>(fmap.b));
  for (int i = 0; i < n; ++i) {
    int t = 0;
    for (int v = 1; v <= m; ++v) {
      for (int u = v; u <= m; ++u, ++t) {
        fmap.eval(data.values(i, u - 1), data.values(i, v - 1), buf.data());
        for (int k = 0; k < fmap.b; ++k) {
          if (!std::isfinite(buf[static_cast<size_t>(k)])) {
            throw std::runtime_error("featurize: non-finite feature at sample " + std::to_string(i) +
                                     ", pair (" + std::to_string(u) + "," + std::to_string(v) + ")");
          }
          out.features(i, static_cast<Eigen::Index>(t) * fmap.b + k) = buf[static_cast<size_t>(k)];
        }
      }
    }
  }
  return out;
}

double log_ratio_unnormalized(const ParameterVector& theta, const FeatureTensor& features, int i) {
  if (theta.dim() != features.dim()) throw std::invalid_argument("log_ratio_unnormalized: dimension mismatch");
  return features.features.row(i).dot(theta.flat);
}

double log_sum_exp(const Eigen::Ref<const Vector>& g) {
  const double gmax = g.maxCoeff();
  return gmax + std::log((g.array() - gmax).exp().sum());
}

Vector softmax(const Eigen::Ref<const Vector>& g) {
  const double gmax = g.maxCoeff();
  Vector w = (g.array() - gmax).exp();
  w /= w.sum();
  return w;
}

double empirical_log_normalizer(const ParameterVector& theta, const FeatureTensor& q_features) {
  if (theta.dim() != q_features.dim()) throw std::invalid_argument("empirical_log_normalizer: dimension mismatch");
  Vector g = q_features.features * theta.flat;
  return log_sum_exp(g) - std::log(static_cast<double>(q_features.n()));
}

double empirical_ratio(const ParameterVector& theta, const FeatureTensor& q_features,
                       const Eigen::Ref<const Vector>& x_features) {
  const double log_norm = empirical_log_normalizer(theta, q_features);
  return std::exp(x_features.dot(theta.flat) - log_norm);
}

}  // namespace mnchange
