#include "mnchange/samplers.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>

namespace mnchange {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GraphSpec build_lattice(int g) {
  if (g < 2) throw std::invalid_argument("build_lattice: need g >= 2");
  GraphSpec out;
  out.m = g * g;
  out.topology = GraphSpec::Topology::Lattice4;
  auto node = [g](int row, int col) { return row * g + col + 1; };
  for (int row = 0; row < g; ++row) {
    for (int col = 0; col < g; ++col) {
      if (col + 1 < g) out.edges.insert({node(row, col + 1), node(row, col)});
      if (row + 1 < g) out.edges.insert({node(row + 1, col), node(row, col)});
    }
  }
  return out;
}

GraphSpec build_random(int m, double connectivity, Rng& rng) {
  if (!(connectivity > 0.0 && connectivity < 1.0)) {
    throw std::invalid_argument("build_random: connectivity must be in (0,1)");
  }
  GraphSpec out;
  out.m = m;
  out.topology = GraphSpec::Topology::RandomErdos;
  out.connectivity = connectivity;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int v = 1; v <= m; ++v) {
    for (int u = v + 1; u <= m; ++u) {
      if (unif(rng) < connectivity) out.edges.insert({u, v});
    }
  }
  return out;
}

Matrix GaussianMnSpec::precision() const {
  Matrix theta = Matrix::Zero(graph.m, graph.m);
  theta.diagonal().setConstant(2.0 * theta0);
  for (const PairIndex& e : graph.edges) {
    const double val = changed_edges.count(e) ? -theta1 : theta1;
    theta(e.u - 1, e.v - 1) = val;
    theta(e.v - 1, e.u - 1) = val;
  }
  return theta;
}

void GaussianMnSpec::validate() const {
  Eigen::LLT<Matrix> llt(precision());
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("GaussianMnSpec: precision matrix is not positive definite");
  }
}

double EightShapedSpec::log_density(const Eigen::Ref<const Vector>& x) const {
  if (x.norm() > radius) return -std::numeric_limits<double>::infinity();
  double energy = theta0 * x.squaredNorm();
  for (const PairIndex& e : graph.edges) {
    const double s = x(e.u - 1) * x(e.v - 1);
    const double s2 = s * s;
    energy += theta1 * s2 / (1.0 + s2);
  }
  return -energy;
}

ChangeInstance make_gaussian_change(const GraphSpec& graph, int d, Rng& rng,
                                    double theta0, double theta1) {
  if (d < 0 || d > static_cast<int>(graph.edges.size())) {
    throw std::invalid_argument("make_gaussian_change: d out of range");
  }
  std::vector<PairIndex> edge_list(graph.edges.begin(), graph.edges.end());
  for (int attempt = 0; attempt < 100; ++attempt) {
    // Fisher-Yates prefix of size d.
    std::vector<PairIndex> shuffled = edge_list;
    for (size_t i = 0; i + 1 < shuffled.size(); ++i) {
      std::uniform_int_distribution<size_t> pick(i, shuffled.size() - 1);
      std::swap(shuffled[i], shuffled[pick(rng)]);
    }
    PairSet flipped(shuffled.begin(), shuffled.begin() + d);

    ChangeInstance inst;
    inst.p_spec = GaussianMnSpec{graph, theta0, theta1, {}};
    inst.q_spec = GaussianMnSpec{graph, theta0, theta1, flipped};
    inst.true_support = flipped;
    try {
      inst.p_spec.validate();
      inst.q_spec.validate();
      return inst;
    } catch (const std::runtime_error&) {
      // resample the subset
    }
  }
  throw std::runtime_error("make_gaussian_change: no positive-definite flip subset found in 100 attempts");
}

EightShapedChangeInstance make_eightshaped_change(const GraphSpec& graph, int d, Rng& rng,
                                                  double theta0, double theta1, double radius) {
  if (d < 0 || d > static_cast<int>(graph.edges.size())) {
    throw std::invalid_argument("make_eightshaped_change: d out of range");
  }
  std::vector<PairIndex> shuffled(graph.edges.begin(), graph.edges.end());
  for (size_t i = 0; i + 1 < shuffled.size(); ++i) {
    std::uniform_int_distribution<size_t> pick(i, shuffled.size() - 1);
    std::swap(shuffled[i], shuffled[pick(rng)]);
  }
  PairSet removed(shuffled.begin(), shuffled.begin() + d);

  EightShapedChangeInstance inst;
  inst.p_spec = EightShapedSpec{graph, theta0, theta1, radius};
  GraphSpec q_graph = graph;
  for (const PairIndex& e : removed) q_graph.edges.erase(e);
  inst.q_spec = EightShapedSpec{q_graph, theta0, theta1, radius};
  inst.true_support = removed;
  return inst;
}

SampleMatrix sample_gaussian(const GaussianMnSpec& spec, int n, Rng& rng) {
  const int m = spec.graph.m;
  Eigen::LLT<Matrix> llt(spec.precision());
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("sample_gaussian: precision matrix is not positive definite");
  }
  // Theta = L L^T, so x = L^-T z has covariance Theta^-1.
  Matrix lt = llt.matrixU();
  std::normal_distribution<double> normal(0.0, 1.0);
  SampleMatrix out;
  out.values.resize(n, m);
  Vector z(m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) z(j) = normal(rng);
    out.values.row(i) = lt.triangularView<Eigen::Upper>().solve(z).transpose();
  }
  return out;
}

SampleMatrix sample_truncated_gaussian(const GaussianMnSpec& spec, double radius, int n, Rng& rng) {
  const int m = spec.graph.m;
  Eigen::LLT<Matrix> llt(spec.precision());
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("sample_truncated_gaussian: precision matrix is not positive definite");
  }
  Matrix lt = llt.matrixU();
  std::normal_distribution<double> normal(0.0, 1.0);
  SampleMatrix out;
  out.values.resize(n, m);
  Vector z(m), x(m);
  long long proposals = 0;
  int filled = 0;
  while (filled < n) {
    if (++proposals > 10'000'000LL) {
      throw std::runtime_error("sample_truncated_gaussian: acceptance starvation after 1e7 proposals");
    }
    for (int j = 0; j < m; ++j) z(j) = normal(rng);
    x = lt.triangularView<Eigen::Upper>().solve(z);
    if (x.norm() <= radius) out.values.row(filled++) = x.transpose();
  }
  return out;
}

namespace {

// Slice sampling update of one coordinate (Neal 2003, stepping-out +
// shrinkage).
void slice_update(Vector& x, int coord, const EightShapedSpec& spec, const SliceConfig& config, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double x0 = x(coord);
  const double logp0 = spec.log_density(x);
  const double level = logp0 + std::log(unif(rng));

  double lo = x0 - config.width * unif(rng);
  double hi = lo + config.width;
  auto logp_at = [&](double v) {
    x(coord) = v;
    return spec.log_density(x);
  };
  for (int step = 0; step < config.max_doublings && logp_at(lo) > level; ++step) lo -= config.width;
  for (int step = 0; step < config.max_doublings && logp_at(hi) > level; ++step) hi += config.width;

  for (;;) {
    if (hi - lo < 1e-13) {
      throw std::runtime_error("sample_slice: bracket collapse at coordinate " + std::to_string(coord + 1));
    }
    const double cand = lo + (hi - lo) * unif(rng);
    if (logp_at(cand) > level) {
      x(coord) = cand;
      return;
    }
    if (cand < x0) {
      lo = cand;
    } else {
      hi = cand;
    }
  }
}

}  // namespace

SampleMatrix sample_slice(const EightShapedSpec& spec, int n, const SliceConfig& config, Rng& rng) {
  const int m = spec.graph.m;
  Vector x = Vector::Zero(m);
  if (!std::isfinite(spec.log_density(x))) {
    throw std::runtime_error("sample_slice: log-density not finite at the origin");
  }
  for (int sweep = 0; sweep < config.burn_in; ++sweep) {
    for (int coord = 0; coord < m; ++coord) slice_update(x, coord, spec, config, rng);
  }
  SampleMatrix out;
  out.values.resize(n, m);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < config.thin; ++t) {
      for (int coord = 0; coord < m; ++coord) slice_update(x, coord, spec, config, rng);
    }
    out.values.row(i) = x.transpose();
  }
  return out;
}

}  // namespace mnchange
