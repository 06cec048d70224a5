#ifndef MNCHANGE_SAMPLERS_HPP
#define MNCHANGE_SAMPLERS_HPP

#include "mnchange/model.hpp"

#include <random>

namespace mnchange {

using Rng = std::mt19937_64;

// splitmix64-style mixing for deriving independent seed streams.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

struct GraphSpec {
  enum class Topology { Lattice4, RandomErdos, Custom };

  int m = 0;
  PairSet edges;  // u > v only
  Topology topology = Topology::Custom;
  double connectivity = 0.0;  // RandomErdos only
};

// g x g 4-neighbor lattice, nodes in row-major order; 2g(g-1) edges.
GraphSpec build_lattice(int g);

// Each off-diagonal pair included independently with the given probability.
GraphSpec build_random(int m, double connectivity, Rng& rng);

// Zero-mean Gaussian MN with precision Theta_uu = 2*theta0 and
// Theta_uv = theta1 on edges (sign flipped on changed edges).
struct GaussianMnSpec {
  GraphSpec graph;
  double theta0 = 2.0;
  double theta1 = -0.4;
  PairSet changed_edges;  // edges carrying -theta1 instead of theta1

  Matrix precision() const;
  // Throws if the implied precision matrix is not positive definite.
  void validate() const;
};

// Truncated density with a bounded pairwise coupling:
//   p(x) ∝ exp(-theta0 Σ_u x_u^2 - theta1 Σ_{(u,v) in E} h(x_u x_v)),
//   h(s) = s^2/(1+s^2), restricted to ||x|| <= radius.
// The pairwise potential family is this artifact's own stand-in for a
// bimodal-coupling density known only from a contour plot; treat results
// under it as qualitative.
struct EightShapedSpec {
  GraphSpec graph;
  double theta0 = 1.0;
  double theta1 = 5.0;
  double radius = 15.0;

  double log_density(const Eigen::Ref<const Vector>& x) const;  // -inf outside the ball
};

struct ChangeInstance {
  GaussianMnSpec p_spec;
  GaussianMnSpec q_spec;
  PairSet true_support;
  int d() const { return static_cast<int>(true_support.size()); }
};

struct EightShapedChangeInstance {
  EightShapedSpec p_spec;
  EightShapedSpec q_spec;  // graph has d edges removed
  PairSet true_support;
};

// P keeps theta1 on all edges; Q flips sign on d uniformly chosen edges.
// Retries the subset up to 100 times if either precision loses positive
// definiteness, then throws.
ChangeInstance make_gaussian_change(const GraphSpec& graph, int d, Rng& rng,
                                    double theta0 = 2.0, double theta1 = -0.4);

// Q's graph is P's graph with d uniformly chosen edges removed.
EightShapedChangeInstance make_eightshaped_change(const GraphSpec& graph, int d, Rng& rng,
                                                  double theta0 = 1.0, double theta1 = 5.0,
                                                  double radius = 15.0);

// n i.i.d. draws from N(0, Theta^-1) via the Cholesky factor of Theta.
SampleMatrix sample_gaussian(const GaussianMnSpec& spec, int n, Rng& rng);

// Rejection sampling: propose from the untruncated Gaussian, accept inside
// the ball. Throws after 10^7 proposals without filling n rows.
SampleMatrix sample_truncated_gaussian(const GaussianMnSpec& spec, double radius, int n, Rng& rng);

struct SliceConfig {
  int burn_in = 1000;    // sweeps
  int thin = 5;          // keep every thin-th sweep
  double width = 1.0;    // initial bracket width
  int max_doublings = 50;
};

// Coordinate-wise slice sampling with stepping-out and shrinkage.
SampleMatrix sample_slice(const EightShapedSpec& spec, int n, const SliceConfig& config, Rng& rng);

}  // namespace mnchange

#endif
