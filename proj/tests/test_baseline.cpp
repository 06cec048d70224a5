#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mnchange/baseline.hpp"
#include "mnchange/samplers.hpp"
#include "oracles.hpp"

#include <Eigen/LU>

#include <cmath>

using namespace mnchange;

TEST_CASE("sample covariance is the symmetrized second moment") {
  SampleMatrix x;
  x.values.resize(2, 2);
  x.values << 1, 0, 0, 2;
  Matrix cov = sample_covariance(x);
  Matrix expect(2, 2);
  expect << 0.5, 0, 0, 2.0;
  CHECK((cov - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("thresholding keeps strictly off-diagonal entries above tau") {
  Matrix delta(3, 3);
  delta << 9, 0.2, 0.0,
           0.2, 9, -0.5,
           0.0, -0.5, 9;
  PairSet s1 = threshold(delta, 0.3);
  CHECK(s1.size() == 1);
  CHECK(s1.count({3, 2}) == 1);

  PairSet s2 = threshold(delta, 0.1);
  CHECK(s2.size() == 2);
  CHECK(s2.count({2, 1}) == 1);

  // Monotone: a larger tau never adds pairs.
  PairSet s3 = threshold(delta, 0.5);
  for (const PairIndex& e : s3) CHECK(s2.count(e) == 1);

  // tau = 0 keeps nonzeros only; exact zeros stay out.
  PairSet s0 = threshold(delta, 0.0);
  CHECK(s0.count({3, 1}) == 0);
  CHECK(s0.size() == 2);
}

TEST_CASE("identical covariances give the zero matrix") {
  Matrix sigma(2, 2);
  sigma << 1.0, 0.3, 0.3, 1.0;
  DiffNetProblem prob{sigma, sigma, 0.01};
  DiffNetSolution sol = solve_diffnet(prob);
  CHECK(sol.delta.cwiseAbs().maxCoeff() < 1e-6);
  CHECK(sol.objective() < 1e-6);
}

TEST_CASE("large epsilon admits the zero solution") {
  Rng rng(3);
  GraphSpec graph = build_lattice(2);
  ChangeInstance inst = make_gaussian_change(graph, 2, rng);
  Matrix sp = inst.p_spec.precision().inverse();
  Matrix sq = inst.q_spec.precision().inverse();
  const double eps = 2.0 * (sp - sq).cwiseAbs().maxCoeff();
  DiffNetSolution sol = solve_diffnet({sp, sq, eps});
  CHECK(sol.delta.cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("admm matches a linear-programming oracle") {
  Rng rng(9);
  for (int rep = 0; rep < 6; ++rep) {
    const int m = 2 + rep % 2;  // 2 or 3
    GraphSpec graph;
    graph.m = m;
    for (int v = 1; v < m; ++v) graph.edges.insert({v + 1, v});
    ChangeInstance inst = make_gaussian_change(graph, 1, rng);
    SampleMatrix xp = sample_gaussian(inst.p_spec, 400, rng);
    SampleMatrix xq = sample_gaussian(inst.q_spec, 400, rng);
    Matrix sp = sample_covariance(xp);
    Matrix sq = sample_covariance(xq);
    const double eps = 0.3 * (sp - sq).cwiseAbs().maxCoeff();

    oracles::LpResult lp = oracles::diffnet_lp(sp, sq, eps);
    REQUIRE(lp.ok);

    AdmmConfig config;
    config.max_iters = 20000;
    config.tol = 1e-9;
    DiffNetSolution sol = solve_diffnet({sp, sq, eps}, config);
    CHECK(sol.converged);
    const double denom = std::max(1.0, lp.objective);
    CHECK(std::abs(sol.objective() - lp.objective) / denom < 1e-3);
  }
}

TEST_CASE("solutions are feasible and symmetric") {
  Rng rng(15);
  GraphSpec graph = build_lattice(2);
  ChangeInstance inst = make_gaussian_change(graph, 2, rng);
  SampleMatrix xp = sample_gaussian(inst.p_spec, 300, rng);
  SampleMatrix xq = sample_gaussian(inst.q_spec, 300, rng);
  Matrix sp = sample_covariance(xp);
  Matrix sq = sample_covariance(xq);
  const double eps = 0.4 * (sp - sq).cwiseAbs().maxCoeff();

  AdmmConfig config;
  config.max_iters = 20000;
  config.tol = 1e-9;
  DiffNetSolution sol = solve_diffnet({sp, sq, eps}, config);
  CHECK(sol.feasibility_gap <= 1e-6);
  CHECK((sol.delta - sol.delta.transpose()).cwiseAbs().maxCoeff() < 1e-8);
  Matrix residual = sp * sol.delta * sq + sp - sq;
  CHECK(residual.cwiseAbs().maxCoeff() <= eps + 1e-6);
}
