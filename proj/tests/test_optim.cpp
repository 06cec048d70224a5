#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include "mnchange/samplers.hpp"

using namespace mnchange;

TEST_CASE("group prox closed form") {
  Vector v(2);
  v << 0.3, 0.4;  // norm 0.5
  CHECK(prox_group(v, 1.0, 1.0).norm() == 0.0);

  CHECK((prox_group(v, 1.0, 0.0) - v).norm() == 0.0);

  Vector w(2);
  w << 3, 4;
  Vector shrunk = prox_group(w, 1.0, 1.0);
  CHECK(shrunk(0) == doctest::Approx(2.4));
  CHECK(shrunk(1) == doctest::Approx(3.2));
}

TEST_CASE("prox is non-expansive") {
  std::mt19937_64 rng(20);
  std::normal_distribution<double> normal(0, 2);
  for (int rep = 0; rep < 100; ++rep) {
    Vector a(3), b(3);
    for (int i = 0; i < 3; ++i) {
      a(i) = normal(rng);
      b(i) = normal(rng);
    }
    const double t = 0.1 + 0.9 * std::abs(normal(rng));
    const double lambda = std::abs(normal(rng));
    CHECK((prox_group(a, t, lambda) - prox_group(b, t, lambda)).norm() <= (a - b).norm() + 1e-12);
  }
}

TEST_CASE("lambda scaling formula") {
  CHECK(lambda_scaling(1, std::exp(1.0), 1.0) == doctest::Approx(1.0));
  CHECK(lambda_scaling(4, std::exp(4.0), 2.0) == doctest::Approx(2.0));
  const double once = lambda_scaling(100, 25, 0.7);
  const double doubled = lambda_scaling(200, 25, 0.7);
  CHECK(once / doubled == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("identical data yields the zero solution for any positive lambda") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal(0, 1);
  SampleMatrix x;
  x.values.resize(20, 3);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 3; ++j) x.values(i, j) = normal(rng);
  KliepProblem problem = KliepProblem::make(x, x, FeatureMap::quadratic());
  SolverConfig config;
  config.lambda = 0.05;
  SolverReport report = solve(problem, config);
  CHECK(report.converged);
  CHECK(report.theta_hat.flat.cwiseAbs().maxCoeff() == 0.0);
  CHECK(report.support.empty());
}

TEST_CASE("lambda at or above lambda_max gives the zero solution") {
  std::mt19937_64 rng(22);
  KliepProblem problem = oracles::random_problem(rng, 3, 1, 15, 15);
  SolverConfig config;
  config.lambda = lambda_max(problem) * 1.0001;
  SolverReport report = solve(problem, config);
  CHECK(report.converged);
  CHECK(report.support.empty());
}

TEST_CASE("solver matches the coordinate-descent oracle on seeded instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(1000 + seed);
    GraphSpec graph;
    graph.m = 2;
    graph.edges.insert({2, 1});
    ChangeInstance inst = make_gaussian_change(graph, 1, rng);
    SampleMatrix p = sample_gaussian(inst.p_spec, 60, rng);
    SampleMatrix q = sample_gaussian(inst.q_spec, 60, rng);
    KliepProblem problem = KliepProblem::make(p, q, FeatureMap::quadratic());

    SolverConfig config;
    config.lambda = lambda_scaling(60, 2, 0.3);
    config.tol = 1e-12;
    config.max_iters = 20000;
    SolverReport report = solve(problem, config);
    CHECK(report.converged);

    ParameterVector oracle = oracles::coordinate_descent(problem, config.lambda);
    for (int t = 0; t < oracle.pairs(); ++t) {
      CHECK((report.theta_hat.block(t) - oracle.block(t)).norm() < 1e-5);
    }
    CHECK(report.support == oracle.support());
  }
}

TEST_CASE("objective trace is monotone and KKT certified") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    KliepProblem problem = oracles::random_problem(rng, 4, 1, 25, 30);
    SolverConfig config;
    config.lambda = 0.1;
    SolverReport report = solve(problem, config);
    for (size_t i = 1; i < report.objective_trace.size(); ++i) {
      CHECK(report.objective_trace[i] <= report.objective_trace[i - 1] + 1e-10);
    }
    if (report.converged) {
      CHECK(kkt_residual(problem, report.theta_hat, config.lambda) <= 1e-4 * std::max(1.0, config.lambda));
    }
  }
}

TEST_CASE("path: single lambda_max grid point gives one all-zero report") {
  std::mt19937_64 rng(24);
  KliepProblem problem = oracles::random_problem(rng, 3, 1, 12, 12);
  PathConfig path;
  path.lambda_grid = {lambda_max(problem) * 1.000001};
  std::vector<SolverReport> reports = solve_path(problem, path, {});
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].support.empty());
}

TEST_CASE("path on identical data has empty supports throughout") {
  std::mt19937_64 rng(25);
  std::normal_distribution<double> normal(0, 1);
  SampleMatrix x;
  x.values.resize(15, 3);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 3; ++j) x.values(i, j) = normal(rng);
  KliepProblem problem = KliepProblem::make(x, x, FeatureMap::quadratic());
  PathConfig path;
  path.lambda_grid = {0.5, 0.2, 0.1, 0.05};
  for (const SolverReport& rep : solve_path(problem, path, {})) {
    CHECK(rep.support.empty());
  }
}

TEST_CASE("warm-started path agrees with cold-started path") {
  std::mt19937_64 rng(26);
  KliepProblem problem = oracles::random_problem(rng, 3, 1, 30, 30);
  PathConfig warm_path;
  warm_path.grid_points = 10;
  PathConfig cold_path = warm_path;
  cold_path.warm_start = false;
  SolverConfig config;
  config.tol = 1e-12;
  config.max_iters = 20000;
  std::vector<SolverReport> warm = solve_path(problem, warm_path, config);
  std::vector<SolverReport> cold = solve_path(problem, cold_path, config);
  REQUIRE(warm.size() == cold.size());
  for (size_t i = 0; i < warm.size(); ++i) {
    CHECK(warm[i].support == cold[i].support);
    for (int t = 0; t < warm[i].theta_hat.pairs(); ++t) {
      CHECK((warm[i].theta_hat.block(t) - cold[i].theta_hat.block(t)).norm() < 1e-4);
    }
  }
}

TEST_CASE("support size grows along the decreasing grid on most instances") {
  std::mt19937_64 rng(27);
  int monotone = 0;
  const int instances = 20;
  for (int rep = 0; rep < instances; ++rep) {
    KliepProblem problem = oracles::random_problem(rng, 3, 1, 60, 60);
    PathConfig path;
    path.grid_points = 8;
    path.grid_min_ratio = 0.05;
    std::vector<SolverReport> reports = solve_path(problem, path, {});
    bool ok = true;
    for (size_t i = 1; i < reports.size(); ++i) {
      if (reports[i].support.size() < reports[i - 1].support.size()) ok = false;
    }
    monotone += ok ? 1 : 0;
  }
  // Weak monotonicity is typical but not guaranteed; allow a couple of exceptions.
  CHECK(monotone >= static_cast<int>(0.9 * instances));
}

TEST_CASE("path stop rule halts once the support exceeds the target") {
  Rng rng(28);
  GraphSpec graph = build_lattice(3);
  ChangeInstance inst = make_gaussian_change(graph, 3, rng);
  SampleMatrix p = sample_gaussian(inst.p_spec, 300, rng);
  SampleMatrix q = sample_gaussian(inst.q_spec, 300, rng);
  KliepProblem problem = KliepProblem::make(p, q, FeatureMap::quadratic());
  PathConfig path;
  path.grid_points = 30;
  path.target_support_size = 2;
  std::vector<SolverReport> reports = solve_path(problem, path, {});
  REQUIRE(!reports.empty());
  CHECK(reports.back().support.size() > 2);
  for (size_t i = 0; i + 1 < reports.size(); ++i) {
    CHECK(reports[i].support.size() <= 2);
  }
}

TEST_CASE("solution is invariant to sample order") {
  Rng rng(29);
  GraphSpec graph;
  graph.m = 3;
  graph.edges.insert({2, 1});
  graph.edges.insert({3, 2});
  ChangeInstance inst = make_gaussian_change(graph, 1, rng);
  SampleMatrix p = sample_gaussian(inst.p_spec, 40, rng);
  SampleMatrix q = sample_gaussian(inst.q_spec, 40, rng);

  SampleMatrix p_rev;
  p_rev.values = p.values.colwise().reverse();
  SampleMatrix q_rev;
  q_rev.values = q.values.colwise().reverse();

  SolverConfig config;
  config.lambda = 0.1;
  config.tol = 1e-14;
  config.max_iters = 50000;
  SolverReport a = solve(KliepProblem::make(p, q, FeatureMap::quadratic()), config);
  SolverReport b = solve(KliepProblem::make(p_rev, q_rev, FeatureMap::quadratic()), config);
  for (int t = 0; t < a.theta_hat.pairs(); ++t) {
    CHECK((a.theta_hat.block(t) - b.theta_hat.block(t)).norm() < 1e-8);
  }
}

TEST_CASE("non-convergence is a reported state") {
  std::mt19937_64 rng(30);
  KliepProblem problem = oracles::random_problem(rng, 4, 1, 30, 30);
  SolverConfig config;
  config.lambda = 0.01;
  config.max_iters = 2;
  SolverReport report = solve(problem, config);
  CHECK(!report.converged);
  CHECK(report.iterations <= 2);
}
