#include "mnchange/harness.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace mnchange {

namespace fs = std::filesystem;

std::string version_string() { return "mnchange 0.1.0"; }

int NqRule::resolve(int n_p) const {
  switch (kind) {
    case Kind::Fixed:
      return static_cast<int>(constant);
    case Kind::QuadraticInNp:
      return std::max(50, static_cast<int>(std::lround(constant * n_p * n_p)));
    case Kind::LinearInNp:
      return std::max(1, static_cast<int>(std::lround(constant * n_p)));
    case Kind::EqualNp:
      return n_p;
  }
  return n_p;
}

int DRule::resolve(int m) const {
  if (kind == Kind::SqrtM) return static_cast<int>(std::floor(std::sqrt(static_cast<double>(m))));
  return fixed;
}

void ExperimentConfig::validate() const {
  if (m_grid.empty()) throw std::invalid_argument("config: m grid is empty");
  if (kind != ExperimentKind::RocCompare && np_grid.empty()) throw std::invalid_argument("config: n_p grid is empty");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (topology == TopologyKind::Lattice4) {
    for (int m : m_grid) {
      const int g = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
      if (g * g != m || g < 2) {
        throw std::invalid_argument("config: lattice topology needs square m >= 4, got " + std::to_string(m));
      }
    }
  }
  if (!(lambda_C > 0)) throw std::invalid_argument("config: lambda scaling constant must be positive");
}

std::uint64_t trial_seed(std::uint64_t base, int m, int n_p, int n_q, int d, int trial) {
  std::uint64_t s = mix_seed(base, static_cast<std::uint64_t>(m));
  s = mix_seed(s, static_cast<std::uint64_t>(n_p));
  s = mix_seed(s, static_cast<std::uint64_t>(n_q));
  s = mix_seed(s, static_cast<std::uint64_t>(d));
  return mix_seed(s, static_cast<std::uint64_t>(trial));
}

FeatureMap bounded_interaction_feature() {
  return FeatureMap::custom_map(1, [](double xu, double xv, double* out) {
    const double s = xu * xv;
    const double s2 = s * s;
    out[0] = s2 / (1.0 + s2);
  });
}

namespace {

void parallel_for(int n_tasks, int threads, const std::function<void(int)>& task) {
  threads = std::max(1, std::min(threads, n_tasks));
  if (threads == 1) {
    for (int i = 0; i < n_tasks; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n_tasks) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

GraphSpec make_graph(const ExperimentConfig& config, int m, Rng& rng) {
  if (config.topology == TopologyKind::Lattice4) {
    return build_lattice(static_cast<int>(std::lround(std::sqrt(static_cast<double>(m)))));
  }
  return build_random(m, config.connectivity, rng);
}

struct TrialOutcome {
  bool exact = false;
  bool converged = false;
};

TrialOutcome run_one_trial(const ExperimentConfig& config, int m, int n_p, int n_q, int d, int trial) {
  Rng rng(trial_seed(config.base_seed, m, n_p, n_q, d, trial));
  GraphSpec graph = make_graph(config, m, rng);

  SampleMatrix p_data, q_data;
  PairSet truth;
  FeatureMap fmap = FeatureMap::quadratic();
  if (config.family == ModelFamily::EightShaped) {
    EightShapedChangeInstance inst =
        make_eightshaped_change(graph, d, rng, config.eight_theta0, config.eight_theta1, config.trunc_radius);
    truth = inst.true_support;
    p_data = sample_slice(inst.p_spec, n_p, config.slice, rng);
    q_data = sample_slice(inst.q_spec, n_q, config.slice, rng);
    fmap = bounded_interaction_feature();
  } else {
    ChangeInstance inst = make_gaussian_change(graph, d, rng);
    truth = inst.true_support;
    if (config.family == ModelFamily::TruncatedGaussian) {
      p_data = sample_truncated_gaussian(inst.p_spec, config.trunc_radius, n_p, rng);
      q_data = sample_truncated_gaussian(inst.q_spec, config.trunc_radius, n_q, rng);
    } else {
      p_data = sample_gaussian(inst.p_spec, n_p, rng);
      q_data = sample_gaussian(inst.q_spec, n_q, rng);
    }
  }

  KliepProblem problem = KliepProblem::make(p_data, q_data, fmap);
  SolverConfig solver;
  solver.lambda = lambda_scaling(n_p, m, config.lambda_C);
  solver.max_iters = 4000;
  SolverReport report = solve(problem, solver);

  TrialOutcome out;
  out.converged = report.converged;
  if (!report.converged) return out;

  // Success is judged on changed *edges*: diagonal groups encode node-potential
  // shifts and are excluded from the recovery universe.
  PairSet universe, edge_support;
  for (const PairIndex& t : all_pairs(m)) {
    if (t.u != t.v) universe.insert(t);
  }
  for (const PairIndex& t : report.support) {
    if (t.u != t.v) edge_support.insert(t);
  }
  out.exact = compare_support(edge_support, truth, universe).exact;
  return out;
}

std::string topology_name(TopologyKind t) {
  return t == TopologyKind::Lattice4 ? "lattice4" : "random";
}

std::string family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::Gaussian: return "gaussian";
    case ModelFamily::TruncatedGaussian: return "truncated-gaussian";
    case ModelFamily::EightShaped: return "eight-shaped";
  }
  return "?";
}

std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SuccessRate: return "success-rate";
    case ExperimentKind::NqCoupling: return "nq-coupling";
    case ExperimentKind::DSweep: return "d-sweep";
    case ExperimentKind::NonGaussian: return "non-gaussian";
    case ExperimentKind::RocCompare: return "roc";
    case ExperimentKind::RealData: return "real";
    case ExperimentKind::Bootstrap: return "bootstrap";
    case ExperimentKind::Diagnose: return "diagnose";
  }
  return "?";
}

}  // namespace

SuccessRateTable run_success_rate(const ExperimentConfig& config) {
  config.validate();

  struct Cell {
    int m, n_p, n_q, d;
  };
  std::vector<Cell> cells;
  for (int m : config.m_grid) {
    const int d = config.d_rule.resolve(m);
    for (int n_p : config.np_grid) cells.push_back({m, n_p, config.nq_rule.resolve(n_p), d});
  }

  std::vector<std::vector<TrialOutcome>> outcomes(cells.size(),
                                                  std::vector<TrialOutcome>(static_cast<size_t>(config.trials)));
  const int total = static_cast<int>(cells.size()) * config.trials;
  parallel_for(total, config.threads, [&](int task) {
    const int ci = task / config.trials;
    const int trial = task % config.trials;
    const Cell& c = cells[static_cast<size_t>(ci)];
    outcomes[static_cast<size_t>(ci)][static_cast<size_t>(trial)] =
        run_one_trial(config, c.m, c.n_p, c.n_q, c.d, trial);
  });

  SuccessRateTable table;
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    const Cell& c = cells[ci];
    CellResult row;
    row.m = c.m;
    row.n_p = c.n_p;
    row.n_q = c.n_q;
    row.d = c.d;
    row.np_over_log_m = c.n_p / std::log(static_cast<double>(c.m));
    row.trials = config.trials;
    int successes = 0;
    for (const TrialOutcome& o : outcomes[ci]) {
      if (!o.converged) ++row.failures;
      if (o.exact) ++successes;
    }
    row.success_rate = static_cast<double>(successes) / config.trials;
    row.std_error = std::sqrt(row.success_rate * (1.0 - row.success_rate) / config.trials);
    table.cells.push_back(row);
  }

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    write_success_rate_csv(table, config.out_dir + "/" + kind_name(config.kind) + ".csv");
    try {
      write_success_rate_svg(table, config.out_dir + "/" + kind_name(config.kind) + ".svg");
    } catch (...) {
      // chart emission never gates the run
    }
    write_manifest(config, config.out_dir);
  }
  return table;
}

std::vector<CellResult> SuccessRateTable::curve_for_m(int m) const {
  std::vector<CellResult> out;
  for (const CellResult& c : cells) {
    if (c.m == m) out.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [](const CellResult& a, const CellResult& b) { return a.np_over_log_m < b.np_over_log_m; });
  return out;
}

namespace {

double interp_curve(const std::vector<CellResult>& curve, double x) {
  for (size_t i = 1; i < curve.size(); ++i) {
    if (x <= curve[i].np_over_log_m) {
      const double x0 = curve[i - 1].np_over_log_m, x1 = curve[i].np_over_log_m;
      const double y0 = curve[i - 1].success_rate, y1 = curve[i].success_rate;
      const double w = x1 > x0 ? (x - x0) / (x1 - x0) : 0.0;
      return y0 + w * (y1 - y0);
    }
  }
  return curve.back().success_rate;
}

}  // namespace

double SuccessRateTable::max_alignment_gap() const {
  std::vector<int> ms;
  for (const CellResult& c : cells) {
    if (std::find(ms.begin(), ms.end(), c.m) == ms.end()) ms.push_back(c.m);
  }
  if (ms.size() < 2) return 0.0;

  std::vector<std::vector<CellResult>> curves;
  double lo = 0.0, hi = std::numeric_limits<double>::max();
  for (int m : ms) {
    curves.push_back(curve_for_m(m));
    lo = std::max(lo, curves.back().front().np_over_log_m);
    hi = std::min(hi, curves.back().back().np_over_log_m);
  }
  if (!(hi > lo)) return 0.0;

  double gap = 0.0;
  const int samples = 101;
  for (int s = 0; s < samples; ++s) {
    const double x = lo + (hi - lo) * s / (samples - 1);
    double ymin = 1.0, ymax = 0.0;
    for (const auto& curve : curves) {
      const double y = interp_curve(curve, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    gap = std::max(gap, ymax - ymin);
  }
  return gap;
}

RocCompareResult run_roc_compare(const ExperimentConfig& config) {
  config.validate();

  struct Task {
    int m;
    int seed_index;
  };
  std::vector<Task> tasks;
  for (int m : config.m_grid) {
    for (int s = 0; s < config.trials; ++s) tasks.push_back({m, s});
  }

  std::vector<RocSeedResult> seed_results(tasks.size());
  std::vector<std::vector<std::tuple<int, std::uint64_t, double, double, std::string>>> point_lists(tasks.size());
  std::vector<std::vector<std::pair<double, RocCurve>>> baseline_curves(tasks.size());

  parallel_for(static_cast<int>(tasks.size()), config.threads, [&](int ti) {
    const Task& task = tasks[static_cast<size_t>(ti)];
    const int m = task.m;
    const int d = config.d_rule.resolve(m);
    const int n_p = config.np_grid.empty() ? 50 : config.np_grid.front();
    const int n_q = config.nq_rule.resolve(n_p);
    const std::uint64_t seed = trial_seed(config.base_seed, m, n_p, n_q, d, task.seed_index);

    RocSeedResult& res = seed_results[static_cast<size_t>(ti)];
    res.m = m;
    res.seed = seed;

    Rng rng(seed);
    GraphSpec graph = make_graph(config, m, rng);
    if (d == 0 || static_cast<int>(graph.edges.size()) <= d) {
      res.skipped = true;
      res.skip_reason = "degenerate truth";
      return;
    }
    ChangeInstance inst = make_gaussian_change(graph, d, rng);
    SampleMatrix p_data = sample_gaussian(inst.p_spec, n_p, rng);
    SampleMatrix q_data = sample_gaussian(inst.q_spec, n_q, rng);

    PairSet universe;  // off-diagonal pairs: the common ground between methods
    for (int v = 1; v <= m; ++v)
      for (int u = v + 1; u <= m; ++u) universe.insert({u, v});

    // KLIEP operating points. The change target is symmetric in P and Q, so the
    // ratio is fit in both directions along the same lambda grid; a pair's score
    // at each grid point is the smaller of its two block norms, which suppresses
    // blocks that only one direction picks up out of noise. Sweeping a threshold
    // over those scores mirrors the baseline's tau sweep.
    KliepProblem forward = KliepProblem::make(p_data, q_data, FeatureMap::quadratic());
    KliepProblem reverse = KliepProblem::make(q_data, p_data, FeatureMap::quadratic());
    PathConfig path;
    path.grid_points = config.roc_lambda_points;
    SolverConfig solver;
    std::vector<SolverReport> fwd = solve_path(forward, path, solver);
    std::vector<SolverReport> rev = solve_path(reverse, path, solver);
    std::vector<PairSet> kliep_supports;
    for (const SolverReport& rep : fwd) {
      PairSet s;
      for (const PairIndex& e : rep.support) {
        if (e.u != e.v) s.insert(e);
      }
      kliep_supports.push_back(std::move(s));
    }
    const size_t depth = std::min(fwd.size(), rev.size());
    for (size_t i = 0; i < depth; ++i) {
      std::map<PairIndex, double> score;
      for (const PairIndex& e : fwd[i].support) {
        if (e.u == e.v) continue;
        const int t = pair_index_flatten(e.u, e.v, fwd[i].theta_hat.m);
        const double fn = fwd[i].theta_hat.block_norm(t);
        const int tr = pair_index_flatten(e.u, e.v, rev[i].theta_hat.m);
        const double rn = rev[i].theta_hat.block_norm(tr);
        score[e] = std::min(fn, rn);
      }
      std::vector<std::pair<double, PairIndex>> ranked;
      for (const auto& [e, sc] : score) {
        if (sc > 0) ranked.emplace_back(sc, e);
      }
      std::sort(ranked.begin(), ranked.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
      PairSet acc;
      for (const auto& [sc, e] : ranked) {
        acc.insert(e);
        kliep_supports.push_back(acc);
      }
    }
    RocCurve kliep_roc = roc_curve(kliep_supports, inst.true_support, universe);
    res.auc_kliep = kliep_roc.auc;

    // Baseline: one tau-swept curve per epsilon. The epsilon is chosen per m
    // after all seeds finish (the curve whose mean AUC is highest), so stash
    // every curve for now.
    Matrix sigma_p = sample_covariance(p_data);
    Matrix sigma_q = sample_covariance(q_data);
    const double resid_scale = (sigma_p - sigma_q).cwiseAbs().maxCoeff();
    auto& eps_curves = baseline_curves[static_cast<size_t>(ti)];
    for (double frac : config.roc_epsilon_fractions) {
      DiffNetProblem diff{sigma_p, sigma_q, std::max(1e-8, frac * resid_scale)};
      DiffNetSolution sol = solve_diffnet(diff);
      std::vector<double> taus;
      for (int v = 1; v <= m; ++v)
        for (int u = v + 1; u <= m; ++u) taus.push_back(std::abs(sol.delta(u - 1, v - 1)));
      std::sort(taus.begin(), taus.end());
      taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
      std::vector<PairSet> supports;
      supports.push_back(threshold(sol.delta, 0.0));
      for (double tau : taus) supports.push_back(threshold(sol.delta, std::nextafter(tau, 2 * tau + 1.0)));
      eps_curves.emplace_back(diff.epsilon, roc_curve(supports, inst.true_support, universe));
    }

    auto& pts = point_lists[static_cast<size_t>(ti)];
    for (const RocPoint& p : kliep_roc.points) pts.emplace_back(m, seed, p.tpr, p.tnr, "kliep");
  });

  // Per m, pick the epsilon fraction whose curve has the highest mean AUC
  // across seeds, then score every seed against that shared choice.
  for (int m : config.m_grid) {
    size_t best_k = 0;
    double best_mean = -1.0;
    const size_t n_eps = config.roc_epsilon_fractions.size();
    for (size_t k = 0; k < n_eps; ++k) {
      double total = 0.0;
      int n = 0;
      for (size_t ti = 0; ti < tasks.size(); ++ti) {
        if (tasks[ti].m != m || seed_results[ti].skipped) continue;
        total += baseline_curves[ti][k].second.auc;
        ++n;
      }
      const double mean = n > 0 ? total / n : 0.0;
      if (mean > best_mean) {
        best_mean = mean;
        best_k = k;
      }
    }
    for (size_t ti = 0; ti < tasks.size(); ++ti) {
      if (tasks[ti].m != m || seed_results[ti].skipped) continue;
      const auto& [eps, curve] = baseline_curves[ti][best_k];
      seed_results[ti].auc_baseline = curve.auc;
      seed_results[ti].baseline_epsilon = eps;
      for (const RocPoint& p : curve.points)
        point_lists[ti].emplace_back(m, seed_results[ti].seed, p.tpr, p.tnr, "baseline");
    }
  }

  RocCompareResult out;
  out.seeds = std::move(seed_results);
  for (auto& pts : point_lists) {
    out.points.insert(out.points.end(), pts.begin(), pts.end());
  }

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    write_roc_csv(out, config.out_dir);
    try {
      write_roc_svg(out, config.out_dir + "/roc.svg");
    } catch (...) {
    }
    write_manifest(config, config.out_dir);
  }
  return out;
}

namespace {

std::vector<std::pair<PairIndex, double>> support_with_norms(const SolverReport& report) {
  std::vector<std::pair<PairIndex, double>> out;
  for (const PairIndex& e : report.support) {
    const int t = pair_index_flatten(e.u, e.v, report.theta_hat.m);
    out.emplace_back(e, report.theta_hat.block_norm(t));
  }
  return out;
}

}  // namespace

RealResult run_real(const RealConfig& config) {
  SampleMatrix p_data = load_csv(config.p_csv);
  SampleMatrix q_data = load_csv(config.q_csv);
  if (p_data.m() != q_data.m()) {
    throw std::runtime_error("run_real: P and Q files disagree on column count (" +
                             std::to_string(p_data.m()) + " vs " + std::to_string(q_data.m()) + ")");
  }

  RealResult out;
  auto run_path = [&](const SampleMatrix& p, const SampleMatrix& q) {
    KliepProblem problem = KliepProblem::make(p, q, config.fmap);
    PathConfig path = config.path;
    path.target_support_size = config.target_support_size;
    return solve_path(problem, path, config.solver);
  };

  std::vector<SolverReport> reports = run_path(p_data, q_data);
  if (!reports.empty()) {
    out.edges = support_with_norms(reports.back());
    out.lambda_stop = reports.back().lambda;
    out.converged = reports.back().converged;
  }

  if (config.swap_check) {
    std::vector<SolverReport> swapped = run_path(q_data, p_data);
    if (!swapped.empty()) out.swapped_edges = support_with_norms(swapped.back());
  }

  if (config.bootstrap_trials > 0) {
    BootstrapConfig boot;
    boot.trials = config.bootstrap_trials;
    boot.target_support_size = config.target_support_size;
    boot.path = config.path;
    boot.solver = config.solver;
    boot.seed = config.seed;
    out.bootstrap_summary = bootstrap(p_data, q_data, config.fmap, boot);
  }

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    std::ofstream csv(config.out_dir + "/change_edges.csv");
    csv << "u,v,group_norm\n";
    csv.precision(12);
    for (const auto& [e, norm] : out.edges) csv << e.u << ',' << e.v << ',' << norm << '\n';
    if (out.bootstrap_summary) {
      std::ofstream boot_csv(config.out_dir + "/bootstrap_counts.csv");
      boot_csv << "u,v,count\n";
      for (const auto& [e, count] : out.bootstrap_summary->edge_counts) {
        boot_csv << e.u << ',' << e.v << ',' << count << '\n';
      }
    }
    nlohmann::json manifest;
    manifest["version"] = version_string();
    manifest["p_csv"] = config.p_csv;
    manifest["q_csv"] = config.q_csv;
    manifest["target_support_size"] = config.target_support_size;
    manifest["seed"] = config.seed;
    manifest["lambda_stop"] = out.lambda_stop;
    std::ofstream mf(config.out_dir + "/manifest.json");
    mf << manifest.dump(2) << '\n';
  }
  return out;
}

void write_success_rate_csv(const SuccessRateTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "m,n_p,n_q,d,np_over_log_m,success_rate,std_error,trials,failures\n";
  out.precision(12);
  for (const CellResult& c : table.cells) {
    out << c.m << ',' << c.n_p << ',' << c.n_q << ',' << c.d << ',' << c.np_over_log_m << ','
        << c.success_rate << ',' << c.std_error << ',' << c.trials << ',' << c.failures << '\n';
  }
}

void write_roc_csv(const RocCompareResult& result, const std::string& dir) {
  {
    std::ofstream out(dir + "/roc_auc.csv");
    out << "m,seed,auc_kliep,auc_baseline,baseline_epsilon,skipped,skip_reason\n";
    out.precision(12);
    for (const RocSeedResult& s : result.seeds) {
      out << s.m << ',' << s.seed << ',' << s.auc_kliep << ',' << s.auc_baseline << ','
          << s.baseline_epsilon << ',' << (s.skipped ? 1 : 0) << ',' << s.skip_reason << '\n';
    }
  }
  {
    std::ofstream out(dir + "/roc_points.csv");
    out << "m,seed,tpr,tnr,method\n";
    out.precision(12);
    for (const auto& [m, seed, tpr, tnr, method] : result.points) {
      out << m << ',' << seed << ',' << tpr << ',' << tnr << ',' << method << '\n';
    }
  }
}

void write_manifest(const ExperimentConfig& config, const std::string& dir) {
  nlohmann::json j;
  j["version"] = version_string();
  j["kind"] = kind_name(config.kind);
  j["family"] = family_name(config.family);
  j["topology"] = topology_name(config.topology);
  j["connectivity"] = config.connectivity;
  j["m_grid"] = config.m_grid;
  j["np_grid"] = config.np_grid;
  j["nq_rule"] = {{"kind", static_cast<int>(config.nq_rule.kind)}, {"constant", config.nq_rule.constant}};
  j["d_rule"] = {{"kind", static_cast<int>(config.d_rule.kind)}, {"fixed", config.d_rule.fixed}};
  j["lambda_C"] = config.lambda_C;
  j["trials"] = config.trials;
  j["base_seed"] = config.base_seed;
  j["threads"] = config.threads;
  j["trunc_radius"] = config.trunc_radius;
  std::ofstream out(dir + "/manifest.json");
  if (!out) throw std::runtime_error("cannot open manifest in " + dir);
  out << j.dump(2) << '\n';
}

namespace {

struct SvgCanvas {
  std::ostringstream body;
  double width = 640, height = 480, margin = 50;

  double sx(double x01) const { return margin + x01 * (width - 2 * margin); }
  double sy(double y01) const { return height - margin - y01 * (height - 2 * margin); }

  void polyline(const std::vector<std::pair<double, double>>& pts01, const std::string& color) {
    body << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts01) body << sx(x) << ',' << sy(y) << ' ';
    body << "\"/>\n";
  }

  void text(double x01, double y01, const std::string& s) {
    body << "<text x=\"" << sx(x01) << "\" y=\"" << sy(y01) << "\" font-size=\"12\">" << s << "</text>\n";
  }

  void save(const std::string& path) {
    std::ofstream out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << sx(0) << "\" y=\"" << sy(1) << "\" width=\"" << sx(1) - sx(0) << "\" height=\""
        << sy(0) - sy(1) << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << body.str() << "</svg>\n";
  }
};

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void write_success_rate_svg(const SuccessRateTable& table, const std::string& path) {
  std::vector<int> ms;
  for (const CellResult& c : table.cells) {
    if (std::find(ms.begin(), ms.end(), c.m) == ms.end()) ms.push_back(c.m);
  }
  double xmax = 0;
  for (const CellResult& c : table.cells) xmax = std::max(xmax, c.np_over_log_m);
  if (xmax <= 0) return;

  SvgCanvas svg;
  for (size_t i = 0; i < ms.size(); ++i) {
    std::vector<std::pair<double, double>> pts;
    for (const CellResult& c : table.curve_for_m(ms[i])) pts.emplace_back(c.np_over_log_m / xmax, c.success_rate);
    svg.polyline(pts, kColors[i % 6]);
    svg.text(0.02, 0.95 - 0.05 * static_cast<double>(i), "m=" + std::to_string(ms[i]));
  }
  svg.text(0.4, -0.07, "n_p / log m");
  svg.text(-0.09, 0.5, "success");
  svg.save(path);
}

void write_roc_svg(const RocCompareResult& result, const std::string& path) {
  // Mean curve per method over seeds, plotted as raw point cloud polylines.
  SvgCanvas svg;
  std::map<std::string, std::vector<std::pair<double, double>>> by_method;
  for (const auto& [m, seed, tpr, tnr, method] : result.points) {
    (void)m;
    (void)seed;
    by_method[method].emplace_back(1.0 - tnr, tpr);
  }
  int i = 0;
  for (auto& [method, pts] : by_method) {
    std::sort(pts.begin(), pts.end());
    svg.polyline(pts, kColors[i % 6]);
    svg.text(0.6, 0.1 + 0.05 * i, method);
    ++i;
  }
  svg.text(0.4, -0.07, "1 - TNR");
  svg.text(-0.07, 0.5, "TPR");
  svg.save(path);
}

}  // namespace mnchange
