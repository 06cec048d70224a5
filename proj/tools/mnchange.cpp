// Command-line front end: experiment subcommands over the mnchange library.

#include "mnchange/harness.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using mnchange::ExperimentConfig;
using mnchange::ExperimentKind;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  bool dry_run = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> trials;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool out_required = true) {
  cmd->add_option("--config", flags.config_path, "JSON config document");
  auto* out = cmd->add_option("--out", flags.out_dir, "Output directory for artifacts");
  if (out_required) out->required();
  cmd->add_flag("--dry-run", flags.dry_run, "Print the resolved config and exit");
  cmd->add_option("--seed", flags.seed, "Base seed override");
  cmd->add_option("--threads", flags.threads, "Worker thread override");
  cmd->add_option("--trials", flags.trials, "Trials-per-cell override");
}

void apply_json(ExperimentConfig& config, const nlohmann::json& j) {
  using mnchange::DRule;
  using mnchange::ModelFamily;
  using mnchange::NqRule;
  using mnchange::TopologyKind;

  if (j.contains("family")) {
    const std::string f = j["family"];
    if (f == "gaussian") config.family = ModelFamily::Gaussian;
    else if (f == "truncated-gaussian") config.family = ModelFamily::TruncatedGaussian;
    else if (f == "eight-shaped") config.family = ModelFamily::EightShaped;
    else throw std::invalid_argument("unknown family: " + f);
  }
  if (j.contains("topology")) {
    const std::string t = j["topology"];
    if (t == "lattice4") config.topology = TopologyKind::Lattice4;
    else if (t == "random") config.topology = TopologyKind::RandomErdos;
    else throw std::invalid_argument("unknown topology: " + t);
  }
  if (j.contains("connectivity")) config.connectivity = j["connectivity"];
  if (j.contains("m_grid")) config.m_grid = j["m_grid"].get<std::vector<int>>();
  if (j.contains("np_grid")) config.np_grid = j["np_grid"].get<std::vector<int>>();
  if (j.contains("nq_rule")) {
    const std::string r = j["nq_rule"];
    if (r == "fixed") config.nq_rule.kind = NqRule::Kind::Fixed;
    else if (r == "quadratic") config.nq_rule.kind = NqRule::Kind::QuadraticInNp;
    else if (r == "linear") config.nq_rule.kind = NqRule::Kind::LinearInNp;
    else if (r == "equal") config.nq_rule.kind = NqRule::Kind::EqualNp;
    else throw std::invalid_argument("unknown nq_rule: " + r);
  }
  if (j.contains("nq_constant")) config.nq_rule.constant = j["nq_constant"];
  if (j.contains("d")) {
    config.d_rule.kind = DRule::Kind::Fixed;
    config.d_rule.fixed = j["d"];
  }
  if (j.contains("d_rule") && j["d_rule"] == "sqrt-m") config.d_rule.kind = DRule::Kind::SqrtM;
  if (j.contains("lambda_C")) config.lambda_C = j["lambda_C"];
  if (j.contains("trials")) config.trials = j["trials"];
  if (j.contains("base_seed")) config.base_seed = j["base_seed"];
  if (j.contains("threads")) config.threads = j["threads"];
  if (j.contains("trunc_radius")) config.trunc_radius = j["trunc_radius"];
  if (j.contains("roc_lambda_points")) config.roc_lambda_points = j["roc_lambda_points"];
  if (j.contains("roc_epsilon_fractions")) {
    config.roc_epsilon_fractions = j["roc_epsilon_fractions"].get<std::vector<double>>();
  }
  if (j.contains("slice_burn_in")) config.slice.burn_in = j["slice_burn_in"];
  if (j.contains("slice_thin")) config.slice.thin = j["slice_thin"];
}

ExperimentConfig resolve_config(ExperimentKind kind, const CommonFlags& flags) {
  ExperimentConfig config;
  config.kind = kind;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + flags.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config parse error: " + std::string(e.what()));
    }
    apply_json(config, j);
  }
  if (flags.seed) config.base_seed = *flags.seed;
  if (flags.threads) config.threads = *flags.threads;
  if (flags.trials) config.trials = *flags.trials;
  config.out_dir = flags.dry_run ? "" : flags.out_dir;
  config.validate();
  return config;
}

void print_resolved(const ExperimentConfig& config) {
  nlohmann::json j;
  j["m_grid"] = config.m_grid;
  j["np_grid"] = config.np_grid;
  j["trials"] = config.trials;
  j["lambda_C"] = config.lambda_C;
  j["base_seed"] = config.base_seed;
  j["threads"] = config.threads;
  std::cout << "resolved config: " << j.dump(2) << "\n";
}

int run_experiment(ExperimentKind kind, const CommonFlags& flags) {
  ExperimentConfig config = resolve_config(kind, flags);
  if (flags.dry_run) {
    print_resolved(config);
    return kExitOk;
  }
  if (kind == ExperimentKind::RocCompare) {
    mnchange::RocCompareResult result = mnchange::run_roc_compare(config);
    double mean_k = 0, mean_b = 0;
    int counted = 0;
    for (const auto& s : result.seeds) {
      if (s.skipped) continue;
      mean_k += s.auc_kliep;
      mean_b += s.auc_baseline;
      ++counted;
    }
    if (counted) {
      std::cout << "mean AUC kliep=" << mean_k / counted << " baseline=" << mean_b / counted << "\n";
    }
  } else {
    mnchange::SuccessRateTable table = mnchange::run_success_rate(config);
    std::cout << "cells=" << table.cells.size() << " max_alignment_gap=" << table.max_alignment_gap() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse change detection between pairwise Markov networks"};
  app.require_subcommand(1);

  CommonFlags success_flags, nq_flags, d_flags, nongauss_flags, roc_flags, boot_flags, diag_flags;
  auto* success = app.add_subcommand("success-rate", "Exact-recovery rate over an (m, n_p) grid");
  add_common(success, success_flags);
  auto* nq = app.add_subcommand("nq-coupling", "Success rate under an n_q(n_p) coupling rule");
  add_common(nq, nq_flags);
  auto* dsweep = app.add_subcommand("d-sweep", "Success rate while varying the changed-edge count");
  add_common(dsweep, d_flags);
  auto* nongauss = app.add_subcommand("non-gaussian", "Slice-sampled non-Gaussian lattice experiment");
  add_common(nongauss, nongauss_flags);
  auto* roc = app.add_subcommand("roc", "ROC comparison against the covariance baseline");
  add_common(roc, roc_flags);

  CommonFlags real_flags;
  std::string real_p, real_q;
  int real_target = 10;
  int real_bootstrap = 0;
  bool real_swap = false;
  auto* real = app.add_subcommand("real", "Two-sample change analysis on CSV data");
  real->add_option("--p", real_p, "P sample CSV (headerless)")->required();
  real->add_option("--q", real_q, "Q sample CSV (headerless)")->required();
  real->add_option("--target-support", real_target, "Reduce lambda until |S| exceeds this");
  real->add_option("--bootstrap", real_bootstrap, "Bootstrap trial count (0 = off)");
  real->add_flag("--swap", real_swap, "Also run with P and Q swapped");
  add_common(real, real_flags);

  auto* boot = app.add_subcommand("bootstrap", "Bootstrap stability on synthetic data");
  add_common(boot, boot_flags);
  auto* diag = app.add_subcommand("diagnose", "Assumption diagnostics on a synthetic instance");
  add_common(diag, diag_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return kExitConfigError;
  }

  try {
    if (success->parsed()) return run_experiment(ExperimentKind::SuccessRate, success_flags);
    if (nq->parsed()) return run_experiment(ExperimentKind::NqCoupling, nq_flags);
    if (dsweep->parsed()) return run_experiment(ExperimentKind::DSweep, d_flags);
    if (nongauss->parsed()) {
      ExperimentConfig config = resolve_config(ExperimentKind::NonGaussian, nongauss_flags);
      config.family = mnchange::ModelFamily::EightShaped;
      if (nongauss_flags.dry_run) {
        print_resolved(config);
        return kExitOk;
      }
      mnchange::SuccessRateTable table = mnchange::run_success_rate(config);
      std::cout << "cells=" << table.cells.size() << " max_alignment_gap=" << table.max_alignment_gap() << "\n";
      return kExitOk;
    }
    if (roc->parsed()) return run_experiment(ExperimentKind::RocCompare, roc_flags);
    if (real->parsed()) {
      mnchange::RealConfig config;
      config.p_csv = real_p;
      config.q_csv = real_q;
      config.target_support_size = real_target;
      config.bootstrap_trials = real_bootstrap;
      config.swap_check = real_swap;
      if (real_flags.seed) config.seed = *real_flags.seed;
      config.out_dir = real_flags.dry_run ? "" : real_flags.out_dir;
      if (real_flags.dry_run) {
        std::cout << "resolved: real p=" << real_p << " q=" << real_q << " target=" << real_target << "\n";
        return kExitOk;
      }
      mnchange::RealResult result = mnchange::run_real(config);
      std::cout << "change edges: " << result.edges.size() << " (lambda_stop=" << result.lambda_stop << ")\n";
      for (const auto& [e, norm] : result.edges) {
        std::cout << "  (" << e.u << "," << e.v << ") norm=" << norm << "\n";
      }
      return kExitOk;
    }
    if (boot->parsed() || diag->parsed()) {
      // Synthetic bootstrap/diagnose: generate one Gaussian instance per the
      // config, then run the corresponding diagnostics.
      const CommonFlags& flags = boot->parsed() ? boot_flags : diag_flags;
      ExperimentConfig config = resolve_config(
          boot->parsed() ? ExperimentKind::Bootstrap : ExperimentKind::Diagnose, flags);
      if (flags.dry_run) {
        print_resolved(config);
        return kExitOk;
      }
      const int m = config.m_grid.front();
      const int n_p = config.np_grid.front();
      const int n_q = config.nq_rule.resolve(n_p);
      const int d = config.d_rule.resolve(m);
      mnchange::Rng rng(mnchange::trial_seed(config.base_seed, m, n_p, n_q, d, 0));
      mnchange::GraphSpec graph =
          config.topology == mnchange::TopologyKind::Lattice4
              ? mnchange::build_lattice(static_cast<int>(std::lround(std::sqrt(double(m)))))
              : mnchange::build_random(m, config.connectivity, rng);
      mnchange::ChangeInstance inst = mnchange::make_gaussian_change(graph, d, rng);
      mnchange::SampleMatrix p_data = mnchange::sample_gaussian(inst.p_spec, n_p, rng);
      mnchange::SampleMatrix q_data = mnchange::sample_gaussian(inst.q_spec, n_q, rng);
      std::filesystem::create_directories(config.out_dir);
      if (boot->parsed()) {
        mnchange::BootstrapConfig bc;
        bc.trials = config.trials;
        bc.target_support_size = d;
        bc.seed = config.base_seed;
        mnchange::BootstrapSummary summary =
            mnchange::bootstrap(p_data, q_data, mnchange::FeatureMap::quadratic(), bc);
        std::ofstream out(config.out_dir + "/bootstrap_counts.csv");
        out << "u,v,count,is_true_edge\n";
        for (const auto& [e, count] : summary.edge_counts) {
          out << e.u << ',' << e.v << ',' << count << ',' << inst.true_support.count(e) << '\n';
        }
        std::cout << "bootstrap trials=" << summary.trials << " failed=" << summary.failed_trials << "\n";
      } else {
        mnchange::KliepProblem problem =
            mnchange::KliepProblem::make(p_data, q_data, mnchange::FeatureMap::quadratic());
        mnchange::ParameterVector theta_star(m, 1);
        for (const mnchange::PairIndex& e : inst.true_support) {
          theta_star.block(mnchange::pair_index_flatten(e.u, e.v, m))(0) = 0.8;
        }
        mnchange::AssumptionReport report =
            mnchange::assumption_report(problem, theta_star, inst.true_support);
        nlohmann::json j;
        j["lambda_min_SS"] = report.lambda_min_SS;
        j["incoherence"] = report.incoherence;
        j["ratio_min"] = report.ratio_min;
        j["ratio_max"] = report.ratio_max;
        j["used_pseudo_inverse"] = report.used_pseudo_inverse;
        std::ofstream out(config.out_dir + "/assumption_report.json");
        out << j.dump(2) << '\n';
        std::cout << "lambda_min_SS=" << report.lambda_min_SS << " incoherence=" << report.incoherence << "\n";
      }
      mnchange::write_manifest(config, config.out_dir);
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitOk;
}
