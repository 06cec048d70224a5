#ifndef MNCHANGE_HARNESS_HPP
#define MNCHANGE_HARNESS_HPP

#include "mnchange/baseline.hpp"
#include "mnchange/diagnostics.hpp"
#include "mnchange/optim.hpp"
#include "mnchange/samplers.hpp"

#include <optional>
#include <string>

namespace mnchange {

enum class ExperimentKind { SuccessRate, NqCoupling, DSweep, NonGaussian, RocCompare, RealData, Bootstrap, Diagnose };

enum class ModelFamily { Gaussian, TruncatedGaussian, EightShaped };

enum class TopologyKind { Lattice4, RandomErdos };

struct NqRule {
  enum class Kind { Fixed, QuadraticInNp, LinearInNp, EqualNp };
  Kind kind = Kind::Fixed;
  double constant = 1000.0;  // Fixed: n_q; Quadratic/Linear: the multiplier

  int resolve(int n_p) const;
};

struct DRule {
  enum class Kind { Fixed, SqrtM };
  Kind kind = Kind::Fixed;
  int fixed = 4;

  int resolve(int m) const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SuccessRate;
  ModelFamily family = ModelFamily::Gaussian;
  TopologyKind topology = TopologyKind::Lattice4;
  double connectivity = 0.05;  // RandomErdos
  std::vector<int> m_grid;
  std::vector<int> np_grid;
  NqRule nq_rule;
  DRule d_rule;
  double lambda_C = 0.4;
  int trials = 50;
  std::uint64_t base_seed = 1;
  int threads = 1;
  std::string out_dir;  // empty: no files written

  // RocCompare specifics
  int roc_lambda_points = 40;
  std::vector<double> roc_epsilon_fractions = {0.01, 0.05, 0.1, 0.2, 0.4};

  // TruncatedGaussian
  double trunc_radius = 15.0;

  // EightShaped
  SliceConfig slice;
  double eight_theta0 = 1.0;
  double eight_theta1 = 5.0;

  void validate() const;  // throws std::invalid_argument on a bad config
};

struct CellResult {
  int m = 0;
  int n_p = 0;
  int n_q = 0;
  int d = 0;
  double np_over_log_m = 0.0;
  double success_rate = 0.0;
  double std_error = 0.0;
  int trials = 0;
  int failures = 0;  // non-converged solves
};

struct SuccessRateTable {
  std::vector<CellResult> cells;

  // Curves interpolated onto the shared n_p/log m axis; largest pairwise gap
  // between m-curves over the overlapping range.
  double max_alignment_gap() const;
  std::vector<CellResult> curve_for_m(int m) const;
};

// Covers SuccessRate, NqCoupling, DSweep, and NonGaussian: one cell per
// (m, n_p), lambda = C sqrt(log m / n_p), exact-recovery fraction per cell.
SuccessRateTable run_success_rate(const ExperimentConfig& config);

struct RocSeedResult {
  int m = 0;
  std::uint64_t seed = 0;
  double auc_kliep = 0.0;
  double auc_baseline = 0.0;
  double baseline_epsilon = 0.0;  // the epsilon that maximized baseline AUC
  bool skipped = false;           // degenerate truth
  std::string skip_reason;
};

struct RocCompareResult {
  std::vector<RocSeedResult> seeds;
  std::vector<std::tuple<int, std::uint64_t, double, double, std::string>> points;  // m, seed, tpr, tnr, method
};

RocCompareResult run_roc_compare(const ExperimentConfig& config);

struct RealConfig {
  std::string p_csv;
  std::string q_csv;
  FeatureMap fmap = FeatureMap::quadratic();
  int target_support_size = 10;
  PathConfig path;
  SolverConfig solver;
  int bootstrap_trials = 0;  // 0: skip bootstrap
  bool swap_check = false;
  std::uint64_t seed = 1;
  std::string out_dir;
};

struct RealResult {
  std::vector<std::pair<PairIndex, double>> edges;  // final support with group norms
  double lambda_stop = 0.0;
  bool converged = false;
  std::optional<BootstrapSummary> bootstrap_summary;
  std::vector<std::pair<PairIndex, double>> swapped_edges;
};

RealResult run_real(const RealConfig& config);

// Pairwise basis for the non-Gaussian runs: psi(xu, xv) = s^2/(1+s^2) with
// s = xu*xv, matching the coupling family the eight-shaped sampler uses.
FeatureMap bounded_interaction_feature();

// Per-trial seed; independent of every other cell and trial.
std::uint64_t trial_seed(std::uint64_t base, int m, int n_p, int n_q, int d, int trial);

// CSV/JSON/SVG emission. The manifest is always written last.
void write_success_rate_csv(const SuccessRateTable& table, const std::string& path);
void write_roc_csv(const RocCompareResult& result, const std::string& dir);
void write_manifest(const ExperimentConfig& config, const std::string& dir);
void write_success_rate_svg(const SuccessRateTable& table, const std::string& path);  // best-effort
void write_roc_svg(const RocCompareResult& result, const std::string& path);          // best-effort

std::string version_string();

}  // namespace mnchange

#endif
