#ifndef MNCHANGE_DIAGNOSTICS_HPP
#define MNCHANGE_DIAGNOSTICS_HPP

#include "mnchange/kliep.hpp"
#include "mnchange/optim.hpp"
#include "mnchange/samplers.hpp"

#include <map>

namespace mnchange {

struct RecoveryResult {
  bool exact = false;
  double tpr = 0.0;  // 1 by convention when truth is empty
  double tnr = 0.0;  // 1 by convention when truth fills the universe
};

RecoveryResult compare_support(const PairSet& estimated, const PairSet& truth, const PairSet& universe);

struct RocPoint {
  double tpr = 0.0;
  double tnr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // sorted by tnr
  double auc = 0.0;
  bool degenerate = false;  // truth empty or full: AUC undefined
};

// Trapezoid AUC over (1 - tnr, tpr), deduplicated and anchored at (0,0),(1,1).
RocCurve roc_curve(const std::vector<PairSet>& supports, const PairSet& truth, const PairSet& universe);

struct AssumptionReport {
  double lambda_min_SS = 0.0;
  bool lambda_min_defined = false;  // false when S is empty
  double incoherence = 0.0;         // max over t'' in S^c of entrywise-l1 of I_{t''S} I_SS^-1
  bool used_pseudo_inverse = false;
  double ratio_min = 0.0;  // empirical ratio range over the Q sample at theta
  double ratio_max = 0.0;
};

// Evaluates the sample Fisher information at the supplied theta (theta* for
// synthetic instances, theta_hat otherwise). The truth's ||Y||_1 here is the
// entrywise absolute sum, not the induced operator norm.
AssumptionReport assumption_report(const KliepProblem& problem, const ParameterVector& theta,
                                   const PairSet& S);

struct BootstrapSummary {
  int trials = 0;
  int failed_trials = 0;
  std::map<PairIndex, int> edge_counts;

  PairSet stable_edges(int min_count) const;
};

struct BootstrapConfig {
  int trials = 100;
  int target_support_size = 10;
  PathConfig path;
  SolverConfig solver;
  std::uint64_t seed = 1;
};

// Each trial resamples both datasets with replacement, runs the lambda path
// with the stop rule, and counts the final support's edges. Non-converged
// final reports count as failed trials and are excluded.
BootstrapSummary bootstrap(const SampleMatrix& p_data, const SampleMatrix& q_data,
                           const FeatureMap& fmap, const BootstrapConfig& config);

}  // namespace mnchange

#endif
