#include "mnchange/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace mnchange {

RecoveryResult compare_support(const PairSet& estimated, const PairSet& truth, const PairSet& universe) {
  RecoveryResult out;
  int true_pos = 0;
  for (const PairIndex& e : truth) true_pos += estimated.count(e) ? 1 : 0;
  int false_pos = 0;
  for (const PairIndex& e : estimated) false_pos += truth.count(e) ? 0 : 1;
  const int negatives = static_cast<int>(universe.size() - truth.size());

  out.tpr = truth.empty() ? 1.0 : static_cast<double>(true_pos) / static_cast<double>(truth.size());
  out.tnr = negatives == 0 ? 1.0 : static_cast<double>(negatives - false_pos) / negatives;
  out.exact = (estimated == truth);
  return out;
}

RocCurve roc_curve(const std::vector<PairSet>& supports, const PairSet& truth, const PairSet& universe) {
  RocCurve out;
  if (truth.empty() || truth.size() == universe.size()) {
    out.degenerate = true;
    return out;
  }
  std::vector<std::pair<double, double>> fpr_tpr;  // (1 - tnr, tpr)
  fpr_tpr.emplace_back(0.0, 0.0);
  fpr_tpr.emplace_back(1.0, 1.0);
  for (const PairSet& support : supports) {
    RecoveryResult r = compare_support(support, truth, universe);
    fpr_tpr.emplace_back(1.0 - r.tnr, r.tpr);
    out.points.push_back({r.tpr, r.tnr});
  }
  std::sort(fpr_tpr.begin(), fpr_tpr.end());
  fpr_tpr.erase(std::unique(fpr_tpr.begin(), fpr_tpr.end()), fpr_tpr.end());
  // Keep only the upper envelope per fpr value (best tpr), so dominated
  // operating points cannot move the curve.
  std::vector<std::pair<double, double>> envelope;
  for (const auto& pt : fpr_tpr) {
    if (!envelope.empty() && envelope.back().first == pt.first) {
      envelope.back().second = std::max(envelope.back().second, pt.second);
    } else {
      envelope.push_back(pt);
    }
  }
  for (size_t i = 1; i < envelope.size(); ++i) {
    envelope[i].second = std::max(envelope[i].second, envelope[i - 1].second);
  }
  double auc = 0.0;
  for (size_t i = 1; i < envelope.size(); ++i) {
    auc += 0.5 * (envelope[i].second + envelope[i - 1].second) * (envelope[i].first - envelope[i - 1].first);
  }
  out.auc = auc;
  std::sort(out.points.begin(), out.points.end(),
            [](const RocPoint& a, const RocPoint& b) { return a.tnr < b.tnr; });
  return out;
}

AssumptionReport assumption_report(const KliepProblem& problem, const ParameterVector& theta,
                                   const PairSet& S) {
  AssumptionReport out;
  FisherInfo info = hessian(problem, theta);

  Vector g = problem.q_features.features * theta.flat;
  const double log_norm = log_sum_exp(g) - std::log(static_cast<double>(problem.q_features.n()));
  Vector ratios = (g.array() - log_norm).exp();
  out.ratio_min = ratios.minCoeff();
  out.ratio_max = ratios.maxCoeff();

  if (S.empty()) {
    out.lambda_min_defined = false;
    out.incoherence = 0.0;
    return out;
  }

  std::vector<PairIndex> s_list(S.begin(), S.end());
  Matrix i_ss = submatrix(info, s_list, s_list);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(i_ss);
  out.lambda_min_SS = eig.eigenvalues().minCoeff();
  out.lambda_min_defined = true;

  Matrix i_ss_inv;
  const double cond_floor = 1e-10 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (out.lambda_min_SS > cond_floor) {
    i_ss_inv = i_ss.inverse();
  } else {
    i_ss_inv = i_ss.completeOrthogonalDecomposition().pseudoInverse();
    out.used_pseudo_inverse = true;
  }

  double worst = 0.0;
  for (const PairIndex& t : all_pairs(problem.m())) {
    if (S.count(t)) continue;
    Matrix i_ts = submatrix(info, {t}, s_list);
    worst = std::max(worst, (i_ts * i_ss_inv).cwiseAbs().sum());
  }
  out.incoherence = worst;
  return out;
}

PairSet BootstrapSummary::stable_edges(int min_count) const {
  PairSet out;
  for (const auto& [edge, count] : edge_counts) {
    if (count >= min_count) out.insert(edge);
  }
  return out;
}

BootstrapSummary bootstrap(const SampleMatrix& p_data, const SampleMatrix& q_data,
                           const FeatureMap& fmap, const BootstrapConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("bootstrap: need trials >= 1");
  BootstrapSummary summary;
  summary.trials = config.trials;

  for (int trial = 0; trial < config.trials; ++trial) {
    Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(trial)));
    auto resample = [&rng](const SampleMatrix& data) {
      std::uniform_int_distribution<int> pick(0, data.n() - 1);
      SampleMatrix out;
      out.values.resize(data.n(), data.m());
      for (int i = 0; i < data.n(); ++i) out.values.row(i) = data.values.row(pick(rng));
      return out;
    };
    SampleMatrix p_boot = resample(p_data);
    SampleMatrix q_boot = resample(q_data);

    KliepProblem problem = KliepProblem::make(p_boot, q_boot, fmap);
    PathConfig path = config.path;
    path.target_support_size = config.target_support_size;
    std::vector<SolverReport> reports = solve_path(problem, path, config.solver);
    if (reports.empty() || !reports.back().converged) {
      ++summary.failed_trials;
      continue;
    }
    // Diagonal groups are node-potential changes, not edges of the change
    // graph; only off-diagonal pairs are counted.
    for (const PairIndex& e : reports.back().support)
      if (e.u != e.v) ++summary.edge_counts[e];
  }
  return summary;
}

}  // namespace mnchange
