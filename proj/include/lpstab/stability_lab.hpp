#ifndef LPSTAB_STABILITY_LAB_HPP
#define LPSTAB_STABILITY_LAB_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "lpstab/objectives.hpp"

namespace lpstab {

struct NeighborPair {
  Dataset base;
  Dataset variant;
  int index = 0;
  Sample replacement;
};

NeighborPair make_neighbor(const Dataset& S, int index, Sample z_prime);

// Deterministic learning rule: dataset + seed -> estimator.
using LearningRule = std::function<Vector(const Dataset&, std::uint64_t)>;

struct StabilityReport {
  double sup_gap = 0.0;  // lower estimate: max over the candidate set
  int candidate_count = 0;
  int pairs_evaluated = 0;
  double theory_bound = 0.0;
  bool all_runs_certified = true;
};

// Runs the rule on S and S' with the same seed and takes the max loss gap
// over the candidate samples.
StabilityReport stability_estimate(const LearningRule& rule,
                                   const LossModel& loss,
                                   const NeighborPair& pair,
                                   const std::vector<Sample>& candidates,
                                   std::uint64_t seed,
                                   double theory_bound = 0.0);

/// Synthetic distribution with exact population risk, used by the
/// excess-risk estimators; the adversarial families implement it.
struct SyntheticDistribution {
  std::function<Dataset(int n, std::uint64_t seed)> sample_dataset;
  std::function<double(const Vector&)> population_risk;
  double population_min = 0.0;  // over the evaluation ball
};

struct RiskEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int replicates = 0;
  int n = 0;
  bool has_stderr = true;
};

RiskEstimate excess_risk_estimate(const LearningRule& rule,
                                  const SyntheticDistribution& dist, int n,
                                  int replicates, std::uint64_t seed);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  int excluded = 0;  // non-positive measurements dropped
};

// OLS on (log x, log y); requires >= 4 usable points.
PowerLawFit fit_rate(const std::vector<double>& xs,
                     const std::vector<double>& ys);

}  // namespace lpstab

#endif  // LPSTAB_STABILITY_LAB_HPP
