#include "lpstab/stability_lab.hpp"

#include <cmath>
#include <stdexcept>

#include "lpstab/rng.hpp"

namespace lpstab {

NeighborPair make_neighbor(const Dataset& S, int index, Sample z_prime) {
  if (index < 0 || index >= S.size()) {
    throw std::out_of_range("make_neighbor: index out of range");
  }
  if (z_prime.features.size() != S.dim) {
    throw std::invalid_argument("make_neighbor: replacement dimension");
  }
  NeighborPair pair;
  pair.base = S;
  pair.variant = S;
  pair.variant.samples[static_cast<std::size_t>(index)] = z_prime;
  pair.index = index;
  pair.replacement = std::move(z_prime);
  return pair;
}

StabilityReport stability_estimate(const LearningRule& rule,
                                   const LossModel& loss,
                                   const NeighborPair& pair,
                                   const std::vector<Sample>& candidates,
                                   std::uint64_t seed, double theory_bound) {
  if (candidates.empty()) {
    throw std::invalid_argument("stability_estimate: no candidates");
  }
  const Vector x_hat = rule(pair.base, seed);
  const Vector x_hat_prime = rule(pair.variant, seed);

  StabilityReport rep;
  rep.candidate_count = static_cast<int>(candidates.size());
  rep.pairs_evaluated = 1;
  rep.theory_bound = theory_bound;
  for (const auto& z : candidates) {
    const double gap =
        std::abs(loss.eval(x_hat, z).first - loss.eval(x_hat_prime, z).first);
    rep.sup_gap = std::max(rep.sup_gap, gap);
  }
  return rep;
}

RiskEstimate excess_risk_estimate(const LearningRule& rule,
                                  const SyntheticDistribution& dist, int n,
                                  int replicates, std::uint64_t seed) {
  if (replicates < 1) {
    throw std::invalid_argument("excess_risk_estimate: replicates >= 1");
  }
  std::vector<double> risks;
  risks.reserve(static_cast<std::size_t>(replicates));
  for (int m = 0; m < replicates; ++m) {
    const std::uint64_t rep_seed = mix_seed(seed, static_cast<std::uint64_t>(m));
    const Dataset S = dist.sample_dataset(n, rep_seed);
    const Vector x_hat = rule(S, rep_seed);
    risks.push_back(dist.population_risk(x_hat) - dist.population_min);
  }

  RiskEstimate est;
  est.replicates = replicates;
  est.n = n;
  double mean = 0.0;
  for (double r : risks) mean += r;
  mean /= static_cast<double>(replicates);
  est.mean = mean;
  if (replicates < 2) {
    est.has_stderr = false;
    return est;
  }
  double var = 0.0;
  for (double r : risks) var += (r - mean) * (r - mean);
  var /= static_cast<double>(replicates - 1);
  est.stderr_ = std::sqrt(var / static_cast<double>(replicates));
  return est;
}

PowerLawFit fit_rate(const std::vector<double>& xs,
                     const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("fit_rate: size mismatch");
  }
  std::vector<double> lx, ly;
  int excluded = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] > 0.0 && xs[i] > 0.0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    } else {
      ++excluded;
    }
  }
  if (lx.size() < 4) {
    throw std::invalid_argument("fit_rate: fewer than 4 usable points");
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  PowerLawFit fit;
  fit.excluded = excluded;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

}  // namespace lpstab
