#ifndef LPSTAB_BASE_OPTIM_HPP
#define LPSTAB_BASE_OPTIM_HPP

#include <optional>
#include <string>
#include <vector>

#include "lpstab/geometry.hpp"
#include "lpstab/objective.hpp"

namespace lpstab {

enum class SolverMethod { PGD_BACKTRACKING, APGD_MONOTONE };

/// Declared convergence-rate parameters (C, gamma) of the base algorithm for
/// (L, p_hat1)-Hoelder smooth objectives; consumed by the restart schedule.
struct SolverSpec {
  SolverMethod method = SolverMethod::PGD_BACKTRACKING;
  double C = 1.0;       // rate constant, >= 1
  double gamma = 1.0;   // rate exponent, > 0
  double holder_exponent = 2.0;  // p_hat1 the method is rated for

  static SolverSpec pgd(double C = 1.0, double gamma = 1.0);
  static SolverSpec apgd(double C = 1.0, double gamma = 2.0);
};

struct SolveRequest {
  const Objective* objective = nullptr;
  Vector start;
  BallDomain ball;        // centered at start
  double target_gap = 1e-8;
  long budget = 100000;   // max gradient-oracle calls
  std::optional<std::string> trace_path;  // per-iteration CSV when set
};

struct SolveResult {
  Vector point;
  long oracle_calls = 0;
  double certified_gap = 0.0;  // Frank-Wolfe upper bound on suboptimality
  bool converged = false;
  std::vector<double> objective_trace;
};

// max over u in the ball of <grad f(x), x - u>; upper-bounds the
// suboptimality of convex f over the ball.
double frank_wolfe_gap(const Vector& grad, const Vector& x,
                       const BallDomain& ball);

SolveResult solve(const SolverSpec& spec, const SolveRequest& req);

struct RateFit {
  double gamma = 0.0;       // least-squares slope of log(gap) vs log(T)
  double residual = 0.0;
  bool conclusive = false;
  int points_used = 0;
};

// Runs the solver on each instance across the budget grid and fits the
// empirical rate exponent; reference gaps come from a 50x-budget solve.
RateFit empirical_rate_fit(const SolverSpec& spec,
                           const std::vector<SolveRequest>& instances,
                           const std::vector<long>& budgets);

}  // namespace lpstab

#endif  // LPSTAB_BASE_OPTIM_HPP
