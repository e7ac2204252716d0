#include "lpstab/base_optim.hpp"

#include <cmath>
#include <limits>
#include <fstream>
#include <stdexcept>

namespace lpstab {

SolverSpec SolverSpec::pgd(double C, double gamma) {
  return {SolverMethod::PGD_BACKTRACKING, C, gamma, 2.0};
}

SolverSpec SolverSpec::apgd(double C, double gamma) {
  return {SolverMethod::APGD_MONOTONE, C, gamma, 2.0};
}

double frank_wolfe_gap(const Vector& grad, const Vector& x,
                       const BallDomain& ball) {
  const double ps = dual_exponent(ball.geometry.effective_p);
  return grad.dot(x - ball.center) + ball.radius * pnorm(grad, ps);
}

namespace {

void validate(const SolveRequest& req) {
  if (req.objective == nullptr) throw std::invalid_argument("solve: no objective");
  if (req.target_gap <= 0.0) throw std::invalid_argument("solve: eps <= 0");
  if (!req.ball.contains(req.start)) {
    throw std::invalid_argument("solve: start outside the ball");
  }
}

struct TraceWriter {
  std::ofstream out;
  explicit TraceWriter(const std::optional<std::string>& path) {
    if (path) {
      out.open(*path);
      out << "iteration,value,gap\n";
    }
  }
  void row(long it, double value, double gap) {
    if (out.is_open()) out << it << "," << value << "," << gap << "\n";
  }
};

// Backtracking step from base point y with gradient g: halves eta until the
// quadratic descent condition holds, growing eta 1.2x on entry.
struct LineSearch {
  double eta;
  explicit LineSearch(double L) : eta(1.0 / std::max(L, 1e-12)) {}

  Vector step(const Objective& f, const BallDomain& ball, const Vector& y,
              double fy, const Vector& g, long& oracle_calls, long budget) {
    eta *= 1.2;
    for (int k = 0; k < 60; ++k) {
      Vector cand = project_ball(y - eta * g, ball);
      const double fc = f.value(cand);
      if (!std::isfinite(fc)) {
        throw std::runtime_error("solve: non-finite objective value");
      }
      const Vector d = cand - y;
      // epsilon slack keeps the test meaningful when the true decrease sits
      // below the rounding noise of the objective evaluation
      const double slack = 10.0 * std::numeric_limits<double>::epsilon() *
                           std::max(1.0, std::abs(fy));
      if (fc <= fy + g.dot(d) + d.squaredNorm() / (2.0 * eta) + slack) {
        return cand;
      }
      eta *= 0.5;
      if (oracle_calls >= budget) return cand;
    }
    return project_ball(y - eta * g, ball);
  }
};

SolveResult solve_pgd(const SolveRequest& req) {
  const Objective& f = *req.objective;
  TraceWriter trace(req.trace_path);
  LineSearch ls(f.smoothness());

  SolveResult res;
  Vector x = req.start;
  long calls = 0;
  double fx = f.value(x);
  while (calls < req.budget) {
    const Vector g = f.gradient(x);
    ++calls;
    const double gap = frank_wolfe_gap(g, x, req.ball);
    res.objective_trace.push_back(fx);
    trace.row(calls, fx, gap);
    res.point = x;
    res.certified_gap = gap;
    if (gap <= req.target_gap) {
      res.converged = true;
      break;
    }
    x = ls.step(f, req.ball, x, fx, g, calls, req.budget);
    fx = f.value(x);
  }
  res.oracle_calls = calls;
  if (res.point.size() == 0) {
    res.point = x;
    res.certified_gap = frank_wolfe_gap(f.gradient(x), x, req.ball);
  }
  return res;
}

SolveResult solve_apgd(const SolveRequest& req) {
  const Objective& f = *req.objective;
  TraceWriter trace(req.trace_path);
  LineSearch ls(f.smoothness());

  SolveResult res;
  Vector x = req.start;
  Vector x_prev = x;
  double theta = 1.0;
  double fx = f.value(x);
  double best_f = fx;
  long calls = 0;
  while (calls < req.budget) {
    Vector gx = f.gradient(x);
    ++calls;
    const double gap = frank_wolfe_gap(gx, x, req.ball);
    // the reported trace is the running best, which keeps it monotone even
    // when late iterations dither at the floating-point floor
    best_f = std::min(best_f, fx);
    res.objective_trace.push_back(best_f);
    trace.row(calls, best_f, gap);
    res.point = x;
    res.certified_gap = gap;
    if (gap <= req.target_gap) {
      res.converged = true;
      break;
    }
    const double theta_next =
        0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    const double momentum = (theta - 1.0) / theta_next;
    Vector y = project_ball(x + momentum * (x - x_prev), req.ball);
    const double fy = f.value(y);
    const Vector gy = f.gradient(y);
    ++calls;
    Vector cand = ls.step(f, req.ball, y, fy, gy, calls, req.budget);
    double fc = f.value(cand);
    if (fc > fx) {
      // function-value restart: drop momentum, take a plain projected step
      theta = 1.0;
      cand = ls.step(f, req.ball, x, fx, gx, calls, req.budget);
      fc = f.value(cand);
    } else {
      theta = theta_next;
    }
    x_prev = x;
    x = cand;
    fx = fc;
  }
  res.oracle_calls = calls;
  if (res.point.size() == 0) {
    res.point = x;
    res.certified_gap = frank_wolfe_gap(f.gradient(x), x, req.ball);
  }
  return res;
}

}  // namespace

SolveResult solve(const SolverSpec& spec, const SolveRequest& req) {
  validate(req);
  switch (spec.method) {
    case SolverMethod::PGD_BACKTRACKING:
      return solve_pgd(req);
    case SolverMethod::APGD_MONOTONE:
      return solve_apgd(req);
  }
  throw std::logic_error("solve: unknown method");
}

RateFit empirical_rate_fit(const SolverSpec& spec,
                           const std::vector<SolveRequest>& instances,
                           const std::vector<long>& budgets) {
  if (budgets.size() < 4) {
    throw std::invalid_argument("empirical_rate_fit: need >= 4 budgets");
  }
  long bmin = budgets.front(), bmax = budgets.front();
  for (long b : budgets) {
    bmin = std::min(bmin, b);
    bmax = std::max(bmax, b);
  }
  if (bmax < 10 * bmin) {
    throw std::invalid_argument("empirical_rate_fit: budgets span < 1 decade");
  }

  std::vector<double> xs, ys;
  for (const auto& inst : instances) {
    SolveRequest ref = inst;
    ref.budget = bmax * 50;
    ref.target_gap = 1e-13;
    ref.trace_path.reset();
    const SolveResult ref_res = solve(spec, ref);
    const double f_ref = inst.objective->value(ref_res.point);
    for (long b : budgets) {
      SolveRequest r = inst;
      r.budget = b;
      r.target_gap = 1e-15;  // budget-bound run
      r.trace_path.reset();
      const SolveResult res = solve(spec, r);
      const double gap = inst.objective->value(res.point) - f_ref;
      if (gap > 1e-13) {
        xs.push_back(std::log(static_cast<double>(res.oracle_calls)));
        ys.push_back(std::log(gap));
      }
    }
  }

  RateFit fit;
  fit.points_used = static_cast<int>(xs.size());
  if (xs.size() < 3) {
    fit.conclusive = false;
    return fit;
  }
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) {
    fit.conclusive = false;
    return fit;
  }
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    rss += e * e;
  }
  fit.gamma = -slope;
  fit.residual = std::sqrt(rss / n);
  fit.conclusive = true;
  return fit;
}

}  // namespace lpstab
