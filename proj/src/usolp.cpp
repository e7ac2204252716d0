#include "lpstab/usolp.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace lpstab {

namespace {

double log2_pow(double base_log2_arg, double gamma) {
  // log2(arg)^gamma, guarded for arguments <= 1
  const double l = std::log2(base_log2_arg);
  return l > 0.0 ? std::pow(l, gamma) : 0.0;
}

}  // namespace

RestartSchedule compute_schedule(const UsolpConfig& cfg) {
  const double p = cfg.geometry.effective_p;
  if (p <= 1.0) throw std::invalid_argument("compute_schedule: p <= 1");
  if (cfg.T < 1 || cfg.R <= 0.0 || cfg.L <= 0.0) {
    throw std::invalid_argument("compute_schedule: T, R, L must be positive");
  }
  const double cb = cbar(p);
  const double p1 = cfg.geometry.p_hat1;
  const double p2 = cfg.geometry.p_hat2;
  const double C = cfg.solver.C;
  const double gamma = cfg.solver.gamma;
  const double T = static_cast<double>(cfg.T);
  const double R = cfg.R;
  const double L = cfg.L;

  RestartSchedule sched;
  double r_arg = 0.0;
  if (p >= 2.0) {
    sched.branch = UsolpBranch::P_GE_2;
    sched.alpha = std::pow(4.0 * C / T, gamma) * p * std::pow(cb, 2.0 / p - 1.0) *
                  L * std::pow(R, 2.0 - p);
    r_arg = std::pow(T / C, gamma) * std::pow(cb, -2.0 / p);
    sched.alpha_proof = std::pow(C / T, gamma) * p * L *
                        std::pow(cb, 2.0 / p - 1.0) * std::pow(R, 2.0 - p) *
                        log2_pow(r_arg, gamma);
    sched.alpha_precondition_ok =
        sched.alpha <= L * std::pow(R, 2.0 - p) / ((p - 1.0) * cb) * (1.0 + 1e-12);
  } else {
    sched.branch = UsolpBranch::P_IN_1_2;
    sched.alpha = std::pow(C / T, gamma) * (4.0 / (p - 1.0)) *
                  std::pow(cb, -2.0 / p) * L * std::pow(R, 2.0 - p);
    r_arg = std::pow(R, p - 2.0) * std::pow(T / C, gamma) / (2.0 * cb);
    sched.alpha_proof =
        sched.alpha * log2_pow(std::pow(T / C, gamma) / (2.0 * p * cb), gamma);
    sched.alpha_precondition_ok =
        sched.alpha <= p * std::pow(2.0, 1.0 - p) * L * std::pow(R, 2.0 - p) *
                           (1.0 + 1e-12);
  }

  double alpha = sched.alpha;
  double eps_target = -1.0;
  int r = 0;
  if (cfg.mode == UsolpMode::Algorithm1) {
    r = static_cast<int>(std::ceil(std::log2(r_arg)));
    if (r <= 0) {
      // name the minimal admissible T for the branch
      double t_min;
      if (p >= 2.0) {
        t_min = C * std::pow(cb, 2.0 / (p * gamma));
      } else {
        t_min = C * std::pow(2.0 * cb * std::pow(R, 2.0 - p), 1.0 / gamma);
      }
      throw std::invalid_argument(
          "compute_schedule: T too small for a positive stage count; need T > " +
          std::to_string(t_min));
    }
  } else {
    if (cfg.n < 1) {
      throw std::invalid_argument("compute_schedule: StatOptimal needs n >= 1");
    }
    const double nu = p2;
    const Regularizer unit = Regularizer::make(cfg.geometry, cfg.x0, 1.0);
    const BallDomain dom{cfg.x0, R, cfg.geometry};
    const double D = regularizer_range_D(dom, unit);
    const double G = lipschitz_from_smoothness(L, R);
    alpha = alpha_star_theory(nu, cfg.n, D, G);
    sched.alpha = alpha;
    sched.alpha_proof = alpha;
    eps_target = required_accuracy_theory(nu, cfg.n, D, G);
    r = 64;  // bounded below by the halving loop hitting eps_target
  }
  if (cfg.proof_mode) alpha = sched.alpha_proof;
  r = std::min(r, 64);

  sched.eps0 = L * std::pow(R, p1) / p1;
  double eps = sched.eps0;
  double radius = R;
  for (int i = 1; i <= r; ++i) {
    eps /= 2.0;
    sched.stages.push_back({eps, radius});
    double next = std::pow(p2 * std::pow(R, 2.0 - p1) * eps / (alpha * (p1 - 1.0)),
                           1.0 / p2);
    if (next > radius) next = radius;  // a larger ball never helps
    radius = next;
    if (eps_target >= 0.0 && eps <= eps_target) break;
  }
  sched.r = static_cast<int>(sched.stages.size());
  if (sched.r < 1) throw std::logic_error("compute_schedule: empty schedule");
  return sched;
}

UsolpResult run_usolp(const UsolpConfig& cfg, const Dataset& data,
                      const LossModel& loss) {
  RestartSchedule sched = compute_schedule(cfg);
  const double alpha = cfg.proof_mode ? sched.alpha_proof : sched.alpha;

  const BallDomain domain{cfg.x0, cfg.R, cfg.geometry};
  const Regularizer reg = Regularizer::make(cfg.geometry, cfg.x0, alpha);
  const RegularizedErm erm(data, loss, domain, reg, cfg.L);

  UsolpResult result;
  result.schedule = sched;
  result.alpha_used = alpha;

  Vector x = cfg.x0;
  for (int i = 0; i < sched.r; ++i) {
    const RestartStage& st = sched.stages[static_cast<std::size_t>(i)];
    SolveRequest req;
    req.objective = &erm;
    req.start = x;
    req.ball = BallDomain{x, st.radius, cfg.geometry};
    req.target_gap = st.eps_hat;
    req.budget = cfg.stage_budget;
    const SolveResult sr = solve(cfg.solver, req);

    UsolpStageRecord rec;
    rec.stage = i + 1;
    rec.eps_hat = st.eps_hat;
    rec.radius = st.radius;
    rec.oracle_calls = sr.oracle_calls;
    rec.certified_gap = sr.certified_gap;
    rec.certified = sr.converged;
    result.trace.stages.push_back(rec);
    result.trace.total_calls += sr.oracle_calls;
    if (!sr.converged) result.trace.fully_certified = false;
    x = sr.point;
  }
  result.point = x;
  result.trace.final_point = x;
  return result;
}

double alpha_star_theory(double nu, int n, double D, double G) {
  if (nu < 2.0 || n < 1 || D <= 0.0 || G <= 0.0) {
    throw std::invalid_argument("alpha_star_theory: invalid inputs");
  }
  return std::pow(3.0 / (nu - 1.0), 1.0 - 1.0 / nu) *
         std::pow(2.0, 2.0 / nu - 1.0) * std::pow(nu, 1.0 / (nu - 1.0)) *
         std::pow(static_cast<double>(n), -1.0 / nu) * std::pow(D, 1.0 - nu) * G;
}

double required_accuracy_theory(double nu, int n, double D, double G) {
  if (nu < 2.0 || n < 1 || D <= 0.0 || G < 0.0) {
    throw std::invalid_argument("required_accuracy_theory: invalid inputs");
  }
  return 6.0 * G * D / std::pow(static_cast<double>(n), 1.0 + 1.0 / nu);
}

double stability_bound_theory(double nu, int n, double alpha, double G) {
  if (alpha <= 0.0) throw std::invalid_argument("stability_bound_theory: alpha <= 0");
  return 3.0 * std::pow(2.0 * nu * std::pow(G, nu) /
                            (static_cast<double>(n) * alpha),
                        1.0 / (nu - 1.0));
}

void write_run_manifest(std::ostream& out, const UsolpConfig& cfg,
                        const RestartSchedule& sched, int d, int n,
                        std::uint64_t seed) {
  nlohmann::json j;
  j["p"] = cfg.geometry.p;
  j["effective_p"] = cfg.geometry.effective_p;
  j["remapped"] = cfg.geometry.remapped;
  j["d"] = d;
  j["n"] = n;
  j["R"] = cfg.R;
  j["T"] = cfg.T;
  j["C"] = cfg.solver.C;
  j["gamma"] = cfg.solver.gamma;
  j["alpha"] = sched.alpha;
  j["r"] = sched.r;
  j["seed"] = seed;
  j["mode"] = cfg.mode == UsolpMode::Algorithm1 ? "algorithm1" : "stat_optimal";
  out << j.dump(2) << "\n";
}

void write_trace_csv(std::ostream& out, const UsolpTrace& trace) {
  out << "stage,eps_hat,radius,oracle_calls,certified_gap\n";
  for (const auto& s : trace.stages) {
    out << s.stage << "," << s.eps_hat << "," << s.radius << ","
        << s.oracle_calls << "," << s.certified_gap << "\n";
  }
}

}  // namespace lpstab
