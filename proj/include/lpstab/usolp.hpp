#ifndef LPSTAB_USOLP_HPP
#define LPSTAB_USOLP_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lpstab/base_optim.hpp"
#include "lpstab/geometry.hpp"
#include "lpstab/objectives.hpp"

namespace lpstab {

enum class UsolpMode {
  Algorithm1,  // T-parameterized alpha and stage count from the two branches
  StatOptimal  // theory-optimal alpha; stages run until the accuracy target
};

struct UsolpConfig {
  PNormGeometry geometry;
  double R = 1.0;        // initial radius estimate
  long T = 1000;         // total gradient-call target (Algorithm1 mode)
  SolverSpec solver;
  double L = 1.0;        // smoothness of the loss w.r.t. ||.||_p
  Vector x0;
  UsolpMode mode = UsolpMode::Algorithm1;
  bool proof_mode = false;   // include the proof's log factor in alpha (p >= 2)
  long stage_budget = 100000;
  int n = 0;  // sample count; required for StatOptimal mode
};

enum class UsolpBranch { P_GE_2, P_IN_1_2 };

struct RestartStage {
  double eps_hat = 0.0;   // target accuracy of the stage
  double radius = 0.0;    // ball radius the stage starts from (R_{i-1})
};

struct RestartSchedule {
  double alpha = 0.0;
  double alpha_proof = 0.0;  // alpha with the proof's log factor (p >= 2)
  int r = 0;
  double eps0 = 0.0;
  std::vector<RestartStage> stages;
  UsolpBranch branch = UsolpBranch::P_GE_2;
  // smoothness-domination precondition on alpha; violation is recorded, not
  // fatal
  bool alpha_precondition_ok = true;
};

struct UsolpStageRecord {
  int stage = 0;
  double eps_hat = 0.0;
  double radius = 0.0;
  long oracle_calls = 0;
  double certified_gap = 0.0;
  bool certified = false;
};

struct UsolpTrace {
  std::vector<UsolpStageRecord> stages;
  long total_calls = 0;
  Vector final_point;
  bool fully_certified = true;
};

RestartSchedule compute_schedule(const UsolpConfig& cfg);

struct UsolpResult {
  Vector point;
  UsolpTrace trace;
  RestartSchedule schedule;
  double alpha_used = 0.0;
};

UsolpResult run_usolp(const UsolpConfig& cfg, const Dataset& data,
                      const LossModel& loss);

// Theory-optimal regularization scale minimizing 2*alpha*D^nu +
// 3*(2*nu*G^nu/(n*alpha))^(1/(nu-1)).
double alpha_star_theory(double nu, int n, double D, double G);

// 6*G*D / n^(1+1/nu).
double required_accuracy_theory(double nu, int n, double D, double G);

// 3*(2*nu*G^nu/(n*alpha))^(1/(nu-1)).
double stability_bound_theory(double nu, int n, double alpha, double G);

void write_run_manifest(std::ostream& out, const UsolpConfig& cfg,
                        const RestartSchedule& sched, int d, int n,
                        std::uint64_t seed);
void write_trace_csv(std::ostream& out, const UsolpTrace& trace);

}  // namespace lpstab

#endif  // LPSTAB_USOLP_HPP
