#ifndef LPSTAB_CHECKS_HPP
#define LPSTAB_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lpstab/base_optim.hpp"
#include "lpstab/objectives.hpp"

namespace lpstab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Named invariant suites; each samples the module's properties at the
// tolerances the contracts state.
std::vector<CheckResult> verify_geometry(std::uint64_t seed);
std::vector<CheckResult> verify_objectives(std::uint64_t seed);
std::vector<CheckResult> verify_solver(std::uint64_t seed);
std::vector<CheckResult> verify_usolp(std::uint64_t seed);
std::vector<CheckResult> verify_adversarial(std::uint64_t seed);

// suite in {geometry, objectives, solver, usolp, adversarial, all};
// throws on an unknown name.
std::vector<CheckResult> verify_suite(const std::string& suite,
                                      std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);

// High-accuracy reference minimizer: APGD at 50x the default budget; throws
// if the gap cannot be certified.
SolveResult reference_solve(const Objective& obj, const BallDomain& ball,
                            const Vector& start, double target_gap = 1e-10);

// Central finite-difference gradient, step 1e-5.
Vector finite_difference_gradient(const ScalarFn& f, const Vector& x,
                                  double step = 1e-5);

}  // namespace lpstab

#endif  // LPSTAB_CHECKS_HPP
