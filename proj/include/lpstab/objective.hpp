#ifndef LPSTAB_OBJECTIVE_HPP
#define LPSTAB_OBJECTIVE_HPP

#include <functional>
#include <utility>

#include "lpstab/geometry.hpp"

namespace lpstab {

/// Value + gradient callable with a declared smoothness modulus; the base
/// solvers use the modulus only to seed the backtracking step size.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual std::pair<double, Vector> eval(const Vector& x) const {
    return {value(x), gradient(x)};
  }
  virtual double smoothness() const = 0;
};

class FunctionObjective : public Objective {
 public:
  FunctionObjective(ScalarFn f, GradFn g, double smoothness)
      : f_(std::move(f)), g_(std::move(g)), smoothness_(smoothness) {}

  double value(const Vector& x) const override { return f_(x); }
  Vector gradient(const Vector& x) const override { return g_(x); }
  double smoothness() const override { return smoothness_; }

 private:
  ScalarFn f_;
  GradFn g_;
  double smoothness_;
};

}  // namespace lpstab

#endif  // LPSTAB_OBJECTIVE_HPP
