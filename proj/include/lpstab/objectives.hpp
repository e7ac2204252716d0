#ifndef LPSTAB_OBJECTIVES_HPP
#define LPSTAB_OBJECTIVES_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lpstab/geometry.hpp"
#include "lpstab/objective.hpp"

namespace lpstab {

struct Sample {
  Vector features;       // a for GLM losses, payload z for linear losses
  double label = 0.0;    // b in {-1, +1}; unused for linear losses
};

struct Dataset {
  std::vector<Sample> samples;
  int dim = 0;

  static Dataset make(std::vector<Sample> samples);
  int size() const { return static_cast<int>(samples.size()); }
};

enum class LossKind { Linear, GlmLogistic, GlmSquared, GlmSmoothedHinge };

/// Loss l(x; z): Linear(g) is g*<x, z>; GLM variants are f(b*<a, x>) with a
/// convex L_f-smooth link f.
struct LossModel {
  LossKind kind = LossKind::GlmLogistic;
  double linear_scale = 1.0;  // g for the linear variant

  static LossModel linear(double scale) { return {LossKind::Linear, scale}; }
  static LossModel logistic() { return {LossKind::GlmLogistic, 1.0}; }
  static LossModel squared() { return {LossKind::GlmSquared, 1.0}; }
  static LossModel smoothed_hinge() { return {LossKind::GlmSmoothedHinge, 1.0}; }

  // scalar link f, f', f''; only defined for the GLM variants
  double link(double t) const;
  double link_grad(double t) const;
  double link_hess(double t) const;
  double link_smoothness() const;

  std::pair<double, Vector> eval(const Vector& x, const Sample& z) const;
};

std::pair<double, Vector> loss_eval(const LossModel& loss, const Vector& x,
                                    const Sample& z);

// f_S(x) = (1/n) sum_i l(x; z_i), with the averaged gradient.
std::pair<double, Vector> empirical_risk(const Dataset& data,
                                         const LossModel& loss,
                                         const Vector& x);

/// The regularized empirical risk f_S + alpha*(cbar/p)*||x - x0||_p^p over an
/// lp ball sharing the regularizer center.
class RegularizedErm : public Objective {
 public:
  RegularizedErm(Dataset data, LossModel loss, BallDomain domain,
                 Regularizer regularizer, double loss_smoothness);

  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  std::pair<double, Vector> eval(const Vector& x) const override;
  double smoothness() const override { return declared_smoothness_; }

  std::pair<double, Vector> empirical(const Vector& x) const;

  const Dataset& dataset() const { return dataset_; }
  const LossModel& loss() const { return loss_; }
  const BallDomain& domain() const { return domain_; }
  const Regularizer& regularizer() const { return regularizer_; }
  double range_bound_D() const { return range_D_; }

 private:
  Dataset dataset_;
  LossModel loss_;
  BallDomain domain_;
  Regularizer regularizer_;
  double declared_smoothness_ = 0.0;
  double range_D_ = 0.0;
};

// G = 2*L*R (smoothness implies Lipschitzness on a ball with an interior
// stationary point).
double lipschitz_from_smoothness(double L, double R);

// link_L * R_data^2, a certified smoothness constant of the GLM empirical
// risk w.r.t. ||.||_p; rejects data with ||a_i||_{p*} > R_data.
double glm_smoothness_bound(const Dataset& data, double link_L, double p,
                            double data_radius);

// D = (cbar/p)^(1/p) * R so that psi_1(x) - psi_1(x0) <= D^p on the ball.
double regularizer_range_D(const BallDomain& ball, const Regularizer& reg);

// CSV with header "b,a_1,...,a_d" (GLM) or "z_1,...,z_d" (linear).
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv_file(const std::string& path);
void write_dataset_csv(std::ostream& out, const Dataset& data, bool glm);

}  // namespace lpstab

#endif  // LPSTAB_OBJECTIVES_HPP
