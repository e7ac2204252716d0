#ifndef LPSTAB_GEOMETRY_HPP
#define LPSTAB_GEOMETRY_HPP

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <utility>

namespace lpstab {

using Vector = Eigen::VectorXd;

inline constexpr double kInfinityExponent =
    std::numeric_limits<double>::infinity();

/// Exponents steering all lp-ball machinery: p, its dual p*, the split
/// min(p,2) / max(p,2) and the exponent actually used after the small-p
/// remapping p -> 1 + 1/log(d).
struct PNormGeometry {
  double p = 2.0;
  double p_star = 2.0;
  double p_hat1 = 2.0;  // min(p, 2)
  double p_hat2 = 2.0;  // max(p, 2)
  double effective_p = 2.0;
  bool remapped = false;

  // Plain geometry for a given exponent, no remapping applied.
  static PNormGeometry make(double p);

  // Applies effective_p = 1 + 1/log(d) when 1 <= p <= 1 + 1/log(d); all
  // derived exponents are computed from effective_p.
  static PNormGeometry for_dimension(double p, int dim);
};

double dual_exponent(double p);

// (sum |x_i|^p)^(1/p); max|x_i| for the infinity sentinel. Rejects
// non-finite input and p < 1.
double pnorm(const Vector& x, double p);

// Constant making (cbar/p)*||.||_p^p (1,p)-uniformly convex for p >= 2
// and (1,p)-Hoelder smooth for p in (1,2).
double cbar(double p);

/// psi_alpha(x) = alpha * (cbar/p) * ||x - center||_p^p.
struct Regularizer {
  PNormGeometry geometry;
  Vector center;
  double cbar = 1.0;
  double alpha = 1.0;

  static Regularizer make(const PNormGeometry& geom, Vector center,
                          double alpha);

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  std::pair<double, Vector> eval(const Vector& x) const;
};

struct BallDomain {
  Vector center;
  double radius = 1.0;
  PNormGeometry geometry;

  // Single source of truth for domain membership.
  bool contains(const Vector& x) const;
};

// D_psi(x, y) = psi(x) - psi(y) - <grad psi(y), x - y>.
double bregman(const Regularizer& reg, const Vector& x, const Vector& y);

// Euclidean projection onto an lp ball. Exact routines for p in {1, 2, inf};
// otherwise bisection on the Lagrange multiplier of the p-th power constraint
// with safeguarded Newton for the per-coordinate stationarity equation.
Vector project_ball(const Vector& x, const BallDomain& ball);

// argmax over the ball of <g, u>, in closed form via dual-norm attainment.
// Returns the ball center when g = 0.
Vector linear_max_over_ball(const Vector& g, const BallDomain& ball);

using ScalarFn = std::function<double(const Vector&)>;
using GradFn = std::function<Vector(const Vector&)>;

// f(y) - f(x) - <grad f(x), y - x> - (mu/nu) ||x - y||_p^nu.
double uniform_convexity_margin(const ScalarFn& f, const GradFn& grad,
                                const Vector& x, const Vector& y, double mu,
                                double nu, double norm_p);

// (L/nu) ||x - y||_p^nu + f(x) + <grad f(x), y - x> - f(y).
double holder_smooth_margin(const ScalarFn& f, const GradFn& grad,
                            const Vector& x, const Vector& y, double L,
                            double nu, double norm_p);

struct ConjugateResult {
  double value = 0.0;
  Vector argmax;
  bool reliable = true;  // false when the supremum sits on the search boundary
};

// Grid search over the ball followed by local coordinate refinement;
// verification oracle only, d <= 3.
ConjugateResult fenchel_conjugate_numeric(const ScalarFn& f, const Vector& y,
                                          const BallDomain& search_ball,
                                          double resolution);

}  // namespace lpstab

#endif  // LPSTAB_GEOMETRY_HPP
