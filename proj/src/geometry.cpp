#include "lpstab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lpstab {

namespace {

void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) {
    throw std::domain_error(std::string(what) + ": non-finite input");
  }
}

// sign(t) * |t|^(p-1), with the t = 0 coordinate mapped to 0 (continuous
// limit; keeps the regularizer gradient zero at its center for p < 2).
double signed_pow(double t, double e) {
  if (t == 0.0) return 0.0;
  return t > 0.0 ? std::pow(t, e) : -std::pow(-t, e);
}

}  // namespace

double dual_exponent(double p) {
  if (p < 1.0) throw std::invalid_argument("dual_exponent: p < 1");
  if (p == 1.0) return kInfinityExponent;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

PNormGeometry PNormGeometry::make(double p) {
  if (p < 1.0) throw std::invalid_argument("PNormGeometry: p < 1");
  PNormGeometry g;
  g.p = p;
  g.effective_p = p;
  g.p_star = dual_exponent(p);
  g.p_hat1 = std::min(p, 2.0);
  g.p_hat2 = std::max(p, 2.0);
  g.remapped = false;
  return g;
}

PNormGeometry PNormGeometry::for_dimension(double p, int dim) {
  if (dim < 2) return make(p);
  const double p_min = 1.0 + 1.0 / std::log(static_cast<double>(dim));
  if (p <= p_min) {
    PNormGeometry g = make(p_min);
    g.p = p;
    g.remapped = true;
    return g;
  }
  return make(p);
}

double pnorm(const Vector& x, double p) {
  require_finite(x, "pnorm");
  if (p < 1.0) throw std::invalid_argument("pnorm: p < 1");
  if (x.size() == 0) return 0.0;
  const double amax = x.cwiseAbs().maxCoeff();
  if (amax == 0.0) return 0.0;
  if (std::isinf(p)) return amax;
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  // scale by the max coordinate so |x_i/amax|^p cannot overflow/underflow
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    acc += std::pow(std::abs(x[i]) / amax, p);
  }
  return amax * std::pow(acc, 1.0 / p);
}

double cbar(double p) {
  if (p <= 1.0) throw std::invalid_argument("cbar: requires p > 1");
  if (p >= 2.0) return std::pow(2.0, p - 2.0);
  return std::pow(2.0, 2.0 * p - 3.0) * std::pow(1.0 - 1.0 / p, p - 1.0);
}

Regularizer Regularizer::make(const PNormGeometry& geom, Vector center,
                              double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("Regularizer: alpha < 0");
  Regularizer r;
  r.geometry = geom;
  r.center = std::move(center);
  r.cbar = lpstab::cbar(geom.effective_p);
  r.alpha = alpha;
  return r;
}

double Regularizer::value(const Vector& x) const {
  require_finite(x, "Regularizer::value");
  const double p = geometry.effective_p;
  const double n = pnorm(x - center, p);
  return alpha * (cbar / p) * std::pow(n, p);
}

Vector Regularizer::gradient(const Vector& x) const {
  require_finite(x, "Regularizer::gradient");
  const double p = geometry.effective_p;
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    g[i] = alpha * cbar * signed_pow(x[i] - center[i], p - 1.0);
  }
  return g;
}

std::pair<double, Vector> Regularizer::eval(const Vector& x) const {
  return {value(x), gradient(x)};
}

bool BallDomain::contains(const Vector& x) const {
  return pnorm(x - center, geometry.effective_p) <= radius * (1.0 + 1e-12);
}

double bregman(const Regularizer& reg, const Vector& x, const Vector& y) {
  return reg.value(x) - reg.value(y) - reg.gradient(y).dot(x - y);
}

namespace {

// Projection onto the l1 ball by soft-thresholding (sorted pivot search).
Vector project_l1(const Vector& y, double radius) {
  if (y.cwiseAbs().sum() <= radius) return y;
  std::vector<double> a(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) a[i] = std::abs(y[i]);
  std::sort(a.begin(), a.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    cum += a[k];
    const double t = (cum - radius) / static_cast<double>(k + 1);
    if (k + 1 == a.size() || a[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double m = std::abs(y[i]) - theta;
    out[i] = m > 0.0 ? (y[i] > 0.0 ? m : -m) : 0.0;
  }
  return out;
}

// Solves t + mu*p*t^(p-1) = a for t >= 0, a >= 0: Newton with bisection
// safeguard on [0, a].
double coordinate_shrink(double a, double mu, double p) {
  if (a == 0.0) return 0.0;
  double lo = 0.0, hi = a;
  double t = a / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double h = t + mu * p * std::pow(t, p - 1.0) - a;
    if (std::abs(h) < 1e-15 * std::max(1.0, a)) break;
    if (h > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    const double dh = 1.0 + mu * p * (p - 1.0) * std::pow(t, p - 2.0);
    double tn = t - h / dh;
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    t = tn;
  }
  return t;
}

Vector project_lp_interior(const Vector& y, double radius, double p) {
  // Bisection on the multiplier mu of the constraint sum |w_i|^p <= R^p.
  const auto norm_at = [&](double mu) {
    Vector w(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double t = coordinate_shrink(std::abs(y[i]), mu, p);
      w[i] = y[i] >= 0.0 ? t : -t;
    }
    return w;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (pnorm(norm_at(hi), p) > radius) hi *= 2.0;
  Vector w = y;
  for (int it = 0; it < 200; ++it) {
    const double mu = 0.5 * (lo + hi);
    w = norm_at(mu);
    const double res = pnorm(w, p) - radius;
    if (std::abs(res) <= 1e-12 * std::max(1.0, radius)) break;
    if (res > 0.0) {
      lo = mu;
    } else {
      hi = mu;
    }
  }
  return w;
}

}  // namespace

Vector project_ball(const Vector& x, const BallDomain& ball) {
  require_finite(x, "project_ball");
  if (ball.radius <= 0.0) throw std::invalid_argument("project_ball: R <= 0");
  const double p = ball.geometry.effective_p;
  const Vector y = x - ball.center;
  if (pnorm(y, p) <= ball.radius) return x;
  Vector w;
  if (std::isinf(p)) {
    w = y.cwiseMax(-ball.radius).cwiseMin(ball.radius);
  } else if (p == 1.0) {
    w = project_l1(y, ball.radius);
  } else if (p == 2.0) {
    w = y * (ball.radius / y.norm());
  } else {
    w = project_lp_interior(y, ball.radius, p);
  }
  // the iterative routines can overshoot by ~1e-12 in absolute terms; pull
  // the result radially onto the ball so membership is unconditional
  const double norm = pnorm(w, p);
  if (norm > ball.radius) w *= ball.radius / norm;
  return ball.center + w;
}

Vector linear_max_over_ball(const Vector& g, const BallDomain& ball) {
  require_finite(g, "linear_max_over_ball");
  const double amax = g.cwiseAbs().maxCoeff();
  if (amax == 0.0) return ball.center;
  const double p = ball.geometry.effective_p;
  const double ps = dual_exponent(p);
  Vector s(g.size());
  if (std::isinf(ps)) {
    // p = 1: all mass on a maximal coordinate
    s.setZero();
    Eigen::Index imax = 0;
    g.cwiseAbs().maxCoeff(&imax);
    s[imax] = g[imax] > 0.0 ? 1.0 : -1.0;
  } else {
    // s_i = sign(g_i) |g_i|^(p*-1) / ||g||_{p*}^(p*-1), scaled for stability
    const Vector gn = g / amax;
    const double denom = std::pow(pnorm(gn, ps), ps - 1.0);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      s[i] = signed_pow(gn[i], ps - 1.0) / denom;
    }
  }
  return ball.center + ball.radius * s;
}

double uniform_convexity_margin(const ScalarFn& f, const GradFn& grad,
                                const Vector& x, const Vector& y, double mu,
                                double nu, double norm_p) {
  if (nu < 2.0) throw std::invalid_argument("uniform_convexity_margin: nu < 2");
  const double dist = pnorm(x - y, norm_p);
  return f(y) - f(x) - grad(x).dot(y - x) - (mu / nu) * std::pow(dist, nu);
}

double holder_smooth_margin(const ScalarFn& f, const GradFn& grad,
                            const Vector& x, const Vector& y, double L,
                            double nu, double norm_p) {
  if (nu < 1.0 || nu > 2.0) {
    throw std::invalid_argument("holder_smooth_margin: nu outside [1,2]");
  }
  const double dist = pnorm(x - y, norm_p);
  return (L / nu) * std::pow(dist, nu) + f(x) + grad(x).dot(y - x) - f(y);
}

ConjugateResult fenchel_conjugate_numeric(const ScalarFn& f, const Vector& y,
                                          const BallDomain& search_ball,
                                          double resolution) {
  const Eigen::Index d = y.size();
  if (d > 3) {
    throw std::invalid_argument("fenchel_conjugate_numeric: d > 3");
  }
  const double R = search_ball.radius;
  const int steps = std::max(2, static_cast<int>(std::ceil(2.0 * R / resolution)));
  const auto objective = [&](const Vector& x) { return x.dot(y) - f(x); };

  Vector best = search_ball.center;
  double best_val = objective(best);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  // full box grid; membership restricted to the ball
  bool done = false;
  while (!done) {
    Vector x(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      x[k] = search_ball.center[k] - R +
             2.0 * R * idx[static_cast<std::size_t>(k)] / steps;
    }
    if (search_ball.contains(x)) {
      const double v = objective(x);
      if (v > best_val) {
        best_val = v;
        best = x;
      }
    }
    done = true;
    for (Eigen::Index k = 0; k < d; ++k) {
      auto& i = idx[static_cast<std::size_t>(k)];
      if (++i <= steps) {
        done = false;
        break;
      }
      i = 0;
    }
  }

  // local pattern-search refinement
  double step = 2.0 * R / steps;
  while (step > 1e-10) {
    bool improved = false;
    for (Eigen::Index k = 0; k < d; ++k) {
      for (double dir : {-1.0, 1.0}) {
        Vector x = best;
        x[k] += dir * step;
        if (!search_ball.contains(x)) continue;
        const double v = objective(x);
        if (v > best_val) {
          best_val = v;
          best = x;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  ConjugateResult out;
  out.value = best_val;
  out.argmax = best;
  const double r = pnorm(best - search_ball.center,
                         search_ball.geometry.effective_p);
  out.reliable = r < R * (1.0 - 1e-6);
  return out;
}

}  // namespace lpstab
