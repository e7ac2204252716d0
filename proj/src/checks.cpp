#include "lpstab/checks.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lpstab/adversarial.hpp"
#include "lpstab/rng.hpp"
#include "lpstab/usolp.hpp"

namespace lpstab {

namespace {

Vector random_box(std::mt19937_64& rng, int d, double half_width) {
  std::uniform_real_distribution<double> unif(-half_width, half_width);
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = unif(rng);
  return x;
}

Vector random_in_ball(std::mt19937_64& rng, double p, int d, double R) {
  // rejection from the enclosing box; fine for the small d used here
  for (int tries = 0; tries < 10000; ++tries) {
    Vector x = random_box(rng, d, R);
    if (pnorm(x, p) <= R) return x;
  }
  return Vector::Zero(d);
}

void record(std::vector<CheckResult>& out, const std::string& name, bool pass,
            const std::string& detail) {
  out.push_back({name, pass, detail});
}

std::string worst(double margin) {
  std::ostringstream os;
  os << "worst margin " << margin;
  return os.str();
}

Dataset random_glm_dataset(std::mt19937_64& rng, int n, int d,
                           double data_radius, double p) {
  const double ps = dual_exponent(p);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Sample z;
    z.features = random_box(rng, d, 1.0);
    const double norm = pnorm(z.features, ps);
    if (norm > 0.0) z.features *= data_radius * 0.9 / norm;
    z.label = coin(rng) == 0 ? -1.0 : 1.0;
    samples.push_back(std::move(z));
  }
  return Dataset::make(std::move(samples));
}

RegularizedErm make_erm(const Dataset& data, const LossModel& loss, double p,
                        double R, double alpha, double data_radius) {
  const auto geom = PNormGeometry::make(p);
  BallDomain ball{Vector::Zero(data.dim), R, geom};
  auto reg = Regularizer::make(geom, Vector::Zero(data.dim), alpha);
  const double L = glm_smoothness_bound(data, loss.link_smoothness(), p,
                                        data_radius);
  return RegularizedErm(data, loss, ball, reg, L);
}

}  // namespace

SolveResult reference_solve(const Objective& obj, const BallDomain& ball,
                            const Vector& start, double target_gap) {
  SolveRequest req;
  req.objective = &obj;
  req.start = start;
  req.ball = ball;
  req.target_gap = target_gap;
  req.budget = 5000000;  // 50x the default per-stage cap
  const SolveResult res = solve(SolverSpec::apgd(), req);
  if (!res.converged) {
    throw std::runtime_error("reference_solve: could not certify gap");
  }
  return res;
}

Vector finite_difference_gradient(const ScalarFn& f, const Vector& x,
                                  double step) {
  Vector g(x.size());
  Vector e = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    e[i] = x[i] + step;
    const double fp = f(e);
    e[i] = x[i] - step;
    const double fm = f(e);
    e[i] = x[i];
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

std::vector<CheckResult> verify_geometry(std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto rng = make_rng(seed);

  {  // Hoelder inequality over random pairs
    const double ps_list[] = {1.2, 1.5, 2.0, 3.0, 4.0};
    std::uniform_int_distribution<int> pick(0, 4), dims(2, 8);
    double margin = 1e300;
    for (int it = 0; it < 100000; ++it) {
      const double p = ps_list[pick(rng)];
      const int d = dims(rng);
      const Vector x = random_box(rng, d, 2.0);
      const Vector y = random_box(rng, d, 2.0);
      margin = std::min(
          margin, pnorm(x, p) * pnorm(y, dual_exponent(p)) - std::abs(x.dot(y)));
    }
    record(out, "geometry/holder-inequality", margin >= -1e-12, worst(margin));
  }

  {  // ||x||_2 <= d^(1/2 - 1/p) ||x||_p for p >= 2
    const double ps_list[] = {2.0, 2.5, 3.0, 4.0};
    std::uniform_int_distribution<int> pick(0, 3), dims(2, 64);
    double margin = 1e300;
    for (int it = 0; it < 20000; ++it) {
      const double p = ps_list[pick(rng)];
      const int d = dims(rng);
      const Vector x = random_box(rng, d, 2.0);
      const double rhs =
          std::pow(static_cast<double>(d), 0.5 - 1.0 / p) * pnorm(x, p);
      margin = std::min(margin, rhs - x.norm());
    }
    record(out, "geometry/norm-comparison", margin >= -1e-12, worst(margin));
  }

  {  // projection: membership, idempotence, norm contraction toward the ball
    const double ps_list[] = {1.0, 1.3, 1.5, 2.0, 2.7, 4.0, kInfinityExponent};
    bool pass = true;
    std::string detail = "ok";
    std::uniform_real_distribution<double> radius(0.3, 2.5);
    for (int it = 0; it < 2000 && pass; ++it) {
      const double p = ps_list[it % 7];
      const int d = 2 + it % 7;
      BallDomain ball{random_box(rng, d, 1.0), radius(rng),
                      PNormGeometry::make(p)};
      const Vector x = random_box(rng, d, 3.0);
      const Vector px = project_ball(x, ball);
      const double before = pnorm(x - ball.center, p);
      const double after = pnorm(px - ball.center, p);
      if (!ball.contains(px)) {
        pass = false;
        detail = "projection left the ball";
      } else if ((project_ball(px, ball) - px).cwiseAbs().maxCoeff() > 1e-9) {
        pass = false;
        detail = "projection is not idempotent";
      } else if (after > before + 1e-10) {
        pass = false;
        detail = "projection expanded the p-distance to the center";
      }
    }
    record(out, "geometry/projection", pass, detail);
  }

  {  // linear maximization attains R * dual norm
    const double ps_list[] = {1.0, 1.5, 2.0, 3.0, kInfinityExponent};
    double margin = 1e300;
    bool feasible = true;
    for (int it = 0; it < 2000; ++it) {
      const double p = ps_list[it % 5];
      const int d = 2 + it % 6;
      BallDomain ball{random_box(rng, d, 1.0), 0.5 + 0.001 * (it % 700),
                      PNormGeometry::make(p)};
      const Vector g = random_box(rng, d, 2.0);
      const Vector u = linear_max_over_ball(g, ball);
      feasible = feasible && ball.contains(u);
      const double target = ball.radius * pnorm(g, dual_exponent(p));
      margin = std::min(margin, 1e-10 - std::abs(g.dot(u - ball.center) - target));
    }
    record(out, "geometry/linear-max-dual-norm", feasible && margin >= 0.0,
           worst(margin));
  }

  {  // uniform convexity of the regularizer, p >= 2
    const double ps_list[] = {2.0, 2.5, 3.0, 4.0};
    const int dims_list[] = {2, 10};
    std::uniform_real_distribution<double> alpha_dist(0.1, 2.0);
    double margin = 1e300;
    for (int combo = 0; combo < 8; ++combo) {
      const double p = ps_list[combo % 4];
      const int d = dims_list[combo / 4];
      const auto geom = PNormGeometry::make(p);
      const double alpha = alpha_dist(rng);
      const auto reg = Regularizer::make(geom, random_box(rng, d, 0.5), alpha);
      const ScalarFn f = [&](const Vector& v) { return reg.value(v); };
      const GradFn g = [&](const Vector& v) { return reg.gradient(v); };
      for (int it = 0; it < 12500; ++it) {
        const Vector x = random_box(rng, d, 2.0);
        const Vector y = random_box(rng, d, 2.0);
        margin =
            std::min(margin, uniform_convexity_margin(f, g, x, y, alpha, p, p));
      }
    }
    record(out, "geometry/uniform-convexity-margin", margin >= -1e-9,
           worst(margin));
  }

  {  // Hoelder smoothness of (1/p)||.||_p^p, p in (1,2)
    const double ps_list[] = {1.2, 1.5, 1.8};
    double margin = 1e300;
    for (double p : ps_list) {
      const double L =
          std::pow(2.0, 3.0 - 2.0 * p) * std::pow(p / (p - 1.0), p - 1.0);
      const ScalarFn f = [p](const Vector& v) {
        return std::pow(pnorm(v, p), p) / p;
      };
      const GradFn g = [p](const Vector& v) {
        Vector out(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          out[i] = v[i] == 0.0
                       ? 0.0
                       : std::copysign(std::pow(std::abs(v[i]), p - 1.0), v[i]);
        }
        return out;
      };
      for (int it = 0; it < 20000; ++it) {
        const int d = 2 + it % 9;
        const Vector x = random_box(rng, d, 2.0);
        const Vector y = random_box(rng, d, 2.0);
        margin = std::min(margin, holder_smooth_margin(f, g, x, y, L, p, p));
      }
    }
    record(out, "geometry/holder-smooth-margin", margin >= -1e-9,
           worst(margin));
  }

  {  // restricted quadratic models of (1/p)||.||_p^p inside B_p(0,R)
    const double radii[] = {0.5, 1.0, 2.0};
    double margin = 1e300;
    for (double R : radii) {
      for (int side = 0; side < 2; ++side) {
        const double p = side == 0 ? 2.5 + 0.5 * (R > 0.5) : 1.5;
        const double constant = (p - 1.0) * std::pow(R, p - 2.0);
        const ScalarFn f = [p](const Vector& v) {
          return std::pow(pnorm(v, p), p) / p;
        };
        const GradFn g = [p](const Vector& v) {
          Vector out(v.size());
          for (Eigen::Index i = 0; i < v.size(); ++i) {
            out[i] = v[i] == 0.0 ? 0.0
                                 : std::copysign(
                                       std::pow(std::abs(v[i]), p - 1.0), v[i]);
          }
          return out;
        };
        for (int it = 0; it < 1700; ++it) {
          const int d = 2 + it % 5;
          const Vector x = random_in_ball(rng, p, d, R);
          const Vector y = random_in_ball(rng, p, d, R);
          const double m =
              side == 0 ? holder_smooth_margin(f, g, x, y, constant, 2.0, p)
                        : uniform_convexity_margin(f, g, x, y, constant, 2.0, p);
          margin = std::min(margin, m);
        }
      }
    }
    record(out, "geometry/restricted-moduli", margin >= -1e-9, worst(margin));
  }

  {  // Bregman divergence basics
    const auto geom = PNormGeometry::make(3.0);
    const auto reg = Regularizer::make(geom, Vector::Zero(4), 0.7);
    double margin = 1e300;
    double at_self = 0.0;
    for (int it = 0; it < 5000; ++it) {
      const Vector x = random_box(rng, 4, 2.0);
      const Vector y = random_box(rng, 4, 2.0);
      margin = std::min(margin, bregman(reg, x, y));
      at_self = std::max(at_self, std::abs(bregman(reg, x, x)));
    }
    record(out, "geometry/bregman-nonnegative",
           margin >= -1e-9 && at_self <= 1e-12, worst(margin));
  }

  {  // spot values of the convexity/smoothness constant
    const bool pass = std::abs(cbar(2.0) - 1.0) <= 1e-15 &&
                      std::abs(cbar(3.0) - 2.0) <= 1e-15 &&
                      std::abs(cbar(4.0) - 4.0) <= 1e-15 &&
                      std::abs(cbar(1.5) - std::sqrt(1.0 / 3.0)) <= 1e-12;
    record(out, "geometry/cbar-spot-values", pass, "closed-form evaluations");
  }

  {  // numeric Fenchel conjugate of (1/q)||.||_q^q equals (1/p)||.||_p^p
    double margin = 1e300;
    bool reliable = true;
    for (double q : {2.0, 3.0, 4.0}) {
      const double p = dual_exponent(q);
      const ScalarFn f = [q](const Vector& v) {
        return std::pow(pnorm(v, q), q) / q;
      };
      for (int d : {1, 2}) {
        BallDomain search{Vector::Zero(d), 1.6,
                          PNormGeometry::make(kInfinityExponent)};
        for (int it = 0; it < (d == 1 ? 9 : 9); ++it) {
          Vector y(d);
          y[0] = -0.9 + 0.2 * (it % 9);
          if (d == 2) y[1] = 0.7 - 0.15 * (it % 9);
          const auto conj = fenchel_conjugate_numeric(f, y, search, 0.02);
          reliable = reliable && conj.reliable;
          const double expected = std::pow(pnorm(y, p), p) / p;
          margin = std::min(margin, 1e-6 - std::abs(conj.value - expected));
        }
      }
    }
    record(out, "geometry/fenchel-duality", reliable && margin >= 0.0,
           worst(margin));
  }

  return out;
}

std::vector<CheckResult> verify_objectives(std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto rng = make_rng(seed);
  const std::vector<LossModel> losses = {
      LossModel::linear(0.8), LossModel::logistic(), LossModel::squared(),
      LossModel::smoothed_hinge()};

  {  // midpoint convexity of every loss in x
    double margin = 1e300;
    for (const auto& loss : losses) {
      for (int it = 0; it < 2500; ++it) {
        const int d = 2 + it % 5;
        Sample z{random_box(rng, d, 1.5), it % 2 == 0 ? 1.0 : -1.0};
        const Vector x = random_box(rng, d, 2.0);
        const Vector y = random_box(rng, d, 2.0);
        const double mid = loss.eval(0.5 * (x + y), z).first;
        const double avg =
            0.5 * (loss.eval(x, z).first + loss.eval(y, z).first);
        margin = std::min(margin, avg - mid);
      }
    }
    record(out, "objectives/midpoint-convexity", margin >= -1e-9,
           worst(margin));
  }

  {  // gradients against central finite differences
    double worst_rel = 0.0;
    for (const auto& loss : losses) {
      for (int it = 0; it < 300; ++it) {
        const int d = 2 + it % 4;
        Sample z{random_box(rng, d, 1.5), it % 2 == 0 ? 1.0 : -1.0};
        const Vector x = random_box(rng, d, 2.0);
        if (loss.kind == LossKind::GlmSmoothedHinge) {
          const double t = z.label * z.features.dot(x);
          if (std::abs(t) < 1e-3 || std::abs(t - 1.0) < 1e-3) continue;
        }
        const auto [val, grad] = loss.eval(x, z);
        (void)val;
        const Vector fd = finite_difference_gradient(
            [&](const Vector& v) { return loss.eval(v, z).first; }, x);
        const double rel =
            (grad - fd).norm() / std::max(1.0, grad.norm());
        worst_rel = std::max(worst_rel, rel);
      }
    }
    // regularized risk gradient
    Dataset data = random_glm_dataset(rng, 12, 3, 1.0, 2.5);
    auto erm = make_erm(data, LossModel::logistic(), 2.5, 1.0, 0.4, 1.0);
    for (int it = 0; it < 100; ++it) {
      const Vector x = random_box(rng, 3, 0.8);
      const Vector fd = finite_difference_gradient(
          [&](const Vector& v) { return erm.value(v); }, x);
      const double rel =
          (erm.gradient(x) - fd).norm() / std::max(1.0, fd.norm());
      worst_rel = std::max(worst_rel, rel);
    }
    std::ostringstream os;
    os << "worst relative error " << worst_rel;
    record(out, "objectives/gradient-finite-difference", worst_rel <= 1e-5,
           os.str());
  }

  {  // distance bound: D_psi(x*_alpha, x0) <= D^p
    bool pass = true;
    std::string detail = "ok";
    try {
      for (double p : {2.0, 3.0}) {
        Dataset data = random_glm_dataset(rng, 10, 3, 1.0, p);
        auto erm = make_erm(data, LossModel::logistic(), p, 1.0, 0.5, 1.0);
        const Vector x0 = erm.domain().center;
        const auto res = reference_solve(erm, erm.domain(), x0, 1e-10);
        const auto unit_reg = Regularizer::make(erm.domain().geometry, x0, 1.0);
        const double div = bregman(unit_reg, res.point, x0);
        const double Dp =
            std::pow(erm.range_bound_D(), erm.domain().geometry.p);
        if (div > Dp + 1e-6) {
          pass = false;
          detail = "divergence exceeded the range bound";
        }
      }
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    record(out, "objectives/regularized-minimizer-distance", pass, detail);
  }

  {  // perturbed-minima distance bound between neighboring regularized ERMs
    bool pass = true;
    std::string detail = "ok";
    try {
      for (double p : {2.0, 3.0}) {
        const double alpha = 0.6;
        Dataset data = random_glm_dataset(rng, 15, 3, 1.0, p);
        Dataset variant = data;
        variant.samples[4] = Sample{random_box(rng, 3, 0.5), -1.0};
        auto erm1 = make_erm(data, LossModel::logistic(), p, 1.0, alpha, 1.0);
        auto erm2 = make_erm(variant, LossModel::logistic(), p, 1.0, alpha, 1.0);
        const auto r1 = reference_solve(erm1, erm1.domain(),
                                        erm1.domain().center, 1e-10);
        const auto r2 = reference_solve(erm2, erm2.domain(),
                                        erm2.domain().center, 1e-10);
        const double lhs = pnorm(r1.point - r2.point, p);
        const double dual_gap = pnorm(
            erm1.gradient(r1.point) - erm2.gradient(r1.point),
            dual_exponent(p));
        const double rhs =
            std::pow(p / alpha * dual_gap, 1.0 / (p - 1.0)) + 1e-6;
        if (lhs > rhs) {
          pass = false;
          detail = "minimizer distance exceeded the dual-gradient bound";
        }
      }
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    record(out, "objectives/perturbed-minima-distance", pass, detail);
  }

  {  // GLM Hessian quadratic form against the smoothness bound
    double margin = 1e300;
    for (double p : {2.0, 3.0}) {
      Dataset data = random_glm_dataset(rng, 20, 4, 1.0, p);
      const LossModel loss = LossModel::logistic();
      const double L = glm_smoothness_bound(data, loss.link_smoothness(), p, 1.0);
      for (int it = 0; it < 1000; ++it) {
        const Vector x = random_box(rng, 4, 1.5);
        const Vector v = random_box(rng, 4, 1.5);
        double quad = 0.0;
        for (const auto& z : data.samples) {
          const double t = z.label * z.features.dot(x);
          const double av = z.features.dot(v);
          quad += loss.link_hess(t) * av * av;
        }
        quad /= static_cast<double>(data.size());
        const double np = pnorm(v, p);
        margin = std::min(margin, L * np * np + 1e-9 - quad);
      }
    }
    record(out, "objectives/glm-hessian-bound", margin >= 0.0, worst(margin));
  }

  {  // regularizer range: sup over the ball of psi_1 equals D^p
    bool pass = true;
    for (double p : {1.5, 2.0, 3.0}) {
      const auto geom = PNormGeometry::make(p);
      BallDomain ball{random_box(rng, 3, 0.5), 1.3, geom};
      const auto reg = Regularizer::make(geom, ball.center, 1.0);
      const double Dp = std::pow(regularizer_range_D(ball, reg), p);
      double sup = 0.0;
      for (int it = 0; it < 500; ++it) {
        Vector dir = random_box(rng, 3, 1.0);
        const double norm = pnorm(dir, p);
        if (norm == 0.0) continue;
        const Vector x = ball.center + ball.radius / norm * dir;
        sup = std::max(sup, reg.value(x) - reg.value(ball.center));
        if (reg.value(x) - reg.value(ball.center) > Dp + 1e-9) pass = false;
      }
      if (std::abs(sup - Dp) > 1e-6 * std::max(1.0, Dp)) pass = false;
    }
    record(out, "objectives/regularizer-range", pass,
           "boundary sampling vs closed form");
  }

  return out;
}

std::vector<CheckResult> verify_solver(std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto rng = make_rng(seed);

  // shared smooth strongly-convex test instance with known minimizer
  const int d = 5;
  const Vector target = random_box(rng, d, 0.4);
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(d, d);
  Eigen::MatrixXd Q = A.transpose() * A + Eigen::MatrixXd::Identity(d, d);
  FunctionObjective quad(
      [&, Q, target](const Vector& x) {
        const Vector r = x - target;
        return 0.5 * r.dot(Q * r);
      },
      [&, Q, target](const Vector& x) { return Vector(Q * (x - target)); },
      Q.operatorNorm());
  BallDomain ball{Vector::Zero(d), 1.0, PNormGeometry::make(2.0)};

  SolveRequest req;
  req.objective = &quad;
  req.start = ball.center;
  req.ball = ball;
  req.target_gap = 1e-8;
  req.budget = 100000;

  {
    bool pass = true;
    std::string detail = "ok";
    for (auto spec : {SolverSpec::pgd(), SolverSpec::apgd()}) {
      const auto res = solve(spec, req);
      if (!ball.contains(res.point)) {
        pass = false;
        detail = "final point infeasible";
      }
      if (!res.converged || res.certified_gap > req.target_gap) {
        pass = false;
        detail = "failed to certify the requested gap";
      }
    }
    record(out, "solver/feasible-and-certified", pass, detail);
  }

  {  // certificate soundness against the true optimum
    const auto ref = reference_solve(quad, ball, ball.center, 1e-12);
    bool pass = true;
    for (auto spec : {SolverSpec::pgd(), SolverSpec::apgd()}) {
      SolveRequest loose = req;
      loose.target_gap = 1e-5;
      const auto res = solve(spec, loose);
      const double true_gap = quad.value(res.point) - quad.value(ref.point);
      if (res.certified_gap + 1e-9 < true_gap) pass = false;
    }
    record(out, "solver/certificate-soundness", pass,
           "Frank-Wolfe gap upper-bounds the true gap");
  }

  {  // determinism
    const auto a = solve(SolverSpec::apgd(), req);
    const auto b = solve(SolverSpec::apgd(), req);
    const bool pass = a.point == b.point &&
                      a.objective_trace == b.objective_trace &&
                      a.oracle_calls == b.oracle_calls;
    record(out, "solver/determinism", pass, "bit-identical repeated solves");
  }

  {  // monotone objective trace for the accelerated method
    const auto res = solve(SolverSpec::apgd(), req);
    bool pass = true;
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
      if (res.objective_trace[i] > res.objective_trace[i - 1] + 1e-12) {
        pass = false;
      }
    }
    record(out, "solver/monotone-trace", pass, "non-increasing objective");
  }

  {  // linear objective drives the iterate to the dual-norm boundary point
    const Vector g = random_box(rng, d, 1.0);
    FunctionObjective lin([g](const Vector& x) { return g.dot(x); },
                          [g](const Vector&) { return g; }, 1.0);
    SolveRequest lreq = req;
    lreq.objective = &lin;
    lreq.target_gap = 1e-7;
    const auto res = solve(SolverSpec::pgd(), lreq);
    const Vector expect = linear_max_over_ball(-g, ball);
    const bool pass = (res.point - expect).norm() <= 1e-4;
    record(out, "solver/linear-boundary-optimum", pass,
           "matches the closed-form ball minimizer");
  }

  return out;
}

std::vector<CheckResult> verify_usolp(std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto rng = make_rng(seed);

  const auto make_cfg = [](double p, int dim, long T) {
    UsolpConfig cfg;
    cfg.geometry = PNormGeometry::for_dimension(p, dim);
    cfg.R = 1.0;
    cfg.T = T;
    cfg.solver = SolverSpec::apgd();
    cfg.L = 1.0;
    cfg.x0 = Vector::Zero(dim);
    return cfg;
  };

  {  // schedule replay and branch formulas
    bool pass = true;
    std::string detail = "ok";
    for (double p : {1.5, 2.0, 3.0}) {
      const auto cfg = make_cfg(p, 8, 4000);
      const auto a = compute_schedule(cfg);
      const auto b = compute_schedule(cfg);
      if (a.alpha != b.alpha || a.r != b.r || a.eps0 != b.eps0 ||
          a.stages.size() != b.stages.size()) {
        pass = false;
        detail = "replay mismatch";
      }
      // independent recomputation of the branch quantities
      const auto& g = cfg.geometry;
      const double cb = cbar(g.effective_p);
      const double gamma = cfg.solver.gamma;
      const double ratio = static_cast<double>(cfg.T) / cfg.solver.C;
      double alpha, rexact;
      if (g.effective_p >= 2.0) {
        alpha = std::pow(1.0 / ratio * 4.0, gamma) * g.effective_p *
                std::pow(cb, 2.0 / g.effective_p - 1.0) * cfg.L *
                std::pow(cfg.R, 2.0 - g.effective_p);
        rexact = std::log2(std::pow(ratio, gamma) *
                           std::pow(cb, -2.0 / g.effective_p));
      } else {
        alpha = std::pow(1.0 / ratio, gamma) * 4.0 / (g.effective_p - 1.0) *
                std::pow(cb, -2.0 / g.effective_p) * cfg.L *
                std::pow(cfg.R, 2.0 - g.effective_p);
        rexact = std::log2(std::pow(cfg.R, g.effective_p - 2.0) *
                           std::pow(ratio, gamma) / (2.0 * cb));
      }
      const int r = std::min(64, static_cast<int>(std::ceil(rexact)));
      if (a.alpha != alpha || a.r != r) {
        pass = false;
        detail = "branch formula mismatch";
      }
      // exact halving and the initial accuracy
      const double p1 = g.p_hat1;
      if (a.eps0 != cfg.L * std::pow(cfg.R, p1) / p1) {
        pass = false;
        detail = "initial accuracy mismatch";
      }
      for (std::size_t i = 1; i < a.stages.size(); ++i) {
        if (a.stages[i].eps_hat != 0.5 * a.stages[i - 1].eps_hat) {
          pass = false;
          detail = "halving not exact";
        }
        if (a.stages[i].radius > a.stages[i - 1].radius) {
          pass = false;
          detail = "stage radius increased";
        }
      }
    }
    record(out, "usolp/schedule-replay", pass, detail);
  }

  {  // smoothness-domination precondition flag matches a direct recomputation
    bool pass = true;
    for (long T : {64L, 100000L}) {
      for (double p : {1.5, 3.0}) {
        const auto cfg = make_cfg(p, 8, T);
        const auto s = compute_schedule(cfg);
        const double cb = cbar(p);
        const double limit =
            p >= 2.0 ? cfg.L * std::pow(cfg.R, 2.0 - p) / ((p - 1.0) * cb)
                     : p * std::pow(2.0, 1.0 - p) * cfg.L *
                           std::pow(cfg.R, 2.0 - p);
        if (s.alpha_precondition_ok != (s.alpha <= limit)) pass = false;
      }
    }
    record(out, "usolp/alpha-precondition-flag", pass,
           "flag equals the closed-form inequality");
  }

  {  // optimization-error clause on a small certified instance
    bool pass = true;
    std::string detail = "ok";
    try {
      Dataset data = random_glm_dataset(rng, 12, 4, 1.0, 2.0);
      auto cfg = make_cfg(2.0, 4, 3000);
      cfg.L = glm_smoothness_bound(data, 0.25, 2.0, 1.0);
      const auto result = run_usolp(cfg, data, LossModel::logistic());
      const auto& sched = result.schedule;
      FunctionObjective plain(
          [&](const Vector& x) {
            return empirical_risk(data, LossModel::logistic(), x).first;
          },
          [&](const Vector& x) {
            return empirical_risk(data, LossModel::logistic(), x).second;
          },
          cfg.L);
      BallDomain ball{cfg.x0, cfg.R, cfg.geometry};
      const auto ref = reference_solve(plain, ball, cfg.x0, 1e-10);
      const double gap = plain.value(result.point) - plain.value(ref.point);
      const double D = regularizer_range_D(
          ball, Regularizer::make(cfg.geometry, cfg.x0, 1.0));
      const double eps_r = sched.stages.back().eps_hat;
      const double bound =
          2.0 * sched.alpha * std::pow(D, cfg.geometry.p_hat2) + 2.0 * eps_r;
      if (gap > bound + 1e-9) {
        pass = false;
        detail = "empirical-risk gap exceeded 2*alpha*D^p + 2*eps_r";
      }
      if (!result.trace.fully_certified) {
        pass = false;
        detail = "stages failed to certify";
      }
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    record(out, "usolp/optimization-error-clause", pass, detail);
  }

  {  // first-order balance of the two error terms at the theory optimum
    const double a2 = alpha_star_theory(2.0, 100, 1.0, 1.0);
    const double stab = stability_bound_theory(2.0, 100, a2, 1.0);
    const double opt = 2.0 * a2 * 1.0;
    // with the nu = 2 closed form, the stability term equals alpha itself and
    // the optimization term is exactly twice it
    const bool pass = std::abs(stab - a2) <= 1e-9 &&
                      std::abs(opt - 2.0 * stab) <= 1e-9 &&
                      std::abs(a2 - 2.0 * std::sqrt(3.0) / 10.0) <= 1e-12;
    record(out, "usolp/theory-balance", pass,
           "stability term equals alpha at the nu=2 optimum");
  }

  {  // theory helper spot values
    const double req_acc = required_accuracy_theory(2.0, 100, 1.0, 1.0);
    const bool pass = std::abs(req_acc - 6.0 / 1000.0) <= 1e-15;
    record(out, "usolp/required-accuracy-spot", pass, "6GD/n^(1+1/nu)");
  }

  return out;
}

std::vector<CheckResult> verify_adversarial(std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto rng = make_rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);

  {  // case-1 gap distance: closed form vs evaluation at the ball minimizers
    double margin = 1e300;
    const double ps_list[] = {1.5, 2.0, 3.0};
    for (int it = 0; it < 100; ++it) {
      const double p = ps_list[it % 3];
      const int s = 2 + it % 5;
      const int d = s + it % 3;
      const double R = 0.5 + 0.01 * (it % 100);
      std::uniform_int_distribution<int> pick(0, s - 1);
      Vector v = Vector::Zero(d), vp = Vector::Zero(d);
      v[pick(rng)] = coin(rng) == 0 ? 1.0 : -1.0;
      vp[pick(rng)] = coin(rng) == 0 ? 1.0 : -1.0;
      auto fam = Case1Family::make(v, 0.3, s, d, 1.2, p);
      auto famp = Case1Family::make(vp, 0.3, s, d, 1.2, p);
      BallDomain ball{Vector::Zero(d), R, PNormGeometry::make(p)};
      const Vector g = fam.scale() * fam.delta * (v + vp);
      const Vector u = linear_max_over_ball(-g, ball);
      const double joint = fam.population_risk(u) + famp.population_risk(u);
      const double numeric = joint - population_min_linear(fam, R) -
                             population_min_linear(famp, R);
      const double closed = d_opt_case1(fam, v, vp, R);
      margin = std::min(margin, 1e-6 - std::abs(closed - numeric));
    }
    record(out, "adversarial/gap-distance-case1", margin >= 0.0,
           worst(margin));
  }

  {  // case-2 gap distance
    double margin = 1e300;
    const double ps_list[] = {1.5, 2.0, 3.0};
    for (int it = 0; it < 100; ++it) {
      const double p = ps_list[it % 3];
      const int s = 2 + it % 5;
      const int d = s + 2;
      const double R = 0.7 + 0.01 * (it % 60);
      Vector v = Vector::Zero(d), vp = Vector::Zero(d);
      for (int j = 0; j < s; ++j) {
        v[j] = coin(rng) == 0 ? 1.0 : -1.0;
        vp[j] = coin(rng) == 0 ? 1.0 : -1.0;
      }
      auto fam = Case2Family::make(v, 0.25, s, d, 1.1, p);
      auto famp = Case2Family::make(vp, 0.25, s, d, 1.1, p);
      BallDomain ball{Vector::Zero(d), R, PNormGeometry::make(p)};
      const Vector g = fam.G * fam.delta / s * (v + vp);
      const Vector u = linear_max_over_ball(-g, ball);
      const double joint = fam.population_risk(u) + famp.population_risk(u);
      const double numeric = joint - population_min_linear(fam, R) -
                             population_min_linear(famp, R);
      const double closed = d_opt_case2(fam, v, vp, R);
      margin = std::min(margin, 1e-6 - std::abs(closed - numeric));
    }
    record(out, "adversarial/gap-distance-case2", margin >= 0.0,
           worst(margin));
  }

  {  // Monte-Carlo risk agrees with the closed form at the 3-sigma rate
    bool pass = true;
    std::string detail = "ok";
    const int mc = 20000;
    {
      Vector v = Vector::Zero(6);
      v[1] = 1.0;
      auto fam = Case1Family::make(v, 0.4, 4, 6, 1.0, 1.5);
      const Vector x = random_box(rng, 6, 0.8);
      Dataset S = sample_case1(fam, mc, mix_seed(seed, 11));
      double mean = 0.0, var = 0.0;
      std::vector<double> vals;
      vals.reserve(mc);
      for (const auto& z : S.samples) {
        vals.push_back(fam.loss().eval(x, z).first);
        mean += vals.back();
      }
      mean /= mc;
      for (double t : vals) var += (t - mean) * (t - mean);
      var /= (mc - 1);
      const double sigma = std::sqrt(var / mc);
      if (std::abs(mean - fam.population_risk(x)) > 3.0 * sigma + 1e-12) {
        pass = false;
        detail = "case-1 Monte-Carlo risk outside 3 sigma";
      }
    }
    {
      Vector v = Vector::Zero(6);
      v.head(4) << 1.0, -1.0, 1.0, 1.0;
      auto fam = Case2Family::make(v, 0.3, 4, 6, 1.0, 3.0);
      const Vector x = random_box(rng, 6, 0.8);
      Dataset S = sample_case2(fam, mc, mix_seed(seed, 12));
      double mean = 0.0, var = 0.0;
      std::vector<double> vals;
      vals.reserve(mc);
      for (const auto& z : S.samples) {
        vals.push_back(fam.loss().eval(x, z).first);
        mean += vals.back();
      }
      mean /= mc;
      for (double t : vals) var += (t - mean) * (t - mean);
      var /= (mc - 1);
      const double sigma = std::sqrt(var / mc);
      if (std::abs(mean - fam.population_risk(x)) > 3.0 * sigma + 1e-12) {
        pass = false;
        detail = "case-2 Monte-Carlo risk outside 3 sigma";
      }
    }
    record(out, "adversarial/mc-risk-consistency", pass, detail);
  }

  {  // packing separation (the constructor hard-asserts; re-verify here)
    bool pass = true;
    std::string detail = "ok";
    try {
      const auto pack = gv_packing(12, mix_seed(seed, 21));
      if (pack.min_distance * 2 < 12 || pack.vectors.size() < 2) {
        pass = false;
        detail = "separation too small";
      }
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    record(out, "adversarial/packing-separation", pass, detail);
  }

  {  // bias schedules and bound regimes
    const double d1 = delta_schedule(LowerBoundCase::Case1, 8, 100, 8);
    const double d1_sat = delta_schedule(LowerBoundCase::Case1, 8, 1, 1000);
    const double d2 = delta_schedule(LowerBoundCase::Case2, 48, 1, 64);
    bool pass =
        std::abs(d1 - std::sqrt(std::log(8.0) / 600.0)) <= 1e-15 &&
        d1_sat == 1.0 && d2 == 1.0;
    const auto small_p = lower_bound_value(1.01, 1000, 50, 1.0, 1.0);
    const auto high_dim = lower_bound_value(3.0, 512, 10, 1.0, 1.0);
    const auto low_dim = lower_bound_value(2.0, 10, 100, 1.0, 1.0);
    pass = pass && small_p.regime == "small-p" &&
           high_dim.regime == "high-dim" &&
           std::abs(high_dim.value -
                    (1.0 / 16.0) * std::pow(10.0, -1.0 / 3.0)) <= 1e-15 &&
           low_dim.regime == "low-dim (external)";
    record(out, "adversarial/schedules-and-regimes", pass,
           "closed-form schedule and regime selection");
  }

  return out;
}

std::vector<CheckResult> verify_suite(const std::string& suite,
                                      std::uint64_t seed) {
  if (suite == "geometry") return verify_geometry(seed);
  if (suite == "objectives") return verify_objectives(seed);
  if (suite == "solver") return verify_solver(seed);
  if (suite == "usolp") return verify_usolp(seed);
  if (suite == "adversarial") return verify_adversarial(seed);
  if (suite == "all") {
    std::vector<CheckResult> out;
    for (const char* name :
         {"geometry", "objectives", "solver", "usolp", "adversarial"}) {
      auto part = verify_suite(name, seed);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  throw std::invalid_argument("unknown verification suite: " + suite);
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

}  // namespace lpstab

