#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lpstab/base_optim.hpp"
#include "lpstab/checks.hpp"
#include "lpstab/objective.hpp"
#include "lpstab/objectives.hpp"
#include "lpstab/rng.hpp"

using namespace lpstab;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

FunctionObjective quadratic_bowl() {
  return FunctionObjective([](const Vector& x) { return 0.5 * x.squaredNorm(); },
                           [](const Vector& x) { return Vector(x); }, 1.0);
}

Dataset random_glm(std::mt19937_64& rng, int d, int n) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Sample> samples;
  for (int i = 0; i < n; ++i) {
    Sample z;
    z.features = Vector(d);
    for (int j = 0; j < d; ++j) z.features[j] = unif(rng);
    z.features *= 0.9 / std::max(1.0, z.features.norm());
    z.label = i % 2 == 0 ? 1.0 : -1.0;
    samples.push_back(std::move(z));
  }
  return Dataset::make(std::move(samples));
}

}  // namespace

TEST_CASE("Frank-Wolfe gap closed form") {
  const BallDomain ball{Vector::Zero(2), 1.5, PNormGeometry::make(2.0)};
  SUBCASE("zero gradient gives zero gap") {
    CHECK(frank_wolfe_gap(Vector::Zero(2), vec2(0.3, 0.1), ball) == 0.0);
  }
  SUBCASE("linear objective at the center") {
    const Vector g = vec2(3.0, 4.0);
    CHECK(frank_wolfe_gap(g, ball.center, ball) ==
          doctest::Approx(1.5 * 5.0).epsilon(1e-12));
  }
  SUBCASE("the gap upper-bounds the true suboptimality") {
    const FunctionObjective obj = quadratic_bowl();
    auto rng = make_rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      Vector x = vec2(unif(rng), unif(rng));
      if (!ball.contains(x)) continue;
      const double gap = frank_wolfe_gap(obj.gradient(x), x, ball);
      CHECK(gap >= obj.value(x) - 0.0 - 1e-12);  // minimum value is 0
    }
  }
}

TEST_CASE("solver contract on the quadratic bowl") {
  const FunctionObjective obj = quadratic_bowl();
  SolveRequest req;
  req.objective = &obj;
  req.start = vec2(1.0, 0.0);
  req.ball = BallDomain{req.start, 1.5, PNormGeometry::make(2.0)};
  req.target_gap = 1e-8;
  for (const SolverSpec& spec : {SolverSpec::pgd(), SolverSpec::apgd()}) {
    const SolveResult res = solve(spec, req);
    CHECK(res.converged);
    CHECK(res.certified_gap <= 1e-8);
    CHECK(req.ball.contains(res.point));
    CHECK(res.point.norm() <= 1e-3);
    CHECK(res.oracle_calls <= req.budget);
  }
}

TEST_CASE("linear objectives converge to the dual-norm vertex") {
  const Vector g = vec2(2.0, -1.0);
  const FunctionObjective obj([g](const Vector& x) { return g.dot(x); },
                              [g](const Vector&) { return g; }, 1.0);
  SolveRequest req;
  req.objective = &obj;
  req.start = Vector::Zero(2);
  req.ball = BallDomain{req.start, 1.0, PNormGeometry::make(3.0)};
  req.target_gap = 1e-9;
  const SolveResult res = solve(SolverSpec::pgd(), req);
  const Vector expected = linear_max_over_ball(-g, req.ball);
  CHECK(res.converged);
  // near the vertex the objective is flat along the boundary tangent, so the
  // point error scales like the square root of the certified gap
  CHECK((res.point - expected).norm() <= 1e-4);
}

TEST_CASE("regularized ERM solves match the reference minimizer") {
  auto rng = make_rng(7);
  const Dataset data = random_glm(rng, 5, 20);
  const PNormGeometry geom = PNormGeometry::make(3.0);
  const BallDomain dom{Vector::Zero(5), 1.0, geom};
  const RegularizedErm erm(data, LossModel::logistic(), dom,
                           Regularizer::make(geom, Vector::Zero(5), 0.4), 0.25);
  SolveRequest req;
  req.objective = &erm;
  req.start = Vector::Zero(5);
  req.ball = dom;
  req.target_gap = 1e-7;
  const SolveResult res = solve(SolverSpec::apgd(), req);
  CHECK(res.converged);
  CHECK(res.certified_gap <= 1e-7);
  CHECK(dom.contains(res.point));
  const SolveResult ref = reference_solve(erm, dom, Vector::Zero(5), 1e-10);
  CHECK(erm.value(res.point) - erm.value(ref.point) <= 2e-7);
  CHECK(erm.value(res.point) - erm.value(ref.point) >= -1e-9);
}

TEST_CASE("identical requests are bit-identical") {
  auto rng = make_rng(11);
  const Dataset data = random_glm(rng, 4, 15);
  const PNormGeometry geom = PNormGeometry::make(2.0);
  const BallDomain dom{Vector::Zero(4), 1.0, geom};
  const RegularizedErm erm(data, LossModel::squared(), dom,
                           Regularizer::make(geom, Vector::Zero(4), 0.2), 2.0);
  SolveRequest req;
  req.objective = &erm;
  req.start = Vector::Zero(4);
  req.ball = dom;
  req.target_gap = 1e-9;
  for (const SolverSpec& spec : {SolverSpec::pgd(), SolverSpec::apgd()}) {
    const SolveResult a = solve(spec, req);
    const SolveResult b = solve(spec, req);
    CHECK(a.oracle_calls == b.oracle_calls);
    CHECK((a.point - b.point).norm() == 0.0);
    CHECK(a.certified_gap == b.certified_gap);
  }
}

TEST_CASE("APGD objective trace is monotone") {
  auto rng = make_rng(13);
  const Dataset data = random_glm(rng, 6, 25);
  const PNormGeometry geom = PNormGeometry::make(2.0);
  const BallDomain dom{Vector::Zero(6), 1.0, geom};
  const RegularizedErm erm(data, LossModel::logistic(), dom,
                           Regularizer::make(geom, Vector::Zero(6), 0.1), 0.25);
  SolveRequest req;
  req.objective = &erm;
  req.start = Vector::Zero(6);
  req.ball = dom;
  req.target_gap = 1e-10;
  const SolveResult res = solve(SolverSpec::apgd(), req);
  REQUIRE(res.objective_trace.size() >= 2);
  for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
    CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-15);
  }
}

TEST_CASE("exhausted budgets are reported, not hidden") {
  const FunctionObjective obj = quadratic_bowl();
  SolveRequest req;
  req.objective = &obj;
  req.start = vec2(1.0, 0.0);
  req.ball = BallDomain{req.start, 1.5, PNormGeometry::make(2.0)};
  req.target_gap = 1e-12;
  req.budget = 3;
  const SolveResult res = solve(SolverSpec::pgd(), req);
  CHECK_FALSE(res.converged);
  CHECK(req.ball.contains(res.point));
  CHECK(res.oracle_calls <= 3);
}

TEST_CASE("requests are validated") {
  const FunctionObjective obj = quadratic_bowl();
  SolveRequest req;
  req.objective = &obj;
  req.start = vec2(5.0, 0.0);
  req.ball = BallDomain{Vector::Zero(2), 1.0, PNormGeometry::make(2.0)};
  CHECK_THROWS_AS(solve(SolverSpec::pgd(), req), std::invalid_argument);
  req.start = Vector::Zero(2);
  req.target_gap = 0.0;
  CHECK_THROWS_AS(solve(SolverSpec::pgd(), req), std::invalid_argument);
  SolveRequest empty;
  CHECK_THROWS_AS(solve(SolverSpec::pgd(), empty), std::invalid_argument);
}

namespace {

// Quadratic with a dense power-law spectrum: the tail modes keep both
// methods in their sublinear regime across the measured budget range.
struct SpectrumInstance {
  Vector lam;
  explicit SpectrumInstance(int d, double s) : lam(d) {
    for (int i = 0; i < d; ++i) {
      lam[i] = std::pow((i + 1.0) / static_cast<double>(d), s);
    }
  }
  double value(const Vector& x) const {
    double v = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      const double t = x[i] - 1.0;
      v += 0.5 * lam[i] * t * t;
    }
    return v;
  }
  Vector grad(const Vector& x) const {
    Vector g(x.size());
    for (int i = 0; i < x.size(); ++i) g[i] = lam[i] * (x[i] - 1.0);
    return g;
  }
};

}  // namespace

TEST_CASE("empirical rate fits recover the classical exponents") {
  const int d = 2000;
  static const SpectrumInstance inst(d, 8.0);
  static const FunctionObjective obj(
      [](const Vector& x) { return inst.value(x); },
      [](const Vector& x) { return inst.grad(x); }, 1.0);
  SolveRequest req;
  req.objective = &obj;
  req.start = Vector::Zero(d);
  req.ball = BallDomain{Vector::Zero(d), 60.0, PNormGeometry::make(2.0)};
  const std::vector<long> budgets{32, 64, 128, 256, 512};

  const RateFit pg = empirical_rate_fit(SolverSpec::pgd(), {req}, budgets);
  CHECK(pg.conclusive);
  CHECK(pg.gamma == doctest::Approx(1.0).epsilon(0.3));

  const RateFit ag = empirical_rate_fit(SolverSpec::apgd(), {req}, budgets);
  CHECK(ag.conclusive);
  CHECK(ag.gamma == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("degenerate and invalid rate-fit inputs") {
  const Vector g = vec2(1.0, 1.0);
  const FunctionObjective lin([g](const Vector& x) { return g.dot(x); },
                              [g](const Vector&) { return g; }, 1.0);
  SolveRequest req;
  req.objective = &lin;
  req.start = Vector::Zero(2);
  req.ball = BallDomain{Vector::Zero(2), 1.0, PNormGeometry::make(2.0)};
  SUBCASE("a linear objective is exact after one step") {
    const RateFit fit =
        empirical_rate_fit(SolverSpec::pgd(), {req}, {10, 20, 40, 80, 160});
    CHECK_FALSE(fit.conclusive);
  }
  SUBCASE("too few budgets") {
    CHECK_THROWS_AS(empirical_rate_fit(SolverSpec::pgd(), {req}, {10, 20, 40}),
                    std::invalid_argument);
  }
  SUBCASE("budgets must span a decade") {
    CHECK_THROWS_AS(
        empirical_rate_fit(SolverSpec::pgd(), {req}, {10, 20, 40, 80}),
        std::invalid_argument);
  }
}

TEST_CASE("solver invariant suite passes") {
  const auto results = verify_solver(12345);
  for (const auto& r : results) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}
