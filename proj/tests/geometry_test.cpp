#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "lpstab/checks.hpp"
#include "lpstab/geometry.hpp"
#include "lpstab/rng.hpp"

using namespace lpstab;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector random_box(std::mt19937_64& rng, int d, double half_width) {
  std::uniform_real_distribution<double> unif(-half_width, half_width);
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = unif(rng);
  return v;
}

}  // namespace

TEST_CASE("pnorm evaluates the standard examples") {
  CHECK(pnorm(vec2(3.0, 4.0), 2.0) == doctest::Approx(5.0).epsilon(1e-12));
  Vector ones = Vector::Ones(4);
  CHECK(pnorm(ones, 4.0) ==
        doctest::Approx(std::pow(4.0, 0.25)).epsilon(1e-12));
  CHECK(pnorm(Vector::Zero(3), 1.0) == 0.0);
  CHECK(pnorm(Vector::Zero(3), 7.5) == 0.0);
  CHECK(pnorm(vec2(-3.0, 2.0), kInfinityExponent) == 3.0);
  CHECK(pnorm(vec2(-3.0, 2.0), 1.0) == 5.0);
}

TEST_CASE("pnorm rejects invalid input") {
  CHECK_THROWS_AS(pnorm(vec2(1.0, 2.0), 0.5), std::invalid_argument);
  Vector bad = vec2(1.0, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(pnorm(bad, 2.0), std::domain_error);
}

TEST_CASE("dual exponent pairs satisfy 1/p + 1/p* = 1") {
  CHECK(dual_exponent(2.0) == 2.0);
  CHECK(dual_exponent(3.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(dual_exponent(1.0) == kInfinityExponent);
  CHECK(dual_exponent(kInfinityExponent) == 1.0);
  for (double p : {1.2, 1.5, 2.0, 2.7, 4.0}) {
    CHECK(std::abs(1.0 / p + 1.0 / dual_exponent(p) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(dual_exponent(0.9), std::invalid_argument);
}

TEST_CASE("PNormGeometry splits the exponent around 2") {
  for (double p : {1.3, 1.9, 2.0, 3.0, 6.0}) {
    const PNormGeometry g = PNormGeometry::make(p);
    CHECK(g.p_hat1 == std::min(p, 2.0));
    CHECK(g.p_hat2 == std::max(p, 2.0));
    CHECK(g.p_hat1 <= 2.0);
    CHECK(g.p_hat2 >= 2.0);
    CHECK((g.p == g.p_hat1 || g.p == g.p_hat2));
    CHECK_FALSE(g.remapped);
  }
  CHECK_THROWS_AS(PNormGeometry::make(0.5), std::invalid_argument);
}

TEST_CASE("small exponents are remapped to 1 + 1/log d") {
  const int d = 20;
  const double p_min = 1.0 + 1.0 / std::log(static_cast<double>(d));
  const PNormGeometry g = PNormGeometry::for_dimension(1.0, d);
  CHECK(g.remapped);
  CHECK(g.p == 1.0);
  CHECK(g.effective_p == doctest::Approx(p_min).epsilon(1e-14));
  CHECK(g.p_hat1 == doctest::Approx(p_min).epsilon(1e-14));

  const PNormGeometry h = PNormGeometry::for_dimension(2.0, d);
  CHECK_FALSE(h.remapped);
  CHECK(h.effective_p == 2.0);
}

TEST_CASE("cbar matches the two-branch constant") {
  CHECK(cbar(2.0) == 1.0);
  CHECK(cbar(3.0) == 2.0);
  CHECK(cbar(1.5) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
  CHECK(cbar(4.0) == 4.0);
  CHECK_THROWS_AS(cbar(1.0), std::invalid_argument);
  CHECK_THROWS_AS(cbar(0.7), std::invalid_argument);
}

TEST_CASE("regularizer value and gradient") {
  SUBCASE("p=2 is the half squared norm") {
    const Regularizer reg =
        Regularizer::make(PNormGeometry::make(2.0), Vector::Zero(2), 1.0);
    const auto [v, g] = reg.eval(vec2(3.0, 4.0));
    CHECK(v == doctest::Approx(12.5).epsilon(1e-12));
    CHECK((g - vec2(3.0, 4.0)).norm() <= 1e-12);
  }
  SUBCASE("p=3 with alpha=2") {
    const Regularizer reg =
        Regularizer::make(PNormGeometry::make(3.0), Vector::Zero(2), 2.0);
    const auto [v, g] = reg.eval(vec2(1.0, 0.0));
    CHECK(v == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK((g - vec2(4.0, 0.0)).norm() <= 1e-12);
  }
  SUBCASE("zero value and gradient at the center") {
    for (double p : {1.5, 2.0, 3.0}) {
      Vector c = vec2(0.3, -0.7);
      const Regularizer reg =
          Regularizer::make(PNormGeometry::make(p), c, 1.7);
      CHECK(reg.value(c) == 0.0);
      CHECK(reg.gradient(c).norm() == 0.0);
    }
  }
  SUBCASE("gradient matches central finite differences") {
    auto rng = make_rng(7);
    for (double p : {1.6, 2.0, 2.4, 3.0}) {
      const Regularizer reg =
          Regularizer::make(PNormGeometry::make(p), Vector::Zero(4), 0.8);
      const Vector x = random_box(rng, 4, 1.5);
      const Vector fd = finite_difference_gradient(
          [&](const Vector& u) { return reg.value(u); }, x);
      CHECK((reg.gradient(x) - fd).norm() <= 1e-5 * (1.0 + fd.norm()));
    }
  }
  CHECK_THROWS_AS(
      Regularizer::make(PNormGeometry::make(2.0), Vector::Zero(2), -1.0),
      std::invalid_argument);
}

TEST_CASE("bregman divergence") {
  const Regularizer quad =
      Regularizer::make(PNormGeometry::make(2.0), Vector::Zero(3), 1.0);
  auto rng = make_rng(11);
  for (int k = 0; k < 50; ++k) {
    const Vector x = random_box(rng, 3, 2.0);
    const Vector y = random_box(rng, 3, 2.0);
    CHECK(bregman(quad, x, y) ==
          doctest::Approx(0.5 * (x - y).squaredNorm()).epsilon(1e-10));
    CHECK(bregman(quad, x, x) == doctest::Approx(0.0));
  }
  const Regularizer cubic =
      Regularizer::make(PNormGeometry::make(3.0), Vector::Zero(2), 1.0);
  CHECK(bregman(cubic, vec2(1.0, 0.0), Vector::Zero(2)) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  for (int k = 0; k < 200; ++k) {
    const Vector x = random_box(rng, 2, 2.0);
    const Vector y = random_box(rng, 2, 2.0);
    CHECK(bregman(cubic, x, y) >= -1e-12);
  }
}

TEST_CASE("ball projection") {
  SUBCASE("p=2 radial scaling") {
    const BallDomain ball{Vector::Zero(2), 1.0, PNormGeometry::make(2.0)};
    const Vector pr = project_ball(vec2(3.0, 4.0), ball);
    CHECK((pr - vec2(0.6, 0.8)).norm() <= 1e-12);
  }
  SUBCASE("interior points are untouched") {
    const BallDomain ball{Vector::Zero(2), 1.0, PNormGeometry::make(3.0)};
    const Vector x = vec2(0.2, -0.3);
    CHECK((project_ball(x, ball) - x).norm() == 0.0);
  }
  SUBCASE("p=4 axis point lands on the boundary") {
    const BallDomain ball{Vector::Zero(2), 1.0, PNormGeometry::make(4.0)};
    const Vector pr = project_ball(vec2(2.0, 0.0), ball);
    CHECK((pr - vec2(1.0, 0.0)).norm() <= 1e-8);
  }
  SUBCASE("membership, idempotence and norm contraction") {
    auto rng = make_rng(23);
    for (double p : {1.0, 1.4, 2.0, 2.7, 4.0, kInfinityExponent}) {
      const BallDomain ball{Vector::Zero(5), 0.8, PNormGeometry::make(p)};
      for (int k = 0; k < 50; ++k) {
        const Vector x = random_box(rng, 5, 3.0);
        const Vector pr = project_ball(x, ball);
        CHECK(ball.contains(pr));
        CHECK((project_ball(pr, ball) - pr).norm() <= 1e-10);
        CHECK(pnorm(pr, ball.geometry.effective_p) <=
              pnorm(x, ball.geometry.effective_p) + 1e-10);
      }
    }
  }
  const BallDomain bad{Vector::Zero(2), 0.0, PNormGeometry::make(2.0)};
  CHECK_THROWS_AS(project_ball(vec2(1.0, 1.0), bad), std::invalid_argument);
}

TEST_CASE("linear maximization over the ball") {
  SUBCASE("p=2 dual-norm attainment") {
    const BallDomain ball{Vector::Zero(2), 1.0, PNormGeometry::make(2.0)};
    const Vector u = linear_max_over_ball(vec2(3.0, 4.0), ball);
    CHECK((u - vec2(0.6, 0.8)).norm() <= 1e-12);
    CHECK(vec2(3.0, 4.0).dot(u) == doctest::Approx(5.0).epsilon(1e-12));
  }
  SUBCASE("axis gradients pick the axis vertex") {
    const BallDomain ball{Vector::Zero(3), 2.5, PNormGeometry::make(2.0)};
    Vector e1 = Vector::Zero(3);
    e1[0] = 1.0;
    CHECK((linear_max_over_ball(e1, ball) - 2.5 * e1).norm() <= 1e-12);
  }
  SUBCASE("p=4 diagonal gradient") {
    const BallDomain ball{Vector::Zero(2), 1.0, PNormGeometry::make(4.0)};
    const Vector u = linear_max_over_ball(vec2(1.0, 1.0), ball);
    const double c = std::pow(2.0, -0.25);
    CHECK((u - vec2(c, c)).norm() <= 1e-10);
    CHECK(vec2(1.0, 1.0).dot(u) ==
          doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-12));
  }
  SUBCASE("value equals R times the dual norm") {
    auto rng = make_rng(31);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const BallDomain ball{Vector::Zero(4), 1.3, PNormGeometry::make(p)};
      for (int k = 0; k < 30; ++k) {
        const Vector g = random_box(rng, 4, 2.0);
        const Vector u = linear_max_over_ball(g, ball);
        CHECK(std::abs(g.dot(u) -
                       ball.radius * pnorm(g, dual_exponent(p))) <= 1e-10);
        CHECK(pnorm(u, p) <= ball.radius * (1.0 + 1e-10));
      }
    }
  }
  SUBCASE("zero gradient returns the center") {
    const BallDomain ball{vec2(0.4, -0.2), 1.0, PNormGeometry::make(3.0)};
    CHECK((linear_max_over_ball(Vector::Zero(2), ball) - ball.center).norm() ==
          0.0);
  }
}

TEST_CASE("uniform convexity margin") {
  const Regularizer quad =
      Regularizer::make(PNormGeometry::make(2.0), Vector::Zero(3), 1.0);
  const ScalarFn f = [&](const Vector& x) { return quad.value(x); };
  const GradFn g = [&](const Vector& x) { return quad.gradient(x); };
  auto rng = make_rng(41);
  SUBCASE("quadratic case is exactly tight") {
    for (int k = 0; k < 100; ++k) {
      const Vector x = random_box(rng, 3, 2.0);
      const Vector y = random_box(rng, 3, 2.0);
      CHECK(std::abs(uniform_convexity_margin(f, g, x, y, 1.0, 2.0, 2.0)) <=
            1e-10);
    }
  }
  SUBCASE("coincident points give zero margin") {
    const Vector x = random_box(rng, 3, 2.0);
    CHECK(uniform_convexity_margin(f, g, x, x, 1.0, 2.0, 2.0) == 0.0);
  }
  SUBCASE("the scaled p-th power is (1,p)-uniformly convex for p >= 2") {
    for (double p : {2.0, 2.5, 3.0, 4.0}) {
      const Regularizer reg =
          Regularizer::make(PNormGeometry::make(p), Vector::Zero(3), 1.0);
      const ScalarFn fr = [&](const Vector& x) { return reg.value(x); };
      const GradFn gr = [&](const Vector& x) { return reg.gradient(x); };
      for (int k = 0; k < 500; ++k) {
        const Vector x = random_box(rng, 3, 2.0);
        const Vector y = random_box(rng, 3, 2.0);
        CHECK(uniform_convexity_margin(fr, gr, x, y, 1.0, p, p) >= -1e-9);
      }
    }
  }
  CHECK_THROWS_AS(uniform_convexity_margin(f, g, Vector::Zero(3),
                                           Vector::Zero(3), 1.0, 1.5, 2.0),
                  std::invalid_argument);
}

TEST_CASE("Hoelder smoothness margin") {
  auto rng = make_rng(43);
  SUBCASE("linear functions have nonnegative margin") {
    const Vector a = vec2(0.7, -1.2);
    const ScalarFn f = [&](const Vector& x) { return a.dot(x); };
    const GradFn g = [&](const Vector&) { return a; };
    for (int k = 0; k < 100; ++k) {
      const Vector x = random_box(rng, 2, 2.0);
      const Vector y = random_box(rng, 2, 2.0);
      CHECK(holder_smooth_margin(f, g, x, y, 0.5, 1.5, 2.0) >= 0.0);
      CHECK(holder_smooth_margin(f, g, x, x, 0.5, 1.5, 2.0) == 0.0);
    }
  }
  SUBCASE("(1/p)||x||_p^p is Hoelder smooth with the stated constant") {
    for (double p : {1.2, 1.5, 1.8}) {
      const double L =
          std::pow(2.0, 3.0 - 2.0 * p) * std::pow(p / (p - 1.0), p - 1.0);
      const Regularizer reg =
          Regularizer::make(PNormGeometry::make(p), Vector::Zero(3), 1.0);
      const double unscale = 1.0 / reg.cbar;  // reg = (cbar/p)||.||^p
      const ScalarFn f = [&](const Vector& x) {
        return reg.value(x) * unscale;
      };
      const GradFn g = [&](const Vector& x) {
        return Vector(reg.gradient(x) * unscale);
      };
      for (int k = 0; k < 500; ++k) {
        const Vector x = random_box(rng, 3, 2.0);
        const Vector y = random_box(rng, 3, 2.0);
        CHECK(holder_smooth_margin(f, g, x, y, L, p, p) >= -1e-9);
      }
    }
  }
  const ScalarFn f0 = [](const Vector&) { return 0.0; };
  const GradFn g0 = [](const Vector& x) { return Vector::Zero(x.size()); };
  CHECK_THROWS_AS(holder_smooth_margin(f0, g0, Vector::Zero(2),
                                       Vector::Zero(2), 1.0, 2.5, 2.0),
                  std::invalid_argument);
}

TEST_CASE("numeric Fenchel conjugate") {
  const BallDomain box{Vector::Zero(2), 4.0,
                       PNormGeometry::make(kInfinityExponent)};
  SUBCASE("the half squared norm is self-conjugate") {
    const ScalarFn f = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
    const ConjugateResult res =
        fenchel_conjugate_numeric(f, vec2(1.0, 2.0), box, 0.05);
    CHECK(res.reliable);
    CHECK(res.value == doctest::Approx(2.5).epsilon(1e-6));
  }
  SUBCASE("quartic in one dimension") {
    const BallDomain line{Vector::Zero(1), 2.0,
                          PNormGeometry::make(kInfinityExponent)};
    const ScalarFn f = [](const Vector& x) {
      return 0.25 * std::pow(std::abs(x[0]), 4.0);
    };
    Vector y(1);
    y << 1.0;
    const ConjugateResult res = fenchel_conjugate_numeric(f, y, line, 0.01);
    CHECK(res.reliable);
    CHECK(res.value == doctest::Approx(0.75).epsilon(1e-6));
  }
  SUBCASE("conjugate of the q-th power is the dual p-th power") {
    const double q = 3.0;
    const double p = q / (q - 1.0);
    const ScalarFn f = [&](const Vector& x) {
      return std::pow(pnorm(x, q), q) / q;
    };
    auto rng = make_rng(53);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int k = 0; k < 5; ++k) {
      const Vector y = vec2(unif(rng), unif(rng));
      const ConjugateResult res = fenchel_conjugate_numeric(f, y, box, 0.02);
      CHECK(res.reliable);
      CHECK(std::abs(res.value - std::pow(pnorm(y, p), p) / p) <= 1e-6);
    }
  }
  SUBCASE("boundary suprema are flagged unreliable") {
    const ScalarFn f = [](const Vector&) { return 0.0; };  // conjugate blows up
    const ConjugateResult res =
        fenchel_conjugate_numeric(f, vec2(1.0, 0.0), box, 0.05);
    CHECK_FALSE(res.reliable);
  }
  const ScalarFn f = [](const Vector& x) { return x.squaredNorm(); };
  CHECK_THROWS_AS(
      fenchel_conjugate_numeric(
          f, Vector::Zero(4),
          BallDomain{Vector::Zero(4), 1.0, PNormGeometry::make(2.0)}, 0.1),
      std::invalid_argument);
}

TEST_CASE("geometry invariant suite passes") {
  const auto results = verify_geometry(12345);
  for (const auto& r : results) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}
