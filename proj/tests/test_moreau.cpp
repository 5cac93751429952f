#include "pasta/errors.hpp"
#include "pasta/moreau.hpp"
#include "pasta/problems.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace pasta;
using pasta::testing::random_vec;

namespace {

Vec scalar(double v) { return Vec::Constant(1, v); }

// min of f(y) + (lambda/2)(y - x)^2 on a scalar instance: a dense grid over
// [x - 4, x + 4], then nested grids around the incumbent
double grid_envelope(const Objective& f, double lambda, double x) {
  auto h = [&](double y) { return f.value(scalar(y)) + 0.5 * lambda * (y - x) * (y - x); };
  double center = x, half = 4.0, best = kInf;
  for (int level = 0; level < 5; ++level) {
    const int n = 20000;
    const double lo = center - half, step = 2.0 * half / n;
    double arg = center;
    for (int k = 0; k <= n; ++k) {
      const double y = lo + step * k;
      const double v = h(y);
      if (v < best) {
        best = v;
        arg = y;
      }
    }
    center = arg;
    half = 2.0 * step;
  }
  return best;
}

}  // namespace

TEST_CASE("prox examples") {
  auto q = make_quadratic(1, 1.0);
  auto a = make_abs(1);
  CHECK(prox(*q, 1.0, scalar(2.0)).xhat[0] == doctest::Approx(1.0).epsilon(1e-8));
  const ProxResult pa = prox(*a, 1.0, scalar(2.0));
  CHECK(pa.xhat[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pa.subgradient_residual);
  CHECK(pa.inner_residual <= 1e-8);

  CHECK(prox(*q, 3.0, scalar(0.0)).xhat[0] == 0.0);
  CHECK(prox(*a, 3.0, scalar(0.0)).xhat[0] == 0.0);
  CHECK(prox(*make_weakly_convex(1), 3.0, scalar(1.0)).xhat[0] == 1.0);
}

TEST_CASE("moreau gradient examples") {
  auto q = make_quadratic(1, 1.0);
  auto a = make_abs(1);
  CHECK(moreau_grad(*q, 1.0, scalar(2.0))[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(moreau_grad(*q, 1.0, scalar(0.0))[0]) <= 1e-8);
  const Vec g = moreau_grad(*a, 1.0, scalar(0.5));
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(prox(*a, 1.0, scalar(0.5)).xhat[0] == 0.0);
}

TEST_CASE("moreau stationarity examples") {
  auto q = make_quadratic(1, 1.0);
  const MoreauReport r0 = moreau_stationarity({scalar(0.0), scalar(0.0)}, *q, 1.0);
  CHECK(r0.average <= 1e-16);
  const MoreauReport r1 = moreau_stationarity({scalar(2.0)}, *q, 1.0);
  CHECK(r1.average == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r1.per_anchor.size() == 1);
  CHECK(moreau_stationarity({}, *q, 1.0).average == 0.0);
}

TEST_CASE("property: iterative prox matches the closed forms") {
  Rng gen(2024);
  for (int k = 0; k < 200; ++k) {
    const std::size_t d = pasta::testing::random_size(gen, 1, 6);
    const double lambda = gen.uniform(0.1, 5.0);
    const Vec x = pasta::testing::mixed_vec(gen, d, 6.0);
    auto a = make_abs(d);
    CHECK((prox(*a, lambda, x).xhat - prox_abs(lambda, x)).norm() <= 1e-6);
    auto q = make_quadratic(d, gen.uniform(1.0, 8.0));
    const Vec diag = q->gradient(Vec::Ones(static_cast<Eigen::Index>(d)));
    CHECK((prox(*q, lambda, x).xhat - prox_diag_quadratic(diag, lambda, x)).norm() <= 1e-6);
    const Vec expect = lambda * (x - prox_diag_quadratic(diag, lambda, x));
    CHECK((moreau_grad(*q, lambda, x) - expect).norm() <= 1e-6);
  }
}

TEST_CASE("property: envelope value matches grid minimization") {
  auto w = make_weakly_convex(1);
  auto a = make_abs(1);
  auto p = make_pl_nonconvex(1);
  Rng gen(5);
  for (int k = 0; k < 20; ++k) {
    const double x = gen.uniform(-3.0, 3.0);
    CHECK(moreau_value(*w, 4.0, scalar(x)) == doctest::Approx(grid_envelope(*w, 4.0, x)).epsilon(1e-6));
    CHECK(moreau_value(*a, 1.5, scalar(x)) == doctest::Approx(grid_envelope(*a, 1.5, x)).epsilon(1e-6));
    // lambda > rho keeps the subproblem strongly convex
    const double lam = 2.0 * *p->meta().rho;
    CHECK(moreau_value(*p, lam, scalar(x)) == doctest::Approx(grid_envelope(*p, lam, x)).epsilon(1e-6));
  }
}

TEST_CASE("property: envelope gradient consistency and smoothness") {
  auto w = make_weakly_convex(2);
  const double lambda = 4.0, rho = 2.0;
  const double Lphi = moreau_smoothness(lambda, rho);
  CHECK(Lphi == 4.0);
  Rng gen(6);
  double worst_ratio = 0.0;
  for (int k = 0; k < 500; ++k) {
    const Vec x = random_vec(gen, 2, -3, 3);
    const Vec y = k % 2 == 0 ? random_vec(gen, 2, -3, 3) : Vec(x + 1e-3 * random_vec(gen, 2, -1, 1));
    const Vec gx = moreau_grad(*w, lambda, x), gy = moreau_grad(*w, lambda, y);
    worst_ratio = std::max(worst_ratio, (gx - gy).norm() / (x - y).norm());
  }
  CHECK(worst_ratio <= Lphi * 1.01);

  for (int k = 0; k < 100; ++k) {
    const Vec x = random_vec(gen, 2, -3, 3);
    const Vec g = moreau_grad(*w, lambda, x);
    const Vec fd = pasta::testing::fd_gradient([&](const Vec& v) { return moreau_value(*w, lambda, v); }, x);
    CHECK((g - fd).norm() / std::max(1.0, g.norm()) <= 1e-5);
  }
}

TEST_CASE("property: gap domination and gradient domination") {
  Rng gen(7);
  auto w = make_weakly_convex(1);
  for (int k = 0; k < 50; ++k) {
    const Vec x = random_vec(gen, 1, -3, 3);
    // min phi = min f = 0 at x = +-1
    CHECK(moreau_value(*w, 4.0, x) <= w->value(x) + 1e-12);
  }
  auto p = make_pl_nonconvex(3);
  const double L = *p->meta().L;
  for (int k = 0; k < 50; ++k) {
    const Vec x = random_vec(gen, 3, -5, 5);
    CHECK(p->gradient(x).norm() <= 1.5 * moreau_grad(*p, 2.0 * L, x).norm() * (1 + 1e-6) + 1e-9);
  }
}

TEST_CASE("kink solutions and residuals") {
  auto w = make_weakly_convex(1);
  // 0 in [-2, 2] + 4 (1 - x) for x in [0.5, 1.5]
  for (double x : {0.5, 0.8, 1.0, 1.3, 1.5}) {
    const ProxResult r = prox(*w, 4.0, scalar(x));
    CHECK(r.xhat[0] == 1.0);
    CHECK(r.inner_residual == 0.0);
  }
  const ProxResult r = prox(*w, 4.0, scalar(2.5));
  CHECK(r.xhat[0] == doctest::Approx(5.0 / 3.0).epsilon(1e-10));
  CHECK(r.inner_residual <= 1e-8);
}

TEST_CASE("curvature and input errors") {
  auto w = make_weakly_convex(1);
  CHECK_THROWS_AS(prox(*w, 2.0, scalar(0.0)), CurvatureError);
  CHECK_THROWS_AS(moreau_smoothness(1.0, 1.0), CurvatureError);
  CHECK_THROWS_AS(prox(*w, 3.0, Vec::Zero(2)), InputError);
  CHECK_THROWS_AS(prox(*make_quadratic(1, 1.0), 1.0, scalar(2.0), 0.0), InputError);
  // a residual of 1e-300 is below what double arithmetic can resolve here
  auto p = make_pl_nonconvex(1);
  CHECK_THROWS_AS(prox(*p, 16.0, scalar(2.0), 1e-300), NonConvergenceError);
  try {
    prox(*p, 16.0, scalar(2.0), 1e-300);
  } catch (const NonConvergenceError& e) {
    CHECK(e.best_residual() < 1e-12);
  }
}
