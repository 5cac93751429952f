#include "pasta/errors.hpp"
#include "pasta/hard_instance.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pasta;
using pasta::testing::fd_gradient;

namespace {

// L = Delta = 1 at half the cap: T = 8.
HardInstance half_cap_instance(double B = 0.0, double b = 0.0) {
  HardInstanceParams p;
  p.L = 1.0;
  p.Delta = 1.0;
  p.eps = 0.5 * HardInstance::eps_cap(1.0, 1.0);
  p.B_v = B;
  p.b_v = b;
  return HardInstance(p);
}

Vec vec4(double a, double b, double c, double d) {
  Vec v(4);
  v << a, b, c, d;
  return v;
}

}  // namespace

TEST_CASE("scalar pieces") {
  CHECK(psi(0.5) == 0.0);
  CHECK(psi(0.2) == 0.0);
  CHECK(psi(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(psi(0.75) == doctest::Approx(0.04978706836786394298).epsilon(1e-14));
  CHECK(psi(2.0) == doctest::Approx(2.432425454287207812).epsilon(1e-14));

  const double phi0 = std::sqrt(std::numbers::pi * std::numbers::e / 2.0);
  CHECK(phi_cap(0.0) == doctest::Approx(phi0).epsilon(1e-14));
  CHECK(phi_cap(0.0) == doctest::Approx(2.066365677061246469).epsilon(1e-14));
  CHECK(std::abs(phi_cap(0.0) - 2.0662) < 1e-3);
  CHECK(phi_cap(-3.0) == doctest::Approx(0.005578765920185928357).epsilon(1e-12));
  CHECK(phi_cap(1.5) == doctest::Approx(3.856635138757511215).epsilon(1e-14));
}

TEST_CASE("property: scalar pieces stay in their ranges") {
  const double phi_max = std::sqrt(2.0 * std::numbers::pi * std::numbers::e);
  for (int k = -200000; k <= 200000; ++k) {
    const double t = k * 1e-4;
    const double s = psi(t), f = phi_cap(t);
    REQUIRE(s >= 0.0);
    REQUIRE(s <= std::numbers::e);
    REQUIRE(f >= 0.0);
    REQUIRE(f <= phi_max);
  }
  // derivatives against finite differences
  for (double t : {-2.0, -0.3, 0.0, 0.6, 0.8, 1.3, 4.0}) {
    const double h = 1e-6;
    CHECK(psi_prime(t) == doctest::Approx((psi(t + h) - psi(t - h)) / (2 * h)).epsilon(1e-6));
    CHECK(phi_cap_prime(t) == doctest::Approx((phi_cap(t + h) - phi_cap(t - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("chain function examples") {
  CHECK(fbar(Vec::Zero(5)) == doctest::Approx(-2.066365677061246469).epsilon(1e-14));

  const Vec y = vec4(0.9, -1.2, 0.3, 2.0);
  CHECK(fbar(y) == doctest::Approx(-1.066006990908854342).epsilon(1e-13));
  const Vec g = grad_fbar(y);
  CHECK(g[0] == doctest::Approx(-3.216544646206637286).epsilon(1e-13));
  CHECK(g[1] == doctest::Approx(-4.213842613328203830).epsilon(1e-13));
  CHECK(g[2] == doctest::Approx(-2.572288368207822145).epsilon(1e-13));
  CHECK(g[3] == 0.0);
}

TEST_CASE("property: chain gradient matches finite differences and bounds") {
  Rng rng(101);
  for (int k = 0; k < 100; ++k) {
    const std::size_t T = pasta::testing::random_size(rng, 1, 10);
    const Vec y = pasta::testing::mixed_vec(rng, T, 3.0);
    const Vec g = grad_fbar(y);
    const Vec fd = fd_gradient([](const Vec& v) { return fbar(v); }, y);
    CHECK((g - fd).norm() / std::max(1.0, g.norm()) <= 1e-5);
  }
  for (int k = 0; k < 10000; ++k) {
    const std::size_t T = pasta::testing::random_size(rng, 1, 12);
    const Vec y = pasta::testing::mixed_vec(rng, T, 4.0);
    REQUIRE(std::abs(fbar(y)) <= 12.0 * static_cast<double>(T));
    const Vec g = grad_fbar(y);
    REQUIRE(g.cwiseAbs().maxCoeff() <= 23.0);
    REQUIRE(prog(g, 0.0) <= prog(y, 0.5) + 1);
  }
}

TEST_CASE("progress function") {
  CHECK(prog(Vec::Zero(3), 0.0) == 0);
  CHECK(prog(vec4(2, 0.5, 3, 0), 1.0) == 3);
  CHECK(prog(vec4(2, 0.5, 3, 0), 0.0) == 3);
  CHECK(prog(vec4(2, 0.5, 0.9, 0), 1.0) == 1);
  CHECK_THROWS_AS(prog(Vec::Zero(2), -0.1), InputError);
}

TEST_CASE("instance sizing") {
  const HardInstance inst = half_cap_instance();
  CHECK(HardInstance::eps_cap(1.0, 1.0) == doctest::Approx(0.002069581807914131).epsilon(1e-14));
  CHECK(inst.T() == 8);
  CHECK(inst.p_mask() == 1.0);
  CHECK(inst.D() == doctest::Approx(1.0 / (4 * inst.eps())));
  CHECK(inst.lambda_scale() == doctest::Approx(4 * 152 * inst.eps()));
  CHECK(inst.f_scaled(Vec::Zero(8)) == doctest::Approx(-0.1276905803086734980).epsilon(1e-12));
  const double lam = inst.lambda_scale();
  CHECK(inst.f_scaled(Vec::Zero(8)) ==
        doctest::Approx(lam * lam / (2 * 152.0) * (-phi_cap(0.0) - 12.0 * 8)).epsilon(1e-14));

  HardInstanceParams bad;
  bad.L = 1.0;
  bad.Delta = 1.0;
  bad.eps = 1.01 * HardInstance::eps_cap(1.0, 1.0);
  CHECK_THROWS_AS(HardInstance{bad}, InputError);
  bad.eps = HardInstance::eps_cap(1.0, 1.0);
  CHECK(HardInstance{bad}.T() == 2);
  bad.eps = -1.0;
  CHECK_THROWS_AS(HardInstance{bad}, InputError);
}

TEST_CASE("travel and activation pieces") {
  const HardInstance inst = half_cap_instance();
  const double eps = inst.eps(), D = inst.D(), L = inst.L(), Delta = inst.Delta();
  CHECK(inst.travel_f0(0.0).value == 0.0);
  CHECK(inst.travel_f0(0.0).derivative == -2 * eps);
  CHECK(inst.travel_f0(D).value == doctest::Approx(-Delta / 2));
  CHECK(inst.travel_f0(D + 4 * eps / L).derivative == doctest::Approx(0.0));
  CHECK(inst.travel_f0(D + 4 * eps / L).value == doctest::Approx(inst.travel_inf()));

  for (double u : {D / 2, D}) {
    const auto a = inst.activation(u);
    CHECK(a.value == doctest::Approx(u == D ? 1.0 : 0.0));
    CHECK(a.d1 == doctest::Approx(0.0));
    CHECK(a.d2 == doctest::Approx(0.0));
  }
  double max_d1 = 0.0;
  for (int k = 0; k <= 100000; ++k) max_d1 = std::max(max_d1, inst.activation(D * k / 100000.0).d1);
  CHECK(max_d1 == doctest::Approx(15 * eps / Delta).epsilon(1e-3));
}

TEST_CASE("composite") {
  const HardInstance inst = half_cap_instance();
  const Vec zero = Vec::Zero(9);
  CHECK(inst.composite_value(zero) == 0.0);

  Rng rng(7);
  for (int k = 0; k < 100; ++k) {
    Vec z(9);
    z[0] = rng.uniform(0.0, 1.3 * inst.D());
    z.tail(8) = inst.lambda_scale() * pasta::testing::mixed_vec(rng, 8, 3.0);
    Vec g;
    inst.composite_grad_into(z, g);
    const Vec fd = fd_gradient([&](const Vec& v) { return inst.composite_value(v); }, z);
    CHECK((g - fd).norm() / std::max(1.0, g.norm()) <= 1e-5);
    if (z[0] <= inst.D()) {
      CHECK(g.norm() >= 2 * inst.eps());
      CHECK(g[0] <= -2 * inst.eps() * (1 - 1e-12));
    }
  }
  CHECK_THROWS_AS(inst.composite_value(Vec::Zero(8)), InputError);

  auto f = make_hard_objective(inst);
  CHECK(f->dimension() == 9);
  CHECK(f->value(zero) == 0.0);
}

TEST_CASE("mask probability") {
  CHECK(mask_probability(0.1, 1.0, 0.0, 0.0) == 1.0);
  CHECK(mask_probability(0.1, 1.0, 1.0, 0.0) == doctest::Approx(0.9312355594674881725).epsilon(1e-14));
  double prev = 1.0;
  for (int k = 1; k <= 50; ++k) {
    const double p = mask_probability(0.1, 1.0, 0.1 * k, 0.3);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("chain oracle") {
  SUBCASE("p = 1 is deterministic") {
    const HardInstance inst = half_cap_instance();
    Rng rng(1);
    Vec y = inst.lambda_scale() * Vec::Constant(8, 0.3);
    Vec g, exact;
    inst.chain_oracle_into(y, rng, g);
    inst.grad_f_scaled_into(y, exact);
    CHECK((g - exact).norm() == 0.0);
  }
  SUBCASE("unbiased with bounded variance when masked") {
    const double eps = 0.5 * HardInstance::eps_cap(1.0, 1.0);
    const double B = 16.0 * 23.0 * eps * eps;  // p = 1/2
    const HardInstance inst = half_cap_instance(B, 0.0);
    CHECK(inst.p_mask() == doctest::Approx(0.5).epsilon(1e-12));
    Rng rng(5);
    Vec x(8);
    x << 1.0, -2.0, 0.9, 0.1, 0.0, 0.0, 0.0, 0.0;
    const Vec y = inst.lambda_scale() * x;
    Vec exact, g;
    inst.grad_f_scaled_into(y, exact);
    const int M = 100000;
    Vec sum = Vec::Zero(8);
    double sq = 0.0;
    for (int k = 0; k < M; ++k) {
      inst.chain_oracle_into(y, rng, g);
      sum += g;
      sq += (g - exact).squaredNorm();
    }
    const double p = inst.p_mask();
    const double var = sq / M;
    const double bound = std::pow(2 * eps, 2) * 23.0 * 23.0 * (1 - p) / p;
    CHECK(var <= bound * 1.05);
    CHECK(((sum / M) - exact).norm() <= 4.0 * std::sqrt(var / M) + 1e-15);
  }
}

TEST_CASE("mean-square mode derives L") {
  HardInstanceParams p;
  p.Delta = 1.0;
  p.L = 10.0;
  p.mss = true;
  p.B_v = 0.0;
  p.eps = 0.5 * HardInstance::eps_cap(152.0 / 328.0 * 10.0, 1.0);
  const HardInstance inst(p);
  CHECK(inst.L() == doctest::Approx(152.0 / 328.0 * 10.0));
  CHECK(inst.Lbar() == 10.0);
  CHECK(inst.T() == 8);
}

TEST_CASE("certificates on a valid instance") {
  const HardInstance inst = half_cap_instance(0.0, 0.0);
  const CertificateReport rep = certify_instance(inst, 10000, 3);
  CHECK_MESSAGE(rep.ok(), rep.describe());
  CHECK(rep.items.size() == 9);
  CHECK_THROWS_AS(certify_instance(inst, 999, 3), InputError);
}
