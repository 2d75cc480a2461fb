#include <cmath>
#include <numbers>

#include "doctest.h"
#include "plap/exact.hpp"
#include "plap/rng.hpp"

using namespace plap;

TEST_SUITE("exact") {
  TEST_CASE("family A closed form for a cubic diffusivity") {
    FamilyA A;  // h = V^3, n = 2, c1 = 1, r0 = 1
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
      auto s = eval_family_a(A, 0.3, r);
      CHECK(s.u == doctest::Approx(1.5 * (std::cbrt(r * r) - 1)).epsilon(1e-10));
      CHECK(s.u_r == doctest::Approx(1 / std::cbrt(r)).epsilon(1e-12));
      CHECK(r * eval_h(A.diffusivity, s.u_r, 0) == doctest::Approx(A.c1).epsilon(1e-10));
    }
    A.b = 0.7, A.c2 = 0.2;
    CHECK(eval_family_a(A, 2, A.r0).u == doctest::Approx(1.6));
  }

  TEST_CASE("family A is invariant under X1 + b X3") {
    FamilyA A;
    A.b = -0.4, A.n = 3;
    for (double eps : {0.1, 0.5})
      CHECK(eval_family_a(A, 0.2 + eps, 1.7).u == doctest::Approx(eval_family_a(A, 0.2, 1.7).u + A.b * eps).epsilon(1e-12));
  }

  TEST_CASE("family B square-root profile") {
    FamilyB B;
    B.variant = FamilyBVariant::MuZeroClosed;
    B.k = 0.5, B.b = 0.3, B.n = 2, B.p = 2, B.c1 = 1, B.r0 = 0;
    for (double r : {0.25, 1.0, 3.0}) {
      CHECK(family_b_profile(B, r).U == doctest::Approx(std::sqrt(r)).epsilon(1e-14));
      CHECK(eval_family_b(B, 0.4, r).u == doctest::Approx(std::exp(0.2) * std::sqrt(r) - 0.6).epsilon(1e-13));
    }
    B.p = 1, B.r0 = 0.5;  // p = n-1
    CHECK(family_b_profile(B, 2.0).U == doctest::Approx(std::log(4.0)).epsilon(1e-13));
  }

  TEST_CASE("family B satisfies its reduced equation") {
    FamilyB B;
    B.k = 0.8, B.b = 0.2, B.kappa = -1, B.p = 2, B.mu = 0.5, B.r0 = 0.5, B.c1 = 1, B.n = 2;
    for (double r : {0.6, 1.0, 1.7, 2.5}) {
      auto P = family_b_profile(B, r);
      double V = std::abs(P.U_r) * P.U_r, V_r = 2 * std::abs(P.U_r) * P.U_rr;
      CHECK(std::abs(B.kappa * (V_r + (B.n - 1) / r * V) + B.mu) <= 1e-9);
    }
    Grid g{0.6, 2.5, 21};
    CHECK(pde_residual(B, matched_problem(B), g, {0.0, 0.3, 0.9}) <= 1e-8);
  }

  TEST_CASE("family B time dependence is generated by X6 and X3") {
    FamilyB B;
    B.variant = FamilyBVariant::MuZeroClosed;
    B.k = 0.5, B.b = 0.3, B.n = 2, B.p = 2, B.c1 = 1, B.r0 = 0;
    // u + b/k - Phi(t) scales like e^{kt}
    auto w = [&](double t) { return eval_family_b(B, t, 1.3).u + B.b / B.k - B.Phi(t); };
    CHECK(w(0.9) == doctest::Approx(std::exp(0.5 * 0.6) * w(0.3)).epsilon(1e-13));
  }

  TEST_CASE("moving interface") {
    CHECK(interface_exponent_q(1.0 / 3.0) == doctest::Approx(-1.0 / 6.0));
    CHECK(interface_exponent_q(3.0) == doctest::Approx(1.5));
    FamilyB B;
    B.variant = FamilyBVariant::MovingInterface;
    B.k = 1, B.b = 0.4, B.kappa = -1, B.p = 1.0 / 3.0, B.n = 2, B.c1 = 0, B.mu = 2, B.r0 = 0;
    auto I = interface(B);
    CHECK(I.q == doctest::Approx(-1.0 / 6.0));
    for (int i = 0; i < 20; ++i) {
      double t = 0.05 * i;
      CHECK(std::abs(eval_family_b(B, t, I.R(t)).u + B.b / B.k) <= 1e-10);
    }
    double M1 = mass(B, 3.0, 0.2).value, M2 = mass(B, 3.0, 0.7).value;
    CHECK(std::isfinite(M1));
    CHECK(M2 / M1 > 0);
  }

  TEST_CASE("cutoff radius and finite mass") {
    auto C = cutoff_solution(0.5, 0, 1, 0.5, 1, 2, 1.0, 0.5);
    CHECK(C.mu == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(family_b_profile(C, 1.0).U_r == 0.0);
    CHECK(std::abs(family_b_profile(C, 1.0 - 1e-6).U_r) <= 1e-10);
    CHECK(family_b_profile(C, 1.2).U == doctest::Approx(family_b_profile(C, 1.0 - 1e-9).U).epsilon(1e-8));
    CHECK_THROWS(cutoff_solution(0.5, 0, 1, 1.5, 1, 2, 1.0, 0));
    CHECK(cutoff_finite_mass(0.6, 2));
    CHECK_FALSE(cutoff_finite_mass(0.3, 2));
  }

  TEST_CASE("volumes") {
    CHECK(ball_volume(3, 1) == doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-14));
    CHECK(unit_sphere_area(2) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-14));
  }

  TEST_CASE("family A mass grows linearly") {
    FamilyA A;
    A.b = 0.6, A.n = 3;
    const double R = 2, t = 0.4, d = 0.1;
    double rate = (mass(A, R, t + d).value - mass(A, R, t).value) / d;
    CHECK(rate == doctest::Approx(ball_volume(3, R) * A.b).epsilon(1e-8));
  }

  TEST_CASE("residuals") {
    FamilyA A;
    A.b = 0.3;
    Grid g{0.5, 3, 26};
    auto P = matched_problem(A);
    CHECK(pde_residual(A, P, g, {0.0, 0.5}) <= 1e-9);
    P.source.b += 0.125;
    CHECK(pde_residual(A, P, g, {0.0, 0.5}) == doctest::Approx(0.125).epsilon(1e-8));

    FamilyB B;
    B.variant = FamilyBVariant::MuZeroClosed;
    B.k = 0.5, B.b = 0.3, B.n = 2, B.p = 2, B.c1 = 1, B.r0 = 0;
    CHECK(pde_residual(B, matched_problem(B), g, {0.0, 0.5, 1.0}) <= 1e-10);
  }

  TEST_CASE("log branch needs a positive inner radius") {
    FamilyB B;
    B.variant = FamilyBVariant::MuZeroClosed;
    B.n = 3, B.p = 2, B.r0 = 0;
    CHECK_THROWS_AS(family_b_profile(B, 1.0), DomainError);
  }
}
