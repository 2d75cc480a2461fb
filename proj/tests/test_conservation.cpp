#include <cmath>

#include "doctest.h"
#include "plap/conservation.hpp"
#include "plap/rng.hpp"
#include "plap/sweeps.hpp"

using namespace plap;

namespace {

Field make_field(Grid g, double t, double (*u)(double)) {
  Field f{g, t, {}};
  for (std::size_t i = 0; i < g.N; ++i) f.values.push_back(u(g.r(i)));
  return f;
}

double norm(const std::array<double, 3>& r) { return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])}); }

ConservationLaw cl1(double m, double k, double a = 0.0) {
  LawParams p;
  p.m = m, p.k = k, p.a = a;
  return make_law(LawTag::CL1, p, DiffusivitySpec::radial_power(1, 3));
}

}  // namespace

TEST_SUITE("conservation") {
  TEST_CASE("catalog picks CL1 for a linear source") {
    auto P = make_problem(DiffusivitySpec::radial_power(1, 3), SourceSpec::linear(0.4, 0.9), 3);
    auto laws = catalog_laws(P);
    REQUIRE(!laws.empty());
    CHECK(laws.front().tag == LawTag::CL1);
    // T = r^3 e^{-kt} u
    double T = laws.front().T(HyperDual(0.5), HyperDual(1.2), HyperDual(0.7)).value;
    CHECK(T == doctest::Approx(std::pow(1.2, 3) * std::exp(-0.45) * 0.7).epsilon(1e-14));
  }

  TEST_CASE("catalog picks CL3 for the exponential source") {
    auto P = make_problem(DiffusivitySpec::shifted_power(1, 1, 0, -1), SourceSpec::exponential(1, 1, 0.2), 1);
    bool found = false;
    for (const auto& l : catalog_laws(P)) found = found || l.tag == LawTag::CL3;
    CHECK(found);
  }

  TEST_CASE("multipliers") {
    auto P = make_problem(DiffusivitySpec::arbitrary([](const HyperDual& v) { return -(v + 0.4 * v * v * v); }),
                          SourceSpec::linear(0.3, 0.8), 2);
    auto law = cl1(2, 0.8, 0.3);
    LawJet j{0.5, 1.5, 0.7, 0.2};
    CHECK(norm(multiplier_residual(law, P, j)) <= 1e-15);

    auto Pq = make_problem(DiffusivitySpec::radial_power(1, 3),
                           SourceSpec::arbitrary([](const HyperDual& u) { return 0.3 + 0.8 * u * u; }), 2);
    CHECK(norm(multiplier_residual(law, Pq, j)) > 1e-3);

    LawParams q;
    q.m = 1, q.p = 1.3, q.alpha = 0.6, q.kappa = 0.9, q.a = 0.2, q.k = 0.7;
    auto h = DiffusivitySpec::shifted_power(0.9, 0.6, 0, -1);
    auto P3 = make_problem(h, SourceSpec::exponential(0.7, 1.3, 0.2), 1);
    auto cl3 = make_law(LawTag::CL3, q, h);
    CHECK(norm(multiplier_residual(cl3, P3, {0.4, 1.1, 0.3, 0.5})) <= 1e-10);
  }

  TEST_CASE("characteristic form") {
    auto P = make_problem(DiffusivitySpec::radial_power(1, 3), SourceSpec::linear(0, 1), 2);
    CHECK(norm(characteristic_residual(cl1(2, 1), P, {0.5, 1.5, 0.7, 0.2})) <= 1e-10);
    auto Pm = make_problem(DiffusivitySpec::radial_power(1, 3), SourceSpec::linear(0.3, 1), -1);
    CHECK(norm(characteristic_residual(cl1(-1, 1, 0.3), Pm, {0.5, 1.5, 0.7, 0.2})) <= 1e-10);

    LawParams q;
    q.m = 1, q.p = 1, q.alpha = 1, q.kappa = 1, q.a = 0, q.k = 1;
    auto h = DiffusivitySpec::shifted_power(1, 1, 0, -1);
    auto P3 = make_problem(h, SourceSpec::exponential(1, 1, 0), 1);
    CHECK(norm(characteristic_residual(make_law(LawTag::CL3, q, h), P3, {0.5, 1.5, 0.7, 0.2})) <= 1e-9);
  }

  TEST_CASE("Q equals T_u across the sweep cases") {
    Rng rng(43);
    for (const auto& c : conservation_cases(43)) {
      for (int i = 0; i < 10; ++i) {
        HyperDual t(uniform(rng, 0.1, 1)), r(uniform(rng, 0.5, 2)), u(uniform(rng, -0.5, 0.5), 1, 0, 0);
        double Tu = c.law.T(t, r, u).d1, Q = c.law.Q(t, r, u).value;
        CHECK(std::abs(Tu - Q) <= 1e-10 * std::max(1.0, std::abs(Q)));
      }
    }
  }

  TEST_CASE("phi modes") {
    auto one = phi_instance(SourceSpec::constant(0.5), 1, 0);
    CHECK(one.phi(HyperDual(0.3), HyperDual(0.8)).value == 1.0);
    auto e = phi_instance(SourceSpec::constant(2), 1, 1);
    CHECK(e.phi(HyperDual(0.2), HyperDual(0.5)).value == doctest::Approx(std::exp(0.5 - 0.6)).epsilon(1e-15));
    auto e0 = phi_instance(SourceSpec::constant(0.0), 1, 1);
    CHECK(e0.phi(HyperDual(0.2), HyperDual(0.5)).value == doctest::Approx(std::exp(0.3)).epsilon(1e-15));
    CHECK(phi_residual(e, {{0.1, 0.2}, {0.7, -0.4}, {1.3, 2.0}}) <= 1e-14);
    CHECK_THROWS(phi_instance(SourceSpec::linear(0.1, 1), 1, 1));
  }

  TEST_CASE("conserved quantities by Simpson's rule") {
    Grid g{0, 1, 101};
    CHECK(conserved_quantity(cl1(0, 0), make_field(g, 0, [](double) { return 0.0; })) == 0.0);
    CHECK(conserved_quantity(cl1(0, 0), make_field(g, 0, [](double) { return 1.0; })) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(conserved_quantity(cl1(2, 0), make_field(g, 0, [](double r) { return r; })) ==
          doctest::Approx(0.25).epsilon(1e-8));
    CHECK_THROWS(conserved_quantity(cl1(0, 0), make_field({0, 1, 2}, 0, [](double) { return 1.0; })));
  }

  TEST_CASE("stationary state: only the time difference of e^{-kt} is left") {
    const double b = 0.6, k = -1.5;
    Grid g{0.5, 2, 41};
    auto defect = [&](double dt) {
      Trajectory traj{g, {}};
      for (int s = 0; s < 5; ++s) traj.slices.push_back(Field{g, dt * s, std::vector<double>(g.N, -b / k)});
      auto rep = continuity_check(cl1(1, k, b), traj);
      CHECK(rep.rows.size() == 3);
      return rep.max_defect;
    };
    double d1 = defect(0.01), d2 = defect(0.005);
    CHECK(d1 <= 1e-4);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.02));
    // with k -> 0 the flux is constant and the defect is rounding only
    Trajectory flat{g, {}};
    for (int s = 0; s < 5; ++s) flat.slices.push_back(Field{g, 0.1 * s, std::vector<double>(g.N, 0.4)});
    CHECK(continuity_check(cl1(1, 0, 0), flat).max_defect <= 1e-12);
  }

  TEST_CASE("weighted integral for the exponential law") {
    Grid g{0, 10, 2001};
    auto s = s_quantity(make_field(g, 0, [](double) { return 0.0; }), 1, 1, 1, 0);
    CHECK(s.value == doctest::Approx(1 - std::exp(-10.0)).epsilon(1e-9));
    CHECK(s.value == s.integral);
    CHECK(s.decays);
    auto flat = s_quantity(make_field({0, 1, 101}, 0, [](double) { return 0.0; }), 1, 1, 0, 0);
    CHECK_FALSE(flat.decays);
  }

  TEST_CASE("gradient is exact on quadratics") {
    std::vector<double> y;
    for (int i = 0; i < 11; ++i) y.push_back(0.01 * i * i);
    auto d = gradient(y, 0.1);
    for (int i = 0; i < 11; ++i) CHECK(d[i] == doctest::Approx(0.2 * i).epsilon(1e-12));
  }
}
