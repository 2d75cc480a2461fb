#include <cmath>

#include "doctest.h"
#include "plap/sweeps.hpp"
#include "plap/symmetry.hpp"

using namespace plap;

namespace {

DiffusivitySpec any_h() {
  return DiffusivitySpec::arbitrary([](const HyperDual& v) { return -(v + 0.3 * v * v * v + 0.2 * sin(v)); });
}

bool has_tags(const std::vector<SymmetryGenerator>& g, std::vector<int> tags) {
  std::vector<int> got;
  for (const auto& x : g) got.push_back(x.tag);
  return got == tags;
}

}  // namespace

TEST_SUITE("symmetry") {
  TEST_CASE("catalog rows") {
    CHECK(has_tags(catalog(make_problem(any_h(), SourceSpec::inverse(0.8, 1.5), 1.0)), {1, 4}));
    CHECK(has_tags(catalog(make_problem(any_h(), SourceSpec::constant(0.5), 0.0)), {1, 2, 3, 5}));
    CHECK(has_tags(catalog(make_problem(DiffusivitySpec::exp_linear(1.2, 0.7), SourceSpec::constant(0.5), 2.0)), {1, 3, 5, 22}));
  }

  TEST_CASE("time translation has zero residuals") {
    auto P = make_problem(any_h(), SourceSpec::arbitrary([](const HyperDual& u) { return 1.0 + u * u; }), 1.5);
    auto X1 = make_generator(1, {});
    Jet j{0.7, 1.3, 0.2, 0.9, -0.4, 0.3};
    for (const auto& r : determining_residual(X1, P, j)) CHECK(r.value == 0.0);
    CHECK(invariance_residual_unsplit(X1, P, j).relative() <= 1e-15);
  }

  TEST_CASE("scaling-and-shift row and its negative control") {
    Params p;
    p.a = 1.5;
    p.k = 0.8;
    auto X4 = make_generator(4, p);
    auto P = make_problem(any_h(), SourceSpec::inverse(0.8, 1.5), 1.0);
    Jet j{1, 2, 0.5, 0.3, 0, 0};
    CHECK(max_relative(determining_residual(X4, P, j)) <= 1e-10);
    auto bad = make_problem(any_h(), SourceSpec::power(0.8, 0, 2), 1.0);
    CHECK(max_relative(determining_residual(X4, bad, j)) > 0.1);
  }

  TEST_CASE("power-law scaling row and its negative control") {
    auto P = make_problem(DiffusivitySpec::shifted_power(1, 0, 0, 3), SourceSpec::power(1, 0, 2), 1.0);
    SymmetryGenerator X7;
    for (const auto& g : catalog(P))
      if (g.tag == 7) X7 = g;
    REQUIRE(X7.tag == 7);
    auto scaled = X7;
    auto eta = X7.eta;
    scaled.eta = [eta](const HyperDual& t, const HyperDual& r, const HyperDual& u) { return 1.01 * eta(t, r, u); };
    Rng rng(17);
    double worst = 0.0, least_bad = 1e300;
    for (int i = 0; i < 100; ++i) {
      Jet j = sample_jet(P, rng);
      worst = std::max(worst, invariance_residual_unsplit(X7, P, j).relative());
      least_bad = std::min(least_bad, std::abs(invariance_residual_unsplit(scaled, P, j).value));
    }
    CHECK(worst <= 1e-9);
    CHECK(least_bad > 1e-3);
  }

  TEST_CASE("split and unsplit residuals agree across the rows") {
    Rng rng(19);
    for (int tag = 1; tag <= 23; ++tag) {
      RowDraw d = draw_row(tag, rng);
      for (int i = 0; i < 20; ++i) {
        Jet j = sample_jet(d.problem, rng);
        CHECK(max_relative(determining_residual(d.generator, d.problem, j)) <= 1e-9);
        CHECK(invariance_residual_unsplit(d.generator, d.problem, j).relative() <= 1e-9);
      }
    }
  }

  TEST_CASE("displayed brackets") {
    Rng rng(23);
    auto pts = sample_points(40, rng);
    Params p;
    p.a = 1.5;
    auto X1 = make_generator(1, p), X4 = make_generator(4, p);
    auto r = bracket(X1, X4, {X1, X4}, pts);
    CHECK(r.coefficients[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(r.coefficients[1]) <= 1e-10);

    p.b = 0.7;
    auto X3 = make_generator(3, p), X5 = make_generator(5, p);
    r = bracket(X1, X5, {X1, X3, X5}, pts);
    CHECK(r.coefficients[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.coefficients[1] == doctest::Approx(0.7).epsilon(1e-10));

    CHECK(std::abs(r.coefficients[2]) <= 1e-10);
  }

  TEST_CASE("every tabulated bracket is reproduced") {
    BracketSweepOptions o;
    o.draws = 1;
    o.seed = 41;
    auto sw = sweep_brackets(o);
    CHECK(sw.pass);
    CHECK(sw.rows.size() > 20);
    CHECK(sw.max_coefficient_error <= 1e-8);
  }

  TEST_CASE("structure constants are antisymmetric and satisfy Jacobi") {
    Rng rng(29);
    for (const auto& label : case_labels()) {
      ProblemSpec P = draw_case(label, rng);
      auto gens = catalog(P);
      auto sc = structure_constants(gens, sample_points(4 * gens.size() + 8, rng));
      CHECK(sc.antisymmetry_defect() <= 1e-8);
      CHECK(sc.jacobi_defect() <= 1e-8);
    }
  }

  TEST_CASE("closed-form transformations") {
    Params p;
    p.a = 0;
    auto X4 = make_transformation(4, p);
    auto y = apply_group(X4, std::log(2.0), {1, 1, 1});
    CHECK(y[0] == doctest::Approx(4));
    CHECK(y[1] == doctest::Approx(2));
    CHECK(y[2] == doctest::Approx(2));

    Params q;
    q.beta = 1, q.alpha = 0, q.b = 1, q.kappa = 1;
    auto X16 = make_transformation(16, q);
    y = apply_group(X16, 0.1, {0, 2, 0});
    CHECK(y[0] == doctest::Approx(0));
    CHECK(y[1] == doctest::Approx(2.5));
    CHECK(y[2] == doctest::Approx(0));
  }

  TEST_CASE("group law, identity and agreement with the flow") {
    Rng rng(31);
    for (int tag = 1; tag <= 23; ++tag) {
      RowDraw d = draw_row(tag, rng);
      auto T = make_transformation(tag, d.generator.params);
      Point3 x{uniform(rng, 0.5, 1.5), uniform(rng, 1.0, 2.0), uniform(rng, -0.5, 0.5)};
      auto same = apply_group(T, 0.0, x);
      for (int i = 0; i < 3; ++i) CHECK(same[i] == x[i]);
      const double e1 = 0.05, e2 = -0.03;
      try {
        auto a = apply_group(T, e1, apply_group(T, e2, x)), b = apply_group(T, e1 + e2, x);
        auto c = integrate_flow(d.generator, e1, x);
        auto g = apply_group(T, e1, x);
        for (int i = 0; i < 3; ++i) {
          CHECK(std::abs(a[i] - b[i]) <= 1e-10 * std::max(1.0, std::abs(b[i])));
          CHECK(std::abs(c[i] - g[i]) <= 1e-6 * std::max(1.0, std::abs(g[i])));
        }
      } catch (const TransformDomainError&) {
        // point outside the transformation's domain for this draw
      }
    }
  }

  TEST_CASE("derived series") {
    Rng rng(37);
    auto pts = sample_points(30, rng);
    Params p;
    p.b = 0.6;
    auto X1 = make_generator(1, p), X3 = make_generator(3, p), X5 = make_generator(5, p), X2 = make_generator(2, p);
    auto s = derived_series({X1, X3, X5}, pts);
    CHECK(s.dims == std::vector<std::size_t>{3, 2, 0});
    CHECK(s.solvable);
    auto ab = derived_series({X1, X2}, pts);
    CHECK(ab.dims == std::vector<std::size_t>{2, 0});
  }

  TEST_CASE("orbit maps of fields") {
    Grid g{0.5, 2.0, 31};
    Field f{g, 0.3, {}};
    for (std::size_t i = 0; i < g.N; ++i) f.values.push_back(std::sin(g.r(i)));
    Params p;
    p.k = 0.7;
    auto same = orbit_map(make_transformation(3, p), 0.0, f);
    CHECK(same.values == f.values);
    auto shifted = orbit_map(make_transformation(3, p), 0.2, f);
    CHECK(shifted.grid.r_min == doctest::Approx(0.5));
    for (std::size_t i = 0; i < g.N; ++i)
      CHECK(shifted.values[i] == doctest::Approx(f.values[i] + 0.2 * std::exp(0.7 * 0.3)).epsilon(1e-12));
    auto moved = orbit_map(make_transformation(2, p), 0.25, f);
    CHECK(moved.grid.r_min == doctest::Approx(0.75));
    CHECK(moved.grid.r_max == doctest::Approx(2.25));
    for (std::size_t i = 0; i < g.N; ++i) CHECK(moved.values[i] == doctest::Approx(f.values[i]).epsilon(1e-12));
  }

  TEST_CASE("parameter hash is stable") {
    Params p;
    p.b = 0.5;
    CHECK(param_hash(p) == param_hash(p));
    Params q = p;
    q.k = 1e-12;
    CHECK(param_hash(p) != param_hash(q));
  }
}
