#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "plap/hodograph.hpp"

using namespace plap;

namespace {

Field sample(Grid g, double t, double (*u)(double)) {
  Field f{g, t, {}};
  for (std::size_t i = 0; i < g.N; ++i) f.values.push_back(u(g.r(i)));
  return f;
}

constexpr double kKappa = 0.5;
double pair_u(double t, double r) { return t + std::sqrt(r * r - 2 * kKappa * t); }

ProblemSpec pair_problem() {
  return make_problem(DiffusivitySpec::shifted_power(kKappa, 0, 0, -1), SourceSpec::constant(1), 1);
}

}  // namespace

TEST_SUITE("hodograph") {
  TEST_CASE("weights") {
    CHECK(hodograph_weight(2, 1) == doctest::Approx(2));
    CHECK(hodograph_weight(1, -1) == 0.0);
    CHECK(hodograph_weight_inverse(hodograph_weight(1.7, 2), 2) == doctest::Approx(1.7).epsilon(1e-14));
  }

  TEST_CASE("forward map of a linear profile") {
    // alpha = 1, m = 1, u = r + 1: z = 2r + 1 and w = r^2/2 = (z-1)^2/8; (r,u) = (2,3) lands on (5,2)
    Field f = sample({1, 3, 201}, 0, [](double r) { return r + 1; });
    Field w = forward_map({1, 1}, f);
    CHECK(w.grid.r_min == doctest::Approx(3));
    CHECK(w.grid.r_max == doctest::Approx(7));
    for (std::size_t i = 0; i < w.grid.N; ++i) {
      double z = w.grid.r(i);
      CHECK(w.values[i] == doctest::Approx((z - 1) * (z - 1) / 8).epsilon(1e-8));
    }
    CHECK(interp_cubic(w.grid.nodes(), w.values, 5.0) == doctest::Approx(2.0).epsilon(1e-10));
  }

  TEST_CASE("folds are reported") {
    Field f = sample({0, 2, 41}, 0, [](double r) { return (r - 1) * (r - 1); });
    CHECK_THROWS_AS(forward_map({0, 0}, f), FoldError);
  }

  TEST_CASE("round trip") {
    HodographMap map{0.4, 1};
    Field f = sample({1, 2, 2001}, 0, [](double r) { return r + 0.3 * std::sin(3 * r); });
    HodographMap back = map;
    back.direction = HodographMap::Direction::Inverse;
    Field g = apply_map(back, apply_map(map, f));
    CHECK(g.grid.r_min == doctest::Approx(1).epsilon(1e-12));
    CHECK(g.grid.r_max == doctest::Approx(2).epsilon(1e-12));
    CHECK(max_abs_diff(f, g) <= 1e-8);
  }

  TEST_CASE("prolongation identities") {
    Grid g{1, 2, 201};
    Trajectory lin{g, {sample(g, 0, [](double r) { return r; })}};
    CHECK(prolongation_check({0, 0}, lin) <= 1e-8);
    Trajectory quad{g, {sample(g, 0, [](double r) { return r * r / 2; })}};
    CHECK(prolongation_check({0, 1}, quad) <= 1e-6);

    Trajectory moving{g, {}};
    for (int s = 0; s < 3; ++s) {
      Field f{g, 0.05 * s, {}};
      for (std::size_t i = 0; i < g.N; ++i) f.values.push_back(pair_u(f.t, g.r(i)));
      moving.slices.push_back(f);
    }
    CHECK(prolongation_check({0, 1}, moving) <= 1e-3);
  }

  TEST_CASE("heat decay of a sine mode") {
    Field f = sample({0, 1, 201}, 0, [](double z) { return std::sin(std::numbers::pi * z); });
    auto tr = linear_solve(SourceSpec::constant(0), 1, f, BoundaryCondition::both(EndCondition::dirichlet(0)), 0.1, 0.1);
    const Field& last = tr.slices.back();
    double decay = std::exp(-std::numbers::pi * std::numbers::pi * 0.1);
    for (std::size_t i = 0; i < last.grid.N; ++i)
      CHECK(std::abs(last.values[i] - decay * f.values[i]) <= 1e-4);

    Field c{f.grid, 0, std::vector<double>(f.grid.N, 2.0)};
    auto still = linear_solve(SourceSpec::constant(0), 1, c, BoundaryCondition::both(EndCondition::neumann()), 0.1, 0.05);
    CHECK(max_abs_diff(still.slices.back(), c) <= 1e-14);
  }

  TEST_CASE("drift carries a bump at speed minus a") {
    const double a = -1.0;
    Grid g{0, 2, 401};
    Field f{g, 0, {}};
    for (std::size_t i = 0; i < g.N; ++i) f.values.push_back(std::exp(-std::pow((g.r(i) - 0.5) / 0.05, 2)));
    auto tr = linear_solve(SourceSpec::constant(a), 1e-4, f, BoundaryCondition::both(EndCondition::dirichlet(0)), 0.3, 0.3);
    const auto& v = tr.slices.back().values;
    double centre = g.r(static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin()));
    CHECK(std::abs(centre - (0.5 - a * 0.3)) <= 1.01 * g.dr());
  }

  TEST_CASE("regularity ends are not accepted") {
    Field f = sample({0, 1, 21}, 0, [](double z) { return z; });
    CHECK_THROWS(linear_solve(SourceSpec::constant(0), 1, f, BoundaryCondition::both(EndCondition::regularity()), 0.1, 0.1));
  }

  TEST_CASE("both paths agree and a wrong map does not") {
    Field f = sample({1, 2, 101}, 0, [](double r) { return pair_u(0, r); });
    CrossValidateOptions o;
    o.t_end = 0.1;
    auto good = cross_validate(pair_problem(), f, pair_u, o);
    CHECK(good.max_gap <= 1e-4);
    o.alpha_override = 0.7;
    auto bad = cross_validate(pair_problem(), f, pair_u, o);
    CHECK(bad.max_gap > 100 * good.max_gap);
  }

  TEST_CASE("zero end time leaves only the round trip") {
    Field f = sample({1, 2, 401}, 0, [](double r) { return pair_u(0, r); });
    CrossValidateOptions o;
    o.t_end = 0;
    CHECK(cross_validate(pair_problem(), f, pair_u, o).max_gap <= 1e-8);
  }

  TEST_CASE("predicate agrees with the classification") {
    auto any_f = SourceSpec::arbitrary([](const HyperDual& u) { return 1.0 + sin(u); });
    const ProblemSpec cases[] = {
        pair_problem(),
        make_problem(DiffusivitySpec::shifted_power(0.7, 0, 0, -1), any_f, 2),
        make_problem(DiffusivitySpec::shifted_power(0.7, 0.5, 0, -1), SourceSpec::constant(0.3), 0),
        make_problem(DiffusivitySpec::shifted_power(0.7, 0.5, 0, -1), any_f, 0),
        make_problem(DiffusivitySpec::radial_power(1, 3), SourceSpec::constant(1), 1),
        make_problem(DiffusivitySpec::exp_linear(1, 0.5), SourceSpec::constant(1), 0),
    };
    for (const auto& P : cases) {
      double kappa = 0, alpha = 0;
      CHECK(hodograph_applicable(P, kappa, alpha) == classify(P).hodograph);
    }
  }
}
