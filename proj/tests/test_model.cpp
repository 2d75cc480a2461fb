#include <cmath>

#include "doctest.h"
#include "plap/model.hpp"
#include "plap/rng.hpp"

using namespace plap;

TEST_SUITE("model") {
  TEST_CASE("diffusivity values and derivatives") {
    auto sp = DiffusivitySpec::shifted_power(1, 0, 0, 3);
    CHECK(eval_h(sp, 2, 0) == doctest::Approx(-8));
    CHECK(eval_h(sp, 2, 1) == doctest::Approx(-12));
    CHECK(eval_h(DiffusivitySpec::log(2, 1), 0, 1) == doctest::Approx(2));
  }

  TEST_CASE("g = h/v") {
    CHECK(eval_g(DiffusivitySpec::radial_power(1, 3), 2) == doctest::Approx(-4));
    CHECK(eval_g(DiffusivitySpec::shifted_power(1, 0, 0, 2), 3) == doctest::Approx(-3));
    CHECK(eval_g(DiffusivitySpec::log(1, 1), 1) == doctest::Approx(std::log(2.0)));
  }

  TEST_CASE("right-hand side") {
    const double b = 0.4;
    auto P = make_problem(DiffusivitySpec::shifted_power(1, 0, 0, 2), SourceSpec::constant(b), 2);
    CHECK(pde_rhs(P, 1, 0, 1, 0) == doctest::Approx(b - 2));
    auto E = make_problem(DiffusivitySpec::radial_power(1, 3), SourceSpec::linear(0.6, -1.5), 1);
    E.working_branch = {-1e300, 1e300};
    CHECK(pde_rhs(E, 0.8, 0.6 / 1.5, 0, 0) == doctest::Approx(0).epsilon(1e-15));
  }

  TEST_CASE("zero source is rejected") {
    auto P = make_problem(DiffusivitySpec::radial_power(1, 3), SourceSpec::constant(0), 0);
    CHECK_THROWS_AS(validate(P), ConfigError);
  }

  TEST_CASE("classification rows") {
    DiffusivitySpec any = DiffusivitySpec::arbitrary([](const HyperDual& v) { return -(v + 0.2 * v * v * v); });
    CHECK(classify(make_problem(any, SourceSpec::linear(0.5, 1.2), 3)).tags() == std::vector<int>{1, 3});
    CHECK(classify(make_problem(any, SourceSpec::constant(0.5), 0)).tags() == std::vector<int>{1, 2, 3, 5});
    CHECK(classify(make_problem(DiffusivitySpec::shifted_power(0.7, 0, 0, -1),
                                SourceSpec::arbitrary([](const HyperDual& u) { return 1.0 + sin(u); }), 1))
              .hodograph);
  }

  TEST_CASE("classification is deterministic") {
    auto P = make_problem(DiffusivitySpec::exp_linear(1.2, 0.8), SourceSpec::constant(0.3), 2);
    CHECK(classify(P) == classify(P));
  }

  TEST_CASE("first derivative matches differences for every family") {
    Rng rng(11);
    const DiffusivitySpec fams[] = {
        DiffusivitySpec::shifted_power(1.3, 0.4, 0.2, 2.5), DiffusivitySpec::ratio(0.9, 0.5, 1.4, 1.7),
        DiffusivitySpec::exp_arctan(1.1, 0.3, 0.8, 1.2),    DiffusivitySpec::exp_reciprocal(0.8, 0.6, 1.1),
        DiffusivitySpec::exp_linear(1.4, 0.7),              DiffusivitySpec::log(1.2, 0.5),
        DiffusivitySpec::radial_power(0.9, 3.0)};
    for (const auto& d : fams) {
      auto [lo, hi] = default_branch(d);
      double a = std::max(lo, -5.0) + 0.2, b = std::min(hi, a + 3.0);
      for (int i = 0; i < 100; ++i) {
        double v = uniform(rng, a, b), h = 1e-5 * std::max(1.0, std::abs(v));
        double fd = (eval_h(d, v + h, 0) - eval_h(d, v - h, 0)) / (2 * h);
        CHECK(std::abs(eval_h(d, v, 1) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }

  TEST_CASE("odd radial powers") {
    Rng rng(13);
    for (double p : {3.0, 5.0, 1.0 / 3.0, 5.0 / 3.0}) {
      auto d = DiffusivitySpec::radial_power(1.1, p);
      for (int i = 0; i < 50; ++i) {
        double v = uniform(rng, 0.05, 3);
        CHECK(eval_h(d, -v, 0) == -eval_h(d, v, 0));
        CHECK(eval_g(d, -v) == eval_g(d, v));
      }
    }
  }

  TEST_CASE("admissible radial exponents") {
    CHECK(radial_power_admissible(3));
    CHECK(radial_power_admissible(1.0 / 3.0));
    CHECK_FALSE(radial_power_admissible(2));
    CHECK_FALSE(radial_power_admissible(1));
  }
}
