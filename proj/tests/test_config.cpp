#include <string>

#include "config.hpp"
#include "doctest.h"

using plap::ConfigError;

TEST_SUITE("cli_config") {
  TEST_CASE("unknown keys are named") {
    try {
      plapcli::parse_config(R"({"gird": {"N": 11}})");
      FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("gird") != std::string::npos);
    }
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS(plapcli::parse_config("{\"t_end\": "), ConfigError);
    CHECK_THROWS_AS(plapcli::parse_config(R"({"t_end": "soon"})"), ConfigError);
    CHECK_THROWS_AS(plapcli::parse_config(R"({"grid": {"r_min": 2, "r_max": 1, "N": 11}})"), ConfigError);
  }

  TEST_CASE("a minimal config") {
    auto c = plapcli::parse_config(R"({"initial": {"kind": "family_a", "b": 0.3}, "t_end": 0.1})");
    CHECK(c.t_end == doctest::Approx(0.1));
    CHECK(plapcli::problem_of(c).source.b == doctest::Approx(0.3));
  }
}
