#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plap/exact.hpp"
#include "plap/solver.hpp"

namespace plapcli {

// Exact reciprocal-diffusivity pair used by hodograph runs:
// h = -kappa/u_r, m = 1, f = 1, u = t + sqrt(r^2 - 2 kappa t).
struct HodographPair {
  double kappa = 0.5;
  double u(double t, double r) const;
};

struct InitialSpec {
  enum class Kind { FamilyA, FamilyB, HodographPair, Samples } kind = Kind::Samples;
  plap::FamilyA a;
  plap::FamilyB b;
  HodographPair pair;
  std::vector<double> values;
};

struct EndSpec {
  enum class Kind { Exact, Dirichlet, Neumann, Regularity } kind = Kind::Exact;
  double value = 0.0;
};

struct RunConfig {
  std::optional<plap::ProblemSpec> problem;  // defaults to the problem the exact family solves
  plap::Grid grid{0.5, 2.0, 201};
  InitialSpec initial;
  std::optional<EndSpec> left, right;
  double t_end = 1.0;
  double dt_store = 0.1;
  plap::SolverOptions solver;
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  // convergence
  std::vector<std::size_t> levels{101, 201, 401};

  // verification sweeps
  int draws = 5;
  int jets = 100;
  double perturb_eta = 0.0;      // adds perturb_eta (u^2 + r t) to each generator's eta
  bool mismatched_law = false;   // pairs a linear-source law with a quadratic source

  bool has_exact() const { return initial.kind != InitialSpec::Kind::Samples; }
};

// Throws plap::ConfigError with a diagnostic naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

plap::ProblemSpec problem_of(const RunConfig& cfg);
// u(t, r) of the configured exact solution; empty for tabulated samples
plap::ExactFn exact_of(const RunConfig& cfg);
plap::Field initial_field(const RunConfig& cfg, const plap::Grid& grid);
plap::BoundaryCondition boundary_of(const RunConfig& cfg);

bool is_interface(const RunConfig& cfg);

}  // namespace plapcli
