#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plap/conservation.hpp"
#include "plap/field.hpp"
#include "plap/model.hpp"

namespace plap {

using ExactFn = std::function<double(double t, double r)>;

struct EndCondition {
  enum class Kind { DirichletFromExact, DirichletConstant, NeumannZero, Regularity } kind = Kind::NeumannZero;
  double value = 0.0;
  ExactFn exact;

  static EndCondition dirichlet(double v) { return {Kind::DirichletConstant, v, {}}; }
  static EndCondition from_exact(ExactFn f) { return {Kind::DirichletFromExact, 0.0, std::move(f)}; }
  static EndCondition neumann() { return {Kind::NeumannZero, 0.0, {}}; }
  static EndCondition regularity() { return {Kind::Regularity, 0.0, {}}; }

  bool dirichlet_kind() const { return kind == Kind::DirichletFromExact || kind == Kind::DirichletConstant; }
  double boundary_value(double t, double r) const { return kind == Kind::DirichletFromExact ? exact(t, r) : value; }
};

struct BoundaryCondition {
  EndCondition left, right;
  static BoundaryCondition both(EndCondition e) { return {e, e}; }
};

struct SolverOptions {
  double cfl = 0.4;
  // u_r <- sign(u_r) max(|u_r|, eps_reg) inside h and h'
  bool regularize = true;
  double eps_reg = 1e-6;
  double dt_max = 1e300;
  // interface runs: stored slices are clamped to u <= clamp_level beyond the front; the dynamics
  // evolve the interior branch continued smoothly across it
  std::optional<double> clamp_level;
  bool attach_monitors = true;
  std::size_t max_steps = 100'000'000;
};

struct UnstableStep : std::runtime_error {
  std::size_t node;
  double t;
  UnstableStep(const std::string& what, std::size_t i, double time) : std::runtime_error(what), node(i), t(time) {}
};

struct BranchExit : std::runtime_error {
  std::size_t node;
  double u_r;
  BranchExit(const std::string& what, std::size_t i, double v) : std::runtime_error(what), node(i), u_r(v) {}
};

// Explicit bound cfl dr^2 / max|h'(u_r)| over the active interior nodes.
double stable_dt(const ProblemSpec& problem, const Field& field, const SolverOptions& opts = {});

// Semi-discrete right-hand side; zero at Dirichlet ends.
std::vector<double> spatial_rhs(const ProblemSpec& problem, const Field& field, const BoundaryCondition& bc,
                                const SolverOptions& opts = {}, bool* regularized = nullptr);

Field step_rk4(const ProblemSpec& problem, const Field& field, const BoundaryCondition& bc, double dt,
               const SolverOptions& opts = {});

struct Monitor {
  std::string law;
  ContinuityReport report;
};

struct Solution {
  Trajectory trajectory;
  std::vector<Monitor> monitors;
  bool regularized = false;
  std::size_t steps = 0;
};

Solution solve(const ProblemSpec& problem, const Field& initial, const BoundaryCondition& bc, double t_end,
               double dt_store, const SolverOptions& opts = {});

// max over interior slices and nodes of |u_t - rhs|, u_t by 3-point differences in time.
double pde_defect(const ProblemSpec& problem, const Trajectory& traj, const SolverOptions& opts = {});

struct TrackingError : std::runtime_error {
  double t;
  TrackingError(const std::string& what, double time) : std::runtime_error(what), t(time) {}
};

struct InterfaceTrack {
  std::vector<std::pair<double, double>> rows;  // (t, R)
  double exponent = 0.0;                        // slope of log R against t
};

// Crossing of `level` from below, linearly interpolated. When the field sits exactly on the level
// beyond the crossing (a clamped exterior) the inner secant is extended instead.
InterfaceTrack track_interface(const Trajectory& traj, double level);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

double max_abs_diff(const Field& a, const Field& b);

}  // namespace plap
