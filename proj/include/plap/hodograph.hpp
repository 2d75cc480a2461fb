#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "plap/field.hpp"
#include "plap/model.hpp"
#include "plap/solver.hpp"

namespace plap {

// (t, r, u) -> (t, alpha r + u, int r^m dr), integration constant 0 (ln r when m = -1).
struct HodographMap {
  double alpha = 0.0;
  double m = 0.0;
  enum class Direction { Forward, Inverse } direction = Direction::Forward;
};

// h' = kappa/(alpha+u_r)^2 with f constant, or alpha = 0 with any f. cross_validate further needs
// h = -kappa/(alpha+u_r) exactly when m != 0.
bool hodograph_applicable(const ProblemSpec& problem, double& kappa, double& alpha);

double hodograph_weight(double r, double m);          // int r^m dr
double hodograph_weight_inverse(double w, double m);  // r from w

// Samples (alpha r_i + u_i, w(r_i)) re-interpolated (monotone cubic) onto a uniform grid.
Field forward_map(const HodographMap& map, const Field& field);
Field inverse_map(const HodographMap& map, const Field& field);
// dispatches on map.direction
Field apply_map(const HodographMap& map, const Field& field);

// Max mismatch of alpha + u_r = r^m/w_z, u_rr = m r^{m-1}/w_z - r^{2m} w_zz/w_z^3 and
// u_t = -w_t/w_z (the last needs three or more slices), by finite differences on both charts.
double prolongation_check(const HodographMap& map, const Trajectory& traj);

// w_t = kappa w_zz + c(z) w_z on the field's grid; centred differences, RK4.
Trajectory linear_solve(const SourceSpec& drift, double kappa, const Field& initial, const BoundaryCondition& bc,
                        double t_end, double dt_store);

struct CrossRow {
  double t, max_gap;
  bool fold;
};

struct CrossReport {
  double max_gap = 0.0;
  double final_gap = 0.0;
  std::vector<CrossRow> rows;
};

struct CrossValidateOptions {
  double t_end = 0.2;
  double dt_store = 0.05;
  // map with a different alpha than the problem's (negative control)
  std::optional<double> alpha_override;
  SolverOptions solver;
};

// Nonlinear solve against forward map -> linear solve -> inverse map. Both paths take Dirichlet
// data from `boundary` (the nonlinear path at the r ends, the linear one at the fixed z ends).
CrossReport cross_validate(const ProblemSpec& problem, const Field& initial, const ExactFn& boundary,
                           const CrossValidateOptions& opts);

void write_cross_csv(std::ostream& os, const CrossReport& rep);

}  // namespace plap
