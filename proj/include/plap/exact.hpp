#pragma once

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "plap/field.hpp"
#include "plap/model.hpp"
#include "plap/numerics.hpp"

namespace plap {

struct SolutionSample {
  double u = 0.0, u_r = 0.0, u_rr = 0.0, u_t = 0.0;
};

// u = b t + c2 + int_{r0}^{r} h^{-1}(c1 z^{1-n}) dz, f = b.
struct FamilyA {
  double b = 0.0;
  double c1 = 1.0;
  double c2 = 0.0;
  double r0 = 1.0;
  double n = 2.0;
  DiffusivitySpec diffusivity = DiffusivitySpec::radial_power(-1.0, 3.0);
  // where h^{-1} is taken
  std::pair<double, double> branch{-1e300, 1e300};
  double quad_tol = 1e-12;
};

SolutionSample eval_family_a(const FamilyA& sol, double t, double r);
// h^{-1}(c1 r^{1-n})
double family_a_slope(const FamilyA& sol, double r);

enum class FamilyBVariant { General, MuZeroClosed, MovingInterface, Cutoff };

// u = e^{kt} U(r) + mu e^{kpt}/((p-1)k) - b/k with h = -kappa |u_r|^{p-1} u_r, f = b + k u.
// c1 = r1^{n-1} is stored so r1 = 0 is representable.
struct FamilyB {
  double k = 1.0, b = 0.0, kappa = -1.0, p = 2.0, mu = 0.0;
  double r0 = 0.0, c1 = 1.0, n = 2.0;
  FamilyBVariant variant = FamilyBVariant::General;
  double cutoff_R = 0.0;
  double quad_tol = 1e-12;

  double r1() const;
  double Phi(double t) const;
  double Phi_t(double t) const;
};

struct StaticProfile {
  double U = 0.0, U_r = 0.0, U_rr = 0.0;
};

StaticProfile family_b_profile(const FamilyB& sol, double r);
// piecewise = false evaluates the interior branch of an interface solution everywhere
SolutionSample eval_family_b(const FamilyB& sol, double t, double r, bool piecewise = true);

struct InterfaceLaw {
  double R0 = 0.0, q = 0.0, k = 0.0;
  double R(double t) const;
};

double interface_exponent_q(double p);
InterfaceLaw interface(const FamilyB& sol);

// mu from the cutoff relation R^n = kappa n r1^{n-1}/mu; needs 0 < p < 1.
FamilyB cutoff_solution(double k, double b, double kappa, double p, double r1, double n, double R, double r0);
// mass finite at the interface when p > (n-1)/(n+1)
bool cutoff_finite_mass(double p, double n);

double unit_sphere_area(double n);
double ball_volume(double n, double R);

struct MassResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool divergent = false;
};

MassResult mass(const FamilyA& sol, double R, double t);
MassResult mass(const FamilyB& sol, double R, double t);

// The problem an exact family solves.
ProblemSpec matched_problem(const FamilyA& sol);
ProblemSpec matched_problem(const FamilyB& sol);

struct ResidualRow {
  double t, r, u, u_r, u_rr, residual;
};

std::vector<ResidualRow> residual_table(const FamilyA& sol, const ProblemSpec& problem, const Grid& grid,
                                        const std::vector<double>& times);
std::vector<ResidualRow> residual_table(const FamilyB& sol, const ProblemSpec& problem, const Grid& grid,
                                        const std::vector<double>& times);
double pde_residual(const FamilyA& sol, const ProblemSpec& problem, const Grid& grid, const std::vector<double>& times);
double pde_residual(const FamilyB& sol, const ProblemSpec& problem, const Grid& grid, const std::vector<double>& times);

void write_residual_csv(std::ostream& os, const std::vector<ResidualRow>& rows);

// Exact samples on a grid.
Field sample_family(const FamilyA& sol, const Grid& grid, double t);
Field sample_family(const FamilyB& sol, const Grid& grid, double t, bool piecewise = true);

}  // namespace plap
