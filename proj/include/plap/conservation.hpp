#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plap/field.hpp"
#include "plap/model.hpp"
#include "plap/numerics.hpp"

namespace plap {

enum class LawTag { CL1, CL2inf, CL3, CL4, CL1rad, CL2rad };
std::string law_name(LawTag tag);
LawTag law_from_name(const std::string& name);

using Fn3 = std::function<HyperDual(const HyperDual& t, const HyperDual& r, const HyperDual& u)>;
using Fn4 = std::function<HyperDual(const HyperDual& t, const HyperDual& r, const HyperDual& u, const HyperDual& u_r)>;
using Fn2 = std::function<HyperDual(const HyperDual& t, const HyperDual& z)>;

// A solution of phi_t + kappa phi_zz + f(z) phi_z = 0 together with phi_z.
struct PhiSolution {
  enum class Kind { ExponentialMode, UserSupplied } kind = Kind::ExponentialMode;
  double lambda = 0.0;
  double kappa = 1.0;
  SourceSpec f_binding;
  Fn2 phi, phi_z;
};

// phi = exp(lambda z - (kappa lambda^2 + a lambda) t) for f = a; lambda = 0 gives phi = 1.
PhiSolution phi_instance(const SourceSpec& f, double kappa, double lambda);
// max |phi_t + kappa phi_zz + f phi_z| relative to term size at the given points
double phi_residual(const PhiSolution& phi, const std::vector<std::array<double, 2>>& points);

struct LawParams {
  double a = 0.0;  // source offset (b in the radial spelling)
  double b = 0.0;
  double k = 0.0;
  double p = 0.0;
  double alpha = 0.0;
  double kappa = 0.0;
  double m = 0.0;
};

struct ConservationLaw {
  LawTag tag = LawTag::CL1;
  LawParams params;
  DiffusivitySpec diffusivity;
  Fn3 T, Q;
  Fn4 X;
  std::optional<PhiSolution> phi;

  std::string name() const { return law_name(tag); }
};

ConservationLaw make_law(LawTag tag, const LawParams& params, const DiffusivitySpec& d,
                         std::optional<PhiSolution> phi = std::nullopt);
// Same law with a different phi (infinite families only).
ConservationLaw with_phi(const ConservationLaw& law, PhiSolution phi);

std::vector<ConservationLaw> catalog_laws(const ProblemSpec& problem);

struct LawJet {
  double t = 1.0, r = 1.0, u = 0.0, u_r = 1.0;
};

// Residual components are divided by max(1, sum of |terms|).

// Q_{u_r}; the h''/h' relation; the second-order equation.
std::array<double, 3> multiplier_residual(const Fn4& Q, const ProblemSpec& problem, const LawJet& jet);
std::array<double, 3> multiplier_residual(const ConservationLaw& law, const ProblemSpec& problem, const LawJet& jet);

// T_u - Q; X_{u_r} + h' T_u; T_t + X_r + u_r X_u + (m h/r + f) T_u
std::array<double, 3> characteristic_residual(const ConservationLaw& law, const ProblemSpec& problem, const LawJet& jet);

// Simpson rule (3/8 on the last panel when the interval count is odd).
double simpson(const std::vector<double>& y, double dx);

double conserved_quantity(const ConservationLaw& law, const Field& field);
double flux(const ConservationLaw& law, double t, double r, double u, double u_r);

struct MonitorRow {
  double t, C_value, left_flux, right_flux, defect;
};

struct ContinuityReport {
  double max_defect = 0.0;
  std::vector<MonitorRow> rows;
};

ContinuityReport continuity_check(const ConservationLaw& law, const Trajectory& traj);
void write_monitor_csv(std::ostream& os, const ContinuityReport& rep);

struct SQuantity {
  double value = 0.0;     // e^{-p^2 kappa t} S(t)
  double integral = 0.0;  // S(t)
  bool decays = true;     // integrand small at the right end of the grid
};

SQuantity s_quantity(const Field& field, double p, double kappa, double alpha, double m);

// One-sided second-order derivative at the ends, centred inside.
std::vector<double> gradient(const std::vector<double>& y, double dx);

}  // namespace plap
