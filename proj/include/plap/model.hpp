#pragma once

#include <string>
#include <utility>
#include <vector>

#include "plap/numerics.hpp"

namespace plap {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class DiffusivityFamily { Arbitrary, ShiftedPower, Ratio, ExpArctan, ExpReciprocal, ExpLinear, Log, RadialPower };

// h(v) per family, v = u_r:
//   ShiftedPower  beta - kappa (alpha+v)^p
//   Ratio         -kappa ((beta+v)/(alpha+v))^p
//   ExpArctan     kappa exp(p atan((alpha+v)/beta))
//   ExpReciprocal kappa exp(p/(alpha+v))
//   ExpLinear     kappa exp(p v)
//   Log           kappa ln|alpha+v|
//   RadialPower   -kappa |v|^{p-1} v
struct DiffusivitySpec {
  DiffusivityFamily family = DiffusivityFamily::RadialPower;
  double kappa = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double p = 3.0;
  ScalarFn custom;

  HyperDual h(const HyperDual& v) const;

  static DiffusivitySpec shifted_power(double kappa, double alpha, double beta, double p);
  static DiffusivitySpec ratio(double kappa, double alpha, double beta, double p);
  static DiffusivitySpec exp_arctan(double kappa, double alpha, double beta, double p);
  static DiffusivitySpec exp_reciprocal(double kappa, double alpha, double p);
  static DiffusivitySpec exp_linear(double kappa, double p);
  static DiffusivitySpec log(double kappa, double alpha);
  static DiffusivitySpec radial_power(double kappa, double p);
  static DiffusivitySpec arbitrary(ScalarFn h);
};

enum class SourceFamily {
  Arbitrary,
  Constant,             // b
  Linear,               // b + k u
  Inverse,              // k/(a+u)
  PowerPlusLinear,      // k (a+u)^p + c (a+u)
  Power,                // k (a+u)^q
  Exponential,          // a + k exp(q u), offset a defaults to 0
  QuadraticShifted,     // k (a+u)^2 + sign b^2/k
  ConstantPlusInverse,  // b + k/(a+u)
};

struct SourceSpec {
  SourceFamily family = SourceFamily::Constant;
  double a = 0.0, b = 0.0, c = 0.0, k = 0.0, p = 0.0, q = 0.0;
  int sign = 1;
  ScalarFn custom;

  HyperDual f(const HyperDual& u) const;
  double operator()(double u) const { return f(HyperDual(u)).value; }

  static SourceSpec constant(double b);
  static SourceSpec linear(double b, double k);
  static SourceSpec inverse(double k, double a);
  static SourceSpec power_plus_linear(double k, double a, double p, double c);
  static SourceSpec power(double k, double a, double q);
  static SourceSpec exponential(double k, double q, double a = 0.0);
  static SourceSpec quadratic_shifted(double k, double a, double b, int sign);
  static SourceSpec constant_plus_inverse(double b, double k, double a);
  static SourceSpec arbitrary(ScalarFn f);
};

struct ProblemSpec {
  DiffusivitySpec diffusivity;
  SourceSpec source;
  double m = 0.0;
  std::pair<double, double> working_branch{0.0, 1e300};
  bool radial = false;

  double n() const { return m + 1.0; }
  bool in_branch(double v) const { return v > working_branch.first && v < working_branch.second; }
};

// Default branch: (0, inf) for power families, the maximal interval above -alpha otherwise.
std::pair<double, double> default_branch(const DiffusivitySpec& d);
ProblemSpec make_problem(DiffusivitySpec d, SourceSpec s, double m, bool radial = false);

// p = 1 + 2l/d with l a non-zero integer, d odd.
bool radial_power_admissible(double p);

// Throws ConfigError on violated invariants (f == 0, h'' == 0, bad RadialPower exponent on a
// branch that reaches u_r < 0, branch containing a family singularity).
void validate(const ProblemSpec& problem);

double eval_h(const DiffusivitySpec& spec, double v, int order);
double eval_g(const DiffusivitySpec& spec, double v);
double eval_f(const SourceSpec& spec, double u, int order);

// h'(u_r) u_rr + m r^{-1} h(u_r) + f(u)
double pde_rhs(const ProblemSpec& problem, double r, double u, double u_r, double u_rr);

// Named constants of the classification, bound for one generator or law.
struct Params {
  double a = 0.0, b = 0.0, c = 0.0, k = 0.0, p = 0.0, q = 0.0;
  double alpha = 0.0, beta = 0.0, kappa = 0.0, mu = 0.0;
};

struct GeneratorRef {
  int tag = 1;  // 1..23 for X1..X23
  Params params;
};

struct CaseTag {
  std::string label;
  bool hodograph = false;
  std::vector<GeneratorRef> generators;

  std::size_t dimension() const { return generators.size(); }
  std::vector<int> tags() const;
  bool operator==(const CaseTag& o) const;
};

// h'(u_r) = kappa_eff/(alpha_eff + u_r)^2 for this diffusivity.
bool hodograph_form(const DiffusivitySpec& d, double& kappa_eff, double& alpha_eff);

CaseTag classify(const ProblemSpec& problem);

std::string family_name(DiffusivityFamily f);
std::string family_name(SourceFamily f);

}  // namespace plap
