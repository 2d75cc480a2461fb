#include "plap/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace plap {

namespace {

constexpr double kInf = 1e300;

// base^e, allowing a negative base when e is an integer
double real_pow(double base, double e) {
  double ei = std::round(e);
  if (std::abs(e - ei) < 1e-12) e = ei;
  if (base < 0.0 && e != std::floor(e)) throw DomainError("negative base with fractional exponent");
  return std::pow(base, e);
}

double h_value(const DiffusivitySpec& d, double v) { return d.h(HyperDual(v)).value; }

}  // namespace

double family_a_slope(const FamilyA& sol, double r) {
  if (!(r > 0.0)) throw DomainError("family A needs r > 0");
  const double y = sol.c1 * std::pow(r, 1.0 - sol.n);
  const auto& d = sol.diffusivity;
  auto [blo, bhi] = sol.branch;
  auto inside = [](double edge) { return edge + 1e-14 * (1.0 + std::abs(edge)); };
  double lo = blo > -kInf ? inside(blo) : -1.0;
  double hi = bhi < kInf ? bhi - 1e-14 * (1.0 + std::abs(bhi)) : 1.0;
  if (blo > -kInf && bhi >= kInf) hi = std::max(lo + 1.0, 1.0);
  if (bhi < kInf && blo <= -kInf) lo = std::min(hi - 1.0, -1.0);
  double w = hi - lo;
  for (int it = 0; it < 200; ++it) {
    double a = h_value(d, lo), b = h_value(d, hi);
    if ((a - y) * (b - y) <= 0.0) break;
    bool grow_low = blo <= -kInf, grow_high = bhi >= kInf;
    if (!grow_low && !grow_high) break;
    if (grow_low) lo -= w;
    if (grow_high) hi += w;
    w *= 2.0;
  }
  ScalarFn h = [&d](const HyperDual& v) { return d.h(v); };
  return invert_monotone(h, y, {lo, hi}, 1e-15);
}

SolutionSample eval_family_a(const FamilyA& sol, double t, double r) {
  SolutionSample s;
  s.u_r = family_a_slope(sol, r);
  auto U = integrate([&](double z) { return family_a_slope(sol, z); }, sol.r0, r, sol.quad_tol);
  s.u = sol.b * t + sol.c2 + U.value;
  double h1 = sol.diffusivity.h(HyperDual(s.u_r, 1.0, 0.0, 0.0)).d1;
  s.u_rr = sol.c1 * (1.0 - sol.n) * std::pow(r, -sol.n) / h1;
  s.u_t = sol.b;
  return s;
}

double FamilyB::r1() const {
  if (n == 1.0) return c1;
  return c1 >= 0.0 ? std::pow(c1, 1.0 / (n - 1.0)) : -std::pow(-c1, 1.0 / (n - 1.0));
}

double FamilyB::Phi(double t) const {
  if (k == 0.0 || p == 1.0) throw ConfigError("family B needs k != 0 and p != 1");
  return mu * std::exp(k * p * t) / ((p - 1.0) * k);
}

double FamilyB::Phi_t(double t) const { return mu * p * std::exp(k * p * t) / (p - 1.0); }

namespace {

double W(const FamilyB& s, double z) { return s.c1 * std::pow(z, 1.0 - s.n) - s.mu * z / (s.n * s.kappa); }
double W_r(const FamilyB& s, double z) { return (1.0 - s.n) * s.c1 * std::pow(z, -s.n) - s.mu / (s.n * s.kappa); }

StaticProfile quadrature_profile(const FamilyB& s, double r) {
  StaticProfile out;
  auto slope = [&s](double z) { return real_pow(W(s, z), 1.0 / s.p); };
  out.U_r = slope(r);
  double w = W(s, r);
  out.U_rr = w == 0.0 ? 0.0 : (1.0 / s.p) * real_pow(w, 1.0 / s.p - 1.0) * W_r(s, r);
  if (s.mu == 0.0) {
    // closed integral of c1^{1/p} z^{(1-n)/p}
    double A = real_pow(s.c1, 1.0 / s.p);
    double e = 1.0 + (1.0 - s.n) / s.p;
    if (std::abs(e) < 1e-14)
      out.U = A * std::log(r / s.r0);
    else
      out.U = A * (std::pow(r, e) - std::pow(s.r0, e)) / e;
  } else if (s.c1 == 0.0) {
    double A = real_pow(-s.mu / (s.kappa * s.n), 1.0 / s.p);
    if (s.p == -1.0)
      out.U = -s.kappa * s.n / s.mu * std::log(r / s.r0);
    else
      out.U = A * s.p / (s.p + 1.0) * (std::pow(r, 1.0 + 1.0 / s.p) - std::pow(s.r0, 1.0 + 1.0 / s.p));
  } else {
    out.U = integrate(slope, s.r0, r, s.quad_tol).value;
  }
  return out;
}

}  // namespace

StaticProfile family_b_profile(const FamilyB& s, double r) {
  if (!(r > 0.0) && !(r == 0.0 && s.c1 == 0.0)) throw DomainError("family B needs r > 0");
  StaticProfile out;
  switch (s.variant) {
    case FamilyBVariant::MuZeroClosed: {
      if (s.mu != 0.0) throw ConfigError("MuZeroClosed needs mu = 0");
      double pr = real_pow(s.c1, 1.0 / s.p);  // r1^{(n-1)/p}
      if (std::abs(s.p - (s.n - 1.0)) < 1e-14) {
        if (!(s.r0 > 0.0)) throw DomainError("the logarithmic closed form (p = n-1) needs r0 > 0");
        out.U = pr * std::log(r / s.r0);
        out.U_r = pr / r;
        out.U_rr = -pr / (r * r);
      } else {
        double e = 1.0 + (1.0 - s.n) / s.p;
        if (s.r0 == 0.0 && e <= 0.0) throw DomainError("r0 = 0 needs 1 + (1-n)/p > 0");
        out.U = pr * (std::pow(r, e) - std::pow(s.r0, e));
        out.U_r = pr * e * std::pow(r, e - 1.0);
        out.U_rr = pr * e * (e - 1.0) * std::pow(r, e - 2.0);
      }
      return out;
    }
    case FamilyBVariant::MovingInterface:
      if (s.c1 != 0.0 || s.mu == 0.0) throw ConfigError("moving interface needs r1 = 0 and mu != 0");
      return quadrature_profile(s, r);
    case FamilyBVariant::General:
      return quadrature_profile(s, r);
    case FamilyBVariant::Cutoff: {
      if (r < s.cutoff_R) return quadrature_profile(s, r);
      out = quadrature_profile(s, s.cutoff_R);
      out.U_r = 0.0;
      out.U_rr = 0.0;
      return out;
    }
  }
  return out;
}

double interface_exponent_q(double p) { return p * (p - 1.0) / (p + 1.0); }

double InterfaceLaw::R(double t) const { return R0 * std::exp(q * k * t); }

InterfaceLaw interface(const FamilyB& s) {
  if (s.mu == 0.0 || s.c1 != 0.0 || s.r0 != 0.0) throw ConfigError("interface needs mu != 0, r1 = 0, r0 = 0");
  if (s.p == -1.0) throw ConfigError("interface needs p != -1");
  InterfaceLaw L;
  L.q = interface_exponent_q(s.p);
  L.k = s.k;
  double a = -s.mu / (L.q * s.k), c = s.kappa * s.n / (-s.mu);
  if (!(a > 0.0) || !(c > 0.0)) throw DomainError("interface radius is not real for these signs");
  L.R0 = std::pow(a, s.p / (s.p + 1.0)) * std::pow(c, 1.0 / (s.p + 1.0));
  return L;
}

SolutionSample eval_family_b(const FamilyB& s, double t, double r, bool piecewise) {
  if (piecewise && s.variant == FamilyBVariant::MovingInterface && r >= interface(s).R(t)) {
    SolutionSample bg;
    bg.u = -s.b / s.k;
    return bg;
  }
  StaticProfile P = family_b_profile(s, r);
  double e = std::exp(s.k * t);
  SolutionSample out;
  out.u = e * P.U + s.Phi(t) - s.b / s.k;
  out.u_r = e * P.U_r;
  out.u_rr = e * P.U_rr;
  out.u_t = s.k * e * P.U + s.Phi_t(t);
  return out;
}

FamilyB cutoff_solution(double k, double b, double kappa, double p, double r1, double n, double R, double r0) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("cutoff solutions need 0 < p < 1 for U'(R) = U''(R) = 0");
  if (!(R > 0.0)) throw ConfigError("cutoff radius must be positive");
  FamilyB s;
  s.k = k;
  s.b = b;
  s.kappa = kappa;
  s.p = p;
  s.n = n;
  s.c1 = std::pow(r1, n - 1.0);
  s.mu = kappa * n * s.c1 / std::pow(R, n);
  s.r0 = r0;
  s.variant = FamilyBVariant::Cutoff;
  s.cutoff_R = R;
  return s;
}

bool cutoff_finite_mass(double p, double n) { return p > (n - 1.0) / (n + 1.0); }

double unit_sphere_area(double n) { return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0); }
double ball_volume(double n, double R) { return unit_sphere_area(n) * std::pow(R, n) / n; }

namespace {

// int_0^R U r^{n-1} dr = U(R) R^n/n - int_0^R U' r^n/n dr
MassResult radial_integral(const std::function<double(double)>& U, const std::function<double(double)>& U_r,
                           double n, double R, double tol) {
  MassResult m;
  try {
    auto I = integrate([&](double r) { return r == 0.0 ? 0.0 : U_r(r) * std::pow(r, n) / n; }, 0.0, R, tol);
    m.value = U(R) * std::pow(R, n) / n - I.value;
    m.error_estimate = I.error_estimate;
  } catch (const QuadratureError& e) {
    m.divergent = true;
    m.value = e.best;
  }
  if (!std::isfinite(m.value)) m.divergent = true;
  return m;
}

double near_zero_exponent(const DiffusivitySpec& d, double n) {
  if (d.family == DiffusivityFamily::RadialPower) return (1.0 - n) / d.p;
  return 0.0;
}

}  // namespace

MassResult mass(const FamilyA& sol, double R, double t) {
  double s = near_zero_exponent(sol.diffusivity, sol.n);
  if (s + sol.n <= -1.0 || (sol.r0 == 0.0 && s <= -1.0)) return {0.0, 0.0, true};
  auto U = [&](double r) { return integrate([&](double z) { return family_a_slope(sol, z); }, sol.r0, r, sol.quad_tol).value; };
  auto U_r = [&](double r) { return family_a_slope(sol, r); };
  MassResult m = radial_integral(U, U_r, sol.n, R, 1e-11);
  double A = unit_sphere_area(sol.n);
  m.value = A * ((sol.b * t + sol.c2) * std::pow(R, sol.n) / sol.n + m.value);
  m.error_estimate *= A;
  return m;
}

MassResult mass(const FamilyB& s, double R, double t) {
  double expo = s.c1 != 0.0 ? (1.0 - s.n) / s.p : 1.0 / s.p;
  if (expo + s.n <= -1.0) return {0.0, 0.0, true};
  double Rm = R;
  if (s.variant == FamilyBVariant::MovingInterface) Rm = std::min(R, interface(s).R(t));
  auto U = [&](double r) { return family_b_profile(s, r).U; };
  auto U_r = [&](double r) { return family_b_profile(s, r).U_r; };
  MassResult m = radial_integral(U, U_r, s.n, Rm, 1e-11);
  const double A = unit_sphere_area(s.n), n = s.n;
  double inner = (s.Phi(t) - s.b / s.k) * std::pow(Rm, n) / n + std::exp(s.k * t) * m.value;
  double outer = -s.b / s.k * (std::pow(R, n) - std::pow(Rm, n)) / n;
  m.value = A * (inner + outer);
  m.error_estimate *= A * std::exp(s.k * t);
  return m;
}

ProblemSpec matched_problem(const FamilyA& sol) {
  ProblemSpec p = make_problem(sol.diffusivity, SourceSpec::constant(sol.b), sol.n - 1.0);
  p.working_branch = sol.branch;
  return p;
}

ProblemSpec matched_problem(const FamilyB& sol) {
  ProblemSpec p = make_problem(DiffusivitySpec::radial_power(sol.kappa, sol.p), SourceSpec::linear(sol.b, sol.k),
                               sol.n - 1.0);
  if (radial_power_admissible(sol.p)) p.working_branch = {-kInf, kInf};
  return p;
}

namespace {

template <class Eval>
std::vector<ResidualRow> residual_rows(const Eval& eval, const ProblemSpec& problem, const Grid& grid,
                                       const std::vector<double>& times) {
  std::vector<ResidualRow> rows;
  for (double t : times) {
    for (std::size_t i = 0; i < grid.N; ++i) {
      double r = grid.r(i);
      SolutionSample s = eval(t, r);
      double res = s.u_t - pde_rhs(problem, r, s.u, s.u_r, s.u_rr);
      rows.push_back({t, r, s.u, s.u_r, s.u_rr, res});
    }
  }
  return rows;
}

double max_abs_residual(const std::vector<ResidualRow>& rows) {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::isfinite(r.residual) ? std::abs(r.residual) : kInf);
  return m;
}

}  // namespace

std::vector<ResidualRow> residual_table(const FamilyA& sol, const ProblemSpec& problem, const Grid& grid,
                                        const std::vector<double>& times) {
  return residual_rows([&](double t, double r) { return eval_family_a(sol, t, r); }, problem, grid, times);
}

std::vector<ResidualRow> residual_table(const FamilyB& sol, const ProblemSpec& problem, const Grid& grid,
                                        const std::vector<double>& times) {
  // the interior branch: outside an interface the solution is the equilibrium
  return residual_rows([&](double t, double r) { return eval_family_b(sol, t, r, false); }, problem, grid, times);
}

double pde_residual(const FamilyA& sol, const ProblemSpec& problem, const Grid& grid, const std::vector<double>& times) {
  return max_abs_residual(residual_table(sol, problem, grid, times));
}

double pde_residual(const FamilyB& sol, const ProblemSpec& problem, const Grid& grid, const std::vector<double>& times) {
  return max_abs_residual(residual_table(sol, problem, grid, times));
}

void write_residual_csv(std::ostream& os, const std::vector<ResidualRow>& rows) {
  os << "t,r,u,u_r,u_rr,residual\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.r, r.u, r.u_r, r.u_rr, r.residual);
    os << buf;
  }
}

Field sample_family(const FamilyA& sol, const Grid& grid, double t) {
  Field f;
  f.grid = grid;
  f.t = t;
  f.values.resize(grid.N);
  // accumulate U node to node from the first node
  auto slope = [&](double z) { return family_a_slope(sol, z); };
  double U = integrate(slope, sol.r0, grid.r(0), sol.quad_tol).value;
  f.values[0] = sol.b * t + sol.c2 + U;
  for (std::size_t i = 1; i < grid.N; ++i) {
    U += integrate(slope, grid.r(i - 1), grid.r(i), sol.quad_tol).value;
    f.values[i] = sol.b * t + sol.c2 + U;
  }
  return f;
}

Field sample_family(const FamilyB& sol, const Grid& grid, double t, bool piecewise) {
  Field f;
  f.grid = grid;
  f.t = t;
  f.values.resize(grid.N);
  for (std::size_t i = 0; i < grid.N; ++i) f.values[i] = eval_family_b(sol, t, grid.r(i), piecewise).u;
  return f;
}

}  // namespace plap
