#include "plap/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace plap {

using HD = HyperDual;

std::string law_name(LawTag tag) {
  switch (tag) {
    case LawTag::CL1: return "CL1";
    case LawTag::CL2inf: return "CL2inf";
    case LawTag::CL3: return "CL3";
    case LawTag::CL4: return "CL4";
    case LawTag::CL1rad: return "CL1rad";
    case LawTag::CL2rad: return "CL2rad";
  }
  return "?";
}

LawTag law_from_name(const std::string& name) {
  for (LawTag t : {LawTag::CL1, LawTag::CL2inf, LawTag::CL3, LawTag::CL4, LawTag::CL1rad, LawTag::CL2rad})
    if (law_name(t) == name) return t;
  throw ConfigError("unknown conservation law tag: " + name);
}

PhiSolution phi_instance(const SourceSpec& f, double kappa, double lambda) {
  if (f.family != SourceFamily::Constant)
    throw ConfigError("phi_instance: closed-form modes need a constant source; supply phi instead");
  PhiSolution s;
  s.kind = PhiSolution::Kind::ExponentialMode;
  s.lambda = lambda;
  s.kappa = kappa;
  s.f_binding = f;
  const double omega = kappa * lambda * lambda + f.b * lambda;
  s.phi = [lambda, omega](const HD& t, const HD& z) { return exp(lambda * z - omega * t); };
  s.phi_z = [lambda, omega](const HD& t, const HD& z) { return lambda * exp(lambda * z - omega * t); };
  return s;
}

double phi_residual(const PhiSolution& phi, const std::vector<std::array<double, 2>>& points) {
  double worst = 0.0;
  for (const auto& [t, z] : points) {
    double pt = phi.phi(HD(t, 1.0, 0.0, 0.0), HD(z)).d1;
    HD zz = phi.phi(HD(t), HD(z, 1.0, 1.0, 0.0));
    double pz = phi.phi_z(HD(t), HD(z)).value;
    double f = phi.f_binding(z);
    double terms[] = {pt, phi.kappa * zz.d1d2, f * pz};
    double sum = 0.0, scale = 0.0;
    for (double x : terms) sum += x, scale += std::abs(x);
    worst = std::max(worst, std::abs(sum) / std::max(1.0, scale));
  }
  return worst;
}

namespace {

HD rpow(const HD& r, double m) { return m == 0.0 ? HD(1.0) : pow(r, m); }

// Gamma(q, z) with z-derivatives carried through the hyperdual parts.
HD upper_gamma(double q, const HD& z) {
  if (z.value <= 0.0) throw DomainError("incomplete gamma flux needs p alpha r > 0");
  double g0 = upper_incomplete_gamma(q, z.value);
  double g1 = -std::pow(z.value, q - 1.0) * std::exp(-z.value);
  double g2 = -((q - 1.0) * std::pow(z.value, q - 2.0) - std::pow(z.value, q - 1.0)) * std::exp(-z.value);
  return chain(z, g0, g1, g2);
}

bool reciprocal_form(const DiffusivitySpec& d, double& kappa, double& alpha) {
  if ((d.family == DiffusivityFamily::ShiftedPower && d.p == -1.0 && d.beta == 0.0) ||
      (d.family == DiffusivityFamily::RadialPower && d.p == -1.0)) {
    kappa = d.kappa;
    alpha = d.family == DiffusivityFamily::ShiftedPower ? d.alpha : 0.0;
    return true;
  }
  return false;
}

// f = a + k u
bool linear_source(const SourceSpec& s, double& a, double& k) {
  switch (s.family) {
    case SourceFamily::Constant: a = s.b; k = 0.0; return true;
    case SourceFamily::Linear: a = s.b; k = s.k; return true;
    case SourceFamily::Power:
      if (s.q == 1.0) { a = s.k * s.a; k = s.k; return true; }
      if (s.q == 0.0) { a = s.k; k = 0.0; return true; }
      return false;
    default: return false;
  }
}

}  // namespace

ConservationLaw make_law(LawTag tag, const LawParams& P, const DiffusivitySpec& d, std::optional<PhiSolution> phi) {
  ConservationLaw L;
  L.tag = tag;
  L.params = P;
  L.diffusivity = d;
  const double a = P.a, k = P.k, p = P.p, al = P.alpha, kappa = P.kappa, m = P.m;
  switch (tag) {
    case LawTag::CL1:
    case LawTag::CL1rad: {
      L.T = [k, m](const HD& t, const HD& r, const HD& u) { return rpow(r, m) * exp(-k * t) * u; };
      L.Q = [k, m](const HD& t, const HD& r, const HD&) { return rpow(r, m) * exp(-k * t); };
      if (m == -1.0) {
        L.X = [a, k, d](const HD& t, const HD& r, const HD&, const HD& v) {
          return -exp(-k * t) * (d.h(v) / r + a * log_abs(r));
        };
      } else {
        L.X = [a, k, m, d](const HD& t, const HD& r, const HD&, const HD& v) {
          return -rpow(r, m) * exp(-k * t) * (d.h(v) + a * r / (m + 1.0));
        };
      }
      break;
    }
    case LawTag::CL2inf:
    case LawTag::CL2rad: {
      if (!phi) phi = phi_instance(SourceSpec::constant(a), kappa, 0.0);
      auto ph = *phi;
      L.T = [m, ph](const HD& t, const HD& r, const HD& u) { return rpow(r, m) * ph.phi(t, u); };
      L.Q = [m, ph](const HD& t, const HD& r, const HD& u) { return rpow(r, m) * ph.phi_z(t, u); };
      L.X = [m, kappa, ph](const HD& t, const HD& r, const HD& u, const HD& v) {
        return kappa * rpow(r, m) * ph.phi_z(t, u) / v;
      };
      break;
    }
    case LawTag::CL3: {
      if (p == 0.0 || k == 0.0 || al == 0.0) throw ConfigError("CL3 needs p, k, alpha non-zero");
      L.T = [a, p, al, kappa, m](const HD& t, const HD& r, const HD& u) {
        return rpow(r, m) * exp(-p * ((p * kappa - a) * t + al * r + u));
      };
      L.Q = [a, p, al, kappa, m](const HD& t, const HD& r, const HD& u) {
        return -p * rpow(r, m) * exp(-p * ((p * kappa - a) * t + al * r + u));
      };
      L.X = [a, k, p, al, kappa, m](const HD& t, const HD& r, const HD& u, const HD& v) {
        HD g = upper_gamma(m + 1.0, p * al * r);
        return -exp(p * (a - p * kappa) * t) *
               (p * kappa * rpow(r, m) * exp(-p * (al * r + u)) / (al + v) +
                k * std::pow(al, -m - 1.0) * std::pow(p, -m) * g);
      };
      break;
    }
    case LawTag::CL4: {
      if (al == 0.0) throw ConfigError("CL4 needs alpha != 0");
      if (!phi) phi = phi_instance(SourceSpec::constant(a), kappa, 0.0);
      auto ph = *phi;
      L.T = [m, al, ph](const HD& t, const HD& r, const HD& u) { return rpow(r, m) * ph.phi(t, al * r + u); };
      L.Q = [m, al, ph](const HD& t, const HD& r, const HD& u) { return rpow(r, m) * ph.phi_z(t, al * r + u); };
      L.X = [m, al, kappa, ph](const HD& t, const HD& r, const HD& u, const HD& v) {
        return kappa * rpow(r, m) * ph.phi_z(t, al * r + u) / (al + v);
      };
      break;
    }
  }
  L.phi = phi;
  return L;
}

ConservationLaw with_phi(const ConservationLaw& law, PhiSolution phi) {
  if (law.tag != LawTag::CL2inf && law.tag != LawTag::CL2rad && law.tag != LawTag::CL4)
    throw ConfigError("with_phi: " + law.name() + " has no phi family");
  return make_law(law.tag, law.params, law.diffusivity, std::move(phi));
}

std::vector<ConservationLaw> catalog_laws(const ProblemSpec& problem) {
  std::vector<ConservationLaw> out;
  const auto& d = problem.diffusivity;
  const auto& s = problem.source;
  LawParams P;
  P.m = problem.m;
  double a = 0.0, k = 0.0;
  if (linear_source(s, a, k)) {
    P.a = a;
    P.b = a;
    P.k = k;
    out.push_back(make_law(problem.radial ? LawTag::CL1rad : LawTag::CL1, P, d));
  }
  double kappa = 0.0, alpha = 0.0;
  if (!reciprocal_form(d, kappa, alpha)) return out;
  LawParams R;
  R.m = problem.m;
  R.kappa = kappa;
  R.alpha = alpha;
  if (alpha == 0.0) {
    if (s.family == SourceFamily::Constant) R.a = s.b;
    PhiSolution one;
    one.kind = PhiSolution::Kind::UserSupplied;
    one.kappa = kappa;
    one.f_binding = s;
    one.phi = [](const HD&, const HD&) { return HD(1.0); };
    one.phi_z = [](const HD&, const HD&) { return HD(0.0); };
    out.push_back(make_law(problem.radial ? LawTag::CL2rad : LawTag::CL2inf, R, d, one));
    return out;
  }
  if (problem.radial) return out;
  if (s.family == SourceFamily::Exponential && s.q != 0.0 && s.k != 0.0) {
    R.a = s.a;
    R.k = s.k;
    R.p = s.q;
    out.push_back(make_law(LawTag::CL3, R, d));
  } else if (s.family == SourceFamily::Constant) {
    R.a = s.b;
    out.push_back(make_law(LawTag::CL4, R, d));
  }
  return out;
}

namespace {

struct Acc {
  double value = 0.0, scale = 0.0;
  void add(double x) {
    value += x;
    scale += std::abs(x);
  }
  double rel() const { return value / std::max(1.0, scale); }
};

struct Local {
  double h, h1, h2, f, f1;
};

Local local(const ProblemSpec& problem, double u, double v) {
  HD hv = problem.diffusivity.h(HD(v, 1.0, 1.0, 0.0));
  HD fv = problem.source.f(HD(u, 1.0, 1.0, 0.0));
  Local L{hv.value, hv.d1, hv.d1d2, fv.value, fv.d1};
  if (!std::isfinite(L.h + L.h1 + L.h2 + L.f + L.f1)) throw DomainError("singular h or f at the jet");
  return L;
}

enum { T_ = 0, R_ = 1, U_ = 2, V_ = 3 };

}  // namespace

std::array<double, 3> multiplier_residual(const Fn4& Q, const ProblemSpec& problem, const LawJet& jet) {
  const double r = jet.r, v = jet.u_r, m = problem.m;
  auto q = partials<4>([&](const std::array<HD, 4>& x) { return Q(x[0], x[1], x[2], x[3]); },
                       std::array<double, 4>{jet.t, jet.r, jet.u, jet.u_r});
  Local L = local(problem, jet.u, v);
  std::array<double, 3> out;
  out[0] = q.g[V_] / std::max(1.0, std::abs(q.g[V_]));

  Acc e2;
  e2.add(q.g[R_] * L.h2);
  e2.add(-m / r * q.v * L.h2);
  e2.add(q.g[U_] * (v * L.h2 + 2.0 * L.h1));
  out[1] = e2.rel();

  Acc e3;
  e3.add(q.g[T_]);
  e3.add(L.f1 * q.v);
  e3.add(L.f * q.g[U_]);
  e3.add(m / r * q.g[U_] * (L.h - v * L.h1));
  // (Q/r)_r = Q_r/r - Q/r^2
  e3.add(-m * L.h1 * q.g[R_] / r);
  e3.add(m * L.h1 * q.v / (r * r));
  e3.add(q.H[R_][R_] * L.h1);
  e3.add(2.0 * q.H[R_][U_] * v * L.h1);
  e3.add(q.H[U_][U_] * v * v * L.h1);
  out[2] = e3.rel();
  return out;
}

std::array<double, 3> multiplier_residual(const ConservationLaw& law, const ProblemSpec& problem, const LawJet& jet) {
  const Fn3& Q = law.Q;
  return multiplier_residual([&Q](const HD& t, const HD& r, const HD& u, const HD&) { return Q(t, r, u); }, problem,
                             jet);
}

std::array<double, 3> characteristic_residual(const ConservationLaw& law, const ProblemSpec& problem, const LawJet& jet) {
  const double r = jet.r, v = jet.u_r, m = problem.m;
  auto T = partials<3>([&](const std::array<HD, 3>& x) { return law.T(x[0], x[1], x[2]); },
                       std::array<double, 3>{jet.t, jet.r, jet.u});
  double Q = law.Q(HD(jet.t), HD(jet.r), HD(jet.u)).value;
  // first derivatives of X in each argument
  std::array<double, 4> Xg{};
  for (int i = 0; i < 4; ++i) {
    std::array<HD, 4> a{HD(jet.t), HD(jet.r), HD(jet.u), HD(jet.u_r)};
    a[i].d1 = 1.0;
    Xg[i] = law.X(a[0], a[1], a[2], a[3]).d1;
  }
  Local L = local(problem, jet.u, v);
  std::array<double, 3> out;
  Acc c1;
  c1.add(T.g[U_]);
  c1.add(-Q);
  out[0] = c1.rel();
  Acc c2;
  c2.add(Xg[V_]);
  c2.add(L.h1 * T.g[U_]);
  out[1] = c2.rel();
  Acc c3;
  c3.add(T.g[T_]);
  c3.add(Xg[R_]);
  c3.add(v * Xg[U_]);
  c3.add(m / r * L.h * T.g[U_]);
  c3.add(L.f * T.g[U_]);
  out[2] = c3.rel();
  return out;
}

double simpson(const std::vector<double>& y, double dx) {
  const std::size_t n = y.size();
  if (n < 3) throw std::invalid_argument("simpson: need at least 3 points");
  std::size_t intervals = n - 1;
  std::size_t end = intervals % 2 == 0 ? n - 1 : n - 4;
  double s = 0.0;
  if (end >= 2) {
    for (std::size_t i = 0; i + 2 <= end; i += 2) s += y[i] + 4.0 * y[i + 1] + y[i + 2];
    s *= dx / 3.0;
  }
  if (intervals % 2 == 1) {
    if (n < 4) {
      // two points per panel at best: fall back to the trapezoid on the single interval
      return 0.5 * dx * (y[0] + y[1]) + (n == 3 ? 0.5 * dx * (y[1] + y[2]) : 0.0);
    }
    std::size_t j = n - 4;
    s += 3.0 * dx / 8.0 * (y[j] + 3.0 * y[j + 1] + 3.0 * y[j + 2] + y[j + 3]);
  }
  return s;
}

double conserved_quantity(const ConservationLaw& law, const Field& field) {
  const std::size_t N = field.values.size();
  if (N < 3 || field.grid.N != N) throw std::invalid_argument("conserved_quantity: field needs at least 3 grid points");
  std::vector<double> T(N);
  for (std::size_t i = 0; i < N; ++i) T[i] = law.T(HD(field.t), HD(field.grid.r(i)), HD(field.values[i])).value;
  return simpson(T, field.grid.dr());
}

double flux(const ConservationLaw& law, double t, double r, double u, double u_r) {
  return law.X(HD(t), HD(r), HD(u), HD(u_r)).value;
}

std::vector<double> gradient(const std::vector<double>& y, double dx) {
  const std::size_t n = y.size();
  if (n < 3) throw std::invalid_argument("gradient: need at least 3 points");
  std::vector<double> g(n);
  g[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dx);
  g[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dx);
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (y[i + 1] - y[i - 1]) / (2.0 * dx);
  return g;
}

ContinuityReport continuity_check(const ConservationLaw& law, const Trajectory& traj) {
  const auto& S = traj.slices;
  if (S.size() < 3) throw std::invalid_argument("continuity_check: need at least 3 slices");
  const double dt = S[1].t - S[0].t;
  for (std::size_t i = 1; i < S.size(); ++i)
    if (std::abs((S[i].t - S[i - 1].t) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw std::invalid_argument("continuity_check: slices must be uniformly spaced in time");
  std::vector<double> C(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) C[i] = conserved_quantity(law, S[i]);
  ContinuityReport rep;
  for (std::size_t i = 1; i + 1 < S.size(); ++i) {
    const Field& F = S[i];
    const std::size_t N = F.values.size();
    double dx = F.grid.dr();
    double g0 = (-3.0 * F.values[0] + 4.0 * F.values[1] - F.values[2]) / (2.0 * dx);
    double gN = (3.0 * F.values[N - 1] - 4.0 * F.values[N - 2] + F.values[N - 3]) / (2.0 * dx);
    double left = flux(law, F.t, F.grid.r_min, F.values[0], g0);
    double right = flux(law, F.t, F.grid.r_max, F.values[N - 1], gN);
    double dC = (C[i + 1] - C[i - 1]) / (2.0 * dt);
    double defect = std::abs(dC + right - left);
    rep.rows.push_back({F.t, C[i], left, right, defect});
    rep.max_defect = std::max(rep.max_defect, defect);
  }
  return rep;
}

void write_monitor_csv(std::ostream& os, const ContinuityReport& rep) {
  os << "t,C_value,left_flux,right_flux,defect\n";
  char buf[256];
  for (const auto& r : rep.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.C_value, r.left_flux, r.right_flux,
                  r.defect);
    os << buf;
  }
}

SQuantity s_quantity(const Field& field, double p, double kappa, double alpha, double m) {
  const std::size_t N = field.values.size();
  std::vector<double> y(N);
  double peak = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double r = field.grid.r(i);
    double w = m == 0.0 ? 1.0 : std::pow(r, m);
    y[i] = std::exp(-p * (field.values[i] + alpha * r)) * w;
    peak = std::max(peak, std::abs(y[i]));
  }
  SQuantity out;
  out.integral = simpson(y, field.grid.dr());
  out.value = std::exp(-p * p * kappa * field.t) * out.integral;
  out.decays = std::abs(y.back()) <= 1e-4 * peak;
  return out;
}

}  // namespace plap
