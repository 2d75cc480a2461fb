#include "plap/symmetry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <sstream>
#include <iomanip>

namespace plap {

using HD = HyperDual;

std::array<double, 3> SymmetryGenerator::at(double t, double r, double u) const {
  return {tau(t, r, u).value, xi(t, r, u).value, eta(t, r, u).value};
}

SymmetryGenerator make_generator(int tag, const Params& P) {
  SymmetryGenerator g;
  g.tag = tag;
  g.params = P;
  const double a = P.a, b = P.b, c = P.c, k = P.k, p = P.p, q = P.q, al = P.alpha, be = P.beta;
  auto zero = [](const HD&, const HD&, const HD&) { return HD(0.0); };
  g.tau = zero;
  g.xi = zero;
  g.eta = zero;
  switch (tag) {
    case 1:
      g.tau = [](const HD&, const HD&, const HD&) { return HD(1.0); };
      break;
    case 2:
      g.xi = [](const HD&, const HD&, const HD&) { return HD(1.0); };
      break;
    case 3:
      g.eta = [k](const HD& t, const HD&, const HD&) { return exp(k * t); };
      break;
    case 4:
      g.tau = [](const HD& t, const HD&, const HD&) { return 2.0 * t; };
      g.xi = [](const HD&, const HD& r, const HD&) { return r; };
      g.eta = [a](const HD&, const HD&, const HD& u) { return a + u; };
      break;
    case 5:
      g.tau = [](const HD& t, const HD&, const HD&) { return 2.0 * t; };
      g.xi = [](const HD&, const HD& r, const HD&) { return r; };
      g.eta = [b](const HD& t, const HD&, const HD& u) { return b * t + u; };
      break;
    case 6:
      g.tau = [c, p](const HD& t, const HD&, const HD&) { return exp(c * (1.0 - p) * t) / c; };
      g.eta = [a, c, p](const HD& t, const HD&, const HD& u) { return exp(c * (1.0 - p) * t) * (a + u); };
      break;
    case 7:
      g.tau = [p, q](const HD& t, const HD&, const HD&) { return (p + 1.0) * (1.0 - q) * t; };
      g.xi = [p, q](const HD&, const HD& r, const HD&) { return (p - q) * r; };
      g.eta = [a, p](const HD&, const HD&, const HD& u) { return (p + 1.0) * (a + u); };
      break;
    case 8:
      g.tau = [p, q](const HD& t, const HD&, const HD&) { return (p + 1.0) * q * t; };
      g.xi = [q](const HD&, const HD& r, const HD&) { return q * r; };
      g.eta = [p](const HD&, const HD&, const HD&) { return HD(-(p + 1.0)); };
      break;
    case 9:
      g.tau = [](const HD& t, const HD&, const HD&) { return 2.0 * t; };
      g.xi = [b, be](const HD&, const HD& r, const HD&) { return (1.0 - 0.5 * b / be * r) * r; };
      g.eta = [a](const HD&, const HD&, const HD& u) { return a + u; };
      break;
    case 10:
      g.tau = [k](const HD& t, const HD&, const HD&) { return -k * t * t; };
      g.eta = [a, k](const HD& t, const HD&, const HD& u) { return 1.0 + 2.0 * k * t * (a + u); };
      break;
    case 11:
      g.tau = [b](const HD& t, const HD&, const HD&) { return -0.5 / b * exp(2.0 * b * t); };
      g.eta = [a, b, k](const HD& t, const HD&, const HD& u) { return exp(2.0 * b * t) * (a + b / k + u); };
      break;
    case 12:
      g.tau = [b](const HD& t, const HD&, const HD&) { return 0.5 / b * cos(2.0 * b * t); };
      g.eta = [a, b, k](const HD& t, const HD&, const HD& u) {
        return b / k * cos(2.0 * b * t) + sin(2.0 * b * t) * (a + u);
      };
      break;
    case 13:
      g.tau = [b](const HD& t, const HD&, const HD&) { return 0.5 / b * sin(2.0 * b * t); };
      g.eta = [a, b, k](const HD& t, const HD&, const HD& u) {
        return b / k * sin(2.0 * b * t) - cos(2.0 * b * t) * (a + u);
      };
      break;
    case 14:
      g.xi = [k](const HD&, const HD& r, const HD&) { return -k * r * r; };
      g.eta = [be](const HD&, const HD&, const HD&) { return HD(2.0 * be); };
      break;
    case 15:
      g.tau = [p](const HD& t, const HD&, const HD&) { return (p + 1.0) * t; };
      g.xi = [](const HD&, const HD& r, const HD&) { return r; };
      g.eta = [b, p, al](const HD& t, const HD& r, const HD&) { return (p + 1.0) * b * t - al * r; };
      break;
    case 16:
      g.xi = [](const HD&, const HD& r, const HD&) { return r * r; };
      g.eta = [al, be](const HD& t, const HD& r, const HD&) { return 2.0 * be * t - al * r * r; };
      break;
    case 17:
      g.tau = [be](const HD& t, const HD&, const HD&) { return 2.0 * be * t * t; };
      g.xi = [b, al, be](const HD& t, const HD& r, const HD& u) {
        return r * r * (al * r - b * t) + r * (2.0 * be * t + r * u);
      };
      g.eta = [b, al, be](const HD& t, const HD& r, const HD& u) {
        return al * r * r * (b * t - al * r) + (2.0 * be * t - al * r * r) * u;
      };
      break;
    case 18:
      g.tau = [k, al](const HD& t, const HD&, const HD&) { return al * exp(-k * t); };
      g.xi = [b, k](const HD& t, const HD&, const HD& u) { return -exp(-k * t) * (b + k * u); };
      g.eta = [b, k, al](const HD& t, const HD&, const HD& u) { return al * exp(-k * t) * (b + k * u); };
      break;
    case 19:
      g.tau = [p, al, be](const HD& t, const HD&, const HD&) { return ((p + 1.0) * be - (p - 1.0) * al) * t; };
      g.xi = [b](const HD& t, const HD&, const HD& u) { return b * t - u; };
      g.eta = [b, p, al, be](const HD& t, const HD& r, const HD& u) {
        return b * p * (be - al) * t + al * be * r + (al + be) * u;
      };
      break;
    case 20:
      // Negated table row: the orientation used by the closed-form flow and the commutator table.
      g.tau = [p, al, be](const HD& t, const HD&, const HD&) { return (p * be - 2.0 * al) * t; };
      g.xi = [b](const HD& t, const HD&, const HD& u) { return u - b * t; };
      g.eta = [b, p, al, be](const HD& t, const HD& r, const HD& u) {
        return b * be * p * t - (al * al + be * be) * r - 2.0 * al * u;
      };
      break;
    case 21:
      g.tau = [p, al](const HD& t, const HD&, const HD&) { return (2.0 * al + p) * t; };
      g.xi = [b](const HD& t, const HD&, const HD& u) { return b * t - u; };
      g.eta = [b, p, al](const HD& t, const HD& r, const HD& u) { return b * p * t + al * (al * r + 2.0 * u); };
      break;
    case 22:
      g.tau = [p](const HD& t, const HD&, const HD&) { return p * t; };
      g.eta = [b, p](const HD& t, const HD& r, const HD&) { return b * p * t - r; };
      break;
    case 23:
      g.tau = [k](const HD& t, const HD&, const HD&) { return exp(k * t); };
      g.eta = [k, al](const HD& t, const HD& r, const HD& u) { return k * exp(k * t) * (al * r + u); };
      break;
    default:
      throw std::invalid_argument("make_generator: tag must be 1..23");
  }
  return g;
}

std::vector<SymmetryGenerator> catalog(const ProblemSpec& problem) {
  CaseTag c = classify(problem);
  std::vector<SymmetryGenerator> out;
  for (const auto& ref : c.generators) out.push_back(make_generator(ref.tag, ref.params));
  return out;
}

// ---------------------------------------------------------------------------
// group transformations

namespace {

void require_positive(double value, double same_sign_as, const char* what, double bound) {
  if (value * same_sign_as <= 0.0 || !std::isfinite(value))
    throw TransformDomainError(std::string("transformation leaves its domain: ") + what, bound);
}

// Pick s + 2 pi j closest to the reference.
double nearest_branch(double s, double ref) {
  const double period = 2.0 * std::numbers::pi;
  return s + period * std::round((ref - s) / period);
}

}  // namespace

GroupTransformation make_transformation(int tag, const Params& P) {
  GroupTransformation g;
  g.tag = tag;
  g.params = P;
  const double a = P.a, b = P.b, c = P.c, k = P.k, p = P.p, q = P.q, al = P.alpha, be = P.beta;
  using std::exp;
  using std::log;
  switch (tag) {
    case 1:
      g.closed_form = [](double e, const Point3& x) { return Point3{x[0] + e, x[1], x[2]}; };
      break;
    case 2:
      g.closed_form = [](double e, const Point3& x) { return Point3{x[0], x[1] + e, x[2]}; };
      break;
    case 3:
      g.closed_form = [k](double e, const Point3& x) { return Point3{x[0], x[1], x[2] + e * exp(k * x[0])}; };
      break;
    case 4:
      g.closed_form = [a](double e, const Point3& x) {
        return Point3{exp(2 * e) * x[0], exp(e) * x[1], exp(e) * (a + x[2]) - a};
      };
      break;
    case 5:
      g.closed_form = [b](double e, const Point3& x) {
        return Point3{exp(2 * e) * x[0], exp(e) * x[1], exp(e) * ((exp(e) - 1.0) * b * x[0] + x[2])};
      };
      break;
    case 6:
      g.closed_form = [a, c, p](double eps, const Point3& x) {
        const double e = (p - 1.0) * eps;  // printed form runs at parameter (p-1) eps
        double e0 = exp(c * (p - 1.0) * x[0]);
        double arg = e0 + e;
        require_positive(arg, 1.0, "X6 logarithm", -e0 / (p - 1.0));
        double base = 1.0 + e / e0;
        require_positive(base, 1.0, "X6 power base", -e0 / (p - 1.0));
        return Point3{log(arg) / (c * (p - 1.0)), x[1], std::pow(base, 1.0 / (p - 1.0)) * (a + x[2]) - a};
      };
      break;
    case 7:
      g.closed_form = [a, p, q](double e, const Point3& x) {
        return Point3{exp((p + 1.0) * (1.0 - q) * e) * x[0], exp((p - q) * e) * x[1],
                      exp((p + 1.0) * e) * (a + x[2]) - a};
      };
      break;
    case 8:
      g.closed_form = [p, q](double e, const Point3& x) {
        return Point3{exp((p + 1.0) * q * e) * x[0], exp(q * e) * x[1], x[2] - (p + 1.0) * e};
      };
      break;
    case 9:
      g.closed_form = [a, b, be](double e, const Point3& x) {
        double den = b - exp(-e) * (b - 2.0 * be / x[1]);
        require_positive(std::abs(den), 1.0, "X9 denominator", 0.0);
        return Point3{exp(2 * e) * x[0], 2.0 * be / den, exp(e) * (a + x[2]) - a};
      };
      break;
    case 10:
      g.closed_form = [a, k](double e, const Point3& x) {
        double s = 1.0 + k * e * x[0];
        require_positive(s, 1.0, "X10 denominator", -1.0 / (k * x[0]));
        return Point3{x[0] / s, x[1], s * (s * (a + x[2]) + e) - a};
      };
      break;
    case 11:
      g.closed_form = [a, b, k](double e, const Point3& x) {
        double e0 = exp(-2.0 * b * x[0]);
        double arg = e0 + e;
        require_positive(arg, 1.0, "X11 logarithm", -e0);
        return Point3{-0.5 / b * log(arg), x[1], exp(2.0 * b * x[0]) * e * (a + b / k + x[2]) + x[2]};
      };
      break;
    case 12:
      g.closed_form = [a, b, k](double e, const Point3& x) {
        double s = 2.0 * b * x[0];
        double X = (std::tan(s) + std::sinh(e)) / (1.0 / std::cos(s) + std::cosh(e));
        double st = nearest_branch(2.0 * std::atan(X), s);
        return Point3{st / (2.0 * b), x[1],
                      b / k * std::cos(s) * std::sinh(e) + (std::cosh(e) + std::sin(s) * std::sinh(e)) * (a + x[2]) - a};
      };
      break;
    case 13:
      g.closed_form = [a, b, k](double e, const Point3& x) {
        double s = 2.0 * b * x[0];
        double X = (-1.0 / std::tan(s) + std::sinh(e)) / (1.0 / std::sin(s) + std::cosh(e));
        double st = nearest_branch(2.0 * std::atan(X) + 0.5 * std::numbers::pi, s);
        return Point3{st / (2.0 * b), x[1],
                      b / k * std::sin(s) * std::sinh(e) + (std::cosh(e) - std::cos(s) * std::sinh(e)) * (a + x[2]) - a};
      };
      break;
    case 14:
      g.closed_form = [k, be](double e, const Point3& x) {
        double den = 1.0 + k * e * x[1];
        require_positive(den, 1.0, "X14 denominator", -1.0 / (k * x[1]));
        return Point3{x[0], x[1] / den, 2.0 * be * e + x[2]};
      };
      break;
    case 15:
      g.closed_form = [b, p, al](double e, const Point3& x) {
        double E = exp((p + 1.0) * e);
        return Point3{E * x[0], exp(e) * x[1], (E - 1.0) * b * x[0] - (exp(e) - 1.0) * al * x[1] + x[2]};
      };
      break;
    case 16:
      g.closed_form = [al, be](double e, const Point3& x) {
        double den = 1.0 - e * x[1];
        require_positive(den, 1.0, "X16 denominator", 1.0 / x[1]);
        return Point3{x[0], x[1] / den, e * (2.0 * be * x[0] - al * x[1] * x[1] / den) + x[2]};
      };
      break;
    case 17:
      g.closed_form = [b, al, be](double e, const Point3& x) {
        const double t = x[0], r = x[1], u = x[2];
        double d1 = 1.0 - 2.0 * be * e * t;
        double W = al * r - b * t + u;
        double d2 = 1.0 - e * (2.0 * be * t + r * W);
        require_positive(d1, 1.0, "X17 time denominator", 1.0 / (2.0 * be * t));
        require_positive(d2, 1.0, "X17 space denominator", 1.0 / (2.0 * be * t + r * W));
        return Point3{t / d1, r / d2, (u - al * e * r * r * W / d2) / d1};
      };
      break;
    case 18:
      g.closed_form = [b, k, al](double e, const Point3& x) {
        double e0 = exp(k * x[0]);
        double arg = e0 + al * k * e;
        require_positive(arg, 1.0, "X18 logarithm", -e0 / (al * k));
        double w = exp(-k * x[0]) * (b + k * x[2]);
        return Point3{log(arg) / k, -e * w + x[1], al * e * w + x[2]};
      };
      break;
    case 19:
      g.closed_form = [b, p, al, be](double e, const Point3& x) {
        const double t = x[0], r = x[1], u = x[2];
        double E = exp(((p + 1.0) * be - (p - 1.0) * al) * e);
        double ea = exp(al * e), eb = exp(be * e);
        return Point3{E * t, ((eb - ea) * (b * t - u) + (be * ea - al * eb) * r) / (be - al),
                      b * E * t + (al * be * (eb - ea) * r + (al * ea - be * eb) * (b * t - u)) / (be - al)};
      };
      break;
    case 20:
      g.closed_form = [b, p, al, be](double e, const Point3& x) {
        const double t = x[0], r = x[1], u = x[2];
        double E = exp((be * p - 2.0 * al) * e);
        double ea = exp(-al * e), cs = std::cos(be * e), sn = std::sin(be * e);
        return Point3{E * t, ea * (cs * r + sn / be * (al * r - b * t + u)),
                      b * E * t + ea * (sn / be * (al * (b * t - u) - (al * al + be * be) * r) - cs * (b * t - u))};
      };
      break;
    case 21:
      g.closed_form = [b, p, al](double e, const Point3& x) {
        const double t = x[0], r = x[1], u = x[2];
        double E = exp((p + 2.0 * al) * e), ea = exp(al * e);
        double W = b * t - al * r - u;
        return Point3{E * t, ea * (e * W + r), b * E * t - ea * (al * r + (1.0 + al * e) * W)};
      };
      break;
    case 22:
      g.closed_form = [b, p](double e, const Point3& x) {
        return Point3{exp(p * e) * x[0], x[1], b * x[0] * (exp(p * e) - 1.0) - e * x[1] + x[2]};
      };
      break;
    case 23:
      g.closed_form = [k, al](double eps, const Point3& x) {
        const double e = k * eps;  // printed form runs at parameter k eps
        double e0 = exp(-k * x[0]);
        double arg = e0 - e;
        require_positive(arg, 1.0, "X23 logarithm", e0 / k);
        double ek = exp(k * x[0]);
        return Point3{-log(arg) / k, x[1], (al * x[1] * e * ek + x[2]) / (1.0 - e * ek)};
      };
      break;
    default:
      throw std::invalid_argument("make_transformation: tag must be 1..23");
  }
  return g;
}

Point3 apply_group(const GroupTransformation& trans, double eps, const Point3& x) {
  if (eps == 0.0) return x;
  return trans.closed_form(eps, x);
}

Point3 integrate_flow(const SymmetryGenerator& gen, double eps, const Point3& x, int steps) {
  if (steps < 1) throw std::invalid_argument("integrate_flow: steps must be positive");
  const double h = eps / steps;
  Point3 y = x;
  auto F = [&](const Point3& z) { return gen.at(z[0], z[1], z[2]); };
  auto axpy = [](const Point3& z, double s, const Point3& d) {
    return Point3{z[0] + s * d[0], z[1] + s * d[1], z[2] + s * d[2]};
  };
  for (int i = 0; i < steps; ++i) {
    Point3 k1 = F(y);
    Point3 k2 = F(axpy(y, 0.5 * h, k1));
    Point3 k3 = F(axpy(y, 0.5 * h, k2));
    Point3 k4 = F(axpy(y, h, k3));
    for (int j = 0; j < 3; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    if (!std::isfinite(y[0] + y[1] + y[2]))
      throw TransformDomainError("flow left the domain during integration", eps * i / steps);
  }
  return y;
}

// ---------------------------------------------------------------------------
// determining equations

namespace {

Partials<3> coef_partials(const Coefficient& c, double t, double r, double u) {
  return partials<3>([&](const std::array<HD, 3>& x) { return c(x[0], x[1], x[2]); }, std::array<double, 3>{t, r, u});
}

struct Local {
  double h, h1, h2, f, f1;
};

Local local_functions(const ProblemSpec& problem, double u, double v) {
  HD hv = problem.diffusivity.h(HD(v, 1.0, 1.0, 0.0));
  HD fv = problem.source.f(HD(u, 1.0, 1.0, 0.0));
  Local L{hv.value, hv.d1, hv.d1d2, fv.value, fv.d1};
  if (!std::isfinite(L.h) || !std::isfinite(L.h1) || !std::isfinite(L.h2) || !std::isfinite(L.f) ||
      !std::isfinite(L.f1))
    throw DomainError("singular h or f at the jet");
  return L;
}

struct Acc {
  double value = 0.0, scale = 0.0;
  void add(double x) {
    value += x;
    scale += std::abs(x);
  }
  ScaledValue done() const { return {value, scale}; }
};

enum { T = 0, R = 1, U = 2 };

}  // namespace

std::array<ScaledValue, 4> determining_residual(const SymmetryGenerator& gen, const ProblemSpec& problem, const Jet& jet) {
  const double t = jet.t, r = jet.r, u = jet.u, v = jet.u_r, m = problem.m;
  Partials<3> tau = coef_partials(gen.tau, t, r, u);
  Partials<3> xi = coef_partials(gen.xi, t, r, u);
  Partials<3> eta = coef_partials(gen.eta, t, r, u);
  Local L = local_functions(problem, u, v);

  std::array<ScaledValue, 4> out;
  out[0] = {tau.g[R], std::abs(tau.g[R])};
  out[1] = {tau.g[U], std::abs(tau.g[U])};

  Acc e3;
  const double A = v * L.h2 + 2.0 * L.h1;
  e3.add(A * v * xi.g[U]);
  e3.add(A * xi.g[R]);
  e3.add(-L.h2 * v * eta.g[U]);
  e3.add(-L.h2 * eta.g[R]);
  e3.add(-tau.g[T] * L.h1);
  out[2] = e3.done();

  Acc e4;
  const double rh1 = r * L.h1;
  e4.add(rh1 * v * v * v * xi.H[U][U]);
  e4.add(rh1 * v * v * (2.0 * xi.H[U][R] - eta.H[U][U]));
  e4.add(rh1 * v * (xi.H[R][R] - 2.0 * eta.H[U][R]));
  e4.add(-rh1 * eta.H[R][R]);
  const double B = m * (v * L.h1 - L.h) - r * L.f;
  e4.add(B * v * xi.g[U]);
  e4.add(-B * eta.g[U]);
  e4.add(-(m * L.h + r * L.f) * tau.g[T]);
  e4.add(m * L.h1 * (v * xi.g[R] - eta.g[R]));
  e4.add(m * L.h * xi.v / r);
  e4.add(-r * v * xi.g[T]);
  e4.add(r * eta.g[T]);
  e4.add(-r * L.f1 * eta.v);
  out[3] = e4.done();
  return out;
}

double max_relative(const std::array<ScaledValue, 4>& res) {
  double m = 0.0;
  for (const auto& c : res) m = std::max(m, c.relative());
  return m;
}

ScaledValue invariance_residual_unsplit(const SymmetryGenerator& gen, const ProblemSpec& problem, const Jet& jet) {
  const double t = jet.t, r = jet.r, u = jet.u, v = jet.u_r, w = jet.u_rr, z = jet.u_rrr, m = problem.m;
  Local L = local_functions(problem, u, v);
  // u_t and u_tr from the equation and its r-derivative
  const double H = L.h1 * w + m * L.h / r + L.f;
  const double Hr = L.h2 * w * w + L.h1 * z + m * (L.h1 * w / r - L.h / (r * r)) + L.f1 * v;

  // Total r-derivatives along the cubic Taylor curve of the jet.
  HD s(0.0, 1.0, 1.0, 0.0);
  HD rr = r + s, uu = u + v * s + 0.5 * w * s * s, vv = v + w * s + 0.5 * z * s * s;
  HD P0 = gen.eta(HD(t), rr, uu) - gen.xi(HD(t), rr, uu) * vv;
  HD Tr = gen.tau(HD(t), rr, uu);
  // Total t-derivatives (first order only)
  HD st(0.0, 1.0, 0.0, 0.0);
  HD tt = t + st, ut = u + H * st, vt = v + Hr * st;
  HD P0t = gen.eta(tt, HD(r), ut) - gen.xi(tt, HD(r), ut) * vt;
  HD Tt = gen.tau(tt, HD(r), ut);

  const double c = m * L.h1 / r + L.h2 * w;
  Acc acc;
  // L[eta - xi u_r]
  acc.add(P0t.d1);
  acc.add(-L.h1 * P0.d1d2);
  acc.add(-c * P0.d1);
  acc.add(-L.f1 * P0.value);
  // L[-tau u_t] on solutions: u_t solves the linearised equation
  acc.add(-H * (Tt.d1 - L.h1 * Tr.d1d2 - c * Tr.d1));
  acc.add(2.0 * L.h1 * Tr.d1 * Hr);
  return acc.done();
}

// ---------------------------------------------------------------------------
// sampling

Jet sample_jet(const ProblemSpec& problem, Rng& rng) {
  Jet j;
  j.t = uniform(rng, 0.1, 2.0);
  j.r = uniform(rng, 0.5, 3.0);
  j.u = uniform(rng, -1.0, 1.0);
  auto [lo, hi] = problem.working_branch;
  constexpr double big = 1e299;
  double vlo, vhi;
  if (lo > -big && hi < big && hi - lo < 2.4) {
    vlo = lo + 0.1 * (hi - lo);
    vhi = hi - 0.1 * (hi - lo);
  } else if (lo > -big) {
    vlo = lo + 0.2;
    vhi = lo + 2.2;
  } else if (hi < big) {
    vlo = hi - 2.2;
    vhi = hi - 0.2;
  } else {
    vlo = -2.0;
    vhi = 2.0;
  }
  j.u_r = uniform(rng, vlo, vhi);
  j.u_rr = uniform(rng, -1.0, 1.0);
  j.u_rrr = uniform(rng, -1.0, 1.0);
  return j;
}

std::vector<Point3> sample_points(std::size_t n, Rng& rng) {
  std::vector<Point3> out(n);
  for (auto& x : out) x = {uniform(rng, 0.1, 2.0), uniform(rng, 0.5, 3.0), uniform(rng, -1.0, 1.0)};
  return out;
}

RowDraw draw_row(int tag, Rng& rng) {
  const double kappa = signed_uniform(rng, 0.5, 2.0);
  const double a = uniform(rng, 1.5, 3.0);
  const double b = signed_uniform(rng, 0.5, 2.0);
  const double k = signed_uniform(rng, 0.5, 2.0);
  const double c = signed_uniform(rng, 0.5, 2.0);
  const double p = uniform(rng, 1.5, 3.5);
  const double m_any = uniform(rng, -2.0, 3.0);
  const double alpha = signed_uniform(rng, 0.3, 1.5);
  double beta = signed_uniform(rng, 0.3, 1.5);
  // arbitrary smooth h with h'' != 0 and arbitrary f
  const double c1 = uniform(rng, 0.1, 0.5), c2 = uniform(rng, 0.1, 0.5);
  const double s0 = uniform(rng, 0.5, 1.5), s1 = uniform(rng, 0.2, 1.0), s2 = uniform(rng, 0.2, 1.0);
  DiffusivitySpec h_any = DiffusivitySpec::arbitrary(
      [kappa, c1, c2](const HD& v) { return -kappa * (v + c1 * v * v * v + c2 * sin(v)); });
  SourceSpec f_any = SourceSpec::arbitrary([s0, s1, s2](const HD& u) { return s0 + s1 * sin(u) + s2 * u * u; });

  ProblemSpec prob;
  switch (tag) {
    case 1: prob = make_problem(h_any, f_any, m_any); break;
    case 2: prob = make_problem(h_any, f_any, 0.0); break;
    case 3: prob = make_problem(h_any, SourceSpec::linear(b, k), m_any); break;
    case 4: prob = make_problem(h_any, SourceSpec::inverse(k, a), m_any); break;
    case 5: prob = make_problem(h_any, SourceSpec::constant(b), m_any); break;
    case 6:
      prob = make_problem(DiffusivitySpec::shifted_power(kappa, 0, 0, p), SourceSpec::power_plus_linear(k, a, p, c), m_any);
      break;
    case 7:
      prob = make_problem(DiffusivitySpec::shifted_power(kappa, 0, 0, p),
                          SourceSpec::power(k, a, uniform(rng, 0.3, 3.0)), m_any);
      break;
    case 8:
      prob = make_problem(DiffusivitySpec::shifted_power(kappa, 0, 0, p),
                          SourceSpec::exponential(k, signed_uniform(rng, 0.3, 1.5)), m_any);
      break;
    case 9:
      prob = make_problem(DiffusivitySpec::shifted_power(kappa, 0, beta, -1), SourceSpec::constant_plus_inverse(b, k, a), -2.0);
      break;
    case 10:
      prob = make_problem(DiffusivitySpec::shifted_power(kappa, 0, 0, 2), SourceSpec::power(k, a, 2.0), m_any);
      break;
    case 11:
      prob = make_problem(DiffusivitySpec::shifted_power(kappa, 0, 0, 2), SourceSpec::quadratic_shifted(k, a, b, -1), m_any);
      break;
    case 12:
    case 13:
      prob = make_problem(DiffusivitySpec::shifted_power(kappa, 0, 0, 2), SourceSpec::quadratic_shifted(k, a, b, 1), m_any);
      break;
    case 14:
      prob = make_problem(DiffusivitySpec::shifted_power(kappa, 0, beta, -1), SourceSpec::linear(b, k), -2.0);
      break;
    case 15:
      prob = make_problem(DiffusivitySpec::shifted_power(kappa, alpha, 0, p), SourceSpec::constant(b), m_any);
      break;
    case 16:
    case 17:
      prob = make_problem(DiffusivitySpec::shifted_power(kappa, alpha, beta, -1), SourceSpec::constant(b), -2.0);
      break;
    case 18:
      prob = make_problem(DiffusivitySpec::ratio(kappa, alpha, 0, 2), SourceSpec::linear(b, k), 0.0);
      break;
    case 19: {
      if (std::abs(alpha - beta) < 0.3) beta = alpha + (alpha > 0 ? -0.6 : 0.6);
      double pr = signed_uniform(rng, 1.5, 2.5);
      prob = make_problem(DiffusivitySpec::ratio(kappa, alpha, beta, pr), SourceSpec::constant(b), 0.0);
      break;
    }
    case 20:
      prob = make_problem(DiffusivitySpec::exp_arctan(kappa, alpha, beta, signed_uniform(rng, 0.5, 2.0)),
                          SourceSpec::constant(b), 0.0);
      break;
    case 21:
      prob = make_problem(DiffusivitySpec::exp_reciprocal(kappa, alpha, signed_uniform(rng, 0.5, 2.0)),
                          SourceSpec::constant(b), 0.0);
      break;
    case 22:
      prob = make_problem(DiffusivitySpec::exp_linear(kappa, signed_uniform(rng, 0.3, 1.5)), SourceSpec::constant(b), m_any);
      break;
    case 23:
      prob = make_problem(DiffusivitySpec::log(kappa, alpha), SourceSpec::linear(b, k), 0.0);
      break;
    default:
      throw std::invalid_argument("draw_row: tag must be 1..23");
  }
  for (auto& g : catalog(prob))
    if (g.tag == tag) return {prob, g};
  throw std::logic_error("draw_row: X" + std::to_string(tag) + " missing from the case " + classify(prob).label);
}

const std::vector<std::string>& case_labels() {
  static const std::vector<std::string> labels = {
      "2dim_1", "2dim_2", "2dim_3", "2dim_4", "2dim_5", "2dim_6", "3dim_1", "3dim_2", "3dim_3", "3dim_4", "3dim_5",
      "4dim_1", "4dim_2", "4dim_3", "4dim_4", "4dim_5", "5dim_1", "5dim_2", "5dim_3", "5dim_4"};
  return labels;
}

ProblemSpec draw_case(const std::string& label, Rng& rng) {
  static const std::vector<std::pair<std::string, int>> witness = {
      {"2dim_1", 3}, {"2dim_2", 4}, {"2dim_3", 6}, {"2dim_4", 7}, {"2dim_5", 8}, {"2dim_6", 9}, {"3dim_1", 5},
      {"3dim_2", 10}, {"3dim_3", 11}, {"3dim_4", 12}, {"3dim_5", 14}, {"4dim_1", 15}, {"4dim_2", 22},
      {"4dim_4", 18}, {"4dim_5", 23}, {"5dim_1", 19}, {"5dim_2", 20}, {"5dim_3", 21}, {"5dim_4", 16}};
  ProblemSpec prob;
  if (label == "4dim_3") {
    double kappa = signed_uniform(rng, 0.5, 2.0), p = uniform(rng, 1.5, 3.5);
    prob = make_problem(DiffusivitySpec::shifted_power(kappa, 0, 0, p),
                        SourceSpec::linear(signed_uniform(rng, 0.5, 2.0), signed_uniform(rng, 0.5, 2.0)), 0.0);
  } else {
    auto it = std::find_if(witness.begin(), witness.end(), [&](const auto& w) { return w.first == label; });
    if (it == witness.end()) throw std::invalid_argument("draw_case: unknown case " + label);
    prob = draw_row(it->second, rng).problem;
    // m = 0 brings X2 into the rows that admit it
    if (prob.m != -2.0) prob.m = 0.0;
  }
  std::string got = classify(prob).label;
  if (got.rfind("hodograph/", 0) == 0) got = got.substr(10);
  if (got != label) throw std::logic_error("draw_case: drew " + got + " for " + label);
  return prob;
}

// ---------------------------------------------------------------------------
// brackets

namespace {

// value and gradient of the three components
struct FieldJet {
  std::array<double, 3> v;
  std::array<std::array<double, 3>, 3> g;  // g[component][variable]
};

FieldJet field_jet(const SymmetryGenerator& X, const Point3& x) {
  FieldJet out;
  const Coefficient* cs[3] = {&X.tau, &X.xi, &X.eta};
  for (int c = 0; c < 3; ++c) {
    for (int d = 0; d < 3; ++d) {
      HD a[3] = {HD(x[0]), HD(x[1]), HD(x[2])};
      a[d].d1 = 1.0;
      HD y = (*cs[c])(a[0], a[1], a[2]);
      out.v[c] = y.value;
      out.g[c][d] = y.d1;
    }
  }
  return out;
}

}  // namespace

BracketResult bracket(const SymmetryGenerator& A, const SymmetryGenerator& B,
                      const std::vector<SymmetryGenerator>& basis, const std::vector<Point3>& samples) {
  const std::size_t ns = samples.size(), nb = basis.size();
  if (nb == 0) throw std::invalid_argument("bracket: empty basis");
  if (ns * 3 < nb) throw IllConditionedSamples("bracket: fewer sample equations than basis elements");
  Eigen::MatrixXd M(3 * ns, nb);
  Eigen::VectorXd y(3 * ns);
  for (std::size_t s = 0; s < ns; ++s) {
    FieldJet ja = field_jet(A, samples[s]), jb = field_jet(B, samples[s]);
    for (int i = 0; i < 3; ++i) {
      double v = 0.0;
      for (int j = 0; j < 3; ++j) v += ja.v[j] * jb.g[i][j] - jb.v[j] * ja.g[i][j];
      y(3 * s + i) = v;
    }
    for (std::size_t c = 0; c < nb; ++c) {
      auto bv = basis[c].at(samples[s][0], samples[s][1], samples[s][2]);
      for (int i = 0; i < 3; ++i) M(3 * s + i, c) = bv[i];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(sv.size() - 1) / sv(0) < 1e-12)
    throw IllConditionedSamples("bracket: sample matrix is rank deficient");
  Eigen::VectorXd coef = svd.solve(y);
  BracketResult out;
  out.coefficients.assign(coef.data(), coef.data() + nb);
  out.fit_residual = (M * coef - y).norm() / std::max(1.0, y.norm());
  return out;
}

std::vector<BracketDisplay> expected_brackets(const CaseTag& c) {
  std::string label = c.label;
  if (label.rfind("hodograph/", 0) == 0) label = label.substr(10);
  if (c.generators.empty()) return {};
  const Params& P = c.generators.front().params;
  const double b = P.b, k = P.k, p = P.p, al = P.alpha, be = P.beta, cc = P.c, q = P.q;
  using D = BracketDisplay;
  const D five_common[] = {{1, 5, {{1, 2.0}, {3, b}}}, {2, 5, {{2, 1.0}}}, {3, 5, {{3, 1.0}}}};
  std::vector<D> out;
  if (label == "2dim_1") out = {{1, 3, {{3, k}}}};
  else if (label == "2dim_2") out = {{1, 4, {{1, 2.0}}}, {2, 4, {{2, 1.0}}}};
  else if (label == "2dim_3") out = {{1, 6, {{6, cc * (1.0 - p)}}}};
  else if (label == "2dim_4") out = {{1, 7, {{1, (p + 1.0) * (1.0 - q)}}}, {2, 7, {{2, p - q}}}};
  else if (label == "2dim_5") out = {{1, 8, {{1, (p + 1.0) * q}}}, {2, 8, {{2, q}}}};
  else if (label == "2dim_6") out = {{1, 9, {{1, 2.0}}}};
  else if (label == "3dim_1") out = {{1, 5, {{1, 2.0}, {3, b}}}, {3, 5, {{3, 1.0}}}, {2, 5, {{2, 1.0}}}};
  else if (label == "3dim_2") out = {{1, 7, {{1, -3.0}}}, {1, 10, {{7, 2.0 / 3.0 * k}}}, {7, 10, {{10, -3.0}}}};
  else if (label == "3dim_3")
    out = {{1, 6, {{6, -2.0 * b}}}, {1, 11, {{11, 2.0 * b}}}, {6, 11, {{1, -1.0 / b}}}};
  else if (label == "3dim_4")
    out = {{1, 12, {{13, -2.0 * b}}}, {1, 13, {{12, 2.0 * b}}}, {12, 13, {{1, 0.5 / b}}}};
  else if (label == "3dim_5") out = {{1, 3, {{3, k}}}};
  else if (label == "4dim_1")
    out = {{1, 5, {{1, 2.0}, {3, b}}}, {1, 15, {{1, p + 1.0}, {3, (p + 1.0) * b}}}, {3, 5, {{3, 1.0}}},
           {2, 5, {{2, 1.0}}}, {2, 15, {{2, 1.0}, {3, -al}}}};
  else if (label == "4dim_2")
    out = {{1, 5, {{1, 2.0}, {3, b}}}, {1, 22, {{1, p}, {3, p * b}}}, {3, 5, {{3, 1.0}}},
           {2, 5, {{2, 1.0}}}, {2, 22, {{3, -1.0}}}};
  else if (label == "4dim_3")
    out = {{1, 3, {{3, k}}}, {1, 6, {{6, k * (1.0 - p)}}}, {3, 7, {{3, p + 1.0}}}, {2, 7, {{2, p - 1.0}}}};
  else if (label == "4dim_4") out = {{1, 3, {{3, k}}}, {1, 18, {{18, -k}}}, {3, 18, {{2, -k}}}};
  else if (label == "4dim_5") out = {{1, 3, {{3, k}}}, {1, 23, {{23, k}}}, {2, 23, {{3, al * k}}}};
  else if (label == "5dim_1") {
    out.assign(std::begin(five_common), std::end(five_common));
    out.push_back({1, 19, {{1, (p + 1.0) * be - (p - 1.0) * al}, {2, b}, {3, b * p * (be - al)}}});
    out.push_back({2, 19, {{3, al * be}}});
    out.push_back({3, 19, {{3, al + be}, {2, -1.0}}});
  } else if (label == "5dim_2") {
    out.assign(std::begin(five_common), std::end(five_common));
    out.push_back({1, 20, {{1, p * be - 2.0 * al}, {2, -b}, {3, b * p * be}}});
    out.push_back({2, 20, {{3, -(al * al + be * be)}}});
    out.push_back({3, 20, {{2, 1.0}, {3, -2.0 * al}}});
  } else if (label == "5dim_3") {
    out.assign(std::begin(five_common), std::end(five_common));
    out.push_back({1, 21, {{1, p + 2.0 * al}, {2, b}, {3, b * p}}});
    out.push_back({2, 21, {{3, al * al}}});
    out.push_back({3, 21, {{3, 2.0 * al}, {2, -1.0}}});
  } else if (label == "5dim_4") {
    out = {{1, 5, {{1, 2.0}, {3, b}}}, {1, 16, {{3, 2.0 * be}}}, {1, 17, {{5, 2.0 * be}, {16, -b}}},
           {3, 5, {{3, 1.0}}}, {3, 17, {{16, 1.0}}}, {5, 16, {{16, 1.0}}}, {5, 17, {{17, 2.0}}}};
  }
  // drop displays that involve generators absent from this case (X2 when m != 0)
  auto has = [&](int tag) {
    for (const auto& g : c.generators)
      if (g.tag == tag) return true;
    return false;
  };
  std::vector<D> kept;
  for (const auto& d : out) {
    bool ok = has(d.a) && has(d.b);
    for (const auto& [tag, coef] : d.combination) ok = ok && has(tag);
    if (ok) kept.push_back(d);
  }
  return kept;
}

LieAlgebra algebra_for(const ProblemSpec& problem) {
  CaseTag c = classify(problem);
  LieAlgebra L;
  L.label = c.label;
  for (const auto& ref : c.generators) L.generators.push_back(make_generator(ref.tag, ref.params));
  L.structure_constants = expected_brackets(c);
  return L;
}

double StructureConstants::antisymmetry_defect() const {
  double d = 0.0;
  const std::size_t n = C.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) d = std::max(d, std::abs(C[i][j][k] + C[j][i][k]));
  return d;
}

double StructureConstants::jacobi_defect() const {
  double d = 0.0;
  const std::size_t n = C.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m) {
          double s = 0.0;
          for (std::size_t l = 0; l < n; ++l)
            s += C[i][j][l] * C[l][k][m] + C[j][k][l] * C[l][i][m] + C[k][i][l] * C[l][j][m];
          d = std::max(d, std::abs(s));
        }
  return d;
}

StructureConstants structure_constants(const std::vector<SymmetryGenerator>& gens, const std::vector<Point3>& samples) {
  const std::size_t n = gens.size();
  StructureConstants S;
  S.C.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      BracketResult br = bracket(gens[i], gens[j], gens, samples);
      S.C[i][j] = br.coefficients;
      S.max_fit_residual = std::max(S.max_fit_residual, br.fit_residual);
    }
  return S;
}

DerivedSeries derived_series(const std::vector<SymmetryGenerator>& gens, const std::vector<Point3>& samples,
                             double rank_tol) {
  const std::size_t n = gens.size();
  StructureConstants S = structure_constants(gens, samples);
  DerivedSeries out;
  std::vector<std::vector<double>> basis;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    basis.push_back(e);
  }
  out.bases.push_back(basis);
  out.dims.push_back(n);
  while (!basis.empty()) {
    std::vector<Eigen::VectorXd> cols;
    for (std::size_t x = 0; x < basis.size(); ++x)
      for (std::size_t y = x + 1; y < basis.size(); ++y) {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            double w = basis[x][i] * basis[y][j];
            if (w == 0.0) continue;
            for (std::size_t k = 0; k < n; ++k) z(static_cast<Eigen::Index>(k)) += w * S.C[i][j][k];
          }
        cols.push_back(z);
      }
    std::vector<std::vector<double>> next;
    if (!cols.empty()) {
      Eigen::MatrixXd Z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) Z.col(static_cast<Eigen::Index>(c)) = cols[c];
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Z, Eigen::ComputeThinU);
      const auto& sv = svd.singularValues();
      for (Eigen::Index r = 0; r < sv.size(); ++r) {
        if (sv(r) <= rank_tol * std::max(1.0, sv(0))) break;
        Eigen::VectorXd u = svd.matrixU().col(r);
        next.emplace_back(u.data(), u.data() + u.size());
      }
    }
    if (next.size() == basis.size()) break;  // perfect: the series has stabilised
    basis = next;
    out.bases.push_back(basis);
    out.dims.push_back(basis.size());
  }
  out.solvable = out.dims.back() == 0;
  return out;
}

// ---------------------------------------------------------------------------
// orbits

namespace {

struct MappedSlice {
  double t;
  std::vector<double> r, u;
};

MappedSlice map_slice(const GroupTransformation& trans, double eps, const Field& field) {
  const std::size_t N = field.values.size();
  MappedSlice s;
  s.r.resize(N);
  s.u.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    Point3 y = apply_group(trans, eps, {field.t, field.grid.r(i), field.values[i]});
    if (i == 0) s.t = y[0];
    else if (std::abs(y[0] - s.t) > 1e-12 * (1.0 + std::abs(s.t)))
      throw TimeSliceError("orbit_map: transformed samples lie on different time slices");
    s.r[i] = y[1];
    s.u[i] = y[2];
  }
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < N; ++i) {
    if (!(s.r[i] > s.r[i - 1])) inc = false;
    if (!(s.r[i] < s.r[i - 1])) dec = false;
  }
  if (!inc && !dec) {
    for (std::size_t i = 1; i + 1 < N; ++i)
      if ((s.r[i] - s.r[i - 1]) * (s.r[i + 1] - s.r[i]) <= 0.0)
        throw FoldError("orbit_map: transformed slice folds over in r", s.r[i]);
    throw FoldError("orbit_map: transformed slice is not monotone in r", s.r[0]);
  }
  if (dec) {
    std::reverse(s.r.begin(), s.r.end());
    std::reverse(s.u.begin(), s.u.end());
  }
  return s;
}

}  // namespace

Field orbit_map(const GroupTransformation& trans, double eps, const Field& field) {
  if (eps == 0.0) return field;
  MappedSlice s = map_slice(trans, eps, field);
  return resample_uniform(s.r, s.u, s.t, s.r.front(), s.r.back(), field.grid.N, false);
}

Trajectory orbit_map(const GroupTransformation& trans, double eps, const Trajectory& traj) {
  if (eps == 0.0) return traj;
  std::vector<MappedSlice> slices;
  double lo = -1e300, hi = 1e300;
  for (const auto& f : traj.slices) {
    slices.push_back(map_slice(trans, eps, f));
    lo = std::max(lo, slices.back().r.front());
    hi = std::min(hi, slices.back().r.back());
  }
  if (!(lo < hi)) throw FoldError("orbit_map: mapped slices share no common r-range", lo);
  Trajectory out;
  out.grid = {lo, hi, traj.grid.N};
  for (const auto& s : slices) out.slices.push_back(resample_uniform(s.r, s.u, s.t, lo, hi, traj.grid.N, false));
  return out;
}

std::string param_hash(const Params& p) {
  const double v[] = {p.a, p.b, p.c, p.k, p.p, p.q, p.alpha, p.beta, p.kappa, p.mu};
  std::uint64_t h = 1469598103934665603ull;
  for (double d : v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &d, sizeof(double));
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ull;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace plap
