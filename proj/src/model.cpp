#include "plap/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plap {

HyperDual DiffusivitySpec::h(const HyperDual& v) const {
  switch (family) {
    case DiffusivityFamily::Arbitrary:
      if (!custom) throw ConfigError("arbitrary diffusivity without a function");
      return custom(v);
    case DiffusivityFamily::ShiftedPower:
      return beta - kappa * pow(alpha + v, p);
    case DiffusivityFamily::Ratio: {
      HyperDual den = alpha + v;
      if (den.value == 0.0) throw DomainError("Ratio diffusivity: u_r = -alpha");
      return -kappa * pow((beta + v) / den, p);
    }
    case DiffusivityFamily::ExpArctan:
      if (beta == 0.0) throw DomainError("ExpArctan diffusivity: beta = 0");
      return kappa * exp(p * atan((alpha + v) / beta));
    case DiffusivityFamily::ExpReciprocal: {
      HyperDual den = alpha + v;
      if (den.value == 0.0) throw DomainError("ExpReciprocal diffusivity: u_r = -alpha");
      return kappa * exp(p / den);
    }
    case DiffusivityFamily::ExpLinear:
      return kappa * exp(p * v);
    case DiffusivityFamily::Log:
      if (alpha + v.value == 0.0) throw DomainError("Log diffusivity: u_r = -alpha");
      return kappa * log_abs(alpha + v);
    case DiffusivityFamily::RadialPower:
      return -kappa * signed_pow(v, p);
  }
  throw ConfigError("unknown diffusivity family");
}

DiffusivitySpec DiffusivitySpec::shifted_power(double kappa, double alpha, double beta, double p) {
  return {DiffusivityFamily::ShiftedPower, kappa, alpha, beta, p, {}};
}
DiffusivitySpec DiffusivitySpec::ratio(double kappa, double alpha, double beta, double p) {
  return {DiffusivityFamily::Ratio, kappa, alpha, beta, p, {}};
}
DiffusivitySpec DiffusivitySpec::exp_arctan(double kappa, double alpha, double beta, double p) {
  return {DiffusivityFamily::ExpArctan, kappa, alpha, beta, p, {}};
}
DiffusivitySpec DiffusivitySpec::exp_reciprocal(double kappa, double alpha, double p) {
  return {DiffusivityFamily::ExpReciprocal, kappa, alpha, 0.0, p, {}};
}
DiffusivitySpec DiffusivitySpec::exp_linear(double kappa, double p) {
  return {DiffusivityFamily::ExpLinear, kappa, 0.0, 0.0, p, {}};
}
DiffusivitySpec DiffusivitySpec::log(double kappa, double alpha) {
  return {DiffusivityFamily::Log, kappa, alpha, 0.0, 0.0, {}};
}
DiffusivitySpec DiffusivitySpec::radial_power(double kappa, double p) {
  return {DiffusivityFamily::RadialPower, kappa, 0.0, 0.0, p, {}};
}
DiffusivitySpec DiffusivitySpec::arbitrary(ScalarFn h) {
  DiffusivitySpec d;
  d.family = DiffusivityFamily::Arbitrary;
  d.custom = std::move(h);
  return d;
}

HyperDual SourceSpec::f(const HyperDual& u) const {
  switch (family) {
    case SourceFamily::Arbitrary:
      if (!custom) throw ConfigError("arbitrary source without a function");
      return custom(u);
    case SourceFamily::Constant:
      return HyperDual(b);
    case SourceFamily::Linear:
      return b + k * u;
    case SourceFamily::Inverse:
      return k / (a + u);
    case SourceFamily::PowerPlusLinear:
      return k * pow(a + u, p) + c * (a + u);
    case SourceFamily::Power:
      return k * pow(a + u, q);
    case SourceFamily::Exponential:
      return a + k * exp(q * u);
    case SourceFamily::QuadraticShifted:
      return k * (a + u) * (a + u) + sign * b * b / k;
    case SourceFamily::ConstantPlusInverse:
      return b + k / (a + u);
  }
  throw ConfigError("unknown source family");
}

SourceSpec SourceSpec::constant(double b) {
  SourceSpec s;
  s.family = SourceFamily::Constant;
  s.b = b;
  return s;
}
SourceSpec SourceSpec::linear(double b, double k) {
  SourceSpec s;
  s.family = SourceFamily::Linear;
  s.b = b;
  s.k = k;
  return s;
}
SourceSpec SourceSpec::inverse(double k, double a) {
  SourceSpec s;
  s.family = SourceFamily::Inverse;
  s.k = k;
  s.a = a;
  return s;
}
SourceSpec SourceSpec::power_plus_linear(double k, double a, double p, double c) {
  SourceSpec s;
  s.family = SourceFamily::PowerPlusLinear;
  s.k = k;
  s.a = a;
  s.p = p;
  s.c = c;
  return s;
}
SourceSpec SourceSpec::power(double k, double a, double q) {
  SourceSpec s;
  s.family = SourceFamily::Power;
  s.k = k;
  s.a = a;
  s.q = q;
  return s;
}
SourceSpec SourceSpec::exponential(double k, double q, double a) {
  SourceSpec s;
  s.family = SourceFamily::Exponential;
  s.k = k;
  s.q = q;
  s.a = a;
  return s;
}
SourceSpec SourceSpec::quadratic_shifted(double k, double a, double b, int sign) {
  SourceSpec s;
  s.family = SourceFamily::QuadraticShifted;
  s.k = k;
  s.a = a;
  s.b = b;
  s.sign = sign >= 0 ? 1 : -1;
  return s;
}
SourceSpec SourceSpec::constant_plus_inverse(double b, double k, double a) {
  SourceSpec s;
  s.family = SourceFamily::ConstantPlusInverse;
  s.b = b;
  s.k = k;
  s.a = a;
  return s;
}
SourceSpec SourceSpec::arbitrary(ScalarFn f) {
  SourceSpec s;
  s.family = SourceFamily::Arbitrary;
  s.custom = std::move(f);
  return s;
}

std::pair<double, double> default_branch(const DiffusivitySpec& d) {
  constexpr double inf = 1e300;
  switch (d.family) {
    case DiffusivityFamily::RadialPower:
      return {0.0, inf};
    case DiffusivityFamily::ShiftedPower:
      return {std::max(0.0, -d.alpha), inf};
    case DiffusivityFamily::Ratio:
      return {std::max(-d.alpha, -d.beta), inf};
    case DiffusivityFamily::ExpReciprocal:
    case DiffusivityFamily::Log:
      return {-d.alpha, inf};
    case DiffusivityFamily::ExpArctan:
    case DiffusivityFamily::ExpLinear:
    case DiffusivityFamily::Arbitrary:
      return {-inf, inf};
  }
  return {-inf, inf};
}

ProblemSpec make_problem(DiffusivitySpec d, SourceSpec s, double m, bool radial) {
  ProblemSpec p;
  p.working_branch = default_branch(d);
  p.diffusivity = std::move(d);
  p.source = std::move(s);
  p.m = m;
  p.radial = radial;
  return p;
}

bool radial_power_admissible(double p) {
  // (p-1) d / 2 must be a non-zero integer for some odd d.
  for (int d = 1; d <= 99; d += 2) {
    double l = (p - 1.0) * d / 2.0;
    double li = std::round(l);
    if (li != 0.0 && std::abs(l - li) < 1e-12) return true;
  }
  return false;
}

namespace {

bool source_is_zero(const SourceSpec& s) {
  switch (s.family) {
    case SourceFamily::Arbitrary:
      return false;
    case SourceFamily::Constant:
      return s.b == 0.0;
    case SourceFamily::Linear:
      return s.b == 0.0 && s.k == 0.0;
    case SourceFamily::Inverse:
    case SourceFamily::Power:
      return s.k == 0.0;
    case SourceFamily::PowerPlusLinear:
      return s.k == 0.0 && s.c == 0.0;
    case SourceFamily::Exponential:
      return s.k == 0.0 && s.a == 0.0;
    case SourceFamily::QuadraticShifted:
      return s.k == 0.0;
    case SourceFamily::ConstantPlusInverse:
      return s.b == 0.0 && s.k == 0.0;
  }
  return false;
}

bool diffusivity_is_linear(const DiffusivitySpec& d) {
  switch (d.family) {
    case DiffusivityFamily::ShiftedPower:
    case DiffusivityFamily::RadialPower:
      return d.kappa == 0.0 || d.p == 0.0 || d.p == 1.0;
    case DiffusivityFamily::Ratio:
      return d.kappa == 0.0 || d.p == 0.0 || d.alpha == d.beta;
    case DiffusivityFamily::ExpArctan:
    case DiffusivityFamily::ExpReciprocal:
    case DiffusivityFamily::ExpLinear:
      return d.kappa == 0.0 || d.p == 0.0;
    case DiffusivityFamily::Log:
      return d.kappa == 0.0;
    case DiffusivityFamily::Arbitrary:
      return false;
  }
  return false;
}

}  // namespace

void validate(const ProblemSpec& problem) {
  const auto& d = problem.diffusivity;
  if (source_is_zero(problem.source)) throw ConfigError("source/sink f must be non-zero");
  if (diffusivity_is_linear(d)) throw ConfigError("diffusivity must satisfy h'' != 0");
  if (problem.source.family == SourceFamily::QuadraticShifted && problem.source.k == 0.0)
    throw ConfigError("QuadraticShifted source requires k != 0");
  auto [lo, hi] = problem.working_branch;
  if (!(lo < hi)) throw ConfigError("empty working branch");
  if (d.family == DiffusivityFamily::RadialPower && lo < 0.0 && !radial_power_admissible(d.p))
    throw ConfigError("RadialPower exponent must be 1 + 2l/d (l != 0 integer, d odd) on a branch with u_r < 0");
  bool singular_at_alpha = d.family == DiffusivityFamily::Ratio || d.family == DiffusivityFamily::ExpReciprocal ||
                           d.family == DiffusivityFamily::Log ||
                           (d.family == DiffusivityFamily::ShiftedPower && d.p < 0.0);
  if (singular_at_alpha && -d.alpha > lo && -d.alpha < hi)
    throw ConfigError("working branch contains the singular point u_r = -alpha");
  if (problem.radial) {
    double n = problem.n();
    if (n < 2.0 || std::floor(n) != n) throw ConfigError("radial problems need integer n = m+1 >= 2");
  }
}

double eval_h(const DiffusivitySpec& spec, double v, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("eval_h: order must be 0, 1 or 2");
  HyperDual y = spec.h(HyperDual(v, 1.0, 1.0, 0.0));
  return order == 0 ? y.value : order == 1 ? y.d1 : y.d1d2;
}

double eval_g(const DiffusivitySpec& spec, double v) {
  if (v != 0.0) return eval_h(spec, v, 0) / v;
  double h0;
  try {
    h0 = eval_h(spec, 0.0, 0);
  } catch (const DomainError&) {
    throw DomainError("eval_g: h singular at u_r = 0");
  }
  if (h0 != 0.0) throw DomainError("eval_g: removable singularity absent at u_r = 0 (h(0) != 0)");
  double d = eval_h(spec, 0.0, 1);
  if (!std::isfinite(d)) throw DomainError("eval_g: h'(0) is not finite");
  return d;
}

double eval_f(const SourceSpec& spec, double u, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("eval_f: order must be 0, 1 or 2");
  HyperDual y = spec.f(HyperDual(u, 1.0, 1.0, 0.0));
  return order == 0 ? y.value : order == 1 ? y.d1 : y.d1d2;
}

double pde_rhs(const ProblemSpec& problem, double r, double u, double u_r, double u_rr) {
  validate(problem);
  if (r < 0.0) throw DomainError("pde_rhs: r must be non-negative");
  HyperDual h = problem.diffusivity.h(HyperDual(u_r, 1.0, 0.0, 0.0));
  double f = problem.source(u);
  if (r == 0.0 && problem.m != 0.0) {
    if (h.value != 0.0) throw DomainError("pde_rhs: singular axis term m h(u_r)/r at r = 0");
    // m h(u_r(r))/r -> m h'(u_r) u_rr when h vanishes on the axis.
    return (1.0 + problem.m) * h.d1 * u_rr + f;
  }
  double axis = problem.m == 0.0 ? 0.0 : problem.m * h.value / r;
  return h.d1 * u_rr + axis + f;
}

std::vector<int> CaseTag::tags() const {
  std::vector<int> out;
  for (const auto& g : generators) out.push_back(g.tag);
  return out;
}

bool CaseTag::operator==(const CaseTag& o) const {
  return label == o.label && hodograph == o.hodograph && tags() == o.tags();
}

namespace {

// Canonical readings of the source used by the case tree.
struct SourceForms {
  bool constant = false;
  double const_b = 0.0;
  bool linear = false;  // b + k u, k != 0
  double lin_b = 0.0, lin_k = 0.0;
  bool inverse = false;  // k/(a+u)
  double inv_k = 0.0, inv_a = 0.0;
  bool const_plus_inverse = false;  // b + k/(a+u), b != 0, k != 0
  double cpi_b = 0.0, cpi_k = 0.0, cpi_a = 0.0;
  bool power = false;  // k (a+u)^q
  double pow_k = 0.0, pow_a = 0.0, pow_q = 0.0;
  bool power_plus_linear = false;  // k (a+u)^p + c (a+u), c != 0
  double ppl_k = 0.0, ppl_a = 0.0, ppl_p = 0.0, ppl_c = 0.0;
  bool exponential = false;  // k e^{q u}
  double exp_k = 0.0, exp_q = 0.0;
  bool quad = false;  // k (a+u)^2 + sign b^2/k, b != 0
  double quad_k = 0.0, quad_a = 0.0, quad_b = 0.0;
  int quad_sign = 1;
};

SourceForms read_source(const SourceSpec& s) {
  SourceForms F;
  auto set_linear = [&](double b, double k) {
    if (k == 0.0) {
      F.constant = true;
      F.const_b = b;
    } else {
      F.linear = true;
      F.lin_b = b;
      F.lin_k = k;
      F.power = true;
      F.pow_k = k;
      F.pow_a = b / k;
      F.pow_q = 1.0;
    }
  };
  auto set_power = [&](double k, double a, double q) {
    if (q == 1.0) {
      set_linear(k * a, k);
      return;
    }
    if (q == 0.0) {
      F.constant = true;
      F.const_b = k;
      return;
    }
    F.power = true;
    F.pow_k = k;
    F.pow_a = a;
    F.pow_q = q;
    if (q == -1.0) {
      F.inverse = true;
      F.inv_k = k;
      F.inv_a = a;
    }
  };
  switch (s.family) {
    case SourceFamily::Arbitrary:
      break;
    case SourceFamily::Constant:
      F.constant = true;
      F.const_b = s.b;
      break;
    case SourceFamily::Linear:
      set_linear(s.b, s.k);
      break;
    case SourceFamily::Inverse:
      F.inverse = true;
      F.inv_k = s.k;
      F.inv_a = s.a;
      break;
    case SourceFamily::ConstantPlusInverse:
      if (s.k == 0.0) {
        F.constant = true;
        F.const_b = s.b;
      } else if (s.b == 0.0) {
        F.inverse = true;
        F.inv_k = s.k;
        F.inv_a = s.a;
      } else {
        F.const_plus_inverse = true;
        F.cpi_b = s.b;
        F.cpi_k = s.k;
        F.cpi_a = s.a;
      }
      break;
    case SourceFamily::Power:
      set_power(s.k, s.a, s.q);
      break;
    case SourceFamily::PowerPlusLinear:
      if (s.k == 0.0) {
        set_linear(s.c * s.a, s.c);
      } else if (s.c == 0.0) {
        set_power(s.k, s.a, s.p);
      } else {
        F.power_plus_linear = true;
        F.ppl_k = s.k;
        F.ppl_a = s.a;
        F.ppl_p = s.p;
        F.ppl_c = s.c;
      }
      break;
    case SourceFamily::Exponential:
      if (s.q == 0.0) {
        F.constant = true;
        F.const_b = s.a + s.k;
      } else if (s.a == 0.0) {
        F.exponential = true;
        F.exp_k = s.k;
        F.exp_q = s.q;
      }
      break;
    case SourceFamily::QuadraticShifted:
      if (s.b == 0.0) {
        set_power(s.k, s.a, 2.0);
      } else {
        F.quad = true;
        F.quad_k = s.k;
        F.quad_a = s.a;
        F.quad_b = s.b;
        F.quad_sign = s.sign;
      }
      break;
  }
  return F;
}

// -kappa u_r^p, returns p and kappa
bool pure_power(const DiffusivitySpec& d, double& kappa, double& p) {
  if ((d.family == DiffusivityFamily::ShiftedPower && d.alpha == 0.0 && d.beta == 0.0) ||
      d.family == DiffusivityFamily::RadialPower) {
    kappa = d.kappa;
    p = d.p;
    return true;
  }
  return false;
}

bool excluded_power(double p) { return p == -1.0 || p == 0.0 || p == 1.0; }

}  // namespace

// h' = kappa_eff/(alpha_eff + u_r)^2
bool hodograph_form(const DiffusivitySpec& d, double& kappa_eff, double& alpha_eff) {
  if (d.family == DiffusivityFamily::ShiftedPower && d.p == -1.0) {
    kappa_eff = d.kappa;
    alpha_eff = d.alpha;
    return true;
  }
  if (d.family == DiffusivityFamily::Ratio && d.p == 1.0 && d.alpha != d.beta) {
    kappa_eff = d.kappa * (d.beta - d.alpha);
    alpha_eff = d.alpha;
    return true;
  }
  if (d.family == DiffusivityFamily::Ratio && d.p == -1.0 && d.alpha != d.beta) {
    kappa_eff = d.kappa * (d.alpha - d.beta);
    alpha_eff = d.beta;
    return true;
  }
  return false;
}

namespace {

CaseTag classify_rows(const ProblemSpec& problem) {
  const auto& d = problem.diffusivity;
  const double m = problem.m;
  const bool m0 = m == 0.0 && !problem.radial;
  SourceForms F = read_source(problem.source);
  CaseTag out;
  Params base;
  base.kappa = d.kappa;
  base.alpha = d.alpha;
  base.beta = d.beta;
  base.p = d.p;

  auto add = [&](int tag, Params p) { out.generators.push_back({tag, p}); };
  auto add_x2 = [&]() {
    if (m0) add(2, base);
  };

  double ke = 0.0, ae = 0.0;
  if (hodograph_form(d, ke, ae)) {
    if (ae == 0.0 || F.constant) out.hodograph = true;
  }
  // The radial classification admits only the arbitrary-h rows and the power rows with p = 1 + 2l/d.
  double kp = 0.0, pp = 0.0;
  bool power = pure_power(d, kp, pp) && !excluded_power(pp);
  if (problem.radial && power && !radial_power_admissible(pp)) power = false;
  const bool radial = problem.radial;

  // five-dimensional rows (m = 0 or m = -2)
  if (!radial && d.family == DiffusivityFamily::Ratio && d.p != 0.0 && d.alpha != d.beta && F.constant && m0 &&
      !out.hodograph) {
    Params P = base;
    P.b = F.const_b;
    out.label = "5dim_1";
    add(1, P); add(2, P); Params p3 = P; p3.k = 0.0; add(3, p3); add(5, P); add(19, P);
    return out;
  }
  if (!radial && d.family == DiffusivityFamily::ExpArctan && d.p != 0.0 && d.beta != 0.0 && F.constant && m0) {
    Params P = base;
    P.b = F.const_b;
    out.label = "5dim_2";
    add(1, P); add(2, P); Params p3 = P; p3.k = 0.0; add(3, p3); add(5, P); add(20, P);
    return out;
  }
  if (!radial && d.family == DiffusivityFamily::ExpReciprocal && d.p != 0.0 && F.constant && m0) {
    Params P = base;
    P.b = F.const_b;
    out.label = "5dim_3";
    add(1, P); add(2, P); Params p3 = P; p3.k = 0.0; add(3, p3); add(5, P); add(21, P);
    return out;
  }
  const bool inv_shift = d.family == DiffusivityFamily::ShiftedPower && d.p == -1.0 && d.beta != 0.0;
  if (!radial && inv_shift && F.constant && m == -2.0) {
    Params P = base;
    P.b = F.const_b;
    out.label = "5dim_4";
    add(1, P); Params p3 = P; p3.k = 0.0; add(3, p3); add(5, P); add(16, P); add(17, P);
    return out;
  }

  // four-dimensional rows
  if (d.family == DiffusivityFamily::ShiftedPower && d.beta == 0.0 && !excluded_power(d.p) && F.constant &&
      (!radial || (d.alpha == 0.0 && power))) {
    Params P = base;
    P.b = F.const_b;
    out.label = "4dim_1";
    add(1, P); add_x2(); Params p3 = P; p3.k = 0.0; add(3, p3); add(5, P); add(15, P);
    return out;
  }
  if (radial && power && F.constant) {
    Params P = base;
    P.b = F.const_b;
    P.alpha = 0.0;
    P.kappa = kp;
    P.p = pp;
    out.label = "4dim_1";
    add(1, P); Params p3 = P; p3.k = 0.0; add(3, p3); add(5, P); add(15, P);
    return out;
  }
  if (!radial && d.family == DiffusivityFamily::ExpLinear && d.p != 0.0 && F.constant) {
    Params P = base;
    P.b = F.const_b;
    out.label = "4dim_2";
    add(1, P); add_x2(); Params p3 = P; p3.k = 0.0; add(3, p3); add(5, P); add(22, P);
    return out;
  }
  if (power && F.linear) {
    Params P = base;
    P.kappa = kp;
    P.p = pp;
    P.b = F.lin_b;
    P.k = F.lin_k;
    out.label = "4dim_3";
    add(1, P); add_x2(); add(3, P);
    Params p6 = P;  // X6 with k = 0, c = k, a = b/k
    p6.k = 0.0;
    p6.c = F.lin_k;
    p6.a = F.lin_b / F.lin_k;
    add(6, p6);
    Params p7 = P;  // X7 with q = 1, a = b/k
    p7.q = 1.0;
    p7.a = F.lin_b / F.lin_k;
    p7.k = F.lin_k;
    add(7, p7);
    return out;
  }
  if (!radial && d.family == DiffusivityFamily::Ratio && d.beta == 0.0 && d.p == 2.0 && d.alpha != 0.0 && F.linear &&
      m0) {
    Params P = base;
    P.b = F.lin_b;
    P.k = F.lin_k;
    out.label = "4dim_4";
    add(1, P); add(2, P); add(3, P); add(18, P);
    return out;
  }
  if (!radial && d.family == DiffusivityFamily::Log && F.linear && m0) {
    Params P = base;
    P.b = F.lin_b;
    P.k = F.lin_k;
    out.label = "4dim_5";
    add(1, P); add(2, P); add(3, P); add(23, P);
    return out;
  }

  // three-dimensional rows
  if (F.constant) {
    Params P = base;
    P.b = F.const_b;
    out.label = "3dim_1";
    add(1, P); add_x2(); Params p3 = P; p3.k = 0.0; add(3, p3); add(5, P);
    return out;
  }
  if (!radial && power && pp == 2.0 && F.power && F.pow_q == 2.0) {
    Params P = base;
    P.kappa = kp;
    P.p = 2.0;
    P.q = 2.0;
    P.k = F.pow_k;
    P.a = F.pow_a;
    out.label = "3dim_2";
    add(1, P); add_x2(); add(7, P); add(10, P);
    return out;
  }
  if (!radial && power && pp == 2.0 && F.quad && F.quad_sign < 0) {
    Params P = base;
    P.kappa = kp;
    P.p = 2.0;
    P.k = F.quad_k;
    P.a = F.quad_a;
    P.b = F.quad_b;
    out.label = "3dim_3";
    add(1, P); add_x2();
    Params p6 = P;
    p6.a = F.quad_a - F.quad_b / F.quad_k;
    p6.c = 2.0 * F.quad_b;
    add(6, p6);
    add(11, P);
    return out;
  }
  if (!radial && power && pp == 2.0 && F.quad && F.quad_sign > 0) {
    Params P = base;
    P.kappa = kp;
    P.p = 2.0;
    P.k = F.quad_k;
    P.a = F.quad_a;
    P.b = F.quad_b;
    out.label = "3dim_4";
    add(1, P); add_x2(); add(12, P); add(13, P);
    return out;
  }
  if (!radial && inv_shift && d.alpha == 0.0 && F.linear && m == -2.0) {
    Params P = base;
    P.b = F.lin_b;
    P.k = F.lin_k;
    out.label = "3dim_5";
    add(1, P); add(3, P); add(14, P);
    return out;
  }

  // two-dimensional rows
  if (F.linear) {
    Params P = base;
    P.b = F.lin_b;
    P.k = F.lin_k;
    out.label = "2dim_1";
    add(1, P); add_x2(); add(3, P);
    return out;
  }
  if (F.inverse) {
    Params P = base;
    P.k = F.inv_k;
    P.a = F.inv_a;
    out.label = "2dim_2";
    add(1, P); add_x2(); add(4, P);
    return out;
  }
  if (power && F.power_plus_linear && F.ppl_p == pp) {
    Params P = base;
    P.kappa = kp;
    P.p = pp;
    P.k = F.ppl_k;
    P.a = F.ppl_a;
    P.c = F.ppl_c;
    out.label = "2dim_3";
    add(1, P); add_x2(); add(6, P);
    return out;
  }
  if (power && F.power && F.pow_q != -1.0 && F.pow_q != 0.0) {
    Params P = base;
    P.kappa = kp;
    P.p = pp;
    P.k = F.pow_k;
    P.a = F.pow_a;
    P.q = F.pow_q;
    out.label = "2dim_4";
    add(1, P); add_x2(); add(7, P);
    return out;
  }
  if (power && F.exponential) {
    Params P = base;
    P.kappa = kp;
    P.p = pp;
    P.k = F.exp_k;
    P.q = F.exp_q;
    out.label = "2dim_5";
    add(1, P); add_x2(); add(8, P);
    return out;
  }
  if (!radial && inv_shift && d.alpha == 0.0 && F.const_plus_inverse && m == -2.0) {
    Params P = base;
    P.b = F.cpi_b;
    P.k = F.cpi_k;
    P.a = F.cpi_a;
    out.label = "2dim_6";
    add(1, P); add(9, P);
    return out;
  }

  out.label = "1dim";
  add(1, base);
  add_x2();
  return out;
}

}  // namespace

CaseTag classify(const ProblemSpec& problem) {
  CaseTag out = classify_rows(problem);
  if (out.hodograph && out.label != "5dim_4" && out.label != "3dim_5" && out.label != "2dim_6")
    out.label = "hodograph/" + out.label;
  return out;
}

std::string family_name(DiffusivityFamily f) {
  switch (f) {
    case DiffusivityFamily::Arbitrary: return "Arbitrary";
    case DiffusivityFamily::ShiftedPower: return "ShiftedPower";
    case DiffusivityFamily::Ratio: return "Ratio";
    case DiffusivityFamily::ExpArctan: return "ExpArctan";
    case DiffusivityFamily::ExpReciprocal: return "ExpReciprocal";
    case DiffusivityFamily::ExpLinear: return "ExpLinear";
    case DiffusivityFamily::Log: return "Log";
    case DiffusivityFamily::RadialPower: return "RadialPower";
  }
  return "?";
}

std::string family_name(SourceFamily f) {
  switch (f) {
    case SourceFamily::Arbitrary: return "Arbitrary";
    case SourceFamily::Constant: return "Constant";
    case SourceFamily::Linear: return "Linear";
    case SourceFamily::Inverse: return "Inverse";
    case SourceFamily::PowerPlusLinear: return "PowerPlusLinear";
    case SourceFamily::Power: return "Power";
    case SourceFamily::Exponential: return "Exponential";
    case SourceFamily::QuadraticShifted: return "QuadraticShifted";
    case SourceFamily::ConstantPlusInverse: return "ConstantPlusInverse";
  }
  return "?";
}

}  // namespace plap
