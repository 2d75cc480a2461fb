#include "plap/hodograph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace plap {

bool hodograph_applicable(const ProblemSpec& problem, double& kappa, double& alpha) {
  if (!hodograph_form(problem.diffusivity, kappa, alpha)) return false;
  return alpha == 0.0 || problem.source.family == SourceFamily::Constant;
}

namespace {

// the m h/r term only linearises when h itself is -kappa/(alpha+u_r)
bool flux_is_pure(const ProblemSpec& problem, double kappa, double alpha) {
  if (problem.m == 0.0) return true;
  for (double v : {0.37, 1.3, 2.9}) {
    double h = problem.diffusivity.h(HyperDual(v - alpha)).value;
    if (!std::isfinite(h) || std::abs(h + kappa / v) > 1e-12 * (1.0 + std::abs(h))) return false;
  }
  return true;
}

}  // namespace

double hodograph_weight(double r, double m) {
  if (!(r > 0.0) && m <= -1.0) throw DomainError("hodograph weight needs r > 0 for m <= -1");
  return m == -1.0 ? std::log(std::abs(r)) : std::pow(r, m + 1.0) / (m + 1.0);
}

double hodograph_weight_inverse(double w, double m) {
  if (m == -1.0) return std::exp(w);
  double base = (m + 1.0) * w;
  if (base < 0.0) throw DomainError("hodograph inverse weight out of range");
  return std::pow(base, 1.0 / (m + 1.0));
}

namespace {

// Orders (x, y) by increasing x; FoldError if x is not strictly monotone.
void orient(std::vector<double>& x, std::vector<double>& y, const std::vector<double>& where) {
  const std::size_t n = x.size();
  int sign = 0;
  for (std::size_t i = 1; i < n; ++i) {
    double d = x[i] - x[i - 1];
    int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign))
      throw FoldError("hodograph map folds: Jacobian changes sign near r = " + std::to_string(where[i]), where[i]);
    sign = s;
  }
  if (sign < 0) {
    std::reverse(x.begin(), x.end());
    std::reverse(y.begin(), y.end());
  }
}

bool monotone(const std::vector<double>& y) {
  bool up = true, down = true;
  for (std::size_t i = 1; i < y.size(); ++i) {
    up = up && y[i] >= y[i - 1];
    down = down && y[i] <= y[i - 1];
  }
  return up || down;
}

Field resample(const std::vector<double>& x, const std::vector<double>& y, double t, std::size_t N) {
  return resample_uniform(x, y, t, x.front(), x.back(), N, monotone(y));
}

struct Points {
  std::vector<double> x, y;
};

Points forward_points(const HodographMap& map, const Field& f) {
  Points p;
  std::vector<double> where;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double r = f.grid.r(i);
    p.x.push_back(map.alpha * r + f.values[i]);
    p.y.push_back(hodograph_weight(r, map.m));
    where.push_back(r);
  }
  orient(p.x, p.y, where);
  return p;
}

Points inverse_points(const HodographMap& map, const Field& f) {
  Points p;
  std::vector<double> where;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double z = f.grid.r(i);
    double r = hodograph_weight_inverse(f.values[i], map.m);
    p.x.push_back(r);
    p.y.push_back(z - map.alpha * r);
    where.push_back(z);
  }
  orient(p.x, p.y, where);
  return p;
}

}  // namespace

Field forward_map(const HodographMap& map, const Field& field) {
  Points p = forward_points(map, field);
  return resample(p.x, p.y, field.t, field.values.size());
}

Field inverse_map(const HodographMap& map, const Field& field) {
  Points p = inverse_points(map, field);
  return resample(p.x, p.y, field.t, field.values.size());
}

Field apply_map(const HodographMap& map, const Field& field) {
  return map.direction == HodographMap::Direction::Forward ? forward_map(map, field) : inverse_map(map, field);
}

namespace {

std::vector<double> centred(const Field& f, int order) {
  const std::size_t n = f.values.size();
  const double h = f.grid.dr();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto& u = f.values;
    d[i] = order == 1 ? (u[i + 1] - u[i - 1]) / (2.0 * h) : (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
  }
  return d;
}

std::array<double, 3> time_weights(double t0, double t1, double t2) {
  return {(t1 - t2) / ((t0 - t1) * (t0 - t2)), (2.0 * t1 - t0 - t2) / ((t1 - t0) * (t1 - t2)),
          (t1 - t0) / ((t2 - t0) * (t2 - t1))};
}

}  // namespace

double prolongation_check(const HodographMap& map, const Trajectory& traj) {
  const auto& S = traj.slices;
  if (S.empty()) throw std::invalid_argument("prolongation_check: empty trajectory");
  std::vector<Field> W;
  for (const auto& f : S) W.push_back(forward_map(map, f));
  const double m = map.m, a = map.alpha;
  double worst = 0.0;
  for (std::size_t j = 0; j < S.size(); ++j) {
    const Field& F = S[j];
    const Field& G = W[j];
    auto ur = centred(F, 1), urr = centred(F, 2);
    auto wz = centred(G, 1), wzz = centred(G, 2);
    std::vector<double> zs = G.grid.nodes();
    // keep derivative samples away from the one-sided ends
    std::vector<double> zin(zs.begin() + 1, zs.end() - 1), wzin(wz.begin() + 1, wz.end() - 1),
        wzzin(wzz.begin() + 1, wzz.end() - 1);
    const bool timed = S.size() >= 3 && j > 0 && j + 1 < S.size();
    for (std::size_t i = 2; i + 2 < F.values.size(); ++i) {
      double r = F.grid.r(i);
      double z = a * r + F.values[i];
      if (z <= zin[1] || z >= zin[zin.size() - 2]) continue;
      double Wz = interp_cubic(zin, wzin, z), Wzz = interp_cubic(zin, wzzin, z);
      double rm = std::pow(r, m);
      worst = std::max(worst, std::abs(a + ur[i] - rm / Wz));
      worst = std::max(worst, std::abs(urr[i] - (m * std::pow(r, m - 1.0) / Wz - rm * rm * Wzz / (Wz * Wz * Wz))));
      if (timed) {
        auto w = time_weights(S[j - 1].t, S[j].t, S[j + 1].t);
        auto in = [&](const Field& g) { return z > g.grid.r_min && z < g.grid.r_max; };
        if (!in(W[j - 1]) || !in(W[j + 1])) continue;
        double Wt = w[0] * interp_cubic(W[j - 1].grid.nodes(), W[j - 1].values, z) + w[1] * interp_cubic(zs, G.values, z) +
                    w[2] * interp_cubic(W[j + 1].grid.nodes(), W[j + 1].values, z);
        double ut = w[0] * S[j - 1].values[i] + w[1] * F.values[i] + w[2] * S[j + 1].values[i];
        worst = std::max(worst, std::abs(ut + Wt / Wz));
      }
    }
  }
  return worst;
}

Trajectory linear_solve(const SourceSpec& drift, double kappa, const Field& initial, const BoundaryCondition& bc,
                        double t_end, double dt_store) {
  const Grid& g = initial.grid;
  const std::size_t N = g.N;
  if (N < 3 || initial.values.size() != N) throw std::invalid_argument("linear_solve: bad initial field");
  if (!(kappa != 0.0)) throw ConfigError("linear_solve: kappa must be non-zero");
  if (bc.left.kind == EndCondition::Kind::Regularity || bc.right.kind == EndCondition::Kind::Regularity)
    throw ConfigError("linear_solve: Dirichlet or Neumann conditions only");
  const double dz = g.dr();
  std::vector<double> c(N);
  double cmax = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    c[i] = drift(g.r(i));
    cmax = std::max(cmax, std::abs(c[i]));
  }
  double dt_bound = 0.4 * dz * dz / std::abs(kappa);
  if (cmax > 0.0) dt_bound = std::min(dt_bound, dz / cmax);

  auto impose = [&](Field& f) {
    if (bc.left.dirichlet_kind()) f.values[0] = bc.left.boundary_value(f.t, g.r(0));
    if (bc.right.dirichlet_kind()) f.values[N - 1] = bc.right.boundary_value(f.t, g.r(N - 1));
  };
  auto rhs = [&](const Field& f) {
    const auto& w = f.values;
    std::vector<double> k(N, 0.0);
    for (std::size_t i = 1; i + 1 < N; ++i)
      k[i] = kappa * (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (dz * dz) + c[i] * (w[i + 1] - w[i - 1]) / (2.0 * dz);
    // zero-flux ends by reflection
    if (!bc.left.dirichlet_kind()) k[0] = kappa * 2.0 * (w[1] - w[0]) / (dz * dz);
    if (!bc.right.dirichlet_kind()) k[N - 1] = kappa * 2.0 * (w[N - 2] - w[N - 1]) / (dz * dz);
    return k;
  };
  auto norm = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  Trajectory traj;
  traj.grid = g;
  Field cur = initial;
  impose(cur);
  traj.slices.push_back(cur);
  const double t0 = initial.t;
  const auto n_store = static_cast<std::size_t>(std::ceil((t_end - t0) / dt_store - 1e-9));
  for (std::size_t j = 1; j <= n_store; ++j) {
    double target = std::min(t0 + static_cast<double>(j) * dt_store, t_end);
    while (cur.t < target) {
      double dt = std::min(dt_bound, target - cur.t);
      bool last = target - cur.t - dt <= 1e-12 * std::max(1.0, std::abs(target));
      auto stage = [&](const std::vector<double>& k, double a) {
        Field s = cur;
        s.t = cur.t + a * dt;
        for (std::size_t i = 0; i < N; ++i) s.values[i] += a * dt * k[i];
        impose(s);
        return s;
      };
      auto k1 = rhs(cur);
      auto k2 = rhs(stage(k1, 0.5));
      auto k3 = rhs(stage(k2, 0.5));
      auto k4 = rhs(stage(k3, 1.0));
      double before = std::max(1.0, norm(cur.values));
      for (std::size_t i = 0; i < N; ++i) cur.values[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      cur.t = last ? target : cur.t + dt;
      impose(cur);
      double after = norm(cur.values);
      if (!std::isfinite(after) || after > 10.0 * before)
        throw UnstableStep("linear_solve: norm grew more than tenfold in one step", 0, cur.t);
    }
    traj.slices.push_back(cur);
  }
  return traj;
}

namespace {

// r where alpha r + u(t, r) = z, by bisection on a bracket grown around [lo, hi]
double preimage(const ExactFn& u, double t, double alpha, double z, double lo, double hi) {
  auto g = [&](double r) { return alpha * r + u(t, r) - z; };
  double a = lo, b = hi;
  double ga = g(a), gb = g(b);
  for (int it = 0; it < 60 && ga * gb > 0.0; ++it) {
    double w = b - a;
    a = std::max(a - w, 0.5 * a);  // stay on r > 0
    b += w;
    ga = g(a);
    gb = g(b);
  }
  if (ga * gb > 0.0) throw DomainError("cross_validate: boundary level not attained by the oracle");
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  for (int it = 0; it < 200; ++it) {
    double c = 0.5 * (a + b);
    double gc = g(c);
    if ((gc < 0.0) == (ga < 0.0))
      a = c, ga = gc;
    else
      b = c;
    if (b - a <= 1e-15 * std::max(1.0, std::abs(c))) break;
  }
  return 0.5 * (a + b);
}

bool folds(const Field& f, double alpha) {
  int sign = 0;
  for (std::size_t i = 1; i < f.values.size(); ++i) {
    double d = alpha * (f.grid.r(i) - f.grid.r(i - 1)) + f.values[i] - f.values[i - 1];
    int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) return true;
    sign = s;
  }
  return false;
}

}  // namespace

CrossReport cross_validate(const ProblemSpec& problem, const Field& initial, const ExactFn& boundary,
                           const CrossValidateOptions& opts) {
  double kappa = 0.0, alpha = 0.0;
  if (!hodograph_applicable(problem, kappa, alpha))
    throw ConfigError("cross_validate: the problem is not in the linearisable class");
  if (!flux_is_pure(problem, kappa, alpha))
    throw ConfigError("cross_validate: m != 0 needs h = -kappa/(alpha+u_r) with no offset");
  HodographMap map{opts.alpha_override.value_or(alpha), problem.m, HodographMap::Direction::Forward};

  // nonlinear path
  BoundaryCondition bc_nl = BoundaryCondition::both(EndCondition::from_exact(boundary));
  SolverOptions so = opts.solver;
  so.attach_monitors = false;
  Solution nl = solve(problem, initial, bc_nl, opts.t_end, opts.dt_store, so);

  // linear path on the fixed z-range of the mapped initial data
  Field w0 = forward_map(map, initial);
  const double r_lo = initial.grid.r_min, r_hi = initial.grid.r_max;
  const double am = map.alpha, m = map.m;
  auto w_boundary = [=](double t, double z) {
    return hodograph_weight(preimage(boundary, t, am, z, r_lo, r_hi), m);
  };
  BoundaryCondition bc_lin = BoundaryCondition::both(EndCondition::from_exact(w_boundary));
  ScalarFn f = [src = problem.source](const HyperDual& z) { return -src.f(z); };
  Trajectory lin = linear_solve(SourceSpec::arbitrary(f), kappa, w0, bc_lin, opts.t_end, opts.dt_store);

  CrossReport rep;
  for (std::size_t j = 0; j < nl.trajectory.slices.size(); ++j) {
    const Field& U = nl.trajectory.slices[j];
    CrossRow row{U.t, 0.0, folds(U, map.alpha)};
    if (row.fold) {
      rep.rows.push_back(row);
      throw FoldError("cross_validate: nonlinear solution folds at t = " + std::to_string(U.t), U.t);
    }
    Points p = inverse_points(map, lin.slices[j]);
    for (std::size_t i = 0; i < U.values.size(); ++i) {
      double r = U.grid.r(i);
      if (r < p.x.front() || r > p.x.back()) continue;
      row.max_gap = std::max(row.max_gap, std::abs(U.values[i] - interp_cubic(p.x, p.y, r)));
    }
    rep.rows.push_back(row);
    rep.max_gap = std::max(rep.max_gap, row.max_gap);
  }
  rep.final_gap = rep.rows.back().max_gap;
  return rep;
}

void write_cross_csv(std::ostream& os, const CrossReport& rep) {
  os << "t,max_gap,fold_flag\n";
  char buf[128];
  for (const auto& r : rep.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", r.t, r.max_gap, r.fold ? 1 : 0);
    os << buf;
  }
}

}  // namespace plap
