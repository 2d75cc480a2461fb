#include "plap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace plap {

namespace {

bool whole_line(const ProblemSpec& p) { return p.working_branch.first <= -1e299 && p.working_branch.second >= 1e299; }

double regularized_slope(double v, const SolverOptions& opts, bool& hit) {
  if (!opts.regularize || std::abs(v) >= opts.eps_reg) return v;
  hit = true;
  return v < 0.0 ? -opts.eps_reg : opts.eps_reg;
}

struct Coef {
  double h, h1;
};

Coef coef(const ProblemSpec& p, double v) {
  HyperDual y = p.diffusivity.h(HyperDual(v, 1.0, 0.0, 0.0));
  return {y.value, y.d1};
}

}  // namespace

double stable_dt(const ProblemSpec& problem, const Field& field, const SolverOptions& opts) {
  const auto& u = field.values;
  const std::size_t N = u.size();
  const double dr = field.grid.dr();
  double hmax = 0.0;
  bool hit = false;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    double v = regularized_slope((u[i + 1] - u[i - 1]) / (2.0 * dr), opts, hit);
    double h1 = std::abs(coef(problem, v).h1);
    if (std::isfinite(h1)) hmax = std::max(hmax, h1);
  }
  if (hmax == 0.0) return 1e300;
  return opts.cfl * dr * dr / hmax;
}

std::vector<double> spatial_rhs(const ProblemSpec& problem, const Field& field, const BoundaryCondition& bc,
                                const SolverOptions& opts, bool* regularized) {
  const auto& u = field.values;
  const Grid& g = field.grid;
  const std::size_t N = u.size();
  if (N < 3 || g.N != N) throw std::invalid_argument("spatial_rhs: field and grid disagree");
  const double dr = g.dr(), m = problem.m;
  const bool check_branch = !whole_line(problem);
  bool hit = false;
  std::vector<double> out(N, 0.0);
  auto node = [&](std::size_t i, double v, double urr) {
    double r = g.r(i);
    double ve = regularized_slope(v, opts, hit);
    if (check_branch && !problem.in_branch(ve))
      throw BranchExit("spatial_rhs: u_r left the working branch at r = " + std::to_string(r), i, ve);
    Coef c = coef(problem, ve);
    return c.h1 * urr + (m == 0.0 ? 0.0 : m / r * c.h) + problem.source(u[i]);
  };
  for (std::size_t i = 1; i + 1 < N; ++i) {
    double v = (u[i + 1] - u[i - 1]) / (2.0 * dr);
    double urr = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dr * dr);
    out[i] = node(i, v, urr);
  }
  auto end = [&](const EndCondition& e, std::size_t i, std::size_t j) {
    // j is the inner neighbour
    if (e.dirichlet_kind()) return 0.0;
    double urr = 2.0 * (u[j] - u[i]) / (dr * dr);
    if (e.kind == EndCondition::Kind::Regularity) {
      if (g.r(i) != 0.0) throw ConfigError("regularity condition only applies at r = 0");
      double ve = regularized_slope(0.0, opts, hit);
      double h1 = coef(problem, ve).h1;
      if (!std::isfinite(h1)) throw ConfigError("regularity at the axis needs a finite h'(0)");
      // m h(u_r)/r -> m h'(0) u_rr
      return (1.0 + m) * h1 * urr + problem.source(u[i]);
    }
    if (g.r(i) == 0.0 && m != 0.0) throw ConfigError("Neumann condition at r = 0 with m != 0: use regularity");
    return node(i, 0.0, urr);
  };
  out[0] = end(bc.left, 0, 1);
  out[N - 1] = end(bc.right, N - 1, N - 2);
  if (regularized) *regularized = *regularized || hit;
  return out;
}

namespace {

void impose(const BoundaryCondition& bc, Field& f) {
  const std::size_t N = f.values.size();
  if (bc.left.dirichlet_kind()) f.values[0] = bc.left.boundary_value(f.t, f.grid.r(0));
  if (bc.right.dirichlet_kind()) f.values[N - 1] = bc.right.boundary_value(f.t, f.grid.r(N - 1));
}

Field clamped(Field f, const SolverOptions& opts) {
  if (opts.clamp_level)
    for (double& x : f.values) x = std::min(x, *opts.clamp_level);
  return f;
}

double sup(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Field step_unchecked(const ProblemSpec& problem, const Field& f0, const BoundaryCondition& bc, double dt,
                     const SolverOptions& opts, bool* reg) {
  const std::size_t N = f0.values.size();
  auto stage = [&](const std::vector<double>& k, double a) {
    Field s = f0;
    s.t = f0.t + a * dt;
    for (std::size_t i = 0; i < N; ++i) s.values[i] += a * dt * k[i];
    impose(bc, s);
    return s;
  };
  auto k1 = spatial_rhs(problem, f0, bc, opts, reg);
  auto k2 = spatial_rhs(problem, stage(k1, 0.5), bc, opts, reg);
  auto k3 = spatial_rhs(problem, stage(k2, 0.5), bc, opts, reg);
  auto k4 = spatial_rhs(problem, stage(k3, 1.0), bc, opts, reg);
  Field out = f0;
  out.t = f0.t + dt;
  for (std::size_t i = 0; i < N; ++i) out.values[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  impose(bc, out);
  double before = std::max(1.0, sup(f0.values));
  for (std::size_t i = 0; i < N; ++i) {
    if (!std::isfinite(out.values[i]) || std::abs(out.values[i]) > 10.0 * before)
      throw UnstableStep("step_rk4: non-finite or exploding value at r = " + std::to_string(out.grid.r(i)), i, out.t);
  }
  return out;
}

}  // namespace

Field step_rk4(const ProblemSpec& problem, const Field& field, const BoundaryCondition& bc, double dt,
               const SolverOptions& opts) {
  double bound = stable_dt(problem, field, opts);
  if (dt > bound * (1.0 + 1e-12)) {
    // report the node with the largest diffusivity
    const auto& u = field.values;
    double dr = field.grid.dr(), worst = -1.0;
    std::size_t at = 0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
      double h1 = std::abs(coef(problem, (u[i + 1] - u[i - 1]) / (2.0 * dr)).h1);
      if (h1 > worst) worst = h1, at = i;
    }
    throw UnstableStep("step_rk4: dt " + std::to_string(dt) + " exceeds the stability bound " + std::to_string(bound),
                       at, field.t);
  }
  return step_unchecked(problem, field, bc, dt, opts, nullptr);
}

Solution solve(const ProblemSpec& problem, const Field& initial, const BoundaryCondition& bc, double t_end,
               double dt_store, const SolverOptions& opts) {
  if (initial.values.size() != initial.grid.N) throw std::invalid_argument("solve: initial field does not match grid");
  if (!(dt_store > 0.0)) throw std::invalid_argument("solve: dt_store must be positive");
  if (t_end < initial.t) throw std::invalid_argument("solve: t_end before the initial time");
  Solution sol;
  sol.trajectory.grid = initial.grid;
  Field cur = initial;
  impose(bc, cur);
  sol.trajectory.slices.push_back(clamped(cur, opts));
  const double t0 = initial.t;
  const auto n_store = static_cast<std::size_t>(std::ceil((t_end - t0) / dt_store - 1e-9));
  for (std::size_t j = 1; j <= n_store; ++j) {
    double target = std::min(t0 + static_cast<double>(j) * dt_store, t_end);
    while (cur.t < target) {
      double dt = std::min({stable_dt(problem, cur, opts), opts.dt_max, target - cur.t});
      bool last = target - cur.t - dt <= 1e-12 * std::max(1.0, std::abs(target));
      cur = step_unchecked(problem, cur, bc, dt, opts, &sol.regularized);
      if (last) cur.t = target;
      if (++sol.steps > opts.max_steps) throw UnstableStep("solve: step budget exhausted", 0, cur.t);
    }
    sol.trajectory.slices.push_back(clamped(cur, opts));
  }
  if (opts.attach_monitors && sol.trajectory.slices.size() >= 3) {
    for (const auto& law : catalog_laws(problem)) {
      try {
        sol.monitors.push_back({law.name(), continuity_check(law, sol.trajectory)});
      } catch (const std::exception&) {
        // uneven last interval or a law outside its domain on this data
      }
    }
  }
  return sol;
}

double pde_defect(const ProblemSpec& problem, const Trajectory& traj, const SolverOptions& opts) {
  const auto& S = traj.slices;
  if (S.size() < 3) throw std::invalid_argument("pde_defect: need at least 3 slices");
  SolverOptions o = opts;
  BoundaryCondition bc = BoundaryCondition::both(EndCondition::dirichlet(0.0));
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < S.size(); ++j) {
    double t0 = S[j - 1].t, t1 = S[j].t, t2 = S[j + 1].t;
    // 3-point first derivative at t1 on uneven spacing
    double a = (t1 - t2) / ((t0 - t1) * (t0 - t2));
    double b = (2.0 * t1 - t0 - t2) / ((t1 - t0) * (t1 - t2));
    double c = (t1 - t0) / ((t2 - t0) * (t2 - t1));
    auto rhs = spatial_rhs(problem, S[j], bc, o);
    for (std::size_t i = 1; i + 1 < S[j].values.size(); ++i) {
      double ut = a * S[j - 1].values[i] + b * S[j].values[i] + c * S[j + 1].values[i];
      worst = std::max(worst, std::abs(ut - rhs[i]));
    }
  }
  return worst;
}

InterfaceTrack track_interface(const Trajectory& traj, double level) {
  InterfaceTrack out;
  for (const auto& f : traj.slices) {
    const auto& u = f.values;
    const std::size_t N = u.size();
    std::size_t crossings = 0, at = 0;
    for (std::size_t i = 1; i < N; ++i) {
      if (u[i - 1] < level && u[i] >= level) {
        ++crossings;
        at = i;
      } else if (u[i - 1] >= level && u[i] < level) {
        ++crossings;
      }
    }
    if (crossings != 1 || at == 0) throw TrackingError("track_interface: expected exactly one upward crossing", f.t);
    double r0 = f.grid.r(at - 1), r1 = f.grid.r(at);
    double R;
    bool flat = u[at] == level && (at + 1 == N || u[at + 1] == level);
    if (flat && at >= 2) {
      double slope = (u[at - 1] - u[at - 2]) / (r0 - f.grid.r(at - 2));
      R = r0 + (level - u[at - 1]) / slope;
    } else {
      R = r0 + (level - u[at - 1]) * (r1 - r0) / (u[at] - u[at - 1]);
    }
    out.rows.emplace_back(f.t, R);
  }
  if (out.rows.size() >= 2) {
    double st = 0, sy = 0, stt = 0, sty = 0, n = static_cast<double>(out.rows.size());
    for (auto [t, R] : out.rows) {
      double y = std::log(R);
      st += t, sy += y, stt += t * t, sty += t * y;
    }
    out.exponent = (n * sty - st * sy) / (n * stt - st * st);
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,r,u\n";
  char buf[128];
  for (const auto& f : traj.slices)
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.t, f.grid.r(i), f.values[i]);
      os << buf;
    }
}

double max_abs_diff(const Field& a, const Field& b) {
  if (a.values.size() != b.values.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace plap
