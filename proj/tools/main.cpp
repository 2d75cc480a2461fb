// plap: verification and simulation driver.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "plap/exact.hpp"
#include "plap/hodograph.hpp"
#include "plap/solver.hpp"
#include "plap/sweeps.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace plap;
using plapcli::RunConfig;

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2 };

struct Common {
  std::string config, tag, out;
  double tol = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

RunConfig config_for(const Common& c, bool required) {
  RunConfig cfg;
  if (!c.config.empty()) cfg = plapcli::load_config(c.config);
  else if (required) throw ConfigError("--config is required for this command");
  if (c.seed_set) cfg.seed = c.seed;
  if (!c.out.empty()) cfg.out_dir = c.out;
  return cfg;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  std::ofstream os(fs::path(cfg.out_dir) / name);
  if (!os) throw std::runtime_error("cannot write " + (fs::path(cfg.out_dir) / name).string());
  return os;
}

void write_summary(const RunConfig& cfg, const json& j) {
  auto os = open_out(cfg, "summary.json");
  os << j.dump(2) << "\n";
  std::cout << j.dump(2) << "\n";
}

int tag_number(const std::string& s) {
  std::string t = (!s.empty() && (s[0] == 'X' || s[0] == 'x')) ? s.substr(1) : s;
  try {
    int v = std::stoi(t);
    if (v >= 1 && v <= 23) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("--tag: expected X1..X23, got '" + s + "'");
}

int cmd_verify_symmetries(const Common& c) {
  RunConfig cfg = config_for(c, false);
  SymmetrySweepOptions so;
  so.seed = cfg.seed;
  so.draws = cfg.draws;
  so.jets = cfg.jets;
  if (c.tol > 0.0) so.split_tol = c.tol, so.unsplit_tol = 10.0 * c.tol;
  if (!c.tag.empty()) so.tags = {tag_number(c.tag)};
  if (cfg.perturb_eta != 0.0) {
    const double e = cfg.perturb_eta;
    so.perturb = [e](const ProblemSpec&, SymmetryGenerator& g) {
      auto eta = g.eta;
      g.eta = [eta, e](const HyperDual& t, const HyperDual& r, const HyperDual& u) { return eta(t, r, u) + e * (u * u + r * t); };
    };
  }
  SymmetrySweep sw = sweep_symmetries(so);
  {
    auto os = open_out(cfg, "symmetry_residuals.csv");
    write_symmetry_csv(os, sw);
  }
  BracketSweepOptions bo;
  bo.seed = cfg.seed;
  bo.tol = c.tol > 0.0 ? c.tol : 1e-8;
  if (!c.tag.empty()) {
    // cases whose algebra contains the tag
    Rng rng(cfg.seed);
    for (const auto& label : case_labels()) {
      auto tags = classify(draw_case(label, rng)).tags();
      if (std::find(tags.begin(), tags.end(), so.tags.front()) != tags.end()) bo.labels.push_back(label);
    }
  }
  BracketSweep br;
  if (c.tag.empty() || !bo.labels.empty()) br = sweep_brackets(bo);
  {
    auto os = open_out(cfg, "brackets.csv");
    write_bracket_csv(os, br);
  }
  std::size_t failing = 0;
  for (const auto& r : sw.rows) failing += r.pass ? 0 : 1;
  json j;
  j["command"] = "verify-symmetries";
  j["seed"] = cfg.seed;
  j["determining"] = {{"pass", sw.pass}, {"rows", sw.rows.size()}, {"failing_rows", failing},
                      {"max_split", sw.max_split}, {"max_unsplit", sw.max_unsplit}};
  j["brackets"] = {{"pass", br.pass}, {"rows", br.rows.size()}, {"max_coefficient_error", br.max_coefficient_error},
                   {"max_fit_residual", br.max_fit_residual}};
  j["pass"] = sw.pass && br.pass;
  write_summary(cfg, j);
  return sw.pass && br.pass ? kPass : kFail;
}

int cmd_verify_conservation(const Common& c) {
  RunConfig cfg = config_for(c, false);
  auto cases = conservation_cases(cfg.seed);
  if (cfg.mismatched_law) {
    // law of f = b + k u checked against f = k u^2
    auto lin = make_problem(DiffusivitySpec::radial_power(1.0, 3.0), SourceSpec::linear(0.0, 0.5), 0.0);
    auto quad = make_problem(DiffusivitySpec::radial_power(1.0, 3.0), SourceSpec::power(0.5, 0.0, 2.0), 0.0);
    cases = {{"mismatched", quad, catalog_laws(lin).front()}};
  }
  ConservationSweepOptions co;
  co.seed = cfg.seed;
  co.jets = cfg.jets;
  if (c.tol > 0.0) co.multiplier_tol = c.tol, co.characteristic_tol = 10.0 * c.tol;
  if (!c.tag.empty()) {
    law_from_name(c.tag);  // throws on an unknown name
    co.law = c.tag;
  }
  ConservationSweep sw = sweep_conservation(cases, co);
  {
    auto os = open_out(cfg, "conservation_residuals.csv");
    write_law_csv(os, sw);
  }
  std::size_t failing = 0;
  for (const auto& r : sw.rows) failing += r.pass ? 0 : 1;
  json j;
  j["command"] = "verify-conservation";
  j["seed"] = cfg.seed;
  j["rows"] = sw.rows.size();
  j["failing_rows"] = failing;
  j["max_multiplier"] = sw.max_multiplier;
  j["max_characteristic"] = sw.max_characteristic;
  j["pass"] = sw.pass && !sw.rows.empty();
  write_summary(cfg, j);
  return sw.pass && !sw.rows.empty() ? kPass : kFail;
}

void write_error_csv(std::ostream& os, const Trajectory& traj, const ExactFn& exact) {
  os << "t,r,u,u_exact,error\n";
  char buf[160];
  for (const auto& s : traj.slices)
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      double r = s.grid.r(i), ue = exact(s.t, r);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, r, s.values[i], ue, s.values[i] - ue);
      os << buf;
    }
}

// interface runs: clamp stored slices at the background level
SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o = cfg.solver;
  if (plapcli::is_interface(cfg) && !o.clamp_level) o.clamp_level = -cfg.initial.b.b / cfg.initial.b.k;
  return o;
}

CrossValidateOptions cross_options(const RunConfig& cfg) {
  CrossValidateOptions o;
  o.t_end = cfg.t_end;
  o.dt_store = cfg.dt_store;
  o.solver = cfg.solver;
  return o;
}

int cmd_simulate(const Common& c) {
  RunConfig cfg = config_for(c, true);
  ProblemSpec P = plapcli::problem_of(cfg);
  Field u0 = plapcli::initial_field(cfg, cfg.grid);
  BoundaryCondition bc = plapcli::boundary_of(cfg);
  SolverOptions opts = solver_options(cfg);
  Solution sol = solve(P, u0, bc, cfg.t_end, cfg.dt_store, opts);
  json j;
  j["command"] = "simulate";
  j["seed"] = cfg.seed;
  j["steps"] = sol.steps;
  j["regularized"] = sol.regularized;
  ExactFn exact = plapcli::exact_of(cfg);
  {
    auto os = open_out(cfg, "trajectory.csv");
    if (exact) write_error_csv(os, sol.trajectory, exact);
    else write_trajectory_csv(os, sol.trajectory);
  }
  bool pass = true;
  if (exact) {
    double e = 0.0;
    for (const auto& s : sol.trajectory.slices)
      for (std::size_t i = 0; i < s.values.size(); ++i) e = std::max(e, std::abs(s.values[i] - exact(s.t, s.grid.r(i))));
    j["max_error_vs_exact"] = e;
  }
  json mon = json::array();
  for (const auto& m : sol.monitors) {
    auto os = open_out(cfg, "monitor_" + m.law + ".csv");
    write_monitor_csv(os, m.report);
    mon.push_back({{"law", m.law}, {"max_defect", m.report.max_defect}});
  }
  j["monitors"] = mon;
  if (plapcli::is_interface(cfg)) {
    InterfaceTrack tr = track_interface(sol.trajectory, *opts.clamp_level);
    double qk = interface(cfg.initial.b).q * cfg.initial.b.k;
    auto os = open_out(cfg, "interface.csv");
    os << "t,R\n";
    char buf[96];
    for (auto [t, R] : tr.rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, R);
      os << buf;
    }
    j["interface"] = {{"exponent", tr.exponent}, {"qk", qk}, {"relative_error", std::abs(tr.exponent / qk - 1.0)}};
  }
  double kappa = 0.0, alpha = 0.0;
  if (exact && hodograph_applicable(P, kappa, alpha)) {
    CrossReport rep = cross_validate(P, u0, exact, cross_options(cfg));
    auto os = open_out(cfg, "cross_validation.csv");
    write_cross_csv(os, rep);
    j["cross_validation"] = {{"max_gap", rep.max_gap}, {"final_gap", rep.final_gap}};
  }
  j["pass"] = pass;
  write_summary(cfg, j);
  return kPass;
}

int cmd_convergence(const Common& c) {
  RunConfig cfg = config_for(c, true);
  if (cfg.levels.size() < 2) throw ConfigError("convergence.levels: at least two grid sizes are needed");
  if (!cfg.has_exact()) throw ConfigError("convergence: needs an exact-family initial condition");
  ProblemSpec P = plapcli::problem_of(cfg);
  SolverOptions opts = solver_options(cfg);
  json j;
  j["command"] = "convergence";
  j["seed"] = cfg.seed;
  auto os = open_out(cfg, "convergence.csv");
  char buf[200];
  bool pass = true;
  if (plapcli::is_interface(cfg)) {
    const double qk = interface(cfg.initial.b).q * cfg.initial.b.k;
    os << "N,exponent,qk,relative_error\n";
    json rows = json::array();
    for (std::size_t N : cfg.levels) {
      Grid g{cfg.grid.r_min, cfg.grid.r_max, N};
      Solution s = solve(P, plapcli::initial_field(cfg, g), plapcli::boundary_of(cfg), cfg.t_end, cfg.dt_store, opts);
      InterfaceTrack tr = track_interface(s.trajectory, *opts.clamp_level);
      double rel = std::abs(tr.exponent / qk - 1.0);
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.6e\n", N, tr.exponent, qk, rel);
      os << buf;
      rows.push_back({{"N", N}, {"exponent", tr.exponent}, {"relative_error", rel}});
    }
    j["qk"] = qk;
    j["levels"] = rows;
  } else {
    ExactFn exact = plapcli::exact_of(cfg);
    os << "N,dr,linf_error,order\n";
    json rows = json::array();
    double prev = 0.0, prev_dr = 0.0;
    for (std::size_t N : cfg.levels) {
      Grid g{cfg.grid.r_min, cfg.grid.r_max, N};
      Solution s = solve(P, plapcli::initial_field(cfg, g), plapcli::boundary_of(cfg), cfg.t_end, cfg.t_end, opts);
      const Field& last = s.trajectory.slices.back();
      double e = 0.0;
      for (std::size_t i = 0; i < N; ++i) e = std::max(e, std::abs(last.values[i] - exact(last.t, g.r(i))));
      double order = prev > 0.0 ? std::log(prev / e) / std::log(prev_dr / g.dr()) : NAN;
      if (prev > 0.0 && !(e < prev)) pass = false;  // non-monotone error sequence
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.6f\n", N, g.dr(), e, order);
      os << buf;
      json row = {{"N", N}, {"linf_error", e}};
      if (prev > 0.0) row["order"] = order;
      rows.push_back(row);
      prev = e;
      prev_dr = g.dr();
    }
    j["levels"] = rows;
    j["monotone"] = pass;
  }
  j["pass"] = pass;
  write_summary(cfg, j);
  return pass ? kPass : kFail;
}

int cmd_hodograph_check(const Common& c) {
  RunConfig cfg = config_for(c, false);
  if (c.config.empty()) {
    cfg.initial.kind = plapcli::InitialSpec::Kind::HodographPair;
    cfg.grid = {1.0, 2.0, 201};
    cfg.t_end = 0.2;
    cfg.dt_store = 0.05;
  }
  ProblemSpec P = plapcli::problem_of(cfg);
  double kappa = 0.0, alpha = 0.0;
  if (!hodograph_applicable(P, kappa, alpha)) throw ConfigError("hodograph-check: the problem is not linearisable");
  ExactFn exact = plapcli::exact_of(cfg);
  if (!exact) throw ConfigError("hodograph-check: needs an exact initial condition for the boundary data");
  const double tol = c.tol > 0.0 ? c.tol : 5e-3;
  Field u0 = plapcli::initial_field(cfg, cfg.grid);
  CrossReport rep = cross_validate(P, u0, exact, cross_options(cfg));
  // prolongation identities on the exact samples
  Trajectory T;
  T.grid = cfg.grid;
  for (double t : {0.0, 0.5 * cfg.dt_store, cfg.dt_store}) {
    Field f{cfg.grid, t, {}};
    for (std::size_t i = 0; i < cfg.grid.N; ++i) f.values.push_back(exact(t, cfg.grid.r(i)));
    T.slices.push_back(f);
  }
  double prolong = prolongation_check({alpha, P.m, HodographMap::Direction::Forward}, T);
  {
    auto os = open_out(cfg, "cross_validation.csv");
    write_cross_csv(os, rep);
  }
  bool pass = rep.max_gap <= tol;
  json j;
  j["command"] = "hodograph-check";
  j["seed"] = cfg.seed;
  j["kappa"] = kappa;
  j["alpha"] = alpha;
  j["max_gap"] = rep.max_gap;
  j["final_gap"] = rep.final_gap;
  j["tolerance"] = tol;
  j["prolongation_mismatch"] = prolong;
  j["pass"] = pass;
  write_summary(cfg, j);
  return pass ? kPass : kFail;
}

int cmd_exact_eval(const Common& c) {
  RunConfig cfg = config_for(c, true);
  using K = plapcli::InitialSpec::Kind;
  if (cfg.initial.kind != K::FamilyA && cfg.initial.kind != K::FamilyB)
    throw ConfigError("exact-eval: initial.kind must be family_a or family_b");
  ProblemSpec P = plapcli::problem_of(cfg);
  std::vector<double> times;
  for (double t = 0.0; t <= cfg.t_end + 1e-12; t += cfg.dt_store) times.push_back(t);
  const double tol = c.tol > 0.0 ? c.tol : 1e-9;
  json j;
  j["command"] = "exact-eval";
  j["seed"] = cfg.seed;
  std::vector<ResidualRow> rows;
  if (cfg.initial.kind == K::FamilyA) {
    const auto& A = cfg.initial.a;
    rows = residual_table(A, P, cfg.grid, times);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < cfg.grid.N; ++i) {
      double r = cfg.grid.r(i);
      double F = std::pow(r, A.n - 1.0) * eval_h(A.diffusivity, family_a_slope(A, r), 0);
      lo = std::min(lo, F), hi = std::max(hi, F);
    }
    j["flux_spread"] = hi - lo;
    MassResult M = mass(A, cfg.grid.r_max, cfg.t_end);
    j["mass"] = {{"R", cfg.grid.r_max}, {"value", M.value}, {"divergent", M.divergent}};
  } else {
    const auto& B = cfg.initial.b;
    rows = residual_table(B, P, cfg.grid, times);
    if (B.variant == FamilyBVariant::MovingInterface) {
      InterfaceLaw L = interface(B);
      j["interface"] = {{"R0", L.R0}, {"q", L.q}, {"qk", L.q * L.k}};
    }
    MassResult M = mass(B, cfg.grid.r_max, cfg.t_end);
    j["mass"] = {{"R", cfg.grid.r_max}, {"value", M.value}, {"divergent", M.divergent}};
  }
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.residual));
  {
    auto os = open_out(cfg, "exact_residuals.csv");
    write_residual_csv(os, rows);
  }
  j["max_residual"] = worst;
  j["tolerance"] = tol;
  j["pass"] = worst <= tol;
  write_summary(cfg, j);
  return worst <= tol ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial p-Laplacian reaction-diffusion verification and solver driver"};
  app.require_subcommand(1);
  Common c;
  auto add = [&](const std::string& name, const std::string& help, const std::string& filter_name) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", c.config, "JSON run configuration");
    if (!filter_name.empty()) sub->add_option(filter_name, c.tag, "restrict to one generator or law");
    sub->add_option("--tol", c.tol, "tolerance override");
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { c.seed = s, c.seed_set = true; },
                                            "seed for random draws");
    sub->add_option("--out", c.out, "output directory");
    return sub;
  };
  auto* sym = add("verify-symmetries", "determining-system and commutator sweep", "--tag");
  auto* con = add("verify-conservation", "multiplier and flux sweep", "--law");
  auto* sim = add("simulate", "run the solver on a configuration", "");
  auto* conv = add("convergence", "grid refinement study against an exact solution", "");
  auto* hod = add("hodograph-check", "nonlinear versus linearised cross-validation", "");
  auto* ex = add("exact-eval", "exact-family residuals, flux and mass", "");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  try {
    if (*sym) return cmd_verify_symmetries(c);
    if (*con) return cmd_verify_conservation(c);
    if (*sim) return cmd_simulate(c);
    if (*conv) return cmd_convergence(c);
    if (*hod) return cmd_hodograph_check(c);
    if (*ex) return cmd_exact_eval(c);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kConfig;
}
