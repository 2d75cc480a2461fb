#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace plapcli {

using nlohmann::json;
using plap::ConfigError;

double HodographPair::u(double t, double r) const { return t + std::sqrt(r * r - 2.0 * kappa * t); }

namespace {

// Reads keys from one JSON object and rejects whatever was not read.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
  }
  ~Obj() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(path_ + "." + it.key() + ": unknown key");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  double num(const std::string& k, double def) {
    seen_.insert(k);
    if (!j_.contains(k)) return def;
    if (!j_[k].is_number()) throw ConfigError(where(k) + ": expected a number");
    double v = j_[k].get<double>();
    if (!std::isfinite(v)) throw ConfigError(where(k) + ": not finite");
    return v;
  }
  double num(const std::string& k) {
    if (!j_.contains(k)) throw ConfigError(where(k) + ": required");
    return num(k, 0.0);
  }
  bool flag(const std::string& k, bool def) {
    seen_.insert(k);
    if (!j_.contains(k)) return def;
    if (!j_[k].is_boolean()) throw ConfigError(where(k) + ": expected true or false");
    return j_[k].get<bool>();
  }
  std::string str(const std::string& k, const std::string& def) {
    seen_.insert(k);
    if (!j_.contains(k)) return def;
    if (!j_[k].is_string()) throw ConfigError(where(k) + ": expected a string");
    return j_[k].get<std::string>();
  }
  std::string str(const std::string& k) {
    if (!j_.contains(k)) throw ConfigError(where(k) + ": required");
    return str(k, "");
  }
  std::uint64_t uint(const std::string& k, std::uint64_t def) {
    seen_.insert(k);
    if (!j_.contains(k)) return def;
    if (!j_[k].is_number_unsigned()) throw ConfigError(where(k) + ": expected a non-negative integer");
    return j_[k].get<std::uint64_t>();
  }
  const json& sub(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }
  std::string where(const std::string& k) const { return path_ + "." + k; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

plap::DiffusivitySpec parse_diffusivity(const json& j, const std::string& path) {
  Obj o(j, path);
  std::string fam = o.str("family");
  using D = plap::DiffusivitySpec;
  if (fam == "radial_power") return D::radial_power(o.num("kappa"), o.num("p"));
  if (fam == "shifted_power") return D::shifted_power(o.num("kappa"), o.num("alpha", 0), o.num("beta", 0), o.num("p"));
  if (fam == "ratio") return D::ratio(o.num("kappa"), o.num("alpha"), o.num("beta"), o.num("p"));
  if (fam == "exp_arctan") return D::exp_arctan(o.num("kappa"), o.num("alpha"), o.num("beta"), o.num("p"));
  if (fam == "exp_reciprocal") return D::exp_reciprocal(o.num("kappa"), o.num("alpha"), o.num("p"));
  if (fam == "exp_linear") return D::exp_linear(o.num("kappa"), o.num("p"));
  if (fam == "log") return D::log(o.num("kappa"), o.num("alpha"));
  throw ConfigError(o.where("family") + ": unknown diffusivity family '" + fam + "'");
}

plap::SourceSpec parse_source(const json& j, const std::string& path) {
  Obj o(j, path);
  std::string fam = o.str("family");
  using S = plap::SourceSpec;
  if (fam == "constant") return S::constant(o.num("b"));
  if (fam == "linear") return S::linear(o.num("b", 0), o.num("k"));
  if (fam == "inverse") return S::inverse(o.num("k"), o.num("a", 0));
  if (fam == "power_plus_linear") return S::power_plus_linear(o.num("k"), o.num("a", 0), o.num("p"), o.num("c"));
  if (fam == "power") return S::power(o.num("k"), o.num("a", 0), o.num("q"));
  if (fam == "exponential") return S::exponential(o.num("k"), o.num("q"), o.num("a", 0));
  if (fam == "quadratic_shifted") {
    double s = o.num("sign");
    if (s != 1.0 && s != -1.0) throw ConfigError(o.where("sign") + ": must be 1 or -1");
    return S::quadratic_shifted(o.num("k"), o.num("a", 0), o.num("b"), static_cast<int>(s));
  }
  if (fam == "constant_plus_inverse") return S::constant_plus_inverse(o.num("b"), o.num("k"), o.num("a", 0));
  throw ConfigError(o.where("family") + ": unknown source family '" + fam + "'");
}

plap::ProblemSpec parse_problem(const json& j) {
  Obj o(j, "problem");
  auto d = parse_diffusivity(o.sub("diffusivity"), "problem.diffusivity");
  auto s = parse_source(o.sub("source"), "problem.source");
  auto P = plap::make_problem(d, s, o.num("m"), o.flag("radial", false));
  if (o.has("working_branch")) {
    const json& wb = o.sub("working_branch");
    if (!wb.is_array() || wb.size() != 2 || !wb[0].is_number() || !wb[1].is_number())
      throw ConfigError("problem.working_branch: expected [lo, hi]");
    P.working_branch = {wb[0].get<double>(), wb[1].get<double>()};
  }
  plap::validate(P);
  return P;
}

plap::FamilyBVariant parse_variant(const std::string& v, const std::string& where) {
  if (v == "general") return plap::FamilyBVariant::General;
  if (v == "mu_zero_closed") return plap::FamilyBVariant::MuZeroClosed;
  if (v == "moving_interface") return plap::FamilyBVariant::MovingInterface;
  if (v == "cutoff") return plap::FamilyBVariant::Cutoff;
  throw ConfigError(where + ": unknown variant '" + v + "'");
}

InitialSpec parse_initial(const json& j) {
  Obj o(j, "initial");
  InitialSpec in;
  std::string kind = o.str("kind");
  if (kind == "family_a") {
    in.kind = InitialSpec::Kind::FamilyA;
    in.a.b = o.num("b");
    in.a.c1 = o.num("c1", 1.0);
    in.a.c2 = o.num("c2", 0.0);
    in.a.r0 = o.num("r0", 1.0);
    in.a.n = o.num("n", 2.0);
    if (o.has("diffusivity")) in.a.diffusivity = parse_diffusivity(o.sub("diffusivity"), "initial.diffusivity");
  } else if (kind == "family_b") {
    in.kind = InitialSpec::Kind::FamilyB;
    auto& B = in.b;
    B.k = o.num("k");
    B.b = o.num("b", 0.0);
    B.kappa = o.num("kappa");
    B.p = o.num("p");
    B.mu = o.num("mu", 0.0);
    B.r0 = o.num("r0", 0.0);
    B.c1 = o.num("c1", 1.0);
    B.n = o.num("n", 2.0);
    B.variant = parse_variant(o.str("variant", "general"), "initial.variant");
    B.cutoff_R = o.num("cutoff_R", 0.0);
    if (B.variant == plap::FamilyBVariant::Cutoff) {
      if (!(B.cutoff_R > 0.0)) throw ConfigError("initial.cutoff_R: required and positive for the cutoff variant");
      double c1 = B.c1;
      B = plap::cutoff_solution(B.k, B.b, B.kappa, B.p, std::pow(c1, 1.0 / (B.n - 1.0)), B.n, B.cutoff_R, B.r0);
    }
  } else if (kind == "hodograph_pair") {
    in.kind = InitialSpec::Kind::HodographPair;
    in.pair.kappa = o.num("kappa", 0.5);
    if (!(in.pair.kappa > 0.0)) throw ConfigError("initial.kappa: must be positive");
  } else if (kind == "samples") {
    in.kind = InitialSpec::Kind::Samples;
    const json& v = o.sub("values");
    if (!v.is_array()) throw ConfigError("initial.values: expected an array of numbers");
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError("initial.values: expected an array of numbers");
      in.values.push_back(x.get<double>());
    }
  } else {
    throw ConfigError("initial.kind: unknown kind '" + kind + "'");
  }
  return in;
}

EndSpec parse_end(const json& j, const std::string& path) {
  Obj o(j, path);
  std::string kind = o.str("kind");
  EndSpec e;
  if (kind == "exact") e.kind = EndSpec::Kind::Exact;
  else if (kind == "dirichlet") e.kind = EndSpec::Kind::Dirichlet, e.value = o.num("value");
  else if (kind == "neumann") e.kind = EndSpec::Kind::Neumann;
  else if (kind == "regularity") e.kind = EndSpec::Kind::Regularity;
  else throw ConfigError(path + ".kind: unknown boundary kind '" + kind + "'");
  return e;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  RunConfig cfg;
  Obj o(j, "config");
  if (o.has("problem")) cfg.problem = parse_problem(o.sub("problem"));
  if (o.has("grid")) {
    Obj g(o.sub("grid"), "grid");
    cfg.grid.r_min = g.num("r_min");
    cfg.grid.r_max = g.num("r_max");
    double N = g.num("N");
    if (N < 3 || N != std::floor(N)) throw ConfigError("grid.N: integer >= 3 required");
    cfg.grid.N = static_cast<std::size_t>(N);
    if (!(cfg.grid.r_max > cfg.grid.r_min)) throw ConfigError("grid: r_max must exceed r_min");
  }
  if (o.has("initial")) cfg.initial = parse_initial(o.sub("initial"));
  if (o.has("bc")) {
    Obj b(o.sub("bc"), "bc");
    if (b.has("left")) cfg.left = parse_end(b.sub("left"), "bc.left");
    if (b.has("right")) cfg.right = parse_end(b.sub("right"), "bc.right");
  }
  cfg.t_end = o.num("t_end", cfg.t_end);
  cfg.dt_store = o.num("dt_store", cfg.dt_store);
  if (!(cfg.t_end >= 0.0) || !(cfg.dt_store > 0.0)) throw ConfigError("t_end >= 0 and dt_store > 0 required");
  if (o.has("solver")) {
    Obj s(o.sub("solver"), "solver");
    cfg.solver.cfl = s.num("cfl", cfg.solver.cfl);
    cfg.solver.regularize = s.flag("regularize", cfg.solver.regularize);
    cfg.solver.eps_reg = s.num("eps_reg", cfg.solver.eps_reg);
    cfg.solver.dt_max = s.num("dt_max", cfg.solver.dt_max);
    if (s.has("clamp_level")) cfg.solver.clamp_level = s.num("clamp_level");
    if (!(cfg.solver.cfl > 0.0 && cfg.solver.cfl <= 0.5)) throw ConfigError("solver.cfl: must lie in (0, 0.5]");
  }
  if (o.has("outputs")) {
    Obj out(o.sub("outputs"), "outputs");
    cfg.out_dir = out.str("directory", cfg.out_dir);
  }
  cfg.seed = o.uint("seed", cfg.seed);
  if (o.has("convergence")) {
    Obj c(o.sub("convergence"), "convergence");
    if (c.has("levels")) {
      const json& L = c.sub("levels");
      if (!L.is_array()) throw ConfigError("convergence.levels: expected an array of grid sizes");
      cfg.levels.clear();
      for (const auto& x : L) {
        if (!x.is_number_unsigned() || x.get<std::size_t>() < 3)
          throw ConfigError("convergence.levels: grid sizes must be integers >= 3");
        cfg.levels.push_back(x.get<std::size_t>());
      }
    }
  }
  if (o.has("sweep")) {
    Obj s(o.sub("sweep"), "sweep");
    cfg.draws = static_cast<int>(s.uint("draws", static_cast<std::uint64_t>(cfg.draws)));
    cfg.jets = static_cast<int>(s.uint("jets", static_cast<std::uint64_t>(cfg.jets)));
    cfg.perturb_eta = s.num("perturb_eta", 0.0);
    cfg.mismatched_law = s.flag("mismatched_law", false);
  }
  if (cfg.initial.kind == InitialSpec::Kind::Samples && !cfg.initial.values.empty()) {
    if (cfg.initial.values.size() != cfg.grid.N) throw ConfigError("initial.values: length must equal grid.N");
    if (!cfg.problem) throw ConfigError("problem: required with tabulated initial samples");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

plap::ProblemSpec problem_of(const RunConfig& cfg) {
  if (cfg.problem) return *cfg.problem;
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::FamilyA: return plap::matched_problem(cfg.initial.a);
    case InitialSpec::Kind::FamilyB: return plap::matched_problem(cfg.initial.b);
    case InitialSpec::Kind::HodographPair:
      return plap::make_problem(plap::DiffusivitySpec::shifted_power(cfg.initial.pair.kappa, 0, 0, -1),
                                plap::SourceSpec::constant(1.0), 1.0);
    case InitialSpec::Kind::Samples: break;
  }
  throw ConfigError("problem: required when no exact family is configured");
}

bool is_interface(const RunConfig& cfg) {
  return cfg.initial.kind == InitialSpec::Kind::FamilyB && cfg.initial.b.variant == plap::FamilyBVariant::MovingInterface;
}

plap::ExactFn exact_of(const RunConfig& cfg) {
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::FamilyA: {
      plap::FamilyA A = cfg.initial.a;
      return [A](double t, double r) { return plap::eval_family_a(A, t, r).u; };
    }
    case InitialSpec::Kind::FamilyB: {
      plap::FamilyB B = cfg.initial.b;
      return [B](double t, double r) { return plap::eval_family_b(B, t, r).u; };
    }
    case InitialSpec::Kind::HodographPair: {
      HodographPair H = cfg.initial.pair;
      return [H](double t, double r) { return H.u(t, r); };
    }
    case InitialSpec::Kind::Samples: break;
  }
  return {};
}

plap::Field initial_field(const RunConfig& cfg, const plap::Grid& grid) {
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::FamilyA: return plap::sample_family(cfg.initial.a, grid, 0.0);
    // interface runs evolve the interior branch continued across the front
    case InitialSpec::Kind::FamilyB: return plap::sample_family(cfg.initial.b, grid, 0.0, !is_interface(cfg));
    case InitialSpec::Kind::HodographPair: {
      plap::Field f{grid, 0.0, {}};
      for (std::size_t i = 0; i < grid.N; ++i) f.values.push_back(cfg.initial.pair.u(0.0, grid.r(i)));
      return f;
    }
    case InitialSpec::Kind::Samples:
      if (cfg.initial.values.size() != grid.N) throw ConfigError("initial.values: length must equal grid.N");
      return {grid, 0.0, cfg.initial.values};
  }
  throw ConfigError("initial: unsupported kind");
}

namespace {

plap::ExactFn dirichlet_data(const RunConfig& cfg) {
  if (cfg.initial.kind == InitialSpec::Kind::FamilyA) {
    // cache the quadrature at the two ends; u = b t + U(r)
    plap::FamilyA A = cfg.initial.a;
    const double lo = cfg.grid.r_min, hi = cfg.grid.r_max;
    const double UL = plap::eval_family_a(A, 0.0, lo).u, UR = plap::eval_family_a(A, 0.0, hi).u;
    return [A, lo, hi, UL, UR](double t, double r) {
      if (r == lo) return A.b * t + UL;
      if (r == hi) return A.b * t + UR;
      return plap::eval_family_a(A, t, r).u;
    };
  }
  if (is_interface(cfg)) {
    plap::FamilyB B = cfg.initial.b;
    return [B](double t, double r) { return plap::eval_family_b(B, t, r, false).u; };
  }
  return exact_of(cfg);
}

plap::EndCondition end_of(const RunConfig& cfg, const std::optional<EndSpec>& e) {
  EndSpec spec = e.value_or(cfg.has_exact() ? EndSpec{EndSpec::Kind::Exact, 0.0} : EndSpec{EndSpec::Kind::Neumann, 0.0});
  switch (spec.kind) {
    case EndSpec::Kind::Exact:
      if (!cfg.has_exact()) throw ConfigError("bc: kind 'exact' needs an exact-family initial condition");
      return plap::EndCondition::from_exact(dirichlet_data(cfg));
    case EndSpec::Kind::Dirichlet: return plap::EndCondition::dirichlet(spec.value);
    case EndSpec::Kind::Neumann: return plap::EndCondition::neumann();
    case EndSpec::Kind::Regularity: return plap::EndCondition::regularity();
  }
  return plap::EndCondition::neumann();
}

}  // namespace

plap::BoundaryCondition boundary_of(const RunConfig& cfg) { return {end_of(cfg, cfg.left), end_of(cfg, cfg.right)}; }

}  // namespace plapcli
