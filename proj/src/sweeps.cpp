#include "plap/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace plap {

SymmetrySweep sweep_symmetries(const SymmetrySweepOptions& opts) {
  std::vector<int> tags = opts.tags;
  if (tags.empty())
    for (int t = 1; t <= 23; ++t) tags.push_back(t);
  SymmetrySweep out;
  for (int tag : tags) {
    // one stream per tag so filtering does not change the draws
    Rng rng(opts.seed * 1000003ull + static_cast<std::uint64_t>(tag));
    for (int d = 0; d < opts.draws; ++d) {
      RowDraw row = draw_row(tag, rng);
      if (opts.perturb) opts.perturb(row.problem, row.generator);
      const std::string hash = param_hash(row.generator.params);
      for (int j = 0; j < opts.jets; ++j) {
        Jet jet = sample_jet(row.problem, rng);
        SymmetryRow r;
        r.tag = tag;
        r.draw = d;
        r.jet = j;
        r.params_hash = hash;
        r.split = max_relative(determining_residual(row.generator, row.problem, jet));
        r.unsplit = invariance_residual_unsplit(row.generator, row.problem, jet).relative();
        r.pass = r.split <= opts.split_tol && r.unsplit <= opts.unsplit_tol;
        out.max_split = std::max(out.max_split, r.split);
        out.max_unsplit = std::max(out.max_unsplit, r.unsplit);
        out.pass = out.pass && r.pass;
        out.rows.push_back(r);
      }
    }
  }
  return out;
}

void write_symmetry_csv(std::ostream& os, const SymmetrySweep& sw) {
  os << "tag,draw,jet,params,split_residual,unsplit_residual,pass\n";
  char buf[256];
  for (const auto& r : sw.rows) {
    std::snprintf(buf, sizeof buf, "X%d,%d,%d,%s,%.6e,%.6e,%d\n", r.tag, r.draw, r.jet, r.params_hash.c_str(), r.split,
                  r.unsplit, r.pass ? 1 : 0);
    os << buf;
  }
}

BracketSweep sweep_brackets(const BracketSweepOptions& opts) {
  std::vector<std::string> labels = opts.labels.empty() ? case_labels() : opts.labels;
  BracketSweep out;
  Rng rng(opts.seed);
  for (const auto& label : labels) {
    for (int d = 0; d < opts.draws; ++d) {
      ProblemSpec prob = draw_case(label, rng);
      LieAlgebra L = algebra_for(prob);
      auto samples = sample_points(static_cast<std::size_t>(opts.samples), rng);
      auto index = [&](int tag) {
        for (std::size_t i = 0; i < L.generators.size(); ++i)
          if (L.generators[i].tag == tag) return i;
        throw std::logic_error("sweep_brackets: X" + std::to_string(tag) + " not in " + label);
      };
      for (const auto& disp : L.structure_constants) {
        BracketResult br = bracket(L.generators[index(disp.a)], L.generators[index(disp.b)], L.generators, samples);
        std::vector<double> expected(L.generators.size(), 0.0);
        for (const auto& [tag, c] : disp.combination) expected[index(tag)] += c;
        BracketRow row;
        row.label = label;
        row.draw = d;
        row.a = disp.a;
        row.b = disp.b;
        for (std::size_t i = 0; i < expected.size(); ++i)
          row.coefficient_error = std::max(row.coefficient_error, std::abs(br.coefficients[i] - expected[i]));
        row.fit_residual = br.fit_residual;
        row.pass = row.coefficient_error <= opts.tol && row.fit_residual <= opts.tol;
        out.max_coefficient_error = std::max(out.max_coefficient_error, row.coefficient_error);
        out.max_fit_residual = std::max(out.max_fit_residual, row.fit_residual);
        out.pass = out.pass && row.pass;
        out.rows.push_back(row);
      }
    }
  }
  return out;
}

void write_bracket_csv(std::ostream& os, const BracketSweep& sw) {
  os << "case,draw,a,b,coefficient_error,fit_residual,pass\n";
  char buf[256];
  for (const auto& r : sw.rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,X%d,X%d,%.6e,%.6e,%d\n", r.label.c_str(), r.draw, r.a, r.b,
                  r.coefficient_error, r.fit_residual, r.pass ? 1 : 0);
    os << buf;
  }
}

std::vector<LawCase> conservation_cases(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LawCase> out;
  auto add_all = [&](const std::string& label, const ProblemSpec& P) {
    for (auto& L : catalog_laws(P)) out.push_back({label, P, L});
  };
  auto add_phi = [&](const std::string& label, const ProblemSpec& P, double kappa) {
    for (auto& L : catalog_laws(P)) {
      if (!L.phi) continue;
      for (double lambda : {-1.0, -0.3, 0.5, 1.0})
        out.push_back({label + "/phi", P, with_phi(L, phi_instance(P.source, kappa, lambda))});
    }
  };
  for (double m : {0.0, -1.0, 2.0, -2.0}) {
    const double kappa = uniform(rng, 0.5, 2.0), alpha = uniform(rng, 0.3, 1.5);
    const double b = signed_uniform(rng, 0.3, 1.5), k = signed_uniform(rng, 0.3, 1.5);
    add_all("power/linear", make_problem(DiffusivitySpec::radial_power(kappa, uniform(rng, 1.5, 3.5)),
                                         SourceSpec::linear(b, k), m));
    add_all("arbitrary/linear",
            make_problem(DiffusivitySpec::arbitrary([kappa](const HyperDual& v) { return -kappa * (v + 0.3 * v * v * v); }),
                         SourceSpec::linear(b, k), m));
    ProblemSpec rec0 = make_problem(DiffusivitySpec::shifted_power(kappa, 0, 0, -1), SourceSpec::constant(b), m);
    add_all("reciprocal/constant", rec0);
    add_phi("reciprocal/constant", rec0, kappa);
    ProblemSpec rec_any = make_problem(DiffusivitySpec::shifted_power(kappa, 0, 0, -1),
                                       SourceSpec::arbitrary([b](const HyperDual& u) { return b + 0.5 * sin(u); }), m);
    add_all("reciprocal/arbitrary", rec_any);
    ProblemSpec shifted_exp = make_problem(DiffusivitySpec::shifted_power(kappa, alpha, 0, -1),
                                           SourceSpec::exponential(k, uniform(rng, 0.5, 2.0), b), m);
    add_all("shifted/exponential", shifted_exp);
    ProblemSpec shifted_const = make_problem(DiffusivitySpec::shifted_power(kappa, alpha, 0, -1), SourceSpec::constant(b), m);
    add_all("shifted/constant", shifted_const);
    add_phi("shifted/constant", shifted_const, kappa);
  }
  for (double n : {2.0, 3.0}) {
    const double kappa = uniform(rng, 0.5, 2.0);
    const double b = signed_uniform(rng, 0.3, 1.5), k = signed_uniform(rng, 0.3, 1.5);
    add_all("radial/power/linear",
            make_problem(DiffusivitySpec::radial_power(kappa, 3.0), SourceSpec::linear(b, k), n - 1.0, true));
    ProblemSpec rr = make_problem(DiffusivitySpec::shifted_power(kappa, 0, 0, -1), SourceSpec::constant(b), n - 1.0, true);
    add_all("radial/reciprocal/constant", rr);
    add_phi("radial/reciprocal/constant", rr, kappa);
  }
  return out;
}

ConservationSweep sweep_conservation(const std::vector<LawCase>& cases, const ConservationSweepOptions& opts) {
  ConservationSweep out;
  Rng rng(opts.seed);
  for (const auto& c : cases) {
    if (!opts.law.empty() && c.law.name() != opts.law) continue;
    const auto [lo, hi] = c.problem.working_branch;
    const double vlo = std::max(lo, 0.0) + 0.2, vhi = std::min(hi, vlo + 2.0);
    for (int j = 0; j < opts.jets; ++j) {
      LawJet jet{uniform(rng, 0.1, 2.0), uniform(rng, 0.5, 3.0), uniform(rng, -1.0, 1.0), uniform(rng, vlo, vhi)};
      LawRow row;
      row.law = c.law.name();
      row.label = c.label;
      row.m = c.problem.m;
      row.jet = j;
      for (double x : multiplier_residual(c.law, c.problem, jet)) row.multiplier = std::max(row.multiplier, std::abs(x));
      for (double x : characteristic_residual(c.law, c.problem, jet))
        row.characteristic = std::max(row.characteristic, std::abs(x));
      if (!std::isfinite(row.multiplier)) row.multiplier = INFINITY;
      if (!std::isfinite(row.characteristic)) row.characteristic = INFINITY;
      row.pass = row.multiplier <= opts.multiplier_tol && row.characteristic <= opts.characteristic_tol;
      out.max_multiplier = std::max(out.max_multiplier, row.multiplier);
      out.max_characteristic = std::max(out.max_characteristic, row.characteristic);
      out.pass = out.pass && row.pass;
      out.rows.push_back(row);
    }
  }
  return out;
}

void write_law_csv(std::ostream& os, const ConservationSweep& sw) {
  os << "law,problem,m,jet,multiplier_residual,characteristic_residual,pass\n";
  char buf[256];
  for (const auto& r : sw.rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%g,%d,%.6e,%.6e,%d\n", r.law.c_str(), r.label.c_str(), r.m, r.jet, r.multiplier,
                  r.characteristic, r.pass ? 1 : 0);
    os << buf;
  }
}

}  // namespace plap
