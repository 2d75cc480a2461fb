#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "plap/conservation.hpp"
#include "plap/symmetry.hpp"

namespace plap {

// Randomised verification sweeps shared by the CLI and the acceptance run.

struct SymmetryRow {
  int tag = 1;
  int draw = 0;
  int jet = 0;
  std::string params_hash;
  double split = 0.0;    // max relative determining-system residual
  double unsplit = 0.0;  // relative invariance residual
  bool pass = true;
};

struct SymmetrySweepOptions {
  std::vector<int> tags;  // empty: X1..X23
  int draws = 5;
  int jets = 100;
  double split_tol = 1e-10;
  double unsplit_tol = 1e-9;
  std::uint64_t seed = 1;
  // fixture hook applied to each drawn generator before it is checked
  std::function<void(const ProblemSpec&, SymmetryGenerator&)> perturb;
};

struct SymmetrySweep {
  std::vector<SymmetryRow> rows;
  double max_split = 0.0, max_unsplit = 0.0;
  bool pass = true;
};

SymmetrySweep sweep_symmetries(const SymmetrySweepOptions& opts);
void write_symmetry_csv(std::ostream& os, const SymmetrySweep& sw);

struct BracketRow {
  std::string label;
  int draw = 0;
  int a = 1, b = 1;
  double coefficient_error = 0.0;
  double fit_residual = 0.0;
  bool pass = true;
};

struct BracketSweepOptions {
  std::vector<std::string> labels;  // empty: every case with a table
  int draws = 3;
  int samples = 40;
  double tol = 1e-8;
  std::uint64_t seed = 1;
};

struct BracketSweep {
  std::vector<BracketRow> rows;
  double max_coefficient_error = 0.0, max_fit_residual = 0.0;
  bool pass = true;
};

BracketSweep sweep_brackets(const BracketSweepOptions& opts);
void write_bracket_csv(std::ostream& os, const BracketSweep& sw);

// One (problem, law) pairing of the conservation sweep.
struct LawCase {
  std::string label;
  ProblemSpec problem;
  ConservationLaw law;
};

// Catalog laws over m in {0, -1, 2, -2} and the radial spellings, with phi-mode instances for the
// infinite families. Parameters drawn from the seed.
std::vector<LawCase> conservation_cases(std::uint64_t seed);

struct LawRow {
  std::string law, label;
  double m = 0.0;
  int jet = 0;
  double multiplier = 0.0;      // max |component| of the multiplier system
  double characteristic = 0.0;  // max |component| of the split system
  bool pass = true;
};

struct ConservationSweepOptions {
  std::string law;  // empty: all
  int jets = 100;
  double multiplier_tol = 1e-10;
  double characteristic_tol = 1e-9;
  std::uint64_t seed = 1;
};

struct ConservationSweep {
  std::vector<LawRow> rows;
  double max_multiplier = 0.0, max_characteristic = 0.0;
  bool pass = true;
};

ConservationSweep sweep_conservation(const std::vector<LawCase>& cases, const ConservationSweepOptions& opts);
void write_law_csv(std::ostream& os, const ConservationSweep& sw);

}  // namespace plap
