#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plap/field.hpp"
#include "plap/model.hpp"
#include "plap/numerics.hpp"
#include "plap/rng.hpp"

namespace plap {

using Coefficient = std::function<HyperDual(const HyperDual& t, const HyperDual& r, const HyperDual& u)>;

struct SymmetryGenerator {
  int tag = 1;
  Params params;
  Coefficient tau, xi, eta;

  std::string name() const { return "X" + std::to_string(tag); }
  std::array<double, 3> at(double t, double r, double u) const;
};

// Table row for X<tag> with the given constants.
SymmetryGenerator make_generator(int tag, const Params& p);

// Generators of the classify(problem) case with constants bound from the problem.
std::vector<SymmetryGenerator> catalog(const ProblemSpec& problem);

struct TransformDomainError : std::domain_error {
  double eps_bound;
  TransformDomainError(const std::string& what, double bound) : std::domain_error(what), eps_bound(bound) {}
};

struct TimeSliceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IllConditionedSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Point3 = std::array<double, 3>;

struct GroupTransformation {
  int tag = 1;
  Params params;
  std::function<Point3(double eps, const Point3&)> closed_form;
};

GroupTransformation make_transformation(int tag, const Params& p);
Point3 apply_group(const GroupTransformation& trans, double eps, const Point3& x);
// RK4 on dt/de = tau, dr/de = xi, du/de = eta.
Point3 integrate_flow(const SymmetryGenerator& gen, double eps, const Point3& x, int steps = 2000);

struct Jet {
  double t = 1.0, r = 1.0, u = 0.0, u_r = 1.0, u_rr = 0.0, u_rrr = 0.0;
};

// Residual with the sum of absolute term sizes it was assembled from.
struct ScaledValue {
  double value = 0.0;
  double scale = 0.0;
  double relative() const { return std::abs(value) / std::max(1.0, scale); }
};

// tau_r, tau_u, the first-order u_r relation, the long fourth equation.
std::array<ScaledValue, 4> determining_residual(const SymmetryGenerator& gen, const ProblemSpec& problem, const Jet& jet);
double max_relative(const std::array<ScaledValue, 4>& res);

ScaledValue invariance_residual_unsplit(const SymmetryGenerator& gen, const ProblemSpec& problem, const Jet& jet);

// Jet with t, r, u in the default domain and u_r inside the problem's working branch.
Jet sample_jet(const ProblemSpec& problem, Rng& rng);
std::vector<Point3> sample_points(std::size_t n, Rng& rng);

// Random admissible problem exercising generator X<tag>, with the generator as bound by catalog().
struct RowDraw {
  ProblemSpec problem;
  SymmetryGenerator generator;
};
RowDraw draw_row(int tag, Rng& rng);

// Labels of the classification rows with commutator tables, and a random problem for each.
const std::vector<std::string>& case_labels();
ProblemSpec draw_case(const std::string& label, Rng& rng);

struct BracketResult {
  std::vector<double> coefficients;  // aligned with the basis
  double fit_residual = 0.0;
};

// [A,B]^i = A(B^i) - B(A^i), fitted as a constant combination of basis.
BracketResult bracket(const SymmetryGenerator& A, const SymmetryGenerator& B,
                      const std::vector<SymmetryGenerator>& basis, const std::vector<Point3>& samples);

struct BracketDisplay {
  int a = 1, b = 1;
  std::vector<std::pair<int, double>> combination;  // (tag, coefficient)
};

struct LieAlgebra {
  std::string label;
  std::vector<SymmetryGenerator> generators;
  std::vector<BracketDisplay> structure_constants;  // expected, from the classification tables
};

std::vector<BracketDisplay> expected_brackets(const CaseTag& c);
LieAlgebra algebra_for(const ProblemSpec& problem);

// C[i][j][k]: [X_i, X_j] = sum_k C[i][j][k] X_k
struct StructureConstants {
  std::vector<std::vector<std::vector<double>>> C;
  double max_fit_residual = 0.0;
  double antisymmetry_defect() const;
  double jacobi_defect() const;
};
StructureConstants structure_constants(const std::vector<SymmetryGenerator>& gens, const std::vector<Point3>& samples);

struct DerivedSeries {
  // bases[i] spans g^(i); each vector holds coefficients over the algebra's generators
  std::vector<std::vector<std::vector<double>>> bases;
  std::vector<std::size_t> dims;
  bool solvable = false;
};
DerivedSeries derived_series(const std::vector<SymmetryGenerator>& gens, const std::vector<Point3>& samples,
                             double rank_tol = 1e-8);

Field orbit_map(const GroupTransformation& trans, double eps, const Field& field);
// Slices mapped one by one and resampled onto the common r-range.
Trajectory orbit_map(const GroupTransformation& trans, double eps, const Trajectory& traj);

std::string param_hash(const Params& p);

}  // namespace plap
