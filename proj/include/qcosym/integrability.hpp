#pragma once

// Numerical checks of the hypotheses of Lie integrability for a q-evolution
// field: first integrals, their brackets, fitted structure constants, the
// derived series, and the center condition.

#include <string>
#include <vector>

#include "qcosym/geometry.hpp"
#include "qcosym/ode.hpp"

namespace qcosym {

/// f_1..f_m; the first r generate the candidate solvable algebra.
struct FirstIntegralSet {
  std::vector<ScalarField> fs;
  std::size_t r = 0;

  std::size_t m() const { return fs.size(); }
  void validate() const;
};

/// table[i][j][p] = {f_i, f_j}(sample p), i, j < m.
using BracketTable = std::vector<std::vector<std::vector<double>>>;

BracketTable bracket_table(const FirstIntegralSet& set, const QCosymplecticChart& chart,
                           const std::vector<Point>& samples, const DiffConfig& cfg = {});

/// c[i][j][k] with i, j, k < r, antisymmetric in (i, j).
struct StructureConstants {
  std::size_t r = 0;
  std::vector<double> c;

  explicit StructureConstants(std::size_t dim = 0) : r(dim), c(dim * dim * dim, 0.0) {}
  double& operator()(std::size_t i, std::size_t j, std::size_t k) { return c[(i * r + j) * r + k]; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return c[(i * r + j) * r + k];
  }
};

inline constexpr double kStructureConstantTol = 1e-6;

struct StructureFit {
  StructureConstants constants;
  double residual = 0.0;  // max over pairs and samples of the pointwise misfit
  double tol = 0.0;
  bool pass = false;
};

/// Least-squares fit of {f_i, f_j} = sum_k c_ij^k f_k over the samples, for
/// i < j < r. Throws SingularError when the values of f_1..f_r at the samples
/// are not linearly independent.
StructureFit fit_structure_constants(const BracketTable& table, const FirstIntegralSet& set,
                                     const std::vector<Point>& samples,
                                     double tol = kStructureConstantTol);

struct SolvabilityResult {
  bool solvable = false;
  std::vector<std::size_t> derived_dims;  // dim L^0, dim L^1, ...
};

/// Derived series of the abstract algebra with these structure constants.
SolvabilityResult solvability_test(const StructureConstants& c, double rank_tol = 1e-10);

struct CenterConditionResult {
  bool ok = false;
  double max_violation = 0.0;
};

/// sum_k c_ij^k c_k = 0 for all (i, j).
CenterConditionResult check_center_condition(const StructureConstants& c,
                                             const std::vector<double>& fiber_constants,
                                             double tol = 1e-10);

/// max_t |f_i(y(t)) - f_i(y0)| along E_H from y0.
std::vector<double> first_integral_drift(const HamiltonianSystem& sys, const FirstIntegralSet& set,
                                         const std::vector<double>& y0, double t0, double t1,
                                         const IntegratorConfig& cfg = {},
                                         const DiffConfig& dcfg = {});

/// Smallest numerical rank of (df_1, .., df_m) over the samples.
std::size_t independence_rank(const FirstIntegralSet& set, const std::vector<Point>& samples,
                              double rel_tol = 1e-10, const DiffConfig& cfg = {});

struct IntegrabilityOptions {
  double bracket_tol = 1e-9;   // {f_i, f_l} = 0 for l >= r
  double fit_tol = kStructureConstantTol;
  double center_tol = 1e-10;
  double drift_tol = 1e-6;
  std::vector<double> fiber_constants;  // empty: all zero
  std::vector<double> y0;               // empty: skip the drift check
  double t0 = 0.0;
  double t1 = 1.0;
  IntegratorConfig integrator;
};

struct IntegrabilityReport {
  std::size_t m = 0, r = 0;
  double max_commuting_bracket = 0.0;  // max |{f_i, f_l}|, i < m, l >= r
  bool commuting_ok = false;
  StructureFit fit;
  SolvabilityResult solvability;
  CenterConditionResult center;
  std::vector<double> drift;
  bool drift_ok = true;
  std::size_t independence = 0;
  bool independent = false;
  /// 2n + q - 1 == m + r; reported without a verdict.
  bool dimension_condition = false;
  /// Compactness and connectedness of the fibers is never checked.
  bool fibers_checked = false;
  std::string fit_error;  // set when the structure fit was impossible
};

IntegrabilityReport integrability_report(const HamiltonianSystem& sys, const FirstIntegralSet& set,
                                         const std::vector<Point>& samples,
                                         const IntegrabilityOptions& opt = {},
                                         const DiffConfig& cfg = {});

}  // namespace qcosym
