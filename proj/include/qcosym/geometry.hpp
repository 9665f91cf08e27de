#pragma once

// q-cosymplectic charts (M, Omega, lambda_1..lambda_q) in coordinates, the
// Hamiltonian and q-evolution vector fields, and the Poisson bracket.
//
// Conventions: Omega is given by its component matrix W(a, b) = Omega(d_a, d_b),
// so (i_X Omega)_b = sum_a X^a W(a, b). Canonical charts order coordinates as
// (x^1..x^n, p_1..p_n, t^1..t^q) with Omega = sum_j dx^j ^ dp_j, which gives
// X_H = (dH/dp, -dH/dx, 0).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qcosym/fields.hpp"
#include "qcosym/linalg.hpp"

namespace qcosym {

struct QCosymplecticChart {
  std::size_t n = 0;  // symplectic pairs
  std::size_t q = 0;  // time directions
  VectorFieldFn omega;                 // point -> W, row-major, dim*dim entries
  std::vector<VectorFieldFn> lambdas;  // point -> covector components of lambda_i
  std::vector<VectorFieldFn> reebs;    // R_i
  bool canonical = false;              // enables the closed-form X_H path

  std::size_t dim() const { return 2 * n + q; }
  std::size_t time_index(std::size_t i) const { return 2 * n + i; }
};

struct CanonicalChartSpec {
  std::size_t n = 1;
  std::size_t q = 1;
};

QCosymplecticChart canonical_chart(const CanonicalChartSpec& spec);

/// Per-point residuals of the structure axioms.
struct StructureResiduals {
  double antisymmetry = 0.0;  // max |W + W^T|
  double coframe = 0.0;       // max |lambda_i(R_j) - delta_ij|
  double kernel = 0.0;        // max |Omega(R_i, .)|
  double commutation = 0.0;   // max |[R_i, R_j]|
  std::size_t rank = 0;       // numerical rank of W
};

struct ValidationVerdict {
  std::vector<StructureResiduals> points;
  double tol = 0.0;
  std::size_t expected_rank = 0;
  bool pass = false;
  std::string failure;  // first failed check, empty on pass

  StructureResiduals worst() const;
};

/// Checks lambda_i(R_j) = delta_ij, Omega(R_i, .) = 0, rank W = 2n, antisymmetry
/// of W and [R_i, R_j] = 0 at each sample. Closedness of the forms is not
/// checked.
ValidationVerdict validate_structure(const QCosymplecticChart& chart,
                                     const std::vector<Point>& samples, double tol,
                                     const DiffConfig& cfg = {});

struct HamiltonianSystem {
  QCosymplecticChart chart;
  ScalarField H;
  std::vector<ScalarField> alphas;  // clock rates, one per time direction

  void validate() const;
};

template <class T>
BasicMatrix<T> omega_at(const QCosymplecticChart& chart, std::span<const T> p) {
  const std::size_t d = chart.dim();
  BasicMatrix<T> W(d, d);
  if (chart.canonical) {
    for (std::size_t j = 0; j < chart.n; ++j) {
      W(j, chart.n + j) = T(1.0);
      W(chart.n + j, j) = T(-1.0);
    }
    return W;
  }
  W.data = chart.omega.eval<T>(p);
  return W;
}

/// X_H at p: the solution of b(X) = dH - sum_i R_i(H) lambda_i with
/// b(X) = i_X Omega + sum_i lambda_i(X) lambda_i.
template <class T>
std::vector<T> hamiltonian_vector(const QCosymplecticChart& chart, const ScalarField& H,
                                  std::span<const T> p, const DiffConfig& cfg) {
  const std::size_t d = chart.dim();
  if (H.dim() != d)
    throw DimensionError("Hamiltonian of dimension " + std::to_string(H.dim()) +
                         " on a chart of dimension " + std::to_string(d));
  const std::vector<T> dH = gradient<T>(H, p, cfg);
  std::vector<T> X(d, T(0.0));
  if (chart.canonical) {
    for (std::size_t j = 0; j < chart.n; ++j) {
      X[j] = dH[chart.n + j];
      X[chart.n + j] = -dH[j];
    }
    return X;
  }
  const BasicMatrix<T> W = omega_at<T>(chart, p);
  std::vector<T> rhs = dH;
  BasicMatrix<T> M(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) M(b, a) = W(a, b);
  for (std::size_t i = 0; i < chart.q; ++i) {
    const auto lam = chart.lambdas[i].eval<T>(p);
    const auto R = chart.reebs[i].eval<T>(p);
    T RiH(0.0);
    for (std::size_t a = 0; a < d; ++a) RiH = RiH + dH[a] * R[a];
    for (std::size_t b = 0; b < d; ++b) {
      rhs[b] = rhs[b] - RiH * lam[b];
      for (std::size_t a = 0; a < d; ++a) M(b, a) = M(b, a) + lam[a] * lam[b];
    }
  }
  try {
    X = lu_solve<T>(std::move(M), std::move(rhs));
  } catch (const SingularError&) {
    throw SingularError("b-map is singular at this point: the chart is not q-cosymplectic here");
  }
  detail::require_finite_all(X, "Hamiltonian vector field");
  return X;
}

/// {f, g}(p) = Omega(X_f, X_g)(p), evaluated as X_g(f)(p) = df(X_g).
template <class T>
T poisson_bracket(const ScalarField& f, const ScalarField& g, const QCosymplecticChart& chart,
                  std::span<const T> p, const DiffConfig& cfg) {
  if (f.dim() != chart.dim() || g.dim() != chart.dim())
    throw DimensionError("poisson_bracket: fields must live on the chart");
  const auto df = gradient<T>(f, p, cfg);
  const auto Xg = hamiltonian_vector<T>(chart, g, p, cfg);
  T s(0.0);
  for (std::size_t a = 0; a < df.size(); ++a) s = s + df[a] * Xg[a];
  return s;
}

inline double poisson_bracket(const ScalarField& f, const ScalarField& g,
                              const QCosymplecticChart& chart, const Point& p,
                              const DiffConfig& cfg = {}) {
  return poisson_bracket<double>(f, g, chart, std::span<const double>(p), cfg);
}

/// The bracket {f, g} as a field, so it can be bracketed again. In dual mode
/// it supports one further level of differentiation.
ScalarField bracket_field(const ScalarField& f, const ScalarField& g,
                          const QCosymplecticChart& chart, const DiffConfig& cfg = {});

VectorFieldFn hamiltonian_vector_field(const HamiltonianSystem& sys, const DiffConfig& cfg = {});

/// E_H = sum_i alpha_i R_i + X_H.
VectorFieldFn evolution_field(const HamiltonianSystem& sys, const DiffConfig& cfg = {});

/// Coordinate function p -> p[index] on a chart of dimension dim.
ScalarField coordinate_field(std::size_t dim, std::size_t index);

/// Constant scalar field.
ScalarField constant_field(std::size_t dim, double value);

}  // namespace qcosym
