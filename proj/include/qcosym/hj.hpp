#pragma once

// Hamilton-Jacobi tools for the FitzHugh-Nagumo chart: isotropy of sections
// generated by S, the HJ residual, the quadratic (P, Q, R) ansatz around the
// equilibrium path, and characteristic curves.

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qcosym/fhn.hpp"
#include "qcosym/fields.hpp"
#include "qcosym/ode.hpp"

namespace qcosym {

/// S on (x^1..x^nx, t^1..t^nt); the section is gamma_j = dS/dx^j.
struct SectionFromS {
  ScalarField S;
  std::size_t nx = 0;
  std::size_t nt = 0;
};

struct IsotropyVerdict {
  std::vector<double> symmetry;  // max_jk |S_jk - S_kj| per point
  std::vector<double> mixed;     // max_ij |d^2 S / dt^i dx^j| per point
  double max_symmetry = 0.0;
  double max_mixed = 0.0;
  double tol = 0.0;
  bool pass = false;
};

IsotropyVerdict isotropy_check(const SectionFromS& section, const std::vector<Point>& samples,
                               double tol, const DiffConfig& cfg = {});

/// (1/eps) S_x f + (1/delta) S_y g + S_z h + S_ts at each sample (x, y, z, t_s).
std::vector<double> hj_residual(const ScalarField& S, const fhn::FhnParams& prm,
                                const std::vector<Point>& samples, const DiffConfig& cfg = {});

enum class CoefficientInterpolation { linear, cubic_hermite };

/// S(w, t_s) = 1/2 u^T P u + Q^T u + R with u = w - w_e(t_s).
struct QuadraticGeneratingFn {
  std::vector<double> grid;
  std::vector<Matrix> P;
  std::vector<std::vector<double>> Q;
  std::vector<double> R;
  // Node derivatives from the coefficient ODEs, used by cubic Hermite.
  std::vector<Matrix> P_dot;
  std::vector<std::vector<double>> Q_dot;
  /// t_s -> w_e(t_s); empty means the origin.
  VectorFieldFn equilibrium_path;
  CoefficientInterpolation interpolation = CoefficientInterpolation::cubic_hermite;

  std::size_t dim() const { return P.empty() ? 0 : P.front().rows; }

  /// Segment index k with grid[k] <= ts <= grid[k+1]. Throws
  /// PreconditionError outside the grid.
  std::size_t segment(double ts) const;

  template <class T>
  void coefficients(const T& ts, BasicMatrix<T>& Pt, std::vector<T>& Qt, T& Rt) const;

  template <class T>
  T eval(std::span<const T> point, const T& ts) const;
};

using MatrixFunction = std::function<Matrix(double)>;

/// Integrates P' = -(A^T P + P A), Q' = -A^T Q, R' = 0 over [t0, t1]. Nodes are
/// the accepted steps, or `output_times` when given.
QuadraticGeneratingFn solve_PQR(const MatrixFunction& A, const Matrix& P0,
                                const std::vector<double>& Q0, double R0, double t0, double t1,
                                const IntegratorConfig& cfg = {},
                                std::span<const double> output_times = {});

/// solve_PQR with A(t_s) the FHN Jacobian at the equilibrium of t_s, and the
/// equilibrium path attached.
QuadraticGeneratingFn linearize_fhn(const fhn::FhnParams& prm, const Matrix& P0,
                                    const std::vector<double>& Q0, double R0, double t0, double t1,
                                    const IntegratorConfig& cfg = {},
                                    std::span<const double> output_times = {});

MatrixFunction fhn_jacobian_path(const fhn::FhnParams& prm);
VectorFieldFn fhn_equilibrium_path(const fhn::FhnParams& prm);

double eval_S_quadratic(const QuadraticGeneratingFn& gen, const Point& point, double ts);

/// S as a field on (w, t_s), differentiable to second order in dual mode.
ScalarField quadratic_field(std::shared_ptr<const QuadraticGeneratingFn> gen);

/// u' = A u integrated together with P and Q; u^T P u and Q^T u should stay
/// at their initial values.
struct InvariantDrift {
  std::vector<double> times;
  std::vector<double> uPu;
  std::vector<double> Qu;
  double max_uPu_drift = 0.0;
  double max_Qu_drift = 0.0;
};

InvariantDrift quadratic_invariant_drift(const MatrixFunction& A, const Matrix& P0,
                                         const std::vector<double>& Q0,
                                         const std::vector<double>& u0, double t0, double t1,
                                         const IntegratorConfig& cfg = {},
                                         std::span<const double> output_times = {});

struct CharacteristicSeed {
  double x = 0.0, y = 0.0, z = 0.0, ts = 0.0, S = 0.0;
};

struct CharacteristicCurve {
  std::vector<double> s;
  std::vector<std::array<double, 4>> points;  // x, y, z, t_s
  double S = 0.0;
  double max_S_deviation = 0.0;
  std::string error;  // empty when the curve integrated cleanly
};

struct CharacteristicFan {
  std::vector<CharacteristicCurve> curves;
  std::size_t failed() const;
};

/// dx/ds = f/eps, dy/ds = g/delta, dz/ds = h(t_s), dt_s/ds = E, dS/ds = 0.
/// Curves run on up to `threads` workers; a failing curve records its error
/// and leaves the others alone.
CharacteristicFan trace_characteristics(const fhn::FhnParams& prm,
                                        const std::vector<CharacteristicSeed>& seeds, double E,
                                        double s0, double s1, const IntegratorConfig& cfg = {},
                                        std::span<const double> output_s = {},
                                        unsigned threads = 1);

// ---------------------------------------------------------------------------

template <class T>
void QuadraticGeneratingFn::coefficients(const T& ts, BasicMatrix<T>& Pt, std::vector<T>& Qt,
                                         T& Rt) const {
  const std::size_t d = dim();
  const std::size_t k = segment(value_of(ts));
  Pt = BasicMatrix<T>(d, d);
  Qt.assign(d, T(0.0));
  Rt = T(R[k]);
  if (grid.size() == 1) {
    for (std::size_t i = 0; i < d * d; ++i) Pt.data[i] = T(P[0].data[i]);
    for (std::size_t i = 0; i < d; ++i) Qt[i] = T(Q[0][i]);
    return;
  }
  const double h = grid[k + 1] - grid[k];
  const T s = (ts - grid[k]) / h;
  T w0, w1, v0(0.0), v1(0.0);
  if (interpolation == CoefficientInterpolation::linear) {
    w0 = 1.0 - s;
    w1 = s;
  } else {
    const T s2 = s * s, s3 = s2 * s;
    w0 = 2.0 * s3 - 3.0 * s2 + 1.0;
    w1 = -2.0 * s3 + 3.0 * s2;
    v0 = (s3 - 2.0 * s2 + s) * h;
    v1 = (s3 - s2) * h;
  }
  const bool hermite = interpolation == CoefficientInterpolation::cubic_hermite;
  for (std::size_t i = 0; i < d * d; ++i) {
    Pt.data[i] = w0 * P[k].data[i] + w1 * P[k + 1].data[i];
    if (hermite) Pt.data[i] = Pt.data[i] + v0 * P_dot[k].data[i] + v1 * P_dot[k + 1].data[i];
  }
  for (std::size_t i = 0; i < d; ++i) {
    Qt[i] = w0 * Q[k][i] + w1 * Q[k + 1][i];
    if (hermite) Qt[i] = Qt[i] + v0 * Q_dot[k][i] + v1 * Q_dot[k + 1][i];
  }
}

template <class T>
T QuadraticGeneratingFn::eval(std::span<const T> point, const T& ts) const {
  const std::size_t d = dim();
  if (point.size() != d)
    throw DimensionError("quadratic S: point has " + std::to_string(point.size()) +
                         " coordinates, expected " + std::to_string(d));
  BasicMatrix<T> Pt;
  std::vector<T> Qt;
  T Rt;
  coefficients(ts, Pt, Qt, Rt);
  std::vector<T> u(point.begin(), point.end());
  if (equilibrium_path.dim() != 0) {
    const std::vector<T> arg{ts};
    const auto we = equilibrium_path.eval<T>(std::span<const T>(arg));
    for (std::size_t i = 0; i < d; ++i) u[i] = u[i] - we[i];
  }
  T S = Rt;
  for (std::size_t i = 0; i < d; ++i) {
    T Pu(0.0);
    for (std::size_t j = 0; j < d; ++j) Pu = Pu + Pt(i, j) * u[j];
    S = S + u[i] * (0.5 * Pu + Qt[i]);
  }
  return S;
}

}  // namespace qcosym
