#pragma once

// Extended three-timescale FitzHugh-Nagumo system
//   x' = f(x, y)/eps,  y' = g(x, z)/delta,  z' = h(x, z; t_s)
//   f = x - x^3/3 - y,  g = x + a - z,  h = b(t_s) x - c(t_s) z
// with its Pontryagin Hamiltonian on the 3-cosymplectic chart
// (x, y, z, p_x, p_y, p_z, t_f, t_i, t_s).

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qcosym/geometry.hpp"
#include "qcosym/ode.hpp"

namespace qcosym::fhn {

enum class CoefficientForm { constant, linear, sine, exponential };

/// Slow-time coefficient b(t_s) or c(t_s):
///   constant:    k0
///   linear:      k0 + k1 t
///   sine:        k0 + k1 sin(k2 t + k3)
///   exponential: k0 + k1 exp(k2 t)
struct SlowCoefficient {
  CoefficientForm form = CoefficientForm::constant;
  std::array<double, 4> k{0.0, 0.0, 0.0, 0.0};

  SlowCoefficient() = default;
  SlowCoefficient(double value) : k{value, 0.0, 0.0, 0.0} {}  // NOLINT: constants convert

  static SlowCoefficient linear(double k0, double k1) {
    SlowCoefficient s(k0);
    s.form = CoefficientForm::linear;
    s.k[1] = k1;
    return s;
  }
  static SlowCoefficient sine(double k0, double amp, double omega, double phase) {
    SlowCoefficient s;
    s.form = CoefficientForm::sine;
    s.k = {k0, amp, omega, phase};
    return s;
  }
  static SlowCoefficient exponential(double k0, double k1, double rate) {
    SlowCoefficient s;
    s.form = CoefficientForm::exponential;
    s.k = {k0, k1, rate, 0.0};
    return s;
  }

  bool is_constant() const {
    if (form == CoefficientForm::constant || k[1] == 0.0) return true;
    return form != CoefficientForm::linear && k[2] == 0.0;
  }

  template <class T>
  T operator()(const T& t) const {
    using std::exp;
    using std::sin;
    switch (form) {
      case CoefficientForm::constant: return T(k[0]);
      case CoefficientForm::linear: return k[0] + k[1] * t;
      case CoefficientForm::sine: return k[0] + k[1] * sin(k[2] * t + k[3]);
      case CoefficientForm::exponential: return k[0] + k[1] * exp(k[2] * t);
    }
    return T(k[0]);
  }

  double derivative(double t) const { return (*this)(D1(t, 1.0)).d; }
};

struct FhnParams {
  double eps = 0.1;
  double delta = 0.5;
  double a = 0.5;
  SlowCoefficient b = 0.8;
  SlowCoefficient c = 0.7;

  void validate() const;
  bool autonomous() const { return b.is_constant() && c.is_constant(); }
};

/// Coordinate slots on the 9-dimensional chart.
enum Slot : std::size_t { X = 0, Y, Z, PX, PY, PZ, TF, TI, TS };
inline constexpr std::size_t kChartDim = 9;
inline constexpr std::size_t kStateDim = 6;

template <class T>
T fast_f(const T& x, const T& y) {
  return x - x * x * x / 3.0 - y;
}
template <class T>
T phi(const T& x) {
  return x - x * x * x / 3.0;
}

/// H~ = p_x f/eps + p_y g/delta + p_z h, generic in the scalar type.
template <class T>
T hamiltonian_value(const FhnParams& prm, const T& x, const T& y, const T& z, const T& px,
                    const T& py, const T& pz, const T& ts) {
  const T b = prm.b(ts);
  const T c = prm.c(ts);
  return px * fast_f(x, y) / prm.eps + py * (x + prm.a - z) / prm.delta + pz * (b * x - c * z);
}

ScalarField pontryagin_hamiltonian(const FhnParams& prm);

/// Canonical 3-cosymplectic chart of dimension 9.
QCosymplecticChart chart();

/// H~ with clock rates (1/eps, 1/delta, 1).
HamiltonianSystem hamiltonian_system(const FhnParams& prm);

/// Right-hand side of the six state/adjoint equations in physical time with
/// b, c evaluated at t_s = t.
OdeRhs full_rhs(const FhnParams& prm);

/// dp_y/dt and dp_z/dt; the same expression drives S_y and S_z.
inline std::array<double, 2> yz_adjoint_rates(const FhnParams& prm, double px, double py,
                                              double pz, double c) {
  return {px / prm.eps, py / prm.delta + c * pz};
}

/// Configuration field (x, y, z) with t_s frozen.
VectorFieldFn configuration_field(const FhnParams& prm, double ts);

struct FhnState {
  double x = 0.0, y = 0.0, z = 0.0;
  double px = 0.0, py = 0.0, pz = 0.0;

  std::vector<double> to_vector() const { return {x, y, z, px, py, pz}; }
  static FhnState from(std::span<const double> v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }
};

struct HjAugmentedState {
  FhnState state;
  double S_y = 0.0;
  double S_z = 0.0;
  double S_t = 0.0;
};

inline constexpr double kDefaultNullclineGuard = 1e-8;

/// S_x solved from the Hamilton-Jacobi equation at (x, y, z, t):
///   S_x = -eps / f * (S_y g/delta + S_z h + S_t).
/// Throws NullclineError when |f| < f_min.
double reconstruct_sx(double x, double y, double z, double S_y, double S_z, double S_t,
                      const FhnParams& prm, double t, double f_min = kDefaultNullclineGuard);
double reconstruct_sx(const HjAugmentedState& s, const FhnParams& prm, double t,
                      double f_min = kDefaultNullclineGuard);

/// Augmented initial state with S_y = p_y, S_z = p_z and p_x = S_x.
HjAugmentedState consistent_initial_state(const FhnParams& prm, double x, double y, double z,
                                          double py, double pz, double S_t, double t0,
                                          double f_min = kDefaultNullclineGuard);

struct HjValidationOptions {
  double f_min = kDefaultNullclineGuard;
  /// Allowed |p_x - S_x| / max(1, |S_x|) at t0.
  double consistency_tol = 1e-10;
  /// Empty: report every accepted step.
  std::vector<double> output_times;
};

struct ValidationReport {
  std::vector<double> times;
  std::vector<std::array<double, 8>> states;  // x, y, z, p_x, p_y, p_z, S_y, S_z
  std::vector<double> p_x;
  std::vector<double> S_x;
  std::vector<double> ratio;  // NaN where 0/0
  double max_dev = 0.0;       // over defined ratios
  std::size_t undefined = 0;
  IntegratorStats stats;
};

/// Integrates state, adjoint and (S_y, S_z) together, reconstructing S_x
/// from the HJ equation at every evaluation, and compares p_x with S_x.
/// Throws NullclineError when the trajectory enters the guard band or crosses
/// the fast nullcline.
ValidationReport run_hj_validation(const FhnParams& prm, const HjAugmentedState& init, double t0,
                                   double t1, const IntegratorConfig& cfg = {},
                                   const HjValidationOptions& opt = {});

/// Equilibrium at frozen t_s: x_e = c a/(b - c), z_e = x_e + a, y_e = phi(x_e).
std::array<double, 3> equilibrium(const FhnParams& prm, double ts);

/// Linearization of the configuration field at an equilibrium.
Matrix jacobian_A(const FhnParams& prm, double ts, const std::array<double, 3>& eq);

inline constexpr double kDefaultFoldGuard = 1e-8;

/// Fast-reduced pair on the critical manifold y = phi(x):
///   x' = g/(delta (1 - x^2)),  z' = h,  state (x, z), b and c at t_s = t.
OdeRhs fast_reduced_rhs(const FhnParams& prm, double guard = kDefaultFoldGuard);

/// H^(f) = p_x g/(delta (1 - x^2)) + p_z h on (x, z, p_x, p_z, t_i, t_s).
ScalarField fast_reduced_hamiltonian(const FhnParams& prm);

/// Intermediate layer at frozen t_s, state (z, p_z):
///   z' = (b - c) z - a b,  p_z' = -(b - c) p_z.
OdeRhs intermediate_reduced_rhs(const FhnParams& prm, double ts);

/// Same layer with b, c evaluated at t_s = t.
OdeRhs intermediate_reduced_rhs_tracking(const FhnParams& prm);

/// The alternative momentum rate -c p_z printed alongside the intermediate
/// Hamiltonian; kept for reporting only.
inline double intermediate_pz_rate_printed(const FhnParams& prm, double ts, double pz) {
  return -prm.c(ts) * pz;
}

ScalarField intermediate_reduced_hamiltonian(const FhnParams& prm);

/// Slaving relations on the intermediate manifold: x = z - a, y = phi(x).
inline std::array<double, 2> intermediate_slaving(const FhnParams& prm, double z) {
  const double x = z - prm.a;
  return {x, phi(x)};
}

struct ReductionMetrics {
  std::vector<double> times;
  std::vector<double> e_fast;  // |y - phi(x)|
  std::vector<double> e_int;   // |x - (z - a)|
  double max_fast_post = 0.0;
  double max_int_post = 0.0;
  double transient_end = 0.0;
};

ReductionMetrics reduction_error_metrics(const Trajectory& full, const FhnParams& prm,
                                         double transient_end);

}  // namespace qcosym::fhn
