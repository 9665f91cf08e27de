#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the method's own 4th-order
// continuous extension for dense output.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qcosym/fields.hpp"

namespace qcosym {

/// rhs(t, y, dydt) writes dy/dt into the third argument.
using OdeRhs = std::function<void(double, std::span<const double>, std::span<double>)>;

struct OdeProblem {
  OdeRhs rhs;
  std::vector<double> y0;
  double t0 = 0.0;
  double t1 = 1.0;
};

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::size_t max_steps = 2'000'000;
  std::optional<double> initial_step;
  std::optional<double> max_step;

  void validate() const;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  IntegratorStats stats;

  const std::vector<double>& back() const { return states.back(); }
};

/// Integrates over [t0, t1]. With empty `output_times` the trajectory holds
/// t0 and every accepted step; otherwise states at exactly those times,
/// interpolated between accepted steps.
Trajectory integrate_dp45(const OdeProblem& prob, const IntegratorConfig& cfg = {},
                          std::span<const double> output_times = {});

/// Autonomous vector field as an ODE: dy/dt = vf(y).
Trajectory integrate_field(const VectorFieldFn& vf, const std::vector<double>& y0, double t0,
                           double t1, const IntegratorConfig& cfg = {},
                           std::span<const double> output_times = {});

/// n evenly spaced times covering [t0, t1] inclusive.
std::vector<double> linspace(double t0, double t1, std::size_t n);

}  // namespace qcosym
