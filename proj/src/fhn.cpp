#include "qcosym/fhn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcosym::fhn {

void FhnParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw PreconditionError("eps must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw PreconditionError("delta must be positive");
  if (!std::isfinite(a)) throw PreconditionError("a must be finite");
  for (double v : b.k)
    if (!std::isfinite(v)) throw PreconditionError("b coefficients must be finite");
  for (double v : c.k)
    if (!std::isfinite(v)) throw PreconditionError("c coefficients must be finite");
}

ScalarField pontryagin_hamiltonian(const FhnParams& prm) {
  prm.validate();
  return ScalarField::generic(kChartDim, [prm](auto p) {
    return hamiltonian_value(prm, p[X], p[Y], p[Z], p[PX], p[PY], p[PZ], p[TS]);
  });
}

QCosymplecticChart chart() { return canonical_chart({3, 3}); }

HamiltonianSystem hamiltonian_system(const FhnParams& prm) {
  HamiltonianSystem sys;
  sys.chart = chart();
  sys.H = pontryagin_hamiltonian(prm);
  sys.alphas = {constant_field(kChartDim, 1.0 / prm.eps), constant_field(kChartDim, 1.0 / prm.delta),
                constant_field(kChartDim, 1.0)};
  return sys;
}

OdeRhs full_rhs(const FhnParams& prm) {
  prm.validate();
  return [prm](double t, std::span<const double> s, std::span<double> ds) {
    const double x = s[X], y = s[Y], z = s[Z], px = s[PX], py = s[PY], pz = s[PZ];
    const double b = prm.b(t), c = prm.c(t);
    ds[X] = fast_f(x, y) / prm.eps;
    ds[Y] = (x + prm.a - z) / prm.delta;
    ds[Z] = b * x - c * z;
    ds[PX] = -(1.0 - x * x) / prm.eps * px - py / prm.delta - b * pz;
    const auto yz = yz_adjoint_rates(prm, px, py, pz, c);
    ds[PY] = yz[0];
    ds[PZ] = yz[1];
  };
}

VectorFieldFn configuration_field(const FhnParams& prm, double ts) {
  prm.validate();
  return VectorFieldFn::generic(3, [prm, ts](auto p) {
    using T = typename decltype(p)::value_type;
    const double b = prm.b(ts), c = prm.c(ts);
    return std::vector<T>{fast_f(p[0], p[1]) / prm.eps, (p[0] + prm.a - p[2]) / prm.delta,
                          b * p[0] - c * p[2]};
  });
}

double reconstruct_sx(double x, double y, double z, double S_y, double S_z, double S_t,
                      const FhnParams& prm, double t, double f_min) {
  const double f = fast_f(x, y);
  if (std::abs(f) < f_min) throw NullclineError(t, x, y, f);
  const double rest = S_y * (x + prm.a - z) / prm.delta + S_z * (prm.b(t) * x - prm.c(t) * z) + S_t;
  return -prm.eps / f * rest;
}

double reconstruct_sx(const HjAugmentedState& s, const FhnParams& prm, double t, double f_min) {
  return reconstruct_sx(s.state.x, s.state.y, s.state.z, s.S_y, s.S_z, s.S_t, prm, t, f_min);
}

HjAugmentedState consistent_initial_state(const FhnParams& prm, double x, double y, double z,
                                          double py, double pz, double S_t, double t0,
                                          double f_min) {
  HjAugmentedState s;
  s.state = {x, y, z, 0.0, py, pz};
  s.S_y = py;
  s.S_z = pz;
  s.S_t = S_t;
  s.state.px = reconstruct_sx(s, prm, t0, f_min);
  return s;
}

ValidationReport run_hj_validation(const FhnParams& prm, const HjAugmentedState& init, double t0,
                                   double t1, const IntegratorConfig& cfg,
                                   const HjValidationOptions& opt) {
  prm.validate();
  const double sx0 = reconstruct_sx(init, prm, t0, opt.f_min);
  if (std::abs(init.state.px - sx0) > opt.consistency_tol * std::max(1.0, std::abs(sx0)))
    throw PreconditionError("inconsistent initial data: p_x = " + std::to_string(init.state.px) +
                            " but the HJ equation gives S_x = " + std::to_string(sx0));
  if (init.S_y != init.state.py || init.S_z != init.state.pz)
    throw PreconditionError("inconsistent initial data: S_y, S_z must equal p_y, p_z");

  const auto state_rhs = full_rhs(prm);
  const double S_t = init.S_t;
  const double f_min = opt.f_min;
  OdeProblem prob;
  prob.t0 = t0;
  prob.t1 = t1;
  prob.y0 = init.state.to_vector();
  prob.y0.push_back(init.S_y);
  prob.y0.push_back(init.S_z);
  // S_x has a pole on the nullcline; a sign change of f means the trajectory
  // crossed it between evaluations without landing inside the guard band.
  const bool f_positive = fast_f(init.state.x, init.state.y) > 0.0;
  prob.rhs = [&prm, state_rhs, S_t, f_min, f_positive](double t, std::span<const double> s,
                                                       std::span<double> ds) {
    const double f = fast_f(s[X], s[Y]);
    if ((f > 0.0) != f_positive) throw NullclineError(t, s[X], s[Y], f);
    state_rhs(t, s.first(kStateDim), ds.first(kStateDim));
    const double sy = s[6], sz = s[7];
    const double sx = reconstruct_sx(s[X], s[Y], s[Z], sy, sz, S_t, prm, t, f_min);
    const auto rates = yz_adjoint_rates(prm, sx, sy, sz, prm.c(t));
    ds[6] = rates[0];
    ds[7] = rates[1];
  };

  const auto traj = integrate_dp45(prob, cfg, opt.output_times);

  ValidationReport rep;
  rep.stats = traj.stats;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& s = traj.states[k];
    const double t = traj.times[k];
    const double sx = reconstruct_sx(s[X], s[Y], s[Z], s[6], s[7], S_t, prm, t, f_min);
    const double px = s[PX];
    double ratio;
    if (sx == 0.0 && px == 0.0) {
      ratio = std::numeric_limits<double>::quiet_NaN();
      ++rep.undefined;
    } else {
      ratio = px / sx;
      rep.max_dev = std::max(rep.max_dev, std::abs(ratio - 1.0));
    }
    rep.times.push_back(t);
    std::array<double, 8> st{};
    std::copy(s.begin(), s.end(), st.begin());
    rep.states.push_back(st);
    rep.p_x.push_back(px);
    rep.S_x.push_back(sx);
    rep.ratio.push_back(ratio);
  }
  return rep;
}

std::array<double, 3> equilibrium(const FhnParams& prm, double ts) {
  prm.validate();
  const double b = prm.b(ts), c = prm.c(ts);
  if (b == c)
    throw SingularError("equilibrium: b(t_s) == c(t_s), no isolated equilibrium");
  const double xe = c * prm.a / (b - c);
  return {xe, phi(xe), xe + prm.a};
}

Matrix jacobian_A(const FhnParams& prm, double ts, const std::array<double, 3>& eq) {
  const double xe = eq[0];
  Matrix A(3, 3);
  A(0, 0) = (1.0 - xe * xe) / prm.eps;
  A(0, 1) = -1.0 / prm.eps;
  A(1, 0) = 1.0 / prm.delta;
  A(1, 2) = -1.0 / prm.delta;
  A(2, 0) = prm.b(ts);
  A(2, 2) = -prm.c(ts);
  return A;
}

OdeRhs fast_reduced_rhs(const FhnParams& prm, double guard) {
  prm.validate();
  return [prm, guard](double t, std::span<const double> s, std::span<double> ds) {
    const double x = s[0], z = s[1];
    const double fold = 1.0 - x * x;
    if (std::abs(fold) < guard)
      throw FoldError(x, "fast-reduced flow reached the fold x = +-1 at t = " + std::to_string(t));
    ds[0] = (x + prm.a - z) / (prm.delta * fold);
    ds[1] = prm.b(t) * x - prm.c(t) * z;
  };
}

ScalarField fast_reduced_hamiltonian(const FhnParams& prm) {
  prm.validate();
  // (x, z, p_x, p_z, t_i, t_s)
  return ScalarField::generic(6, [prm](auto p) {
    const auto& x = p[0];
    const auto& z = p[1];
    const auto g = x + prm.a - z;
    return p[2] * g / (prm.delta * (1.0 - x * x)) + p[3] * (prm.b(p[5]) * x - prm.c(p[5]) * z);
  });
}

OdeRhs intermediate_reduced_rhs(const FhnParams& prm, double ts) {
  prm.validate();
  const double b = prm.b(ts), c = prm.c(ts);
  const double a = prm.a;
  return [a, b, c](double, std::span<const double> s, std::span<double> ds) {
    ds[0] = (b - c) * s[0] - a * b;
    ds[1] = -(b - c) * s[1];
  };
}

OdeRhs intermediate_reduced_rhs_tracking(const FhnParams& prm) {
  prm.validate();
  return [prm](double t, std::span<const double> s, std::span<double> ds) {
    const double b = prm.b(t), c = prm.c(t);
    ds[0] = (b - c) * s[0] - prm.a * b;
    ds[1] = -(b - c) * s[1];
  };
}

ScalarField intermediate_reduced_hamiltonian(const FhnParams& prm) {
  prm.validate();
  // (z, p_z, t_s)
  return ScalarField::generic(3, [prm](auto p) {
    const auto b = prm.b(p[2]);
    const auto c = prm.c(p[2]);
    return p[1] * ((b - c) * p[0] - prm.a * b);
  });
}

ReductionMetrics reduction_error_metrics(const Trajectory& full, const FhnParams& prm,
                                         double transient_end) {
  ReductionMetrics m;
  m.transient_end = transient_end;
  for (std::size_t k = 0; k < full.times.size(); ++k) {
    const auto& s = full.states[k];
    if (s.size() < 3) throw DimensionError("reduction_error_metrics: states need (x, y, z)");
    const double ef = std::abs(s[Y] - phi(s[X]));
    const double ei = std::abs(s[X] - (s[Z] - prm.a));
    m.times.push_back(full.times[k]);
    m.e_fast.push_back(ef);
    m.e_int.push_back(ei);
    if (full.times[k] >= transient_end) {
      m.max_fast_post = std::max(m.max_fast_post, ef);
      m.max_int_post = std::max(m.max_int_post, ei);
    }
  }
  return m;
}

}  // namespace qcosym::fhn
