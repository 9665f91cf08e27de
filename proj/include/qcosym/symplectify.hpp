#pragma once

// Symplectification of a canonical q-cosymplectic chart: append one momentum
// tau_i conjugate to each time t^i and use
//   Omega~ = sum_j dx^j ^ dp_j + sum_i dtau_i ^ dt^i
// on coordinates (x, p, t, tau). The Hamiltonian lifts as H o pi.

#include <span>
#include <vector>

#include "qcosym/geometry.hpp"

namespace qcosym {

struct SymplectifiedChart {
  QCosymplecticChart base;

  std::size_t dim() const { return base.dim() + base.q; }
  std::size_t tau_index(std::size_t i) const { return base.dim() + i; }
  /// Component matrix of Omega~, full rank.
  Matrix omega_tilde() const;
};

SymplectifiedChart symplectify(const QCosymplecticChart& base);

/// (x, p, t) -> (x, p, t, tau); taus default to zero.
Point lift_point(const QCosymplecticChart& base, const Point& p, std::span<const double> taus = {});

/// (x, p, t, tau) -> (x, p, t).
Point project_point(const QCosymplecticChart& base, const Point& lifted);

struct LiftedField {
  SymplectifiedChart chart;
  VectorFieldFn tilde_X;  // on dim() coordinates
};

/// X~_H = X_H + sum_i R_i(H) d/dtau_i.
LiftedField lift_hamiltonian_field(const HamiltonianSystem& sys, const DiffConfig& cfg = {});

struct LiftReport {
  std::vector<double> symplectic_residual;   // |i_X~ Omega~ - dH~|_inf per point
  std::vector<double> projection_residual;   // |T pi X~ - X_H|_inf per point
  double max_symplectic = 0.0;
  double max_projection = 0.0;
  bool pass = false;
};

LiftReport verify_lift(const HamiltonianSystem& sys, const LiftedField& lifted,
                       const std::vector<Point>& samples, double tol, const DiffConfig& cfg = {});

}  // namespace qcosym
