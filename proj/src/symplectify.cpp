#include "qcosym/symplectify.hpp"

#include <algorithm>
#include <cmath>

namespace qcosym {

namespace {

void require_canonical(const QCosymplecticChart& base) {
  if (!base.canonical)
    throw PreconditionError("symplectification is defined for canonical base charts only");
}

}  // namespace

Matrix SymplectifiedChart::omega_tilde() const {
  const std::size_t d = dim();
  Matrix W(d, d);
  for (std::size_t j = 0; j < base.n; ++j) {
    W(j, base.n + j) = 1.0;
    W(base.n + j, j) = -1.0;
  }
  for (std::size_t i = 0; i < base.q; ++i) {
    // dtau ^ dt: W(tau, t) = +1
    W(tau_index(i), base.time_index(i)) = 1.0;
    W(base.time_index(i), tau_index(i)) = -1.0;
  }
  return W;
}

SymplectifiedChart symplectify(const QCosymplecticChart& base) {
  require_canonical(base);
  return SymplectifiedChart{base};
}

Point lift_point(const QCosymplecticChart& base, const Point& p, std::span<const double> taus) {
  if (p.size() != base.dim()) throw DimensionError("lift_point: point is not on the base chart");
  if (!taus.empty() && taus.size() != base.q)
    throw DimensionError("lift_point: expected one tau per time direction");
  Point out = p;
  for (std::size_t i = 0; i < base.q; ++i) out.push_back(taus.empty() ? 0.0 : taus[i]);
  return out;
}

Point project_point(const QCosymplecticChart& base, const Point& lifted) {
  if (lifted.size() != base.dim() + base.q)
    throw DimensionError("project_point: point is not on the symplectified chart");
  return Point(lifted.begin(), lifted.begin() + static_cast<std::ptrdiff_t>(base.dim()));
}

LiftedField lift_hamiltonian_field(const HamiltonianSystem& sys, const DiffConfig& cfg) {
  sys.validate();
  require_canonical(sys.chart);
  LiftedField lf{symplectify(sys.chart), {}};
  const std::size_t base_dim = sys.chart.dim();
  auto eval = [sys, cfg, base_dim](auto p) {
    using T = typename decltype(p)::value_type;
    auto base_p = p.first(base_dim);
    auto X = hamiltonian_vector<T>(sys.chart, sys.H, base_p, cfg);
    const auto dH = gradient<T>(sys.H, base_p, cfg);
    for (std::size_t i = 0; i < sys.chart.q; ++i) X.push_back(dH[sys.chart.time_index(i)]);
    return X;
  };
  const std::size_t d = lf.chart.dim();
  if (cfg.mode == DiffMode::finite_difference)
    lf.tilde_X = VectorFieldFn::numeric(d, [eval](std::span<const double> p) { return eval(p); });
  else
    lf.tilde_X = VectorFieldFn::generic(d, eval);
  return lf;
}

LiftReport verify_lift(const HamiltonianSystem& sys, const LiftedField& lifted,
                       const std::vector<Point>& samples, double tol, const DiffConfig& cfg) {
  if (samples.empty()) throw PreconditionError("verify_lift: empty sample set");
  require_canonical(sys.chart);
  const Matrix W = lifted.chart.omega_tilde();
  const std::size_t d = lifted.chart.dim();
  const std::size_t base_dim = sys.chart.dim();

  LiftReport rep;
  for (const auto& p : samples) {
    if (p.size() != d) throw DimensionError("verify_lift: sample is not on the extended chart");
    const auto X = lifted.tilde_X(p);
    const Point base_p = project_point(sys.chart, p);
    auto dH = gradient(sys.H, base_p, cfg);
    dH.resize(d, 0.0);  // H o pi has no tau dependence

    double res = 0.0;
    for (std::size_t b = 0; b < d; ++b) {
      double s = 0.0;
      for (std::size_t a = 0; a < d; ++a) s += X[a] * W(a, b);
      res = std::max(res, std::abs(s - dH[b]));
    }
    const auto XH = hamiltonian_vector<double>(sys.chart, sys.H, base_p, cfg);
    double proj = 0.0;
    for (std::size_t a = 0; a < base_dim; ++a) proj = std::max(proj, std::abs(X[a] - XH[a]));

    rep.symplectic_residual.push_back(res);
    rep.projection_residual.push_back(proj);
    rep.max_symplectic = std::max(rep.max_symplectic, res);
    rep.max_projection = std::max(rep.max_projection, proj);
  }
  rep.pass = rep.max_symplectic <= tol && rep.max_projection <= tol;
  return rep;
}

}  // namespace qcosym
