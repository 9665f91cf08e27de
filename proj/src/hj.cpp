#include "qcosym/hj.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace qcosym {

IsotropyVerdict isotropy_check(const SectionFromS& section, const std::vector<Point>& samples,
                               double tol, const DiffConfig& cfg) {
  const std::size_t nx = section.nx, nt = section.nt;
  if (section.S.dim() != nx + nt)
    throw DimensionError("isotropy_check: S has dimension " + std::to_string(section.S.dim()) +
                         ", expected nx + nt = " + std::to_string(nx + nt));
  IsotropyVerdict v;
  v.tol = tol;
  for (const auto& p : samples) {
    const Matrix H = hessian(section.S, p, cfg);
    double sym = 0.0, mixed = 0.0;
    for (std::size_t j = 0; j < nx; ++j) {
      for (std::size_t k = j + 1; k < nx; ++k) sym = std::max(sym, std::abs(H(j, k) - H(k, j)));
      for (std::size_t i = 0; i < nt; ++i) mixed = std::max(mixed, std::abs(H(nx + i, j)));
    }
    v.symmetry.push_back(sym);
    v.mixed.push_back(mixed);
    v.max_symmetry = std::max(v.max_symmetry, sym);
    v.max_mixed = std::max(v.max_mixed, mixed);
  }
  v.pass = v.max_symmetry <= tol && v.max_mixed <= tol;
  return v;
}

std::vector<double> hj_residual(const ScalarField& S, const fhn::FhnParams& prm,
                                const std::vector<Point>& samples, const DiffConfig& cfg) {
  prm.validate();
  if (S.dim() != 4) throw DimensionError("hj_residual: S must live on (x, y, z, t_s)");
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& p : samples) {
    const auto g = gradient(S, p, cfg);
    const double x = p[0], y = p[1], z = p[2], ts = p[3];
    out.push_back(g[0] * fhn::fast_f(x, y) / prm.eps + g[1] * (x + prm.a - z) / prm.delta +
                  g[2] * (prm.b(ts) * x - prm.c(ts) * z) + g[3]);
  }
  return out;
}

std::size_t QuadraticGeneratingFn::segment(double ts) const {
  if (grid.empty()) throw PreconditionError("quadratic S has an empty grid");
  if (!(ts >= grid.front() && ts <= grid.back()))
    throw PreconditionError("t_s = " + std::to_string(ts) + " outside the coefficient grid [" +
                            std::to_string(grid.front()) + ", " + std::to_string(grid.back()) +
                            "]");
  if (grid.size() == 1) return 0;
  auto it = std::upper_bound(grid.begin(), grid.end(), ts);
  std::size_t k = static_cast<std::size_t>(it - grid.begin());
  return std::min(k == 0 ? 0 : k - 1, grid.size() - 2);
}

namespace {

void pqr_rates(const Matrix& A, std::span<const double> P, std::span<const double> Q,
               std::span<double> dP, std::span<double> dQ) {
  const std::size_t d = A.rows;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += A(k, i) * P[k * d + j] + P[i * d + k] * A(k, j);
      dP[i * d + j] = -s;
    }
    double q = 0.0;
    for (std::size_t k = 0; k < d; ++k) q += A(k, i) * Q[k];
    dQ[i] = -q;
  }
}

Matrix checked_A(const MatrixFunction& A, double t, std::size_t d) {
  Matrix m = A(t);
  if (m.rows != d || m.cols != d)
    throw DimensionError("A(t_s) must be " + std::to_string(d) + "x" + std::to_string(d));
  return m;
}

void check_P0(const Matrix& P0, std::size_t qdim) {
  if (P0.rows == 0 || P0.rows != P0.cols) throw DimensionError("P0 must be square and non-empty");
  if (qdim != P0.rows) throw DimensionError("Q0 length must match P0");
  double scale = 1.0;
  for (double v : P0.data) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < P0.rows; ++i)
    for (std::size_t j = i + 1; j < P0.cols; ++j)
      if (std::abs(P0(i, j) - P0(j, i)) > 1e-12 * scale)
        throw PreconditionError("P0 must be symmetric");
}

}  // namespace

QuadraticGeneratingFn solve_PQR(const MatrixFunction& A, const Matrix& P0,
                                const std::vector<double>& Q0, double R0, double t0, double t1,
                                const IntegratorConfig& cfg,
                                std::span<const double> output_times) {
  check_P0(P0, Q0.size());
  const std::size_t d = P0.rows, dd = d * d;
  OdeProblem prob;
  prob.t0 = t0;
  prob.t1 = t1;
  prob.y0 = P0.data;
  prob.y0.insert(prob.y0.end(), Q0.begin(), Q0.end());
  prob.y0.push_back(R0);
  prob.rhs = [&A, d, dd](double t, std::span<const double> y, std::span<double> dy) {
    const Matrix At = checked_A(A, t, d);
    pqr_rates(At, y.first(dd), y.subspan(dd, d), dy.first(dd), dy.subspan(dd, d));
    dy[dd + d] = 0.0;
  };
  const auto traj = integrate_dp45(prob, cfg, output_times);

  QuadraticGeneratingFn gen;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& y = traj.states[k];
    Matrix P(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) P(i, j) = 0.5 * (y[i * d + j] + y[j * d + i]);
    std::vector<double> Q(y.begin() + dd, y.begin() + dd + d);
    Matrix dP(d, d);
    std::vector<double> dQ(d);
    pqr_rates(checked_A(A, traj.times[k], d), P.data, Q, dP.data, dQ);
    gen.grid.push_back(traj.times[k]);
    gen.P.push_back(std::move(P));
    gen.Q.push_back(std::move(Q));
    gen.R.push_back(y[dd + d]);
    gen.P_dot.push_back(std::move(dP));
    gen.Q_dot.push_back(std::move(dQ));
  }
  return gen;
}

MatrixFunction fhn_jacobian_path(const fhn::FhnParams& prm) {
  prm.validate();
  return [prm](double ts) { return fhn::jacobian_A(prm, ts, fhn::equilibrium(prm, ts)); };
}

VectorFieldFn fhn_equilibrium_path(const fhn::FhnParams& prm) {
  prm.validate();
  return VectorFieldFn::generic(
      1,
      [prm](auto p) {
        using T = typename decltype(p)::value_type;
        const T b = prm.b(p[0]);
        const T c = prm.c(p[0]);
        if (value_of(b) == value_of(c))
          throw SingularError("equilibrium path: b(t_s) == c(t_s)");
        const T xe = c * prm.a / (b - c);
        return std::vector<T>{xe, fhn::phi(xe), xe + prm.a};
      },
      3);
}

QuadraticGeneratingFn linearize_fhn(const fhn::FhnParams& prm, const Matrix& P0,
                                    const std::vector<double>& Q0, double R0, double t0, double t1,
                                    const IntegratorConfig& cfg,
                                    std::span<const double> output_times) {
  if (P0.rows != 3) throw DimensionError("linearize_fhn: P0 must be 3x3");
  auto gen = solve_PQR(fhn_jacobian_path(prm), P0, Q0, R0, t0, t1, cfg, output_times);
  gen.equilibrium_path = fhn_equilibrium_path(prm);
  return gen;
}

double eval_S_quadratic(const QuadraticGeneratingFn& gen, const Point& point, double ts) {
  return gen.eval<double>(std::span<const double>(point), ts);
}

ScalarField quadratic_field(std::shared_ptr<const QuadraticGeneratingFn> gen) {
  const std::size_t d = gen->dim();
  return ScalarField::generic(d + 1, [gen, d](auto p) {
    return gen->eval(p.first(d), p[d]);
  });
}

InvariantDrift quadratic_invariant_drift(const MatrixFunction& A, const Matrix& P0,
                                         const std::vector<double>& Q0,
                                         const std::vector<double>& u0, double t0, double t1,
                                         const IntegratorConfig& cfg,
                                         std::span<const double> output_times) {
  check_P0(P0, Q0.size());
  const std::size_t d = P0.rows, dd = d * d;
  if (u0.size() != d) throw DimensionError("u0 length must match P0");
  OdeProblem prob;
  prob.t0 = t0;
  prob.t1 = t1;
  prob.y0 = P0.data;
  prob.y0.insert(prob.y0.end(), Q0.begin(), Q0.end());
  prob.y0.insert(prob.y0.end(), u0.begin(), u0.end());
  prob.rhs = [&A, d, dd](double t, std::span<const double> y, std::span<double> dy) {
    const Matrix At = checked_A(A, t, d);
    pqr_rates(At, y.first(dd), y.subspan(dd, d), dy.first(dd), dy.subspan(dd, d));
    const auto u = y.subspan(dd + d, d);
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += At(i, j) * u[j];
      dy[dd + d + i] = s;
    }
  };
  const auto traj = integrate_dp45(prob, cfg, output_times);

  InvariantDrift out;
  double uPu0 = 0.0, Qu0 = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& y = traj.states[k];
    double uPu = 0.0, Qu = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double ui = y[dd + d + i];
      Qu += y[dd + i] * ui;
      for (std::size_t j = 0; j < d; ++j) uPu += ui * 0.5 * (y[i * d + j] + y[j * d + i]) * y[dd + d + j];
    }
    if (k == 0) {
      uPu0 = uPu;
      Qu0 = Qu;
    }
    out.times.push_back(traj.times[k]);
    out.uPu.push_back(uPu);
    out.Qu.push_back(Qu);
    out.max_uPu_drift = std::max(out.max_uPu_drift, std::abs(uPu - uPu0));
    out.max_Qu_drift = std::max(out.max_Qu_drift, std::abs(Qu - Qu0));
  }
  return out;
}

std::size_t CharacteristicFan::failed() const {
  return static_cast<std::size_t>(
      std::count_if(curves.begin(), curves.end(), [](const auto& c) { return !c.error.empty(); }));
}

namespace {

CharacteristicCurve trace_one(const fhn::FhnParams& prm, const CharacteristicSeed& seed, double E,
                              double s0, double s1, const IntegratorConfig& cfg,
                              std::span<const double> output_s) {
  CharacteristicCurve curve;
  curve.S = seed.S;
  for (double v : {seed.x, seed.y, seed.z, seed.ts, seed.S})
    if (!std::isfinite(v)) {
      curve.error = "seed is not finite";
      return curve;
    }
  OdeProblem prob;
  prob.t0 = s0;
  prob.t1 = s1;
  prob.y0 = {seed.x, seed.y, seed.z, seed.ts};
  prob.rhs = [&prm, E](double, std::span<const double> w, std::span<double> dw) {
    dw[0] = fhn::fast_f(w[0], w[1]) / prm.eps;
    dw[1] = (w[0] + prm.a - w[2]) / prm.delta;
    dw[2] = prm.b(w[3]) * w[0] - prm.c(w[3]) * w[2];
    dw[3] = E;
  };
  try {
    const auto traj = integrate_dp45(prob, cfg, output_s);
    curve.s = traj.times;
    for (const auto& w : traj.states) curve.points.push_back({w[0], w[1], w[2], w[3]});
  } catch (const Error& e) {
    curve.error = e.what();
  }
  // S is carried, never integrated, so every sample holds the seed value.
  curve.max_S_deviation = std::abs(curve.S - seed.S);
  return curve;
}

}  // namespace

CharacteristicFan trace_characteristics(const fhn::FhnParams& prm,
                                        const std::vector<CharacteristicSeed>& seeds, double E,
                                        double s0, double s1, const IntegratorConfig& cfg,
                                        std::span<const double> output_s, unsigned threads) {
  prm.validate();
  cfg.validate();
  if (!std::isfinite(E)) throw PreconditionError("E must be finite");
  CharacteristicFan fan;
  fan.curves.resize(seeds.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(seeds.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++)
      fan.curves[i] = trace_one(prm, seeds[i], E, s0, s1, cfg, output_s);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return fan;
}

}  // namespace qcosym
