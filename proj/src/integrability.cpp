#include "qcosym/integrability.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "qcosym/linalg.hpp"

namespace qcosym {

void FirstIntegralSet::validate() const {
  if (fs.empty()) throw PreconditionError("first-integral set is empty");
  if (r < 1 || r > fs.size())
    throw PreconditionError("split index r = " + std::to_string(r) + " must lie in [1, m = " +
                            std::to_string(fs.size()) + "]");
  for (const auto& f : fs)
    if (f.dim() != fs.front().dim())
      throw DimensionError("first integrals live on different dimensions");
}

BracketTable bracket_table(const FirstIntegralSet& set, const QCosymplecticChart& chart,
                           const std::vector<Point>& samples, const DiffConfig& cfg) {
  set.validate();
  const std::size_t m = set.m();
  BracketTable t(m, std::vector<std::vector<double>>(m, std::vector<double>(samples.size(), 0.0)));
  for (std::size_t p = 0; p < samples.size(); ++p) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double v = poisson_bracket(set.fs[i], set.fs[j], chart, samples[p], cfg);
        t[i][j][p] = v;
        t[j][i][p] = -v;
      }
    }
  }
  return t;
}

StructureFit fit_structure_constants(const BracketTable& table, const FirstIntegralSet& set,
                                     const std::vector<Point>& samples, double tol) {
  set.validate();
  const std::size_t r = set.r, np = samples.size();
  if (table.size() < r) throw DimensionError("bracket table smaller than r");
  Eigen::MatrixXd F(np, r);
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t k = 0; k < r; ++k) F(p, k) = set.fs[k](samples[p]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(F);
  qr.setThreshold(1e-10);
  if (np < r || static_cast<std::size_t>(qr.rank()) < r)
    throw SingularError("structure-constant fit: the " + std::to_string(r) +
                        " integrals are linearly dependent on the samples; add or spread samples");

  StructureFit fit;
  fit.constants = StructureConstants(r);
  fit.tol = tol;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      if (table[i][j].size() != np) throw DimensionError("bracket table / sample count mismatch");
      Eigen::VectorXd b(np);
      for (std::size_t p = 0; p < np; ++p) b(p) = table[i][j][p];
      const Eigen::VectorXd c = qr.solve(b);
      const Eigen::VectorXd res = F * c - b;
      if (np > 0) fit.residual = std::max(fit.residual, res.cwiseAbs().maxCoeff());
      for (std::size_t k = 0; k < r; ++k) {
        fit.constants(i, j, k) = c(k);
        fit.constants(j, i, k) = -c(k);
      }
    }
  }
  fit.pass = fit.residual <= tol;
  return fit;
}

namespace {

// Orthonormal basis (columns) of the column space of M.
Eigen::MatrixXd column_basis(const Eigen::MatrixXd& M, double rel_tol) {
  if (M.cols() == 0) return Eigen::MatrixXd(M.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  if (s.size() > 0 && s(0) > 0.0)
    while (rank < s.size() && s(rank) > rel_tol * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

SolvabilityResult solvability_test(const StructureConstants& c, double rank_tol) {
  const std::size_t r = c.r;
  SolvabilityResult out;
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(r, r);
  out.derived_dims.push_back(r);
  while (L.cols() > 0) {
    const Eigen::Index k = L.cols();
    Eigen::MatrixXd br(r, k * (k - 1) / 2);
    Eigen::Index col = 0;
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = a + 1; b < k; ++b) {
        for (std::size_t out_k = 0; out_k < r; ++out_k) {
          double s = 0.0;
          for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) s += L(i, a) * L(j, b) * c(i, j, out_k);
          br(out_k, col) = s;
        }
        ++col;
      }
    }
    Eigen::MatrixXd next = column_basis(br, rank_tol);
    // Entries below rank_tol relative to the constants themselves count as zero.
    double cmax = 0.0;
    for (double v : c.c) cmax = std::max(cmax, std::abs(v));
    if (br.size() == 0 || br.cwiseAbs().maxCoeff() <= rank_tol * std::max(1.0, cmax))
      next = Eigen::MatrixXd(r, 0);
    out.derived_dims.push_back(static_cast<std::size_t>(next.cols()));
    if (next.cols() == k) break;  // stabilized
    L = next;
  }
  out.solvable = out.derived_dims.back() == 0;
  return out;
}

CenterConditionResult check_center_condition(const StructureConstants& c,
                                             const std::vector<double>& fiber_constants,
                                             double tol) {
  if (fiber_constants.size() != c.r)
    throw DimensionError("center condition needs " + std::to_string(c.r) + " fiber constants");
  CenterConditionResult out;
  for (std::size_t i = 0; i < c.r; ++i)
    for (std::size_t j = 0; j < c.r; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < c.r; ++k) s += c(i, j, k) * fiber_constants[k];
      out.max_violation = std::max(out.max_violation, std::abs(s));
    }
  out.ok = out.max_violation <= tol;
  return out;
}

std::vector<double> first_integral_drift(const HamiltonianSystem& sys, const FirstIntegralSet& set,
                                         const std::vector<double>& y0, double t0, double t1,
                                         const IntegratorConfig& cfg, const DiffConfig& dcfg) {
  set.validate();
  const auto E = evolution_field(sys, dcfg);
  const auto traj = integrate_field(E, y0, t0, t1, cfg);
  std::vector<double> drift(set.m(), 0.0);
  for (std::size_t i = 0; i < set.m(); ++i) {
    const double f0 = set.fs[i](y0);
    for (const auto& y : traj.states) drift[i] = std::max(drift[i], std::abs(set.fs[i](y) - f0));
  }
  return drift;
}

std::size_t independence_rank(const FirstIntegralSet& set, const std::vector<Point>& samples,
                              double rel_tol, const DiffConfig& cfg) {
  set.validate();
  const std::size_t m = set.m(), d = set.fs.front().dim();
  std::size_t best = m;
  for (const auto& p : samples) {
    Matrix G(m, d);
    for (std::size_t i = 0; i < m; ++i) {
      const auto g = gradient(set.fs[i], p, cfg);
      for (std::size_t a = 0; a < d; ++a) G(i, a) = g[a];
    }
    best = std::min(best, numerical_rank(G, rel_tol));
  }
  return best;
}

IntegrabilityReport integrability_report(const HamiltonianSystem& sys, const FirstIntegralSet& set,
                                         const std::vector<Point>& samples,
                                         const IntegrabilityOptions& opt, const DiffConfig& cfg) {
  sys.validate();
  set.validate();
  IntegrabilityReport rep;
  rep.m = set.m();
  rep.r = set.r;

  const auto table = bracket_table(set, sys.chart, samples, cfg);
  for (std::size_t i = 0; i < rep.m; ++i)
    for (std::size_t l = rep.r; l < rep.m; ++l)
      for (double v : table[i][l]) rep.max_commuting_bracket = std::max(rep.max_commuting_bracket, std::abs(v));
  rep.commuting_ok = rep.max_commuting_bracket <= opt.bracket_tol;

  try {
    rep.fit = fit_structure_constants(table, set, samples, opt.fit_tol);
    rep.solvability = solvability_test(rep.fit.constants);
    const auto fiber =
        opt.fiber_constants.empty() ? std::vector<double>(rep.r, 0.0) : opt.fiber_constants;
    rep.center = check_center_condition(rep.fit.constants, fiber, opt.center_tol);
  } catch (const SingularError& e) {
    rep.fit_error = e.what();
  }

  if (!opt.y0.empty()) {
    rep.drift = first_integral_drift(sys, set, opt.y0, opt.t0, opt.t1, opt.integrator, cfg);
    rep.drift_ok = std::all_of(rep.drift.begin(), rep.drift.end(),
                               [&](double d) { return d <= opt.drift_tol; });
  }
  rep.independence = independence_rank(set, samples, 1e-10, cfg);
  rep.independent = rep.independence == rep.m;
  rep.dimension_condition = 2 * sys.chart.n + sys.chart.q - 1 == rep.m + rep.r;
  return rep;
}

}  // namespace qcosym
