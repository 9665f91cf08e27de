#include "qcosym/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace qcosym {

QCosymplecticChart canonical_chart(const CanonicalChartSpec& spec) {
  if (spec.n == 0 || spec.q == 0)
    throw PreconditionError("canonical_chart: n and q must be at least 1");
  QCosymplecticChart c;
  c.n = spec.n;
  c.q = spec.q;
  c.canonical = true;
  const std::size_t d = c.dim();

  std::vector<double> W(d * d, 0.0);
  for (std::size_t j = 0; j < c.n; ++j) {
    W[j * d + (c.n + j)] = 1.0;
    W[(c.n + j) * d + j] = -1.0;
  }
  c.omega = VectorFieldFn::constant(d, W);
  for (std::size_t i = 0; i < c.q; ++i) {
    std::vector<double> e(d, 0.0);
    e[c.time_index(i)] = 1.0;
    c.lambdas.push_back(VectorFieldFn::constant(d, e));
    c.reebs.push_back(VectorFieldFn::constant(d, e));
  }
  return c;
}

StructureResiduals ValidationVerdict::worst() const {
  StructureResiduals w;
  w.rank = points.empty() ? 0 : points.front().rank;
  for (const auto& r : points) {
    w.antisymmetry = std::max(w.antisymmetry, r.antisymmetry);
    w.coframe = std::max(w.coframe, r.coframe);
    w.kernel = std::max(w.kernel, r.kernel);
    w.commutation = std::max(w.commutation, r.commutation);
    if (r.rank != expected_rank) w.rank = r.rank;
  }
  return w;
}

ValidationVerdict validate_structure(const QCosymplecticChart& chart,
                                     const std::vector<Point>& samples, double tol,
                                     const DiffConfig& cfg) {
  if (samples.empty()) throw PreconditionError("validate_structure: empty sample set");
  if (chart.lambdas.size() != chart.q || chart.reebs.size() != chart.q)
    throw DimensionError("validate_structure: chart must carry q lambdas and q Reeb fields");
  const std::size_t d = chart.dim();

  ValidationVerdict v;
  v.tol = tol;
  v.expected_rank = 2 * chart.n;
  for (const auto& p : samples) {
    if (p.size() != d)
      throw DimensionError("validate_structure: sample of dimension " + std::to_string(p.size()) +
                           " on a chart of dimension " + std::to_string(d));
    StructureResiduals r;
    // Axioms are checked on the stored component maps even for canonical
    // charts, so a tampered canonical chart is still caught.
    Matrix W;
    W.rows = W.cols = d;
    W.data = chart.omega(p);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        r.antisymmetry = std::max(r.antisymmetry, std::abs(W(a, b) + W(b, a)));
    r.rank = numerical_rank(W);

    std::vector<std::vector<double>> lam(chart.q), R(chart.q);
    for (std::size_t i = 0; i < chart.q; ++i) {
      lam[i] = chart.lambdas[i](p);
      R[i] = chart.reebs[i](p);
    }
    for (std::size_t i = 0; i < chart.q; ++i) {
      for (std::size_t j = 0; j < chart.q; ++j) {
        double s = 0.0;
        for (std::size_t a = 0; a < d; ++a) s += lam[i][a] * R[j][a];
        r.coframe = std::max(r.coframe, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
      for (std::size_t b = 0; b < d; ++b) {
        double s = 0.0;
        for (std::size_t a = 0; a < d; ++a) s += R[i][a] * W(a, b);
        r.kernel = std::max(r.kernel, std::abs(s));
      }
      for (std::size_t j = i + 1; j < chart.q; ++j) {
        const auto br = lie_bracket(chart.reebs[i], chart.reebs[j], p, cfg);
        for (double x : br) r.commutation = std::max(r.commutation, std::abs(x));
      }
    }
    v.points.push_back(r);
  }

  const auto w = v.worst();
  if (w.antisymmetry > tol)
    v.failure = "omega is not antisymmetric";
  else if (w.coframe > tol)
    v.failure = "lambda_i(R_j) != delta_ij";
  else if (w.kernel > tol)
    v.failure = "Omega(R_i, .) != 0";
  else if (w.rank != v.expected_rank)
    v.failure = "rank of Omega is " + std::to_string(w.rank) + ", expected " +
                std::to_string(v.expected_rank);
  else if (w.commutation > tol)
    v.failure = "Reeb fields do not commute";
  v.pass = v.failure.empty();
  return v;
}

void HamiltonianSystem::validate() const {
  if (H.dim() != chart.dim())
    throw DimensionError("HamiltonianSystem: H dimension does not match the chart");
  if (alphas.size() != chart.q)
    throw DimensionError("HamiltonianSystem: expected one clock rate per time direction");
  for (const auto& a : alphas)
    if (a.dim() != chart.dim())
      throw DimensionError("HamiltonianSystem: clock rate dimension does not match the chart");
}

ScalarField bracket_field(const ScalarField& f, const ScalarField& g,
                          const QCosymplecticChart& chart, const DiffConfig& cfg) {
  const std::size_t d = chart.dim();
  if (f.dim() != d || g.dim() != d)
    throw DimensionError("bracket_field: fields must live on the chart");
  auto e0 = [=](std::span<const double> p) { return poisson_bracket<double>(f, g, chart, p, cfg); };
  std::function<D1(std::span<const D1>)> e1;
  if (cfg.mode == DiffMode::dual)
    e1 = [=](std::span<const D1> p) { return poisson_bracket<D1>(f, g, chart, p, cfg); };
  return ScalarField::from_parts(d, e0, e1, {});
}

namespace {

template <class T>
std::vector<T> evolution_at(const HamiltonianSystem& sys, std::span<const T> p,
                            const DiffConfig& cfg) {
  auto X = hamiltonian_vector<T>(sys.chart, sys.H, p, cfg);
  for (std::size_t i = 0; i < sys.chart.q; ++i) {
    const T alpha = sys.alphas[i].eval<T>(p);
    const auto R = sys.chart.reebs[i].eval<T>(p);
    for (std::size_t a = 0; a < X.size(); ++a) X[a] = X[a] + alpha * R[a];
  }
  return X;
}

}  // namespace

VectorFieldFn hamiltonian_vector_field(const HamiltonianSystem& sys, const DiffConfig& cfg) {
  sys.validate();
  cfg.validate();
  if (cfg.mode == DiffMode::finite_difference) {
    return VectorFieldFn::numeric(sys.chart.dim(), [sys, cfg](std::span<const double> p) {
      return hamiltonian_vector<double>(sys.chart, sys.H, p, cfg);
    });
  }
  return VectorFieldFn::generic(sys.chart.dim(), [sys, cfg](auto p) {
    using T = typename decltype(p)::value_type;
    return hamiltonian_vector<T>(sys.chart, sys.H, p, cfg);
  });
}

VectorFieldFn evolution_field(const HamiltonianSystem& sys, const DiffConfig& cfg) {
  sys.validate();
  cfg.validate();
  if (cfg.mode == DiffMode::finite_difference) {
    return VectorFieldFn::numeric(sys.chart.dim(), [sys, cfg](std::span<const double> p) {
      return evolution_at<double>(sys, p, cfg);
    });
  }
  return VectorFieldFn::generic(sys.chart.dim(), [sys, cfg](auto p) {
    using T = typename decltype(p)::value_type;
    return evolution_at<T>(sys, p, cfg);
  });
}

ScalarField coordinate_field(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("coordinate_field: index out of range");
  return ScalarField::generic(dim, [index](auto p) { return p[index]; });
}

ScalarField constant_field(std::size_t dim, double value) {
  return ScalarField::generic(dim, [value](auto) { return value; });
}

}  // namespace qcosym
