#include "qcosym/fields.hpp"

namespace qcosym {

Matrix hessian(const ScalarField& f, const Point& p, const DiffConfig& cfg) {
  const std::size_t n = p.size();
  if (n != f.dim())
    throw DimensionError("hessian: point dimension " + std::to_string(n) +
                         " != field dimension " + std::to_string(f.dim()));
  Matrix H(n, n);
  if (cfg.mode == DiffMode::dual) {
    std::vector<D2> q(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i)
          q[i] = D2(D1(p[i], i == j ? 1.0 : 0.0), D1(i == k ? 1.0 : 0.0, 0.0));
        H(j, k) = f.eval<D2>(q).d.d;
      }
    }
  } else {
    cfg.validate();
    // Nested central differences: the outer step is the square root of the
    // relative step, which balances truncation against cancellation for a
    // second derivative.
    DiffConfig inner = cfg;
    Point q = p;
    for (std::size_t k = 0; k < n; ++k) {
      const double h = std::sqrt(cfg.fd_step) * std::max(1.0, std::abs(p[k]));
      q[k] = p[k] + h;
      const auto gp = gradient(f, q, inner);
      q[k] = p[k] - h;
      const auto gm = gradient(f, q, inner);
      q[k] = p[k];
      for (std::size_t j = 0; j < n; ++j) H(j, k) = (gp[j] - gm[j]) / (2.0 * h);
    }
  }
  detail::require_finite_all(H.data, "hessian");
  return H;
}

}  // namespace qcosym
