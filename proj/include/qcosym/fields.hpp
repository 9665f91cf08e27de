#pragma once

// Points, scalar and vector fields on coordinate charts, and their
// derivatives. A field built with `generic` is instantiated for double, D1
// and D2 so it can be differentiated exactly up to second order; a field
// built with `numeric` evaluates on doubles only and is limited to
// finite-difference mode.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "qcosym/dual.hpp"
#include "qcosym/errors.hpp"

namespace qcosym {

using Point = std::vector<double>;

/// Dense row-major matrix.
template <class T>
struct BasicMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  BasicMatrix() = default;
  BasicMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T(0.0)) {}

  T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }
};

using Matrix = BasicMatrix<double>;

enum class DiffMode { dual, finite_difference };

struct DiffConfig {
  DiffMode mode = DiffMode::dual;
  /// Relative central-difference step; the absolute step for coordinate j is
  /// fd_step * max(1, |x_j|).
  double fd_step = std::cbrt(std::numeric_limits<double>::epsilon());

  void validate() const {
    if (!(fd_step > 0.0) || !std::isfinite(fd_step))
      throw PreconditionError("DiffConfig.fd_step must be a positive finite number");
  }
};

namespace detail {

template <class T>
using ScalarSig = T(std::span<const T>);
template <class T>
using VectorSig = std::vector<T>(std::span<const T>);

template <template <class> class Sig>
struct Evaluators {
  std::function<Sig<double>> e0;
  std::function<Sig<D1>> e1;
  std::function<Sig<D2>> e2;

  template <class T>
  const std::function<Sig<T>>& get() const {
    if constexpr (std::is_same_v<T, double>) {
      return e0;
    } else if constexpr (std::is_same_v<T, D1>) {
      return e1;
    } else {
      static_assert(std::is_same_v<T, D2>, "fields evaluate on double, D1 or D2 only");
      return e2;
    }
  }
};

inline const char* scalar_name(int depth) {
  switch (depth) {
    case 0: return "double";
    case 1: return "first-order dual";
    default: return "second-order dual";
  }
}

}  // namespace detail

class ScalarField {
 public:
  ScalarField() = default;

  /// `f` must be callable as f(std::span<const T>) -> T (or double) for
  /// T in {double, D1, D2}; typically a generic lambda.
  template <class F>
  static ScalarField generic(std::size_t dim, F f) {
    ScalarField s;
    s.dim_ = dim;
    s.ev_.e0 = [f](std::span<const double> p) -> double { return f(p); };
    s.ev_.e1 = [f](std::span<const D1> p) -> D1 { return f(p); };
    s.ev_.e2 = [f](std::span<const D2> p) -> D2 { return f(p); };
    return s;
  }

  static ScalarField numeric(std::size_t dim, std::function<double(std::span<const double>)> f) {
    ScalarField s;
    s.dim_ = dim;
    s.ev_.e0 = std::move(f);
    return s;
  }

  /// Assemble from per-type evaluators; missing ones may be empty.
  static ScalarField from_parts(std::size_t dim, std::function<double(std::span<const double>)> f0,
                                std::function<D1(std::span<const D1>)> f1,
                                std::function<D2(std::span<const D2>)> f2) {
    ScalarField s;
    s.dim_ = dim;
    s.ev_.e0 = std::move(f0);
    s.ev_.e1 = std::move(f1);
    s.ev_.e2 = std::move(f2);
    return s;
  }

  std::size_t dim() const { return dim_; }

  template <class T>
  bool supports() const {
    return static_cast<bool>(ev_.template get<T>());
  }

  template <class T>
  T eval(std::span<const T> p) const {
    if (p.size() != dim_)
      throw DimensionError("scalar field of dimension " + std::to_string(dim_) +
                           " evaluated at a point of dimension " + std::to_string(p.size()));
    const auto& fn = ev_.template get<T>();
    if (!fn)
      throw DepthError(std::string("scalar field has no ") +
                       detail::scalar_name(dual_depth<T>::value) +
                       " evaluator; use finite-difference mode");
    return fn(p);
  }

  template <class T>
  T eval(const std::vector<T>& p) const {
    return eval<T>(std::span<const T>(p));
  }

  double operator()(std::span<const double> p) const { return eval<double>(p); }
  double operator()(const Point& p) const { return eval<double>(std::span<const double>(p)); }

 private:
  std::size_t dim_ = 0;
  detail::Evaluators<detail::ScalarSig> ev_;
};

/// Vector-valued field. `out_dim` equals `dim` for tangent vector fields; it
/// differs for covector and matrix-valued component maps used by charts.
class VectorFieldFn {
 public:
  VectorFieldFn() = default;

  template <class F>
  static VectorFieldFn generic(std::size_t dim, F f, std::size_t out_dim = 0) {
    VectorFieldFn v;
    v.dim_ = dim;
    v.out_dim_ = out_dim == 0 ? dim : out_dim;
    v.ev_.e0 = [f](std::span<const double> p) -> std::vector<double> { return f(p); };
    v.ev_.e1 = [f](std::span<const D1> p) -> std::vector<D1> { return f(p); };
    v.ev_.e2 = [f](std::span<const D2> p) -> std::vector<D2> { return f(p); };
    return v;
  }

  static VectorFieldFn numeric(std::size_t dim,
                               std::function<std::vector<double>(std::span<const double>)> f,
                               std::size_t out_dim = 0) {
    VectorFieldFn v;
    v.dim_ = dim;
    v.out_dim_ = out_dim == 0 ? dim : out_dim;
    v.ev_.e0 = std::move(f);
    return v;
  }

  /// Field with the same components at every point.
  static VectorFieldFn constant(std::size_t dim, std::vector<double> value) {
    std::size_t out = value.size();
    return generic(
        dim,
        [value](auto p) {
          using T = typename decltype(p)::value_type;
          std::vector<std::remove_cv_t<T>> r(value.size());
          for (std::size_t i = 0; i < value.size(); ++i) r[i] = value[i];
          return r;
        },
        out);
  }

  std::size_t dim() const { return dim_; }
  std::size_t out_dim() const { return out_dim_; }

  template <class T>
  bool supports() const {
    return static_cast<bool>(ev_.template get<T>());
  }

  template <class T>
  std::vector<T> eval(std::span<const T> p) const {
    if (p.size() != dim_)
      throw DimensionError("vector field of dimension " + std::to_string(dim_) +
                           " evaluated at a point of dimension " + std::to_string(p.size()));
    const auto& fn = ev_.template get<T>();
    if (!fn)
      throw DepthError(std::string("vector field has no ") +
                       detail::scalar_name(dual_depth<T>::value) +
                       " evaluator; use finite-difference mode");
    std::vector<T> out = fn(p);
    if (out.size() != out_dim_)
      throw DimensionError("vector field returned " + std::to_string(out.size()) +
                           " components, expected " + std::to_string(out_dim_));
    return out;
  }

  template <class T>
  std::vector<T> eval(const std::vector<T>& p) const {
    return eval<T>(std::span<const T>(p));
  }

  std::vector<double> operator()(const Point& p) const {
    return eval<double>(std::span<const double>(p));
  }

 private:
  std::size_t dim_ = 0;
  std::size_t out_dim_ = 0;
  detail::Evaluators<detail::VectorSig> ev_;
};

namespace detail {

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteError(std::string(what) + " produced a non-finite value");
}

template <class T>
void require_finite_all(const std::vector<T>& v, const char* what) {
  for (const auto& x : v)
    if (!is_finite(x)) throw NonFiniteError(std::string(what) + " produced a non-finite value");
}

/// Seed direction j: lift a point of T into Dual<T> with unit tangent e_j.
template <class T>
std::vector<Dual<T>> seed(std::span<const T> p, std::size_t j) {
  std::vector<Dual<T>> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = Dual<T>(p[i], T(i == j ? 1.0 : 0.0));
  return out;
}

inline double fd_step(const DiffConfig& cfg, double x) {
  return cfg.fd_step * std::max(1.0, std::abs(x));
}

}  // namespace detail

/// Gradient of f at p. Dual mode evaluates f on Dual<T>, so T = D2 is out of
/// reach; finite-difference mode differentiates double points only.
template <class T>
std::vector<T> gradient(const ScalarField& f, std::span<const T> p, const DiffConfig& cfg) {
  if (p.size() != f.dim())
    throw DimensionError("gradient: point dimension " + std::to_string(p.size()) +
                         " != field dimension " + std::to_string(f.dim()));
  std::vector<T> g(p.size());
  if (cfg.mode == DiffMode::dual) {
    if constexpr (dual_depth<T>::value >= 2) {
      throw DepthError("gradient: nested differentiation deeper than second order");
    } else {
      for (std::size_t j = 0; j < p.size(); ++j) {
        auto q = detail::seed<T>(p, j);
        g[j] = f.eval<Dual<T>>(std::span<const Dual<T>>(q)).d;
      }
    }
  } else {
    if constexpr (!std::is_same_v<T, double>) {
      throw DepthError("gradient: finite-difference mode differentiates double points only");
    } else {
      cfg.validate();
      Point q(p.begin(), p.end());
      for (std::size_t j = 0; j < p.size(); ++j) {
        const double h = detail::fd_step(cfg, p[j]);
        q[j] = p[j] + h;
        const double fp = f(q);
        q[j] = p[j] - h;
        const double fm = f(q);
        q[j] = p[j];
        g[j] = (fp - fm) / (2.0 * h);
      }
    }
  }
  detail::require_finite_all(g, "gradient");
  return g;
}

inline std::vector<double> gradient(const ScalarField& f, const Point& p,
                                    const DiffConfig& cfg = {}) {
  return gradient<double>(f, std::span<const double>(p), cfg);
}

/// Jacobian of v at p: entry (i, j) is d v_i / d x_j.
template <class T>
BasicMatrix<T> jacobian(const VectorFieldFn& v, std::span<const T> p, const DiffConfig& cfg) {
  if (p.size() != v.dim())
    throw DimensionError("jacobian: point dimension " + std::to_string(p.size()) +
                         " != field dimension " + std::to_string(v.dim()));
  BasicMatrix<T> J(v.out_dim(), v.dim());
  if (cfg.mode == DiffMode::dual) {
    if constexpr (dual_depth<T>::value >= 2) {
      throw DepthError("jacobian: nested differentiation deeper than second order");
    } else {
      for (std::size_t j = 0; j < p.size(); ++j) {
        auto q = detail::seed<T>(p, j);
        auto col = v.eval<Dual<T>>(std::span<const Dual<T>>(q));
        for (std::size_t i = 0; i < col.size(); ++i) J(i, j) = col[i].d;
      }
    }
  } else {
    if constexpr (!std::is_same_v<T, double>) {
      throw DepthError("jacobian: finite-difference mode differentiates double points only");
    } else {
      cfg.validate();
      Point q(p.begin(), p.end());
      for (std::size_t j = 0; j < p.size(); ++j) {
        const double h = detail::fd_step(cfg, p[j]);
        q[j] = p[j] + h;
        auto fp = v(q);
        q[j] = p[j] - h;
        auto fm = v(q);
        q[j] = p[j];
        for (std::size_t i = 0; i < fp.size(); ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * h);
      }
    }
  }
  detail::require_finite_all(J.data, "jacobian");
  return J;
}

inline Matrix jacobian(const VectorFieldFn& v, const Point& p, const DiffConfig& cfg = {}) {
  return jacobian<double>(v, std::span<const double>(p), cfg);
}

/// [v, w](p) = (Dw) v - (Dv) w.
template <class T>
std::vector<T> lie_bracket(const VectorFieldFn& v, const VectorFieldFn& w, std::span<const T> p,
                           const DiffConfig& cfg) {
  if (v.dim() != w.dim() || v.out_dim() != v.dim() || w.out_dim() != w.dim())
    throw DimensionError("lie_bracket: fields must be tangent fields of equal dimension");
  const auto Jv = jacobian<T>(v, p, cfg);
  const auto Jw = jacobian<T>(w, p, cfg);
  const auto vp = v.eval<T>(p);
  const auto wp = w.eval<T>(p);
  const std::size_t n = v.dim();
  std::vector<T> out(n, T(0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] = out[i] + Jw(i, j) * vp[j] - Jv(i, j) * wp[j];
  return out;
}

inline std::vector<double> lie_bracket(const VectorFieldFn& v, const VectorFieldFn& w,
                                       const Point& p, const DiffConfig& cfg = {}) {
  return lie_bracket<double>(v, w, std::span<const double>(p), cfg);
}

/// Hessian of f at a double point; entry (j, k) is d^2 f / dx_j dx_k computed
/// with x_j as the inner and x_k as the outer differentiation variable, so
/// the matrix is not forced symmetric.
Matrix hessian(const ScalarField& f, const Point& p, const DiffConfig& cfg = {});

}  // namespace qcosym
