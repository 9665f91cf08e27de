#pragma once

// Forward-mode dual numbers. Dual<Dual<double>> carries mixed second
// derivatives, which is what nested brackets and Hessians need.

#include <cmath>
#include <type_traits>

namespace qcosym {

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // directional derivative

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1.0) / b.v;
    return {a.v * inv, (a.d * b.v - a.v * b.d) * inv * inv};
  }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator+(const Dual& a) { return a; }

  friend Dual operator+(Dual a, double b) { a.v += b; return a; }
  friend Dual operator+(double b, Dual a) { a.v += b; return a; }
  friend Dual operator-(Dual a, double b) { a.v -= b; return a; }
  friend Dual operator-(double b, const Dual& a) { return {b - a.v, -a.d}; }
  friend Dual operator*(const Dual& a, double b) { return {a.v * b, a.d * b}; }
  friend Dual operator*(double b, const Dual& a) { return {a.v * b, a.d * b}; }
  friend Dual operator/(const Dual& a, double b) { return {a.v / b, a.d / b}; }
  friend Dual operator/(double b, const Dual& a) { return Dual(b) / a; }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

/// Nesting depth: double -> 0, D1 -> 1, D2 -> 2.
template <class T>
struct dual_depth : std::integral_constant<int, 0> {};
template <class T>
struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

template <class T>
bool is_finite(const T& x) {
  if constexpr (is_dual<T>::value) {
    return is_finite(x.v) && is_finite(x.d);
  } else {
    return std::isfinite(x);
  }
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {sin(x.v), x.d * cos(x.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {cos(x.v), -(x.d * sin(x.v))};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.v);
  return {e, x.d * e};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.v), x.d / x.v};
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T s = sqrt(x.v);
  return {s, x.d / (2.0 * s)};
}
template <class T>
Dual<T> tanh(const Dual<T>& x) {
  using std::tanh;
  T th = tanh(x.v);
  return {th, x.d * (1.0 - th * th)};
}

/// Integer power by repeated multiplication; exact for polynomials.
template <class T>
T ipow(const T& x, int k) {
  if (k < 0) return T(1.0) / ipow(x, -k);
  T r(1.0);
  for (int i = 0; i < k; ++i) r = r * x;
  return r;
}

}  // namespace qcosym
