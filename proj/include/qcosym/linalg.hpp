#pragma once

// Small dense solves generic over the scalar type, so they can be
// differentiated through with dual numbers. Pivoting compares plain values.

#include <cmath>
#include <vector>

#include "qcosym/dual.hpp"
#include "qcosym/errors.hpp"
#include "qcosym/fields.hpp"

namespace qcosym {

/// Solve A x = b by LU with partial pivoting. Throws SingularError when a
/// pivot falls below `rel_pivot_tol` times the largest entry of A.
template <class T>
std::vector<T> lu_solve(BasicMatrix<T> A, std::vector<T> b, double rel_pivot_tol = 1e-13) {
  const std::size_t n = A.rows;
  if (A.cols != n || b.size() != n) throw DimensionError("lu_solve: shape mismatch");
  double scale = 0.0;
  for (const auto& a : A.data) scale = std::max(scale, std::abs(value_of(a)));
  if (scale == 0.0) throw SingularError("lu_solve: zero matrix");

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(value_of(A(k, k)));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::abs(value_of(A(i, k)));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best <= rel_pivot_tol * scale) throw SingularError("lu_solve: matrix is singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const T m = A(i, k) / A(k, k);
      for (std::size_t j = k; j < n; ++j) A(i, j) = A(i, j) - m * A(k, j);
      b[i] = b[i] - m * b[k];
    }
  }
  std::vector<T> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    T s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s = s - A(ii, j) * x[j];
    x[ii] = s / A(ii, ii);
  }
  return x;
}

/// Numerical rank from singular values: counts sigma_i > rel_tol * sigma_max.
std::size_t numerical_rank(const Matrix& A, double rel_tol = 1e-10);

/// Singular values in descending order.
std::vector<double> singular_values(const Matrix& A);

}  // namespace qcosym
