#include "qcosym/linalg.hpp"

#include <Eigen/Dense>

namespace qcosym {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& A) {
  Eigen::MatrixXd M(A.rows, A.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) M(i, j) = A(i, j);
  return M;
}

}  // namespace

std::vector<double> singular_values(const Matrix& A) {
  if (A.rows == 0 || A.cols == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(A));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::size_t numerical_rank(const Matrix& A, double rel_tol) {
  const auto s = singular_values(A);
  if (s.empty() || s.front() == 0.0) return 0;
  std::size_t r = 0;
  for (double v : s)
    if (v > rel_tol * s.front()) ++r;
  return r;
}

}  // namespace qcosym
