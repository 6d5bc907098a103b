#include "legendre/linalg.hpp"

#include <limits>

namespace legendre::linalg {

namespace {

std::size_t count_above(const Vector& s, double rel_tol, double abs_floor) {
  if (s.size() == 0) return 0;
  const double smax = s.maxCoeff();
  if (smax <= 0.0) return 0;
  const double cut = std::max(rel_tol * smax, abs_floor);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > cut) ++r;
  return r;
}

}  // namespace

std::size_t numerical_rank(const Matrix& a, double rel_tol, double abs_floor) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return count_above(svd.singularValues(), rel_tol, abs_floor);
}

Matrix nullspace(const Matrix& a, double rel_tol, double abs_floor) {
  const Eigen::Index cols = a.cols();
  if (a.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto r = static_cast<Eigen::Index>(count_above(svd.singularValues(), rel_tol, abs_floor));
  return svd.matrixV().rightCols(cols - r);
}

Matrix orthonormal_range(const Matrix& columns, double rel_tol) {
  if (columns.cols() == 0) return Matrix(columns.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto r = static_cast<Eigen::Index>(count_above(svd.singularValues(), rel_tol, 0.0));
  return svd.matrixU().leftCols(r);
}

double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s[s.size() - 1];
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

}  // namespace legendre::linalg
