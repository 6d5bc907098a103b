#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace legendre::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;

// Singular values below rel_tol * s_max (or below abs_floor) count as zero.
inline constexpr double kRelativeRankTol = 1e-10;

std::size_t numerical_rank(const Matrix& a, double rel_tol = kRelativeRankTol, double abs_floor = 0.0);

// Orthonormal columns spanning {v : a v = 0}.
Matrix nullspace(const Matrix& a, double rel_tol = kRelativeRankTol, double abs_floor = 0.0);

// Orthonormal columns spanning the column space of `columns`.
Matrix orthonormal_range(const Matrix& columns, double rel_tol = kRelativeRankTol);

// Ratio of extreme singular values; infinity for rank-deficient input.
double condition_number(const Matrix& a);

}  // namespace legendre::linalg
