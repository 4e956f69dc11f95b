#pragma once

#include "ftvn/types.hpp"

namespace ftvn {

/// Eigenpairs of a real symmetric matrix, eigenvalues nonincreasing and
/// eigenvectors in the matching columns.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Matrix vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi iteration with a fixed row-by-row sweep order. Stops when the
/// off-diagonal Frobenius norm drops below off_tol * ||A||_F. Only the upper
/// triangle pattern matters; the input is symmetrized first.
SymmetricEigen jacobi_eigen(const Matrix& a, double off_tol = 1e-13, int max_sweeps = 64);

/// Row-major view helpers between flat coordinates and matrices.
Matrix unflatten(const Eigen::VectorXd& coords, Index rows, Index cols);
Eigen::VectorXd flatten(const Matrix& m);

}  // namespace ftvn
