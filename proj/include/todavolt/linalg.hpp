#pragma once

#include <Eigen/Dense>

namespace todavolt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Eigenpairs of a symmetric tridiagonal matrix, eigenvalues ascending,
/// eigenvectors as unit-norm columns.
struct TridiagonalEigen {
  Vector values;
  Matrix vectors;
};

/// Implicit symmetric QL/QR on the tridiagonal (diag, offdiag) pair.
TridiagonalEigen tridiagonal_eigen(const Vector& diag, const Vector& offdiag);

/// Eigenvalues only, ascending.
Vector tridiagonal_spectrum(const Vector& diag, const Vector& offdiag);

/// max_{ij} |M_ij + M_ji|
double antisymmetry_defect(const Matrix& m);

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const Matrix& m);
double max_abs(const Vector& v);

/// Dense power M^k for k >= 0.
Matrix matrix_power(const Matrix& m, int k);

}  // namespace todavolt
