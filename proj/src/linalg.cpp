#include "todavolt/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "todavolt/errors.hpp"

namespace todavolt {

TridiagonalEigen tridiagonal_eigen(const Vector& diag, const Vector& offdiag) {
  const auto n = diag.size();
  if (n == 0 || offdiag.size() != n - 1) {
    throw DomainError("tridiagonal_eigen: offdiag must have length n-1");
  }
  if (n == 1) {
    return {diag, Matrix::Identity(1, 1)};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error("tridiagonal_eigen: QL iteration did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector tridiagonal_spectrum(const Vector& diag, const Vector& offdiag) {
  const auto n = diag.size();
  if (n == 0 || offdiag.size() != n - 1) {
    throw DomainError("tridiagonal_spectrum: offdiag must have length n-1");
  }
  if (n == 1) return diag;
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(diag, offdiag, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("tridiagonal_spectrum: QL iteration did not converge");
  }
  return solver.eigenvalues();
}

double antisymmetry_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m + m.transpose()).cwiseAbs().maxCoeff();
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

Matrix matrix_power(const Matrix& m, int k) {
  Matrix result = Matrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) result = result * m;
  return result;
}

}  // namespace todavolt
