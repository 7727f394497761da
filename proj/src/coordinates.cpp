#include "todavolt/coordinates.hpp"

#include <cmath>

#include "todavolt/errors.hpp"

namespace todavolt::coordinates {

namespace {

Vector exp_differences(const Vector& q) {
  const auto n = q.size();
  Vector a(n > 0 ? n - 1 : 0);
  for (Eigen::Index i = 0; i + 1 < n; ++i) a[i] = std::exp(q[i] - q[i + 1]);
  return a;
}

Matrix exp_differences_jacobian(const Vector& q) {
  const auto n = q.size();
  Matrix d = Matrix::Zero(n - 1, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double a = std::exp(q[i] - q[i + 1]);
    d(i, i) = a;
    d(i, i + 1) = -a;
  }
  return d;
}

Vector log_preimage(const Vector& a) {
  const auto n = a.size() + 1;
  Vector q = Vector::Zero(n);
  for (Eigen::Index i = n - 2; i >= 0; --i) {
    if (!(a[i] > 0.0)) throw DomainError("preimage: a_i must be positive");
    q[i] = q[i + 1] + std::log(a[i]);
  }
  return q;
}

}  // namespace

Vector flaschka(const Vector& qp) {
  if (qp.size() < 2 || qp.size() % 2 != 0) throw DomainError("flaschka: length must be 2N");
  const auto n = qp.size() / 2;
  Vector ab(2 * n - 1);
  ab << exp_differences(qp.head(n)), -qp.tail(n);
  return ab;
}

Matrix flaschka_jacobian(const Vector& qp) {
  if (qp.size() < 2 || qp.size() % 2 != 0) throw DomainError("flaschka: length must be 2N");
  const auto n = qp.size() / 2;
  Matrix d = Matrix::Zero(2 * n - 1, 2 * n);
  d.topLeftCorner(n - 1, n) = exp_differences_jacobian(qp.head(n));
  d.bottomRightCorner(n, n) = -Matrix::Identity(n, n);
  return d;
}

Vector flaschka_preimage(const Vector& ab) {
  if (ab.size() % 2 != 1) throw DomainError("flaschka_preimage: length must be 2N-1");
  const auto n = (ab.size() + 1) / 2;
  Vector qp(2 * n);
  qp << log_preimage(ab.head(n - 1)), -ab.tail(n);
  return qp;
}

Vector realization(const Vector& q) {
  if (q.size() < 2) throw DomainError("realization: need N >= 2");
  return exp_differences(q);
}

Matrix realization_jacobian(const Vector& q) {
  if (q.size() < 2) throw DomainError("realization: need N >= 2");
  return exp_differences_jacobian(q);
}

Vector realization_preimage(const Vector& a) { return log_preimage(a); }

Matrix push_forward(const Matrix& jacobian, const Matrix& tensor) {
  return jacobian * tensor * jacobian.transpose();
}

}  // namespace todavolt::coordinates
