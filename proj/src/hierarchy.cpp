#include "todavolt/hierarchy.hpp"

#include <cmath>
#include <string>

#include "todavolt/errors.hpp"

namespace todavolt {

namespace {

constexpr int kMaxDepth = 6;

void require_space(StateKind space, const char* what) {
  if (space != StateKind::TodaQP && space != StateKind::VolterraQ) {
    throw KindError(std::string(what) + ": only toda_qp and volterra_q carry a recursion operator");
  }
}

}  // namespace

Matrix recursion_operator(StateKind space, const Vector& x) {
  require_space(space, "recursion_operator");
  (void)LatticeState::from_coords(space, x);
  if (space == StateKind::TodaQP) {
    const Matrix j1 = tensors::toda_j1(x);
    Eigen::FullPivLU<Matrix> lu(j1);
    const Matrix r = tensors::toda_j2(x) * lu.inverse();
    const Matrix closed = tensors::toda_recursion_closed_form(x);
    if (max_abs(Matrix(r - closed)) > 1e-10 * std::max(1.0, max_abs(closed))) {
      throw Error("recursion_operator: J2 J1^{-1} disagrees with the closed form");
    }
    return r;
  }
  const Matrix w2 = tensors::realization_w2(x);
  Eigen::FullPivLU<Matrix> lu(w2);
  if (!lu.isInvertible()) throw SingularityError("recursion_operator: w2 is singular");
  return tensors::realization_w3(x) * lu.inverse();
}

Matrix higher_tensor(StateKind space, int k, const Vector& x) {
  require_space(space, "higher_tensor");
  if (k < 1 || k > kMaxDepth) throw DomainError("higher_tensor: k must lie in [1, 6]");
  Matrix result;
  if (space == StateKind::TodaQP) {
    result = matrix_power(recursion_operator(space, x), k - 1) * tensors::toda_j1(x);
  } else if (k == 1) {
    result = eval_tensor(TensorTag::W1, x);
  } else {
    result = matrix_power(recursion_operator(space, x), k - 2) * tensors::realization_w2(x);
  }
  if (antisymmetry_defect(result) > 1e-10 * std::max(1.0, max_abs(result))) {
    throw Error("higher_tensor: result is not antisymmetric");
  }
  return result;
}

VectorFieldEval conformal_z0(int dim) {
  (void)LatticeState::from_coords(StateKind::TodaQP, Vector::Zero(dim));
  const int n = dim / 2;
  Vector shift(n);
  for (int i = 1; i <= n; ++i) shift[i - 1] = n - 2 * i + 1;
  return VectorFieldEval({FieldTag::Z, 0, {}}, dim, [shift, n](const Vector& x) {
    Vector v(x.size());
    v << shift, x.tail(n);
    return v;
  });
}

VectorFieldEval conformal_x0(int dim) {
  (void)LatticeState::from_coords(StateKind::VolterraQ, Vector::Zero(dim));
  Vector v(dim);
  for (int i = 1; i <= dim; ++i) v[i - 1] = dim - i + 1;
  return VectorFieldEval({FieldTag::X, 0, {}}, dim, [v](const Vector&) { return v; });
}

VectorFieldEval master_symmetry(StateKind space, int i, int dim) {
  require_space(space, "master_symmetry");
  if (i < 0 || i > kMaxDepth) throw DomainError("master_symmetry: index must lie in [0, 6]");
  const bool toda = space == StateKind::TodaQP;
  const VectorFieldEval base = toda ? conformal_z0(dim) : conformal_x0(dim);
  if (i == 0) return base;
  FieldId id{toda ? FieldTag::Z : FieldTag::X, i, {}};
  return VectorFieldEval(std::move(id), dim, [base, space, i](const Vector& x) {
    return Vector(matrix_power(recursion_operator(space, x), i) * base(x));
  });
}

Vector build_y_minus1(const LatticeState& s, YConvention convention) {
  require_kind(s, StateKind::VolterraA, "build_y_minus1");
  const Vector a = s.a();
  const auto m = a.size();
  Vector f(m);
  const bool consistent = convention == YConvention::Consistent;
  f[0] = consistent ? 1.0 : -1.0;
  for (Eigen::Index k = 2; k <= m; ++k) {
    // k is the 1-based index of the component being filled.
    if (k % 2 == 0) {
      const double ratio = a[k - 1] / a[k - 2];
      f[k - 1] = consistent ? -ratio * f[k - 2] : ratio * f[k - 2];
    } else {
      f[k - 1] = consistent ? 1.0 - f[k - 2] : -f[k - 2] - 1.0;
    }
  }
  return f;
}

VectorFieldEval y_minus1_field(int m, YConvention convention) {
  (void)LatticeState::from_coords(StateKind::VolterraA, Vector::Ones(m));
  FieldId id{FieldTag::YMinus1, -1, convention == YConvention::Consistent ? "consistent" : "as_printed"};
  return VectorFieldEval(std::move(id), m, [convention](const Vector& a) {
    return build_y_minus1(LatticeState::volterra_a(a), convention);
  });
}

OevelConstants oevel_constants(StateKind space) {
  require_space(space, "oevel_constants");
  if (space == StateKind::TodaQP) return {-1.0, 0.0, 1.0};
  return {0.0, 1.0, 1.0};
}

BivectorField oevel_tensor(StateKind space, int j, int dim) {
  require_space(space, "oevel_tensor");
  if (space == StateKind::TodaQP) return catalog_tensor(TensorTag::Jk, dim, j);
  return catalog_tensor(TensorTag::WK, dim, j + 1);
}

namespace {

SmoothFunctionEval oevel_function(StateKind space, int j, int dim) {
  return catalog_function(space == StateKind::TodaQP ? FunctionTag::h : FunctionTag::i, dim, j);
}

}  // namespace

OevelReport oevel_relation_check(StateKind space, int i, int j, const Vector& x) {
  require_space(space, "oevel_relation_check");
  if (i < 0 || i > 3 || j < 1 || j > 3 || i + j > 4) {
    throw DomainError("oevel_relation_check: need 0 <= i <= 3, 1 <= j <= 3, i + j <= 4");
  }
  (void)LatticeState::from_coords(space, x);
  const int dim = static_cast<int>(x.size());
  const auto [lambda, mu, nu] = oevel_constants(space);
  const VectorFieldEval xi = master_symmetry(space, i, dim);

  OevelReport report;
  {
    const double lhs = lie_derivative_scalar(xi, oevel_function(space, j, dim), x);
    const double rhs = (nu + (j - 1 + i) * (mu - lambda)) * oevel_function(space, i + j, dim)(x);
    report.a = std::abs(lhs - rhs);
  }
  {
    const Matrix lhs = lie_derivative_tensor(xi, oevel_tensor(space, j, dim), x);
    const Matrix rhs = (mu + (j - i - 2) * (mu - lambda)) * oevel_tensor(space, i + j, dim)(x);
    report.b = max_abs(Matrix(lhs - rhs));
  }
  if (i != j) {
    const VectorFieldEval xj = master_symmetry(space, j, dim);
    const Vector lhs = vector_field_commutator(xi, xj, x);
    const Vector rhs = (mu - lambda) * (j - i) * master_symmetry(space, i + j, dim)(x);
    report.c = max_abs(Vector(lhs - rhs));
  }
  return report;
}

}  // namespace todavolt
