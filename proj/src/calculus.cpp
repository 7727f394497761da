#include "todavolt/calculus.hpp"

#include <cmath>
#include <string>

#include "todavolt/errors.hpp"

namespace todavolt {

namespace {

constexpr double kRelativeStep = 1e-6;
constexpr double kShrink = 1e-2;

bool all_finite(const Matrix& m) { return m.allFinite(); }

// Central difference of an arbitrary matrix-valued map along coordinate l.
template <class Eval>
Matrix central_difference(const Eval& eval, const Vector& x, int l, const std::string& what) {
  double h = kRelativeStep * std::max(1.0, std::abs(x[l]));
  for (int attempt = 0; attempt < 2; ++attempt, h *= kShrink) {
    Vector up = x;
    Vector down = x;
    up[l] += h;
    down[l] -= h;
    try {
      Matrix fp = eval(up);
      Matrix fm = eval(down);
      if (all_finite(fp) && all_finite(fm)) return (fp - fm) / (2.0 * h);
    } catch (const DomainError&) {
    }
  }
  throw StencilError(what + ": stencil along coordinate " + std::to_string(l) + " leaves the domain");
}

void check_triple(int dim, int i, int j, int k) {
  const auto in_range = [dim](int v) { return v >= 0 && v < dim; };
  if (!in_range(i) || !in_range(j) || !in_range(k)) throw DomainError("jacobiator: index out of range");
  if (i == j || j == k || i == k) throw DomainError("jacobiator: indices must be distinct");
}

void check_dim(int expected, const Vector& x, const char* what) {
  if (x.size() != expected) throw DomainError(std::string(what) + ": dimension mismatch");
}

}  // namespace

Matrix fd_partial(const BivectorField& p, const Vector& x, int l) {
  check_dim(p.dim(), x, "fd_partial");
  return central_difference([&p](const Vector& y) { return p(y); }, x, l, to_string(p.id()));
}

Matrix fd_jacobian(const VectorFieldEval& field, const Vector& x) {
  check_dim(field.dim(), x, "fd_jacobian");
  Matrix d(field.dim(), field.dim());
  const auto eval = [&field](const Vector& y) { return Matrix(field(y)); };
  for (int l = 0; l < field.dim(); ++l) d.col(l) = central_difference(eval, x, l, to_string(field.id()));
  return d;
}

TensorJet tensor_jet(const BivectorField& p, const Vector& x) {
  TensorJet jet{p(x), {}};
  jet.partials.reserve(p.dim());
  for (int l = 0; l < p.dim(); ++l) jet.partials.push_back(fd_partial(p, x, l));
  return jet;
}

Vector hamiltonian_vector_field(const BivectorField& p, const SmoothFunctionEval& f, const Vector& x) {
  if (p.dim() != f.dim()) throw DomainError("hamiltonian_vector_field: dimension mismatch");
  return p(x) * f.gradient(x);
}

VectorFieldEval hamiltonian_field(const BivectorField& p, const SmoothFunctionEval& f) {
  if (p.dim() != f.dim()) throw DomainError("hamiltonian_field: dimension mismatch");
  FieldId id{FieldTag::Hamiltonian, 0, to_string(p.id()) + "," + to_string(f.id())};
  return VectorFieldEval(std::move(id), p.dim(),
                         [p, f](const Vector& x) { return Vector(p(x) * f.gradient(x)); });
}

double poisson_bracket(const BivectorField& p, const SmoothFunctionEval& f,
                       const SmoothFunctionEval& g, const Vector& x) {
  return f.gradient(x).dot(p(x) * g.gradient(x));
}

double jacobiator(const TensorJet& jet, int i, int j, int k) {
  const auto dim = static_cast<int>(jet.value.rows());
  check_triple(dim, i, j, k);
  double total = 0.0;
  for (int l = 0; l < dim; ++l) {
    const Matrix& d = jet.partials[l];
    total += jet.value(i, l) * d(j, k) + jet.value(j, l) * d(k, i) + jet.value(k, l) * d(i, j);
  }
  return total;
}

double jacobiator(const BivectorField& p, const Vector& x, int i, int j, int k) {
  check_triple(p.dim(), i, j, k);
  return jacobiator(tensor_jet(p, x), i, j, k);
}

JacobiatorScan jacobiator_all(const BivectorField& p, const Vector& x) {
  const TensorJet jet = tensor_jet(p, x);
  JacobiatorScan scan;
  const int n = p.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const double v = std::abs(jacobiator(jet, i, j, k));
        ++scan.triples;
        if (v > scan.max_abs) {
          scan.max_abs = v;
          scan.worst = {i, j, k};
        }
      }
    }
  }
  return scan;
}

double compatibility_defect(const BivectorField& p, const BivectorField& q, const Vector& x,
                            int i, int j, int k) {
  return jacobiator(sum(p, q), x, i, j, k) - jacobiator(p, x, i, j, k) - jacobiator(q, x, i, j, k);
}

JacobiatorScan compatibility_all(const BivectorField& p, const BivectorField& q, const Vector& x) {
  const TensorJet jp = tensor_jet(p, x);
  const TensorJet jq = tensor_jet(q, x);
  TensorJet js{jp.value + jq.value, {}};
  for (std::size_t l = 0; l < jp.partials.size(); ++l) js.partials.push_back(jp.partials[l] + jq.partials[l]);
  JacobiatorScan scan;
  const int n = p.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const double v = std::abs(jacobiator(js, i, j, k) - jacobiator(jp, i, j, k) - jacobiator(jq, i, j, k));
        ++scan.triples;
        if (v > scan.max_abs) {
          scan.max_abs = v;
          scan.worst = {i, j, k};
        }
      }
    }
  }
  return scan;
}

Matrix lie_derivative_tensor(const VectorFieldEval& field, const BivectorField& p, const Vector& x) {
  if (field.dim() != p.dim()) throw DomainError("lie_derivative_tensor: dimension mismatch");
  const Vector v = field(x);
  const Matrix dv = fd_jacobian(field, x);
  const Matrix pv = p(x);
  Matrix result = -dv * pv - pv * dv.transpose();
  for (int l = 0; l < p.dim(); ++l) {
    if (v[l] != 0.0) result += v[l] * fd_partial(p, x, l);
  }
  return result;
}

double lie_derivative_scalar(const VectorFieldEval& field, const SmoothFunctionEval& f, const Vector& x) {
  if (field.dim() != f.dim()) throw DomainError("lie_derivative_scalar: dimension mismatch");
  return f.gradient(x).dot(field(x));
}

Vector vector_field_commutator(const VectorFieldEval& x_field, const VectorFieldEval& y_field,
                               const Vector& x) {
  if (x_field.dim() != y_field.dim()) throw DomainError("vector_field_commutator: dimension mismatch");
  return fd_jacobian(y_field, x) * x_field(x) - fd_jacobian(x_field, x) * y_field(x);
}

}  // namespace todavolt
