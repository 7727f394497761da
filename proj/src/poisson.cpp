#include "todavolt/poisson.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "todavolt/coordinates.hpp"
#include "todavolt/errors.hpp"

namespace todavolt {

namespace {

constexpr int kMaxOrder = 6;

void set_pair(Matrix& m, Eigen::Index i, Eigen::Index j, double value) {
  m(i, j) += value;
  m(j, i) -= value;
}

Eigen::Index toda_size_from_ab(Eigen::Index dim) { return (dim + 1) / 2; }

void check_space_point(StateKind space, const Vector& x) {
  // Reuses the state validation for positivity and layout.
  (void)LatticeState::from_coords(space, x);
}

void check_order(int k, int lo, const char* what) {
  if (k < lo || k > kMaxOrder) {
    throw DomainError(std::string(what) + ": order " + std::to_string(k) + " outside [" +
                      std::to_string(lo) + ", " + std::to_string(kMaxOrder) + "]");
  }
}

Matrix realization_recursion(const Vector& q) {
  const Matrix w2 = tensors::realization_w2(q);
  const Matrix w3 = tensors::realization_w3(q);
  Eigen::FullPivLU<Matrix> lu(w2);
  if (!lu.isInvertible()) throw SingularityError("w2 is singular (N must be even)");
  return w3 * lu.inverse();
}

// Gradient of a function of the Kostant Lax matrix, given dg/dL (laid out as
// G(r, s) = dg/dL_rs), restricted to the coordinate positions.
Vector toda_lax_gradient(const Matrix& dg, Eigen::Index n_toda) {
  Vector g(2 * n_toda - 1);
  for (Eigen::Index i = 0; i + 1 < n_toda; ++i) g[i] = dg(i + 1, i);
  for (Eigen::Index i = 0; i < n_toda; ++i) g[n_toda - 1 + i] = dg(i, i);
  return g;
}

Vector volterra_lax_gradient(const Matrix& dg) {
  const auto m = dg.rows() - 1;
  Vector g(m);
  for (Eigen::Index i = 0; i < m; ++i) g[i] = dg(i + 1, i);
  return g;
}

Matrix toda_kostant_lax(const Vector& ab) {
  const auto n = toda_size_from_ab(ab.size());
  return kostant_matrix(ab.head(n - 1), ab.tail(n));
}

Matrix volterra_kostant_lax(const Vector& a) {
  return kostant_matrix(a, Vector::Zero(a.size() + 1));
}

enum class LaxFunction { TracePower, Det, LogAbsDet, TraceInverse };

// Value and dg/dL for the matrix functions used by the catalog.
std::pair<double, Matrix> lax_function(const Matrix& l, LaxFunction fn, int power) {
  switch (fn) {
    case LaxFunction::TracePower: {
      const Matrix lower = matrix_power(l, power - 1);
      return {(lower * l).trace() / power, lower.transpose()};
    }
    case LaxFunction::Det: {
      Eigen::PartialPivLU<Matrix> lu(l);
      const double det = lu.determinant();
      return {det, det * lu.inverse().transpose()};
    }
    case LaxFunction::LogAbsDet: {
      Eigen::PartialPivLU<Matrix> lu(l);
      const double det = lu.determinant();
      if (det == 0.0) throw SingularityError("log|det L|: L is singular");
      return {std::log(std::abs(det)), lu.inverse().transpose()};
    }
    case LaxFunction::TraceInverse: {
      Eigen::FullPivLU<Matrix> lu(l);
      if (!lu.isInvertible()) throw SingularityError("tr L^{-1}: L is singular");
      const Matrix inv = lu.inverse();
      return {inv.trace(), -(inv * inv).transpose()};
    }
  }
  return {0.0, Matrix()};
}

}  // namespace

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

namespace tensors {

Matrix toda_j1(const Vector& qp) {
  const auto n = qp.size() / 2;
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

namespace {

struct DasOkuboBlocks {
  Matrix a, b, c;
};

DasOkuboBlocks das_okubo_blocks(const Vector& qp) {
  const auto n = qp.size() / 2;
  DasOkuboBlocks blocks{realization_w2(qp.head(n)), Matrix::Zero(n, n), Matrix::Zero(n, n)};
  blocks.b.diagonal() = -qp.tail(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) set_pair(blocks.c, i, i + 1, std::exp(qp[i] - qp[i + 1]));
  return blocks;
}

}  // namespace

Matrix toda_j2(const Vector& qp) {
  const auto n = qp.size() / 2;
  const auto blk = das_okubo_blocks(qp);
  Matrix j(2 * n, 2 * n);
  j << blk.a, blk.b, -blk.b, blk.c;
  return j;
}

Matrix toda_recursion_closed_form(const Vector& qp) {
  const auto n = qp.size() / 2;
  const auto blk = das_okubo_blocks(qp);
  Matrix r(2 * n, 2 * n);
  r << blk.b, -blk.a, blk.c, blk.b;
  return r;
}

Matrix toda_pi1(const Vector& ab) {
  const auto n = toda_size_from_ab(ab.size());
  Matrix p = Matrix::Zero(ab.size(), ab.size());
  const auto b = [n](Eigen::Index i) { return n - 1 + i; };
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    set_pair(p, i, b(i), -ab[i]);
    set_pair(p, i, b(i + 1), ab[i]);
  }
  return p;
}

Matrix toda_pi2(const Vector& ab) {
  const auto n = toda_size_from_ab(ab.size());
  Matrix p = Matrix::Zero(ab.size(), ab.size());
  const auto b = [n](Eigen::Index i) { return n - 1 + i; };
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double ai = ab[i];
    if (i + 2 < n) set_pair(p, i, i + 1, ai * ab[i + 1]);
    set_pair(p, i, b(i), -ai * ab[b(i)]);
    set_pair(p, i, b(i + 1), ai * ab[b(i + 1)]);
    set_pair(p, b(i), b(i + 1), ai);
  }
  return p;
}

Matrix toda_pi3(const Vector& ab) {
  const auto n = toda_size_from_ab(ab.size());
  Matrix p = Matrix::Zero(ab.size(), ab.size());
  const auto b = [n](Eigen::Index i) { return n - 1 + i; };
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double ai = ab[i];
    const double bi = ab[b(i)];
    const double bn = ab[b(i + 1)];
    if (i + 2 < n) {
      const double an = ab[i + 1];
      set_pair(p, i, i + 1, 2.0 * ai * an * bn);
      set_pair(p, i, b(i + 2), ai * an);
      set_pair(p, i + 1, b(i), -ai * an);
    }
    set_pair(p, i, b(i), -ai * bi * bi - ai * ai);
    set_pair(p, i, b(i + 1), ai * bn * bn + ai * ai);
    set_pair(p, b(i), b(i + 1), ai * (bi + bn));
  }
  return p;
}

Matrix volterra_v1(const Vector& a) {
  // 1-based i < j: e = first even index >= i, E = last even index <= j.
  const auto m = a.size();
  Matrix p = Matrix::Zero(m, m);
  for (Eigen::Index i = 1; i <= m; ++i) {
    for (Eigen::Index j = i + 1; j <= m; ++j) {
      const Eigen::Index first = (i % 2 == 0) ? i : i + 1;
      const Eigen::Index last = (j % 2 == 0) ? j : j - 1;
      double value = 1.0;
      for (Eigen::Index k = first; k <= last; k += 2) value *= a[k - 1];
      for (Eigen::Index k = first + 1; k < last; k += 2) value /= a[k - 1];
      const double sign = ((j - i + 1) % 2 == 0) ? 1.0 : -1.0;
      set_pair(p, i - 1, j - 1, sign * value);
    }
  }
  return p;
}

Matrix volterra_v1_table(const Vector& a) {
  if (a.size() != 5) throw DomainError("v1 table is only defined for five variables");
  const double r = a[1] * a[3] / a[2];
  Matrix p = Matrix::Zero(5, 5);
  set_pair(p, 0, 1, a[1]);
  set_pair(p, 0, 2, -a[1]);
  set_pair(p, 0, 3, r);
  set_pair(p, 0, 4, -r);
  set_pair(p, 1, 2, a[1]);
  set_pair(p, 1, 3, -r);
  set_pair(p, 1, 4, r);
  set_pair(p, 2, 3, a[3]);
  set_pair(p, 2, 4, -a[3]);
  set_pair(p, 3, 4, a[3]);
  return p;
}

Matrix volterra_v2(const Vector& a) {
  const auto m = a.size();
  Matrix p = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i + 1 < m; ++i) set_pair(p, i, i + 1, a[i] * a[i + 1]);
  return p;
}

Matrix volterra_v3(const Vector& a) {
  const auto m = a.size();
  Matrix p = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i + 1 < m; ++i) set_pair(p, i, i + 1, a[i] * a[i + 1] * (a[i] + a[i + 1]));
  for (Eigen::Index i = 0; i + 2 < m; ++i) set_pair(p, i, i + 2, a[i] * a[i + 1] * a[i + 2]);
  return p;
}

Matrix realization_w2(const Vector& q) {
  const auto n = q.size();
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) set_pair(w, i, j, 1.0);
  }
  return w;
}

Matrix realization_w3(const Vector& q) {
  const auto n = q.size();
  // a(k) = exp(q_k - q_{k+1}) in 1-based indexing; 0 when undefined.
  const auto a = [&](Eigen::Index k) {
    return (k >= 1 && k <= n - 1) ? std::exp(q[k - 1] - q[k]) : 0.0;
  };
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 1; i <= n; ++i) {
    for (Eigen::Index j = i + 1; j <= n; ++j) {
      const double middle = (j == i + 1) ? 0.0 : a(i);
      set_pair(w, i - 1, j - 1, a(i - 1) + middle + a(j - 1) + a(j));
    }
  }
  return w;
}

}  // namespace tensors

// ---------------------------------------------------------------------------
// BivectorField
// ---------------------------------------------------------------------------

std::string to_string(const TensorId& id) {
  const auto indexed = [&](const char* stem) { return std::string(stem) + "(" + std::to_string(id.k) + ")"; };
  switch (id.tag) {
    case TensorTag::J1: return "J1";
    case TensorTag::J2: return "J2";
    case TensorTag::Jk: return indexed("J");
    case TensorTag::PI1: return "PI1";
    case TensorTag::PI2: return "PI2";
    case TensorTag::PI3: return "PI3";
    case TensorTag::PIk: return indexed("PI");
    case TensorTag::V1: return "V1";
    case TensorTag::V2: return "V2";
    case TensorTag::V3: return "V3";
    case TensorTag::VK: return indexed("V");
    case TensorTag::W1: return "W1";
    case TensorTag::W2: return "W2";
    case TensorTag::W3: return "W3";
    case TensorTag::WK: return indexed("W");
    case TensorTag::Reduced: return "REDUCED(" + id.label + ")";
    case TensorTag::Custom: return "CUSTOM(" + id.label + ")";
  }
  return "?";
}

BivectorField::BivectorField(TensorId id, int dim, EvalFn eval, std::optional<StateKind> space)
    : id_(std::move(id)), dim_(dim), eval_(std::move(eval)), space_(space) {
  if (dim_ < 1) throw DomainError("BivectorField: dimension must be positive");
}

Matrix BivectorField::operator()(const Vector& x) const {
  if (x.size() != dim_) {
    throw DomainError(to_string(id_) + ": point has dimension " + std::to_string(x.size()) +
                      ", expected " + std::to_string(dim_));
  }
  if (space_) check_space_point(*space_, x);
  return eval_(x);
}

StateKind tensor_space(TensorTag tag) {
  switch (tag) {
    case TensorTag::J1:
    case TensorTag::J2:
    case TensorTag::Jk: return StateKind::TodaQP;
    case TensorTag::PI1:
    case TensorTag::PI2:
    case TensorTag::PI3:
    case TensorTag::PIk: return StateKind::TodaAB;
    case TensorTag::V1:
    case TensorTag::V2:
    case TensorTag::V3:
    case TensorTag::VK: return StateKind::VolterraA;
    case TensorTag::W1:
    case TensorTag::W2:
    case TensorTag::W3:
    case TensorTag::WK: return StateKind::VolterraQ;
    case TensorTag::Reduced:
    case TensorTag::Custom: break;
  }
  throw KindError("tensor_space: REDUCED and CUSTOM tensors have no catalog space");
}

BivectorField catalog_tensor(TensorTag tag, int dim, int k) {
  const StateKind space = tensor_space(tag);
  // Validate the dimension once with a representative point.
  (void)LatticeState::from_coords(space, Vector::Ones(dim));
  TensorId id{tag, k, {}};
  BivectorField::EvalFn fn;
  switch (tag) {
    case TensorTag::J1: fn = tensors::toda_j1; break;
    case TensorTag::J2: fn = tensors::toda_j2; break;
    case TensorTag::Jk:
      check_order(k, 1, "Jk");
      fn = [k](const Vector& x) {
        return Matrix(matrix_power(tensors::toda_recursion_closed_form(x), k - 1) * tensors::toda_j1(x));
      };
      break;
    case TensorTag::PI1: fn = tensors::toda_pi1; break;
    case TensorTag::PI2: fn = tensors::toda_pi2; break;
    case TensorTag::PI3: fn = tensors::toda_pi3; break;
    case TensorTag::PIk:
      check_order(k, 1, "PIk");
      if (k == 1) fn = tensors::toda_pi1;
      else if (k == 2) fn = tensors::toda_pi2;
      else if (k == 3) fn = tensors::toda_pi3;
      else {
        const BivectorField jk = catalog_tensor(TensorTag::Jk, dim + 1, k);
        fn = [jk](const Vector& ab) {
          const Vector qp = coordinates::flaschka_preimage(ab);
          return coordinates::push_forward(coordinates::flaschka_jacobian(qp), jk(qp));
        };
      }
      break;
    case TensorTag::V1: fn = tensors::volterra_v1; break;
    case TensorTag::V2: fn = tensors::volterra_v2; break;
    case TensorTag::V3: fn = tensors::volterra_v3; break;
    case TensorTag::VK:
      check_order(k, 1, "VK");
      if (k == 1) fn = tensors::volterra_v1;
      else if (k == 2) fn = tensors::volterra_v2;
      else if (k == 3) fn = tensors::volterra_v3;
      else {
        // a-block of PI_{2k-2} on the fixed set b = 0 of Toda with N = m + 1.
        if (2 * k - 2 > kMaxOrder) throw DomainError("VK: order exceeds supported depth");
        const BivectorField parent = catalog_tensor(TensorTag::PIk, 2 * dim + 1, 2 * k - 2);
        fn = [parent, dim](const Vector& a) {
          Vector ab = Vector::Zero(2 * dim + 1);
          ab.head(dim) = a;
          return Matrix(parent(ab).topLeftCorner(dim, dim));
        };
      }
      break;
    case TensorTag::W1:
      fn = [](const Vector& q) {
        const Matrix w2 = tensors::realization_w2(q);
        Eigen::FullPivLU<Matrix> lu(tensors::realization_w3(q));
        if (!lu.isInvertible()) throw SingularityError("W1: w3 is singular");
        return Matrix(w2 * lu.inverse() * w2);
      };
      break;
    case TensorTag::W2: fn = tensors::realization_w2; break;
    case TensorTag::W3: fn = tensors::realization_w3; break;
    case TensorTag::WK:
      check_order(k, 1, "WK");
      if (k == 1) return catalog_tensor(TensorTag::W1, dim);
      fn = [k](const Vector& q) {
        return Matrix(matrix_power(realization_recursion(q), k - 2) * tensors::realization_w2(q));
      };
      break;
    case TensorTag::Reduced:
    case TensorTag::Custom: break;
  }
  return BivectorField(std::move(id), dim, std::move(fn), space);
}

Matrix eval_tensor(TensorTag tag, const Vector& x, int k) {
  return catalog_tensor(tag, static_cast<int>(x.size()), k)(x);
}

BivectorField sum(const BivectorField& p, const BivectorField& q) {
  if (p.dim() != q.dim()) throw DomainError("sum: tensors differ in dimension");
  TensorId id{TensorTag::Custom, 0, to_string(p.id()) + "+" + to_string(q.id())};
  return BivectorField(std::move(id), p.dim(), [p, q](const Vector& x) { return Matrix(p(x) + q(x)); });
}

// ---------------------------------------------------------------------------
// SmoothFunctionEval
// ---------------------------------------------------------------------------

std::string to_string(const FunctionId& id) {
  const auto k = std::to_string(id.k);
  switch (id.tag) {
    case FunctionTag::H: return "H" + k;
    case FunctionTag::I: return "I" + k;
    case FunctionTag::h: return "h" + k;
    case FunctionTag::i: return "i" + k;
    case FunctionTag::DetL: return "det(L)";
    case FunctionTag::LogAbsDetL: return "log|det(L)|";
    case FunctionTag::TrLInv: return "tr(L^-1)";
    case FunctionTag::Custom: return "CUSTOM(" + id.label + ")";
  }
  return "?";
}

SmoothFunctionEval::SmoothFunctionEval(FunctionId id, int dim, ValueFn value, GradFn grad)
    : id_(std::move(id)), dim_(dim), value_(std::move(value)), grad_(std::move(grad)) {}

double SmoothFunctionEval::operator()(const Vector& x) const {
  if (x.size() != dim_) throw DomainError(to_string(id_) + ": dimension mismatch");
  return value_(x);
}

Vector SmoothFunctionEval::gradient(const Vector& x) const {
  if (x.size() != dim_) throw DomainError(to_string(id_) + ": dimension mismatch");
  return grad_ ? grad_(x) : fd_gradient(x);
}

Vector SmoothFunctionEval::fd_gradient(const Vector& x) const {
  Vector g(dim_);
  Vector probe = x;
  for (int l = 0; l < dim_; ++l) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[l]));
    probe[l] = x[l] + h;
    const double up = value_(probe);
    probe[l] = x[l] - h;
    const double down = value_(probe);
    probe[l] = x[l];
    g[l] = (up - down) / (2.0 * h);
  }
  return g;
}

StateKind function_space(FunctionTag tag) {
  switch (tag) {
    case FunctionTag::H: return StateKind::TodaAB;
    case FunctionTag::I: return StateKind::VolterraA;
    case FunctionTag::h: return StateKind::TodaQP;
    case FunctionTag::i: return StateKind::VolterraQ;
    default: break;
  }
  throw KindError("function_space: tag is defined on several spaces");
}

SmoothFunctionEval catalog_function(FunctionTag tag, int dim, int k, StateKind space) {
  FunctionId id{tag, k, {}};
  switch (tag) {
    case FunctionTag::H: {
      (void)LatticeState::from_coords(StateKind::TodaAB, Vector::Ones(dim));
      if (k < 1) throw DomainError("H(k) needs k >= 1");
      const auto n = toda_size_from_ab(dim);
      if (k == 1) {
        Vector g = Vector::Zero(dim);
        g.tail(n).setOnes();
        return SmoothFunctionEval(id, dim, [n](const Vector& x) { return x.tail(n).sum(); },
                                  [g](const Vector&) { return g; });
      }
      if (k == 2) {
        return SmoothFunctionEval(
            id, dim, [n](const Vector& x) { return 0.5 * x.tail(n).squaredNorm() + x.head(n - 1).sum(); },
            [n](const Vector& x) {
              Vector g(x.size());
              g << Vector::Ones(n - 1), x.tail(n);
              return g;
            });
      }
      return SmoothFunctionEval(
          id, dim, [k](const Vector& x) { return lax_function(toda_kostant_lax(x), LaxFunction::TracePower, k).first; },
          [k, n](const Vector& x) {
            return toda_lax_gradient(lax_function(toda_kostant_lax(x), LaxFunction::TracePower, k).second, n);
          });
    }
    case FunctionTag::h: {
      (void)LatticeState::from_coords(StateKind::TodaQP, Vector::Zero(dim));
      if (k < 1) throw DomainError("h(k) needs k >= 1");
      const auto n = dim / 2;
      if (k == 1) {
        Vector g = Vector::Zero(dim);
        g.tail(n).setConstant(-1.0);
        return SmoothFunctionEval(id, dim, [n](const Vector& x) { return -x.tail(n).sum(); },
                                  [g](const Vector&) { return g; });
      }
      if (k == 2) {
        return SmoothFunctionEval(
            id, dim, [](const Vector& x) {
              const auto n2 = x.size() / 2;
              return 0.5 * x.tail(n2).squaredNorm() + coordinates::realization(x.head(n2)).sum();
            },
            [](const Vector& x) {
              const auto n2 = x.size() / 2;
              const Vector a = coordinates::realization(x.head(n2));
              Vector g = Vector::Zero(x.size());
              for (Eigen::Index i = 0; i + 1 < n2; ++i) {
                g[i] += a[i];
                g[i + 1] -= a[i];
              }
              g.tail(n2) = x.tail(n2);
              return g;
            });
      }
      const SmoothFunctionEval base = catalog_function(FunctionTag::H, dim - 1, k);
      return SmoothFunctionEval(
          id, dim, [base](const Vector& x) { return base(coordinates::flaschka(x)); },
          [base](const Vector& x) {
            return Vector(coordinates::flaschka_jacobian(x).transpose() * base.gradient(coordinates::flaschka(x)));
          });
    }
    case FunctionTag::I: {
      (void)LatticeState::from_coords(StateKind::VolterraA, Vector::Ones(dim));
      if (k == 0) return catalog_function(FunctionTag::LogAbsDetL, dim, 0, StateKind::VolterraA);
      if (k < 1) throw DomainError("I(k) needs k >= 0");
      return SmoothFunctionEval(
          id, dim,
          [k](const Vector& x) { return lax_function(volterra_kostant_lax(x), LaxFunction::TracePower, 2 * k).first; },
          [k](const Vector& x) {
            return volterra_lax_gradient(lax_function(volterra_kostant_lax(x), LaxFunction::TracePower, 2 * k).second);
          });
    }
    case FunctionTag::i: {
      (void)LatticeState::from_coords(StateKind::VolterraQ, Vector::Zero(dim));
      if (k < 0) throw DomainError("i(k) needs k >= 0");
      if (k == 0) {
        Vector g(dim);
        for (int l = 0; l < dim; ++l) g[l] = (l % 2 == 0) ? 1.0 : -1.0;
        return SmoothFunctionEval(id, dim, [g](const Vector& x) { return g.dot(x); },
                                  [g](const Vector&) { return g; });
      }
      if (k == 1) {
        return SmoothFunctionEval(
            id, dim, [](const Vector& x) { return coordinates::realization(x).sum(); },
            [](const Vector& x) {
              const Vector a = coordinates::realization(x);
              Vector g = Vector::Zero(x.size());
              for (Eigen::Index l = 0; l < a.size(); ++l) {
                g[l] += a[l];
                g[l + 1] -= a[l];
              }
              return g;
            });
      }
      const SmoothFunctionEval base = catalog_function(FunctionTag::I, dim - 1, k);
      return SmoothFunctionEval(
          id, dim, [base](const Vector& x) { return base(coordinates::realization(x)); },
          [base](const Vector& x) {
            return Vector(coordinates::realization_jacobian(x).transpose() *
                          base.gradient(coordinates::realization(x)));
          });
    }
    case FunctionTag::DetL:
    case FunctionTag::LogAbsDetL:
    case FunctionTag::TrLInv: {
      if (space != StateKind::TodaAB && space != StateKind::VolterraA) {
        throw KindError(to_string(id) + " is defined on toda_ab or volterra_a");
      }
      (void)LatticeState::from_coords(space, Vector::Ones(dim));
      const LaxFunction fn = tag == FunctionTag::DetL         ? LaxFunction::Det
                             : tag == FunctionTag::LogAbsDetL ? LaxFunction::LogAbsDet
                                                              : LaxFunction::TraceInverse;
      const bool toda = space == StateKind::TodaAB;
      const auto n = toda_size_from_ab(dim);
      const auto lax = [toda](const Vector& x) { return toda ? toda_kostant_lax(x) : volterra_kostant_lax(x); };
      return SmoothFunctionEval(
          id, dim, [lax, fn](const Vector& x) { return lax_function(lax(x), fn, 0).first; },
          [lax, fn, toda, n](const Vector& x) {
            const Matrix dg = lax_function(lax(x), fn, 0).second;
            return toda ? toda_lax_gradient(dg, n) : volterra_lax_gradient(dg);
          });
    }
    case FunctionTag::Custom: break;
  }
  throw KindError("catalog_function: CUSTOM functions are built directly");
}

// ---------------------------------------------------------------------------
// VectorFieldEval
// ---------------------------------------------------------------------------

std::string to_string(const FieldId& id) {
  const auto k = std::to_string(id.k);
  switch (id.tag) {
    case FieldTag::TodaFlow: return "TODA_FLOW(" + id.label + ")";
    case FieldTag::VolterraFlow: return "VOLTERRA_FLOW(" + id.label + ")";
    case FieldTag::Z: return "Z" + k;
    case FieldTag::X: return "X" + k;
    case FieldTag::YMinus1: return "Y_MINUS1";
    case FieldTag::Hamiltonian: return "HAMILTONIAN(" + id.label + ")";
    case FieldTag::Custom: return "CUSTOM(" + id.label + ")";
  }
  return "?";
}

VectorFieldEval::VectorFieldEval(FieldId id, int dim, EvalFn eval)
    : id_(std::move(id)), dim_(dim), eval_(std::move(eval)) {}

Vector VectorFieldEval::operator()(const Vector& x) const {
  if (x.size() != dim_) throw DomainError(to_string(id_) + ": dimension mismatch");
  return eval_(x);
}

}  // namespace todavolt
