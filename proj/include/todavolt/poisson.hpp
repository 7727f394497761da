#pragma once

#include <functional>
#include <optional>
#include <string>

#include "todavolt/lattice.hpp"
#include "todavolt/linalg.hpp"

namespace todavolt {

// ---------------------------------------------------------------------------
// Bivector fields
// ---------------------------------------------------------------------------

/// Catalog of Poisson tensors.
///
///   J1, J2, Jk        TodaQP        symplectic, Das-Okubo, R^{k-1} J1
///   PI1, PI2, PI3, PIk  TodaAB      linear, quadratic, cubic Toda brackets
///                                    (Kostant variables); PIk for k >= 4 is
///                                    the Flaschka pushforward of Jk
///   V1, V2, V3, VK    VolterraA     KM brackets; VK(k>=4) reduces PI_{2k-2}
///   W1, W2, W3, WK    VolterraQ     realization brackets; WK = R^{k-2} W2
enum class TensorTag {
  J1, J2, Jk, PI1, PI2, PI3, PIk, V1, V2, V3, VK, W1, W2, W3, WK, Reduced, Custom
};

struct TensorId {
  TensorTag tag = TensorTag::Custom;
  int k = 0;           // order for Jk / PIk / VK / WK
  std::string label;   // Reduced / Custom description
};

std::string to_string(const TensorId& id);

/// Point-evaluable antisymmetric matrix field P(x).
class BivectorField {
 public:
  using EvalFn = std::function<Matrix(const Vector&)>;

  BivectorField(TensorId id, int dim, EvalFn eval, std::optional<StateKind> space = std::nullopt);

  const TensorId& id() const { return id_; }
  int dim() const { return dim_; }
  std::optional<StateKind> space() const { return space_; }

  /// Throws DomainError on dimension mismatch or a point outside the domain.
  Matrix operator()(const Vector& x) const;

 private:
  TensorId id_;
  int dim_;
  EvalFn eval_;
  std::optional<StateKind> space_;
};

/// Phase space a catalog tag lives on.
StateKind tensor_space(TensorTag tag);

/// Catalog lookup. `dim` is the dimension of the phase space; `k` the order
/// for the indexed families (k <= 6).
BivectorField catalog_tensor(TensorTag tag, int dim, int k = 0);

/// Evaluates a catalog tensor at x (dimension taken from x).
Matrix eval_tensor(TensorTag tag, const Vector& x, int k = 0);

BivectorField sum(const BivectorField& p, const BivectorField& q);

// ---------------------------------------------------------------------------
// Smooth functions
// ---------------------------------------------------------------------------

/// H(k): tr L^k / k on TodaAB (Kostant L).  h(k) = H(k) o F on TodaQP.
/// I(k): tr L^{2k} / 2k on VolterraA.     i(k) = I(k) o G on VolterraQ,
/// i(0) = q_1 - q_2 + ... - q_N.  DetL / LogAbsDetL / TrLInv on TodaAB or
/// VolterraA, of the Kostant Lax matrix.
enum class FunctionTag { H, I, h, i, DetL, LogAbsDetL, TrLInv, Custom };

struct FunctionId {
  FunctionTag tag = FunctionTag::Custom;
  int k = 0;
  std::string label;
};

std::string to_string(const FunctionId& id);

class SmoothFunctionEval {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradFn = std::function<Vector(const Vector&)>;

  /// Without `grad`, gradients are central finite differences.
  SmoothFunctionEval(FunctionId id, int dim, ValueFn value, GradFn grad = {});

  const FunctionId& id() const { return id_; }
  int dim() const { return dim_; }
  bool has_analytic_gradient() const { return static_cast<bool>(grad_); }

  double operator()(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  /// Central finite-difference gradient, step 1e-6 * max(1, |x_l|).
  Vector fd_gradient(const Vector& x) const;

 private:
  FunctionId id_;
  int dim_;
  ValueFn value_;
  GradFn grad_;
};

StateKind function_space(FunctionTag tag);

/// `space` is only consulted for DetL / LogAbsDetL / TrLInv (TodaAB or VolterraA).
SmoothFunctionEval catalog_function(FunctionTag tag, int dim, int k = 0,
                                    StateKind space = StateKind::TodaAB);

// ---------------------------------------------------------------------------
// Vector fields
// ---------------------------------------------------------------------------

/// Z(i) = R^i Z0 on TodaQP, X(i) = R^i X0 on VolterraQ.
enum class FieldTag { TodaFlow, VolterraFlow, Z, X, YMinus1, Hamiltonian, Custom };

struct FieldId {
  FieldTag tag = FieldTag::Custom;
  int k = 0;
  std::string label;
};

std::string to_string(const FieldId& id);

class VectorFieldEval {
 public:
  using EvalFn = std::function<Vector(const Vector&)>;

  VectorFieldEval(FieldId id, int dim, EvalFn eval);

  const FieldId& id() const { return id_; }
  int dim() const { return dim_; }
  Vector operator()(const Vector& x) const;

 private:
  FieldId id_;
  int dim_;
  EvalFn eval_;
};

// ---------------------------------------------------------------------------
// Closed-form pieces shared with the hierarchy code
// ---------------------------------------------------------------------------

namespace tensors {

Matrix toda_j1(const Vector& qp);
Matrix toda_j2(const Vector& qp);
/// [[B, -A], [C, B]] with the blocks of J2.
Matrix toda_recursion_closed_form(const Vector& qp);
Matrix toda_pi1(const Vector& ab);
Matrix toda_pi2(const Vector& ab);
Matrix toda_pi3(const Vector& ab);
Matrix volterra_v1(const Vector& a);
Matrix volterra_v2(const Vector& a);
Matrix volterra_v3(const Vector& a);
Matrix realization_w2(const Vector& q);
/// Boundary summands containing q_0 or q_{N+1} are dropped.
Matrix realization_w3(const Vector& q);
/// The printed five-variable table for v1 (m = 5 only).
Matrix volterra_v1_table(const Vector& a);

}  // namespace tensors

}  // namespace todavolt
