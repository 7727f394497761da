#pragma once

#include <array>
#include <vector>

#include "todavolt/poisson.hpp"

// Finite-difference tensor calculus on bivector and vector fields.
//
// All derivatives are central differences with step 1e-6 * max(1, |x_l|).
// If a stencil point leaves the domain (DomainError or a non-finite value)
// the step is shrunk once by a factor 100; a second failure raises
// StencilError.

namespace todavolt {

/// d/dx_l P at x.
Matrix fd_partial(const BivectorField& p, const Vector& x, int l);

/// D X with D(i, l) = d X^i / d x_l.
Matrix fd_jacobian(const VectorFieldEval& field, const Vector& x);

/// P(x) together with all of its first partials, reused across triples.
struct TensorJet {
  Matrix value;
  std::vector<Matrix> partials;
};

TensorJet tensor_jet(const BivectorField& p, const Vector& x);

/// P(x) grad f(x)
Vector hamiltonian_vector_field(const BivectorField& p, const SmoothFunctionEval& f, const Vector& x);

VectorFieldEval hamiltonian_field(const BivectorField& p, const SmoothFunctionEval& f);

/// {f, g}_P(x) = grad f^T P grad g
double poisson_bracket(const BivectorField& p, const SmoothFunctionEval& f,
                       const SmoothFunctionEval& g, const Vector& x);

/// sum over cyclic (i, j, k) of sum_l P^{il} d_l P^{jk}. Indices are 0-based,
/// distinct and in range.
double jacobiator(const BivectorField& p, const Vector& x, int i, int j, int k);
double jacobiator(const TensorJet& jet, int i, int j, int k);

struct JacobiatorScan {
  double max_abs = 0.0;
  std::array<int, 3> worst{0, 0, 0};
  int triples = 0;
};

/// Jacobiator over every triple i < j < k.
JacobiatorScan jacobiator_all(const BivectorField& p, const Vector& x);

/// Jacobiator(P + Q) - Jacobiator(P) - Jacobiator(Q).
double compatibility_defect(const BivectorField& p, const BivectorField& q, const Vector& x,
                            int i, int j, int k);
JacobiatorScan compatibility_all(const BivectorField& p, const BivectorField& q, const Vector& x);

/// (L_X P) = X^l d_l P - DX P - P DX^T
Matrix lie_derivative_tensor(const VectorFieldEval& field, const BivectorField& p, const Vector& x);

/// grad f . X
double lie_derivative_scalar(const VectorFieldEval& field, const SmoothFunctionEval& f, const Vector& x);

/// [X, Y] = DY X - DX Y
Vector vector_field_commutator(const VectorFieldEval& x_field, const VectorFieldEval& y_field,
                               const Vector& x);

}  // namespace todavolt
