#pragma once

#include "todavolt/calculus.hpp"
#include "todavolt/poisson.hpp"

// Recursion operators, higher Poisson tensors and master symmetries of the
// Toda (q,p) and Volterra (q) hierarchies.

namespace todavolt {

/// TodaQP: J2 J1^{-1}, checked against the block closed form to 1e-10.
/// VolterraQ: w3 w2^{-1}.
Matrix recursion_operator(StateKind space, const Vector& x);

/// TodaQP: R^{k-1} J1.  VolterraQ: R^{k-2} w2 (k = 1 gives w1).  k <= 6.
Matrix higher_tensor(StateKind space, int k, const Vector& x);

/// Z0 = sum (N - 2i + 1) d/dq_i + sum p_i d/dp_i on TodaQP (dim = 2N).
VectorFieldEval conformal_z0(int dim);
/// X0 = sum (N - i + 1) d/dq_i on VolterraQ (dim = N).
VectorFieldEval conformal_x0(int dim);
/// Z_i = R^i Z0, X_i = R^i X0.
VectorFieldEval master_symmetry(StateKind space, int i, int dim);

enum class YConvention {
  Consistent,  ///< f1 = 1, f_{2i} = -(a_{2i}/a_{2i-1}) f_{2i-1}, f_{2i+1} = 1 - f_{2i}
  AsPrinted,   ///< f1 = -1, f_{2i} = (a_{2i}/a_{2i-1}) f_{2i-1}, f_{2i+1} = -f_{2i} - 1
};

/// Components of the master symmetry Y_{-1} = sum f_i d/da_i.
Vector build_y_minus1(const LatticeState& s, YConvention convention = YConvention::Consistent);
VectorFieldEval y_minus1_field(int m, YConvention convention = YConvention::Consistent);

/// Constants (lambda, mu, nu) of the conformal symmetry.
struct OevelConstants {
  double lambda;
  double mu;
  double nu;
};

OevelConstants oevel_constants(StateKind space);

/// Residuals of
///   (a) L_{X_i} H_j      - (nu + (j-1+i)(mu-lambda)) H_{i+j}
///   (b) L_{X_i} pi_j     - (mu + (j-i-2)(mu-lambda)) pi_{i+j}
///   (c) [X_i, X_j]       - (mu - lambda)(j-i) X_{i+j}
/// with pi_j = J_j, H_j = h_j on TodaQP and pi_j = w_{j+1}, H_j = i_j on
/// VolterraQ. Requires 0 <= i <= 3, 1 <= j <= 3 and i + j <= 4.
struct OevelReport {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double max() const { return std::max(a, std::max(b, c)); }
};

OevelReport oevel_relation_check(StateKind space, int i, int j, const Vector& x);

/// The Oevel pi_j as a catalog tensor.
BivectorField oevel_tensor(StateKind space, int j, int dim);

}  // namespace todavolt
