#pragma once

#include "todavolt/linalg.hpp"

// Raw-vector forms of the Flaschka map F: (q,p) -> (a,b) and the
// realization map G: q -> a, with their Jacobians and canonical preimages.
// The state-typed wrappers live in maps.hpp.

namespace todavolt::coordinates {

/// a_i = exp(q_i - q_{i+1}), b_i = -p_i. Input length 2N, output 2N-1.
Vector flaschka(const Vector& qp);
/// (2N-1) x 2N Jacobian of flaschka at qp.
Matrix flaschka_jacobian(const Vector& qp);
/// A point (q,p) with q_N = 0 mapping onto ab. Requires a_i > 0.
Vector flaschka_preimage(const Vector& ab);

/// a_i = exp(q_i - q_{i+1}). Input length N, output N-1.
Vector realization(const Vector& q);
Matrix realization_jacobian(const Vector& q);
/// A point q with q_N = 0 mapping onto a. Requires a_i > 0.
Vector realization_preimage(const Vector& a);

/// J * P * J^T
Matrix push_forward(const Matrix& jacobian, const Matrix& tensor);

}  // namespace todavolt::coordinates
