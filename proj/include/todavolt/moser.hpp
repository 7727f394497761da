#pragma once

#include "todavolt/lattice.hpp"

// Moser's explicit solution of the open Toda lattice (symmetric variables,
// the TODA_TRI system): spectral transform, linear evolution of the residue
// roots, and inversion by Stieltjes' Hankel-determinant formulas with a
// Lanczos fallback.

namespace todavolt {

/// Eigenvalues ascending and r_i = |last component of eigenvector i|.
/// Throws DegeneracyError when two eigenvalues are closer than 1e-10.
SpectralData spectral_decompose(const JacobiMatrix& l);

/// The Weyl function f(lambda) = ((lambda I - L)^{-1})_{NN}, by three routes.
struct WeylEvaluation {
  double resolvent;           // solve (lambda I - L) x = e_N, read x_N
  double recursion;           // Delta_{N-1} / Delta_N
  double partial_fractions;   // sum r_i^2 / (lambda - lambda_i)
};

/// Throws DomainError if lambda is within 1e-10 of the spectrum and Error if
/// the routes disagree by more than 1e-9 relative.
WeylEvaluation weyl_eval(const JacobiMatrix& l, double lambda);

/// r_i(t) proportional to r_i exp(-lambda_i t), renormalized.
SpectralData evolve_spectral(const SpectralData& sd, double t);

/// c_j = sum r_i^2 lambda_i^j for j = 0..count-1.
Vector moments(const SpectralData& sd, int count);

/// A_i = det[c_{j+k}], B_i = det[c_{j+k+1}] (0 <= j,k < i) for i = 0..n,
/// with A_0 = B_0 = 1.
struct HankelDeterminants {
  Vector a;
  Vector b;
};

HankelDeterminants hankel_determinants(const SpectralData& sd);

enum class InversionMethod {
  Auto,     ///< Hankel formulas, Lanczos when some |B_i| < 1e-12
  Hankel,   ///< Hankel formulas only; throws SingularityError instead of falling back
  Lanczos,  ///< three-term recurrence on the spectral measure
};

struct InversionResult {
  LatticeState state;  // TodaAB, symmetric variables
  bool used_fallback;
};

InversionResult stieltjes_invert(const SpectralData& sd, InversionMethod method = InversionMethod::Auto);

/// Jacobi matrix whose spectral data is sd, by Lanczos with full
/// reorthogonalization on diag(lambda) started from r.
LatticeState lanczos_invert(const SpectralData& sd);

struct ExplicitSolution {
  LatticeState state;
  bool used_fallback;
};

/// stieltjes_invert(evolve_spectral(spectral_decompose(L(s0)), t)).
ExplicitSolution solve_toda_explicit(const LatticeState& s0, double t,
                                     InversionMethod method = InversionMethod::Auto);

}  // namespace todavolt
