#pragma once

#include <string_view>
#include <vector>

#include "todavolt/lattice.hpp"
#include "todavolt/poisson.hpp"

namespace todavolt {

/// a_i = exp(q_i - q_{i+1}), b_i = -p_i
LatticeState flaschka(const LatticeState& s);

/// a_i = exp(q_i - q_{i+1}), i = 1..N-1
LatticeState gmap(const LatticeState& s);

enum class VolterraToTodaMode {
  CHOP_SQUARE,  ///< odd rows/columns of L^2, L the symmetric Volterra matrix
  HENON,        ///< A_i = -1/2 sqrt(a_{2i} a_{2i-1}), B_i = 1/2 (a_{2i-1} + a_{2i-2})
};

VolterraToTodaMode volterra_to_toda_mode_from_string(std::string_view name);

/// TodaAB state with |A| as off-diagonal; `offdiag_sign` is the sign the
/// formula attaches to every A_i (-1 for HENON, +1 for CHOP_SQUARE).
struct TodaImage {
  LatticeState state;
  int offdiag_sign;
};

/// CHOP_SQUARE reads the coordinates as symmetric Volterra entries; HENON
/// reads them as the variables of the KM system.
TodaImage volterra_to_toda(const LatticeState& s, VolterraToTodaMode mode);

/// Chopped square for any number (>= 1) of symmetric entries s_1..s_k:
/// A_i = s_{2i-1} s_{2i}, B_i = s_{2i-2}^2 + s_{2i-1}^2 (s_0 = s_{k+1} = 0).
/// Returns the TodaAB coordinates (A, B).
Vector chop_square(const Vector& symmetric_entries);

/// Symmetric entries s_i = sqrt(a_i) of a Kostant-form Volterra vector and back.
Vector volterra_kostant_to_symmetric(const Vector& a);
Vector volterra_symmetric_to_kostant(const Vector& s);

enum class InvolutionId {
  PHI,  ///< b -> -b on TodaAB
  PSI,  ///< p -> -p on TodaQP
};

struct InvolutionSpec {
  InvolutionId id;
  StateKind space;
  int dim;
  std::vector<int> fixed_coords;
  std::vector<int> anti_coords;

  /// Diagonal +-1 matrix of the involution.
  Matrix matrix() const;
  /// Point of the full space with the given fixed coordinates and anti coords 0.
  Vector embed(const Vector& fixed_values) const;
};

/// dim is the dimension of the TodaAB (PHI) or TodaQP (PSI) space.
InvolutionSpec make_involution(InvolutionId id, int dim);

LatticeState apply_involution(const InvolutionSpec& inv, const LatticeState& s);
Vector apply_involution(const InvolutionSpec& inv, const Vector& x);

/// max |D P(x) D - P(inv(x))|: zero iff inv is a Poisson automorphism of P
/// on coordinate functions at x.
double automorphism_residual(const BivectorField& p, const InvolutionSpec& inv, const Vector& x);

/// Block of P(embed(y)) over the fixed coordinates. Throws InvarianceViolation
/// when the mixed block exceeds 1e-10 relative to P at that point.
Matrix fixed_set_reduce(const BivectorField& p, const InvolutionSpec& inv, const Vector& y);

/// The reduced tensor as a field on the fixed coordinates.
BivectorField reduced_tensor(const BivectorField& p, const InvolutionSpec& inv);

/// Diagram check at q in VolterraQ (N even): the G-pushforward of
/// reduce(J_{2k}, PSI) at (q, 0) against reduce(PI_{2k}, PHI) at (G(q), 0).
double diagram_residual(int k, const Vector& q);

}  // namespace todavolt
