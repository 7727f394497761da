#pragma once

#include <string_view>
#include <vector>

#include "todavolt/linalg.hpp"

namespace todavolt {

/// The four phase spaces.
///
///   TodaQP     q_1..q_N, p_1..p_N                 (dimension 2N)
///   TodaAB     a_1..a_{N-1}, b_1..b_N, a_i > 0      (dimension 2N-1)
///   VolterraA  a_1..a_m, m odd, a_i > 0           (dimension m = N-1)
///   VolterraQ  q_1..q_N, N even                    (dimension N)
enum class StateKind { TodaQP, TodaAB, VolterraA, VolterraQ };

std::string_view to_string(StateKind kind);
StateKind state_kind_from_string(std::string_view name);

/// Immutable, validated point of one of the phase spaces.
class LatticeState {
 public:
  static LatticeState toda_qp(const Vector& q, const Vector& p);
  static LatticeState toda_ab(const Vector& a, const Vector& b);
  static LatticeState volterra_a(const Vector& a);
  static LatticeState volterra_q(const Vector& q);
  /// Validates the kind-specific layout and domain; throws DomainError.
  static LatticeState from_coords(StateKind kind, const Vector& coords);

  StateKind kind() const { return kind_; }
  const Vector& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }

  /// N for the Toda spaces and VolterraQ, m for VolterraA.
  int lattice_size() const;

  // Coordinate blocks; each throws KindError on the wrong kind.
  Vector q() const;  // TodaQP, VolterraQ
  Vector p() const;  // TodaQP
  Vector a() const;  // TodaAB, VolterraA
  Vector b() const;  // TodaAB

 private:
  LatticeState(StateKind kind, Vector coords) : kind_(kind), coords_(std::move(coords)) {}

  StateKind kind_;
  Vector coords_;
};

/// Throws KindError unless s.kind() == kind.
void require_kind(const LatticeState& s, StateKind kind, std::string_view context);

/// Symmetric tridiagonal matrix with positive off-diagonal.
class JacobiMatrix {
 public:
  JacobiMatrix(Vector diag, Vector offdiag);

  const Vector& diag() const { return diag_; }
  const Vector& offdiag() const { return offdiag_; }
  Eigen::Index size() const { return diag_.size(); }
  Matrix dense() const;

 private:
  Vector diag_;
  Vector offdiag_;
};

/// Moser's coordinates: ascending eigenvalues and positive residue roots
/// with sum r_i^2 = 1.
class SpectralData {
 public:
  /// Validates the invariants to 1e-12; throws DomainError.
  SpectralData(Vector lambdas, Vector residue_roots);

  /// Rescales r to unit norm before validating (homogeneous coordinates).
  static SpectralData normalized(Vector lambdas, Vector residue_roots);

  const Vector& lambdas() const { return lambdas_; }
  const Vector& residue_roots() const { return residue_roots_; }
  Eigen::Index size() const { return lambdas_.size(); }

 private:
  Vector lambdas_;
  Vector residue_roots_;
};

JacobiMatrix build_lax_symmetric(const LatticeState& s);

/// Hessenberg matrix with superdiagonal 1, diagonal `diag`, subdiagonal `subdiag`.
Matrix kostant_matrix(const Vector& subdiag, const Vector& diag);

/// Kostant form of the Jacobi matrix of a TodaAB state in symmetric
/// (Flaschka) variables: subdiagonal a_i^2, diagonal b, superdiagonal 1.
Matrix build_lax_kostant(const LatticeState& s);

/// The same matrix obtained as D L D^{-1}, d_1 = 1, d_i = a_1...a_{i-1}.
Matrix build_lax_kostant_by_conjugation(const LatticeState& s);

enum class VolterraLaxMode {
  Kostant,    ///< superdiagonal 1, subdiagonal a
  Symmetric,  ///< entries a on both off-diagonals, zero diagonal
};

/// (m+1) x (m+1) Lax matrix of a VolterraA state.
Matrix build_lax_volterra(const LatticeState& s, VolterraLaxMode mode);

/// Symmetric Volterra Lax matrix for arbitrary off-diagonal entries (any
/// length >= 1), as used by the squaring/chopping construction.
Matrix symmetric_volterra_lax(const Vector& entries);

enum class TraceConvention {
  Toda,      ///< H_k = tr L^k / k
  Volterra,  ///< I_k = tr L^{2k} / (2k)
};

/// Returns the first k_max invariants of L in the requested convention.
std::vector<double> trace_invariants(const Matrix& lax, int k_max,
                                     TraceConvention convention = TraceConvention::Toda);

/// Ascending spectrum of a Jacobi matrix.
Vector spectrum(const JacobiMatrix& l);

/// Spectrum of the Kostant-form matrix with positive subdiagonal `subdiag`,
/// computed through its symmetrization (off-diagonal sqrt(subdiag)).
Vector kostant_spectrum(const Vector& subdiag, const Vector& diag);

}  // namespace todavolt
