#include "todavolt/lattice.hpp"

#include <cmath>
#include <string>

#include "todavolt/errors.hpp"

namespace todavolt {

namespace {

void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) throw DomainError(std::string(what) + ": non-finite coordinate");
}

void require_positive(const Vector& a, std::string_view what) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0)) {
      throw DomainError(std::string(what) + ": a_" + std::to_string(i + 1) + " = " +
                        std::to_string(a[i]) + " is not positive");
    }
  }
}

Vector concat(const Vector& x, const Vector& y) {
  Vector out(x.size() + y.size());
  out << x, y;
  return out;
}

}  // namespace

std::string_view to_string(StateKind kind) {
  switch (kind) {
    case StateKind::TodaQP: return "toda_qp";
    case StateKind::TodaAB: return "toda_ab";
    case StateKind::VolterraA: return "volterra_a";
    case StateKind::VolterraQ: return "volterra_q";
  }
  return "?";
}

StateKind state_kind_from_string(std::string_view name) {
  if (name == "toda_qp") return StateKind::TodaQP;
  if (name == "toda_ab") return StateKind::TodaAB;
  if (name == "volterra_a") return StateKind::VolterraA;
  if (name == "volterra_q") return StateKind::VolterraQ;
  throw KindError("unknown state kind '" + std::string(name) + "'");
}

LatticeState LatticeState::toda_qp(const Vector& q, const Vector& p) {
  if (q.size() != p.size()) throw DomainError("toda_qp: q and p differ in length");
  return from_coords(StateKind::TodaQP, concat(q, p));
}

LatticeState LatticeState::toda_ab(const Vector& a, const Vector& b) {
  if (a.size() + 1 != b.size()) throw DomainError("toda_ab: need len(a) = len(b) - 1");
  return from_coords(StateKind::TodaAB, concat(a, b));
}

LatticeState LatticeState::volterra_a(const Vector& a) {
  return from_coords(StateKind::VolterraA, a);
}

LatticeState LatticeState::volterra_q(const Vector& q) {
  return from_coords(StateKind::VolterraQ, q);
}

LatticeState LatticeState::from_coords(StateKind kind, const Vector& coords) {
  const auto d = coords.size();
  require_finite(coords, to_string(kind));
  switch (kind) {
    case StateKind::TodaQP:
      if (d < 2 || d % 2 != 0) throw DomainError("toda_qp: dimension must be 2N, N >= 1");
      break;
    case StateKind::TodaAB:
      if (d < 1 || d % 2 != 1) throw DomainError("toda_ab: dimension must be 2N-1, N >= 1");
      require_positive(coords.head((d - 1) / 2), "toda_ab");
      break;
    case StateKind::VolterraA:
      if (d < 1 || d % 2 != 1) throw DomainError("volterra_a: length must be odd");
      require_positive(coords, "volterra_a");
      break;
    case StateKind::VolterraQ:
      if (d < 2 || d % 2 != 0) throw DomainError("volterra_q: N must be even");
      break;
  }
  return LatticeState(kind, coords);
}

int LatticeState::lattice_size() const {
  const auto d = static_cast<int>(coords_.size());
  switch (kind_) {
    case StateKind::TodaQP: return d / 2;
    case StateKind::TodaAB: return (d + 1) / 2;
    case StateKind::VolterraA:
    case StateKind::VolterraQ: return d;
  }
  return d;
}

Vector LatticeState::q() const {
  if (kind_ == StateKind::TodaQP) return coords_.head(coords_.size() / 2);
  if (kind_ == StateKind::VolterraQ) return coords_;
  throw KindError("q() requires toda_qp or volterra_q");
}

Vector LatticeState::p() const {
  if (kind_ == StateKind::TodaQP) return coords_.tail(coords_.size() / 2);
  throw KindError("p() requires toda_qp");
}

Vector LatticeState::a() const {
  if (kind_ == StateKind::TodaAB) return coords_.head((coords_.size() - 1) / 2);
  if (kind_ == StateKind::VolterraA) return coords_;
  throw KindError("a() requires toda_ab or volterra_a");
}

Vector LatticeState::b() const {
  if (kind_ == StateKind::TodaAB) return coords_.tail((coords_.size() + 1) / 2);
  throw KindError("b() requires toda_ab");
}

void require_kind(const LatticeState& s, StateKind kind, std::string_view context) {
  if (s.kind() != kind) {
    throw KindError(std::string(context) + ": expected " + std::string(to_string(kind)) +
                    ", got " + std::string(to_string(s.kind())));
  }
}

JacobiMatrix::JacobiMatrix(Vector diag, Vector offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
  if (diag_.size() == 0 || offdiag_.size() != diag_.size() - 1) {
    throw DomainError("JacobiMatrix: offdiag must have length n-1");
  }
  require_finite(diag_, "JacobiMatrix");
  require_positive(offdiag_, "JacobiMatrix");
}

Matrix JacobiMatrix::dense() const {
  const auto n = diag_.size();
  Matrix m = Matrix::Zero(n, n);
  m.diagonal() = diag_;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = offdiag_[i];
    m(i + 1, i) = offdiag_[i];
  }
  return m;
}

SpectralData::SpectralData(Vector lambdas, Vector residue_roots)
    : lambdas_(std::move(lambdas)), residue_roots_(std::move(residue_roots)) {
  if (lambdas_.size() == 0 || lambdas_.size() != residue_roots_.size()) {
    throw DomainError("SpectralData: lambdas and residue roots must be non-empty, equal length");
  }
  require_finite(lambdas_, "SpectralData");
  require_finite(residue_roots_, "SpectralData");
  for (Eigen::Index i = 0; i + 1 < lambdas_.size(); ++i) {
    if (!(lambdas_[i] < lambdas_[i + 1])) {
      throw DomainError("SpectralData: eigenvalues must be strictly increasing");
    }
  }
  for (Eigen::Index i = 0; i < residue_roots_.size(); ++i) {
    if (!(residue_roots_[i] > 0.0)) throw DomainError("SpectralData: r_i must be positive");
  }
  if (std::abs(residue_roots_.squaredNorm() - 1.0) > 1e-12) {
    throw DomainError("SpectralData: sum r_i^2 must equal 1");
  }
}

SpectralData SpectralData::normalized(Vector lambdas, Vector residue_roots) {
  const double norm = residue_roots.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("SpectralData: residue roots have no finite positive norm");
  }
  return SpectralData(std::move(lambdas), residue_roots / norm);
}

JacobiMatrix build_lax_symmetric(const LatticeState& s) {
  require_kind(s, StateKind::TodaAB, "build_lax_symmetric");
  return JacobiMatrix(s.b(), s.a());
}

Matrix kostant_matrix(const Vector& subdiag, const Vector& diag) {
  const auto n = diag.size();
  if (subdiag.size() + 1 != n) throw DomainError("kostant_matrix: need len(subdiag) = n-1");
  Matrix m = Matrix::Zero(n, n);
  m.diagonal() = diag;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = 1.0;
    m(i + 1, i) = subdiag[i];
  }
  return m;
}

Matrix build_lax_kostant(const LatticeState& s) {
  require_kind(s, StateKind::TodaAB, "build_lax_kostant");
  return kostant_matrix(s.a().array().square().matrix(), s.b());
}

Matrix build_lax_kostant_by_conjugation(const LatticeState& s) {
  require_kind(s, StateKind::TodaAB, "build_lax_kostant_by_conjugation");
  const Vector a = s.a();
  const auto n = s.b().size();
  Vector d(n);
  d[0] = 1.0;
  for (Eigen::Index i = 1; i < n; ++i) d[i] = d[i - 1] * a[i - 1];
  const Matrix l = build_lax_symmetric(s).dense();
  return d.asDiagonal() * l * d.cwiseInverse().asDiagonal();
}

Matrix symmetric_volterra_lax(const Vector& entries) {
  const auto n = entries.size() + 1;
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = entries[i];
    m(i + 1, i) = entries[i];
  }
  return m;
}

Matrix build_lax_volterra(const LatticeState& s, VolterraLaxMode mode) {
  if (s.kind() == StateKind::VolterraA && s.dim() % 2 == 0) {
    throw DomainError("build_lax_volterra: even length");
  }
  require_kind(s, StateKind::VolterraA, "build_lax_volterra");
  const Vector& a = s.coords();
  if (mode == VolterraLaxMode::Symmetric) return symmetric_volterra_lax(a);
  return kostant_matrix(a, Vector::Zero(a.size() + 1));
}

std::vector<double> trace_invariants(const Matrix& lax, int k_max, TraceConvention convention) {
  if (lax.rows() != lax.cols() || lax.rows() == 0) {
    throw DomainError("trace_invariants: matrix must be square and non-empty");
  }
  if (k_max < 1) throw DomainError("trace_invariants: k_max must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k_max));
  const Matrix step = convention == TraceConvention::Toda ? lax : Matrix(lax * lax);
  Matrix power = step;
  for (int k = 1; k <= k_max; ++k) {
    const double order = convention == TraceConvention::Toda ? k : 2.0 * k;
    out.push_back(power.trace() / order);
    power = power * step;
  }
  return out;
}

Vector spectrum(const JacobiMatrix& l) { return tridiagonal_spectrum(l.diag(), l.offdiag()); }

Vector kostant_spectrum(const Vector& subdiag, const Vector& diag) {
  require_positive(subdiag, "kostant_spectrum");
  return tridiagonal_spectrum(diag, subdiag.array().sqrt().matrix());
}

}  // namespace todavolt
