#include "todavolt/maps.hpp"

#include <cmath>
#include <string>

#include "todavolt/coordinates.hpp"
#include "todavolt/errors.hpp"

namespace todavolt {

LatticeState flaschka(const LatticeState& s) {
  require_kind(s, StateKind::TodaQP, "flaschka");
  return LatticeState::from_coords(StateKind::TodaAB, coordinates::flaschka(s.coords()));
}

LatticeState gmap(const LatticeState& s) {
  require_kind(s, StateKind::VolterraQ, "gmap");
  return LatticeState::volterra_a(coordinates::realization(s.coords()));
}

VolterraToTodaMode volterra_to_toda_mode_from_string(std::string_view name) {
  if (name == "chop_square") return VolterraToTodaMode::CHOP_SQUARE;
  if (name == "henon") return VolterraToTodaMode::HENON;
  throw ConfigError("unknown volterra_to_toda mode '" + std::string(name) + "'");
}

Vector chop_square(const Vector& s) {
  const auto k = s.size();
  if (k < 1) throw DomainError("chop_square: need at least one entry");
  const auto entry = [&](Eigen::Index i) { return (i >= 1 && i <= k) ? s[i - 1] : 0.0; };
  // L is (k+1) x (k+1); rows 1, 3, 5, ... (1-based) survive.
  const auto n = (k + 2) / 2;
  Vector ab(2 * n - 1);
  for (Eigen::Index i = 1; i < n; ++i) ab[i - 1] = entry(2 * i - 1) * entry(2 * i);
  for (Eigen::Index i = 1; i <= n; ++i) {
    ab[n - 2 + i] = entry(2 * i - 2) * entry(2 * i - 2) + entry(2 * i - 1) * entry(2 * i - 1);
  }
  return ab;
}

TodaImage volterra_to_toda(const LatticeState& s, VolterraToTodaMode mode) {
  require_kind(s, StateKind::VolterraA, "volterra_to_toda");
  const Vector a = s.a();
  if (mode == VolterraToTodaMode::CHOP_SQUARE) {
    if (a.size() < 3) throw DomainError("volterra_to_toda: CHOP_SQUARE needs m >= 3");
    return {LatticeState::from_coords(StateKind::TodaAB, chop_square(a)), 1};
  }
  const auto m = a.size();
  const auto n = (m + 1) / 2;
  const auto entry = [&](Eigen::Index i) { return (i >= 1 && i <= m) ? a[i - 1] : 0.0; };
  Vector ab(2 * n - 1);
  for (Eigen::Index i = 1; i < n; ++i) ab[i - 1] = 0.5 * std::sqrt(entry(2 * i) * entry(2 * i - 1));
  for (Eigen::Index i = 1; i <= n; ++i) ab[n - 2 + i] = 0.5 * (entry(2 * i - 1) + entry(2 * i - 2));
  return {LatticeState::from_coords(StateKind::TodaAB, ab), -1};
}

Vector volterra_kostant_to_symmetric(const Vector& a) {
  if ((a.array() <= 0.0).any()) throw DomainError("volterra_kostant_to_symmetric: entries must be positive");
  return a.cwiseSqrt();
}

Vector volterra_symmetric_to_kostant(const Vector& s) { return s.cwiseProduct(s); }

// ---------------------------------------------------------------------------
// Involutions and reduction
// ---------------------------------------------------------------------------

Matrix InvolutionSpec::matrix() const {
  Vector d = Vector::Ones(dim);
  for (int l : anti_coords) d[l] = -1.0;
  return d.asDiagonal();
}

Vector InvolutionSpec::embed(const Vector& fixed_values) const {
  if (fixed_values.size() != static_cast<Eigen::Index>(fixed_coords.size())) {
    throw DomainError("embed: expected " + std::to_string(fixed_coords.size()) + " fixed coordinates");
  }
  Vector x = Vector::Zero(dim);
  for (std::size_t l = 0; l < fixed_coords.size(); ++l) x[fixed_coords[l]] = fixed_values[l];
  return x;
}

InvolutionSpec make_involution(InvolutionId id, int dim) {
  InvolutionSpec inv{id, id == InvolutionId::PHI ? StateKind::TodaAB : StateKind::TodaQP, dim, {}, {}};
  if (id == InvolutionId::PHI) {
    if (dim < 1 || dim % 2 == 0) throw DomainError("PHI: TodaAB dimension must be odd");
    const int n = (dim + 1) / 2;
    for (int l = 0; l < n - 1; ++l) inv.fixed_coords.push_back(l);
    for (int l = n - 1; l < dim; ++l) inv.anti_coords.push_back(l);
  } else {
    if (dim < 2 || dim % 2 != 0) throw DomainError("PSI: TodaQP dimension must be even");
    const int n = dim / 2;
    for (int l = 0; l < n; ++l) inv.fixed_coords.push_back(l);
    for (int l = n; l < dim; ++l) inv.anti_coords.push_back(l);
  }
  return inv;
}

Vector apply_involution(const InvolutionSpec& inv, const Vector& x) {
  if (x.size() != inv.dim) throw DomainError("apply_involution: dimension mismatch");
  Vector y = x;
  for (int l : inv.anti_coords) y[l] = -y[l];
  return y;
}

LatticeState apply_involution(const InvolutionSpec& inv, const LatticeState& s) {
  require_kind(s, inv.space, "apply_involution");
  return LatticeState::from_coords(s.kind(), apply_involution(inv, s.coords()));
}

double automorphism_residual(const BivectorField& p, const InvolutionSpec& inv, const Vector& x) {
  const Matrix d = inv.matrix();
  return max_abs(Matrix(d * p(x) * d - p(apply_involution(inv, x))));
}

Matrix fixed_set_reduce(const BivectorField& p, const InvolutionSpec& inv, const Vector& y) {
  if (p.dim() != inv.dim) throw DomainError("fixed_set_reduce: tensor and involution differ in dimension");
  const Vector x = inv.embed(y);
  const Matrix full = p(x);
  double mixed = 0.0;
  for (int i : inv.fixed_coords) {
    for (int j : inv.anti_coords) mixed = std::max(mixed, std::abs(full(i, j)));
  }
  if (mixed > 1e-10 * std::max(1.0, max_abs(full))) {
    throw InvarianceViolation(to_string(p.id()) + " is not invariant under the involution (mixed block " +
                              std::to_string(mixed) + ")");
  }
  const auto k = static_cast<Eigen::Index>(inv.fixed_coords.size());
  Matrix reduced(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) reduced(r, c) = full(inv.fixed_coords[r], inv.fixed_coords[c]);
  }
  return reduced;
}

BivectorField reduced_tensor(const BivectorField& p, const InvolutionSpec& inv) {
  TensorId id{TensorTag::Reduced, 0,
              to_string(p.id()) + "," + (inv.id == InvolutionId::PHI ? "PHI" : "PSI")};
  return BivectorField(std::move(id), static_cast<int>(inv.fixed_coords.size()),
                       [p, inv](const Vector& y) { return fixed_set_reduce(p, inv, y); });
}

double diagram_residual(int k, const Vector& q) {
  const int n = static_cast<int>(q.size());
  (void)LatticeState::volterra_q(q);
  const auto psi = make_involution(InvolutionId::PSI, 2 * n);
  const auto phi = make_involution(InvolutionId::PHI, 2 * n - 1);
  const Matrix upstairs = fixed_set_reduce(catalog_tensor(TensorTag::Jk, 2 * n, 2 * k), psi, q);
  const Matrix pushed = coordinates::push_forward(coordinates::realization_jacobian(q), upstairs);
  const Matrix downstairs =
      fixed_set_reduce(catalog_tensor(TensorTag::PIk, 2 * n - 1, 2 * k), phi, coordinates::realization(q));
  return max_abs(Matrix(pushed - downstairs));
}

}  // namespace todavolt
