#include "todavolt/moser.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "todavolt/errors.hpp"

namespace todavolt {

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

constexpr double kMinGap = 1e-10;
constexpr double kHankelFloor = 1e-12;

}  // namespace

SpectralData spectral_decompose(const JacobiMatrix& l) {
  const auto eig = tridiagonal_eigen(l.diag(), l.offdiag());
  const auto n = l.size();
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (eig.values[i + 1] - eig.values[i] < kMinGap) {
      throw DegeneracyError("spectral_decompose: eigenvalues " + std::to_string(i + 1) + " and " +
                            std::to_string(i + 2) + " are closer than 1e-10");
    }
  }
  Vector r = eig.vectors.row(n - 1).transpose().cwiseAbs();
  return SpectralData::normalized(eig.values, r);
}

WeylEvaluation weyl_eval(const JacobiMatrix& l, double lambda) {
  const auto n = l.size();
  const SpectralData sd = spectral_decompose(l);
  const Vector gaps = (sd.lambdas().array() - lambda).abs();
  if (gaps.minCoeff() <= kMinGap) throw DomainError("weyl_eval: lambda lies on the spectrum");

  WeylEvaluation w{};
  {
    Matrix shifted = -l.dense();
    shifted.diagonal().array() += lambda;
    const Vector e = Vector::Unit(n, n - 1);
    w.resolvent = shifted.partialPivLu().solve(e)[n - 1];
  }
  {
    double prev = 1.0;
    double cur = lambda - l.diag()[0];
    double before_last = prev;
    for (Eigen::Index k = 1; k < n; ++k) {
      const double off = l.offdiag()[k - 1];
      const double next = (lambda - l.diag()[k]) * cur - off * off * prev;
      before_last = cur;
      prev = cur;
      cur = next;
    }
    w.recursion = before_last / cur;
  }
  w.partial_fractions = (sd.residue_roots().array().square() / (lambda - sd.lambdas().array())).sum();

  const double scale = std::max({std::abs(w.resolvent), std::abs(w.recursion), 1e-300});
  if (std::abs(w.resolvent - w.recursion) > 1e-9 * scale ||
      std::abs(w.resolvent - w.partial_fractions) > 1e-9 * scale) {
    throw Error("weyl_eval: resolvent, recursion and partial fractions disagree");
  }
  return w;
}

SpectralData evolve_spectral(const SpectralData& sd, double t) {
  if (t == 0.0) return sd;
  const Vector log_rho = sd.residue_roots().array().log() - sd.lambdas().array() * t;
  const Vector rho = (log_rho.array() - log_rho.maxCoeff()).exp();
  return SpectralData::normalized(sd.lambdas(), rho);
}

Vector moments(const SpectralData& sd, int count) {
  const Vector w = sd.residue_roots().array().square();
  Vector c(count);
  Vector power = Vector::Ones(sd.size());
  for (int j = 0; j < count; ++j) {
    c[j] = w.dot(power);
    power = power.cwiseProduct(sd.lambdas());
  }
  return c;
}

HankelDeterminants hankel_determinants(const SpectralData& sd) {
  const auto n = static_cast<int>(sd.size());
  // Moments in extended precision; c_j needed up to j = 2n - 1.
  const Vector w = sd.residue_roots().array().square();
  std::vector<long double> c(2 * n, 0.0L);
  for (Eigen::Index i = 0; i < sd.size(); ++i) {
    long double power = 1.0L;
    for (int j = 0; j < 2 * n; ++j) {
      c[j] += static_cast<long double>(w[i]) * power;
      power *= static_cast<long double>(sd.lambdas()[i]);
    }
  }
  HankelDeterminants h{Vector::Ones(n + 1), Vector::Ones(n + 1)};
  for (int i = 1; i <= n; ++i) {
    LongMatrix ha(i, i);
    LongMatrix hb(i, i);
    for (int j = 0; j < i; ++j) {
      for (int k = 0; k < i; ++k) {
        ha(j, k) = c[j + k];
        hb(j, k) = c[j + k + 1];
      }
    }
    h.a[i] = static_cast<double>(ha.partialPivLu().determinant());
    h.b[i] = static_cast<double>(hb.partialPivLu().determinant());
  }
  return h;
}

LatticeState lanczos_invert(const SpectralData& sd) {
  const auto n = sd.size();
  Matrix q = Matrix::Zero(n, n);
  Vector alpha(n);
  Vector beta = Vector::Zero(std::max<Eigen::Index>(n - 1, 0));
  q.col(0) = sd.residue_roots() / sd.residue_roots().norm();
  for (Eigen::Index k = 0; k < n; ++k) {
    Vector v = sd.lambdas().cwiseProduct(q.col(k));
    alpha[k] = q.col(k).dot(v);
    if (k + 1 == n) break;
    for (int pass = 0; pass < 2; ++pass) {
      v -= q.leftCols(k + 1) * (q.leftCols(k + 1).transpose() * v);
    }
    beta[k] = v.norm();
    if (!(beta[k] > 0.0)) throw SingularityError("lanczos_invert: Krylov space collapsed");
    q.col(k + 1) = v / beta[k];
  }
  // The recurrence starts from e_1; the spectral data lives on e_N.
  Vector ab(2 * n - 1);
  ab.head(n - 1) = beta.reverse();
  ab.tail(n) = alpha.reverse();
  return LatticeState::from_coords(StateKind::TodaAB, ab);
}

InversionResult stieltjes_invert(const SpectralData& sd, InversionMethod method) {
  if (method == InversionMethod::Lanczos) return {lanczos_invert(sd), true};
  const auto n = static_cast<int>(sd.size());
  const HankelDeterminants h = hankel_determinants(sd);
  const auto b_det = [&h](int i) { return i < 0 ? 0.0 : h.b[i]; };
  for (int i = 1; i < n; ++i) {
    if (std::abs(h.b[i]) < kHankelFloor) {
      if (method == InversionMethod::Hankel) {
        throw SingularityError("stieltjes_invert: Hankel determinant B_" + std::to_string(i) + " vanishes");
      }
      return {lanczos_invert(sd), true};
    }
  }
  // a_{N-i}^2 = A_{i-1} A_{i+1} / A_i^2,
  // b_{N+1-i} = A_i B_{i-2} / (A_{i-1} B_{i-1}) + A_{i-1} B_i / (A_i B_{i-1}).
  Vector ab(2 * n - 1);
  for (int i = 1; i < n; ++i) ab[n - i - 1] = std::sqrt(h.a[i - 1] * h.a[i + 1] / (h.a[i] * h.a[i]));
  for (int i = 1; i <= n; ++i) {
    ab[n - 1 + n - i] = h.a[i] * b_det(i - 2) / (h.a[i - 1] * h.b[i - 1]) +
                        h.a[i - 1] * h.b[i] / (h.a[i] * h.b[i - 1]);
  }
  if (!ab.allFinite() || (n > 1 && !(ab.head(n - 1).array() > 0.0).all())) {
    if (method == InversionMethod::Hankel) throw SingularityError("stieltjes_invert: Hankel path broke down");
    return {lanczos_invert(sd), true};
  }
  return {LatticeState::from_coords(StateKind::TodaAB, ab), false};
}

ExplicitSolution solve_toda_explicit(const LatticeState& s0, double t, InversionMethod method) {
  require_kind(s0, StateKind::TodaAB, "solve_toda_explicit");
  const SpectralData sd = evolve_spectral(spectral_decompose(build_lax_symmetric(s0)), t);
  auto [state, fallback] = stieltjes_invert(sd, method);
  return {std::move(state), fallback};
}

}  // namespace todavolt
