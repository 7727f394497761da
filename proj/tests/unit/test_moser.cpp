#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "todavolt/errors.hpp"
#include "todavolt/flows.hpp"
#include "todavolt/moser.hpp"

using namespace todavolt;
using support::max_diff;

namespace {

SpectralData n2_data() {
  Vector l(2), r(2);
  l << 1.0, 2.0;
  r << std::sqrt(0.4), std::sqrt(0.6);
  return SpectralData(l, r);
}

LatticeState random_state(std::mt19937_64& rng, int n) {
  return LatticeState::from_coords(StateKind::TodaAB, support::toda_ab(rng, n));
}

}  // namespace

TEST_CASE("spectral decomposition of the swap matrix") {
  const auto s = LatticeState::toda_ab(Vector::Ones(1), Vector::Zero(2));
  const SpectralData sd = spectral_decompose(build_lax_symmetric(s));
  CHECK(sd.lambdas()[0] == doctest::Approx(-1.0));
  CHECK(sd.lambdas()[1] == doctest::Approx(1.0));
  CHECK(sd.residue_roots()[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(sd.residue_roots()[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("eigenpairs reconstruct the matrix") {
  std::mt19937_64 rng(60);
  for (int n = 2; n <= 8; ++n) {
    const JacobiMatrix l = build_lax_symmetric(random_state(rng, n));
    const auto eig = tridiagonal_eigen(l.diag(), l.offdiag());
    const Matrix dense = l.dense();
    for (int i = 0; i < n; ++i) {
      CHECK((dense * eig.vectors.col(i) - eig.values[i] * eig.vectors.col(i)).norm() < 1e-10 * std::max(1.0, dense.norm()));
    }
  }
}

TEST_CASE("near-degenerate spectra are rejected") {
  Vector a(1), b(2);
  a << 1e-12;
  b << 0.0, 0.0;
  CHECK_THROWS_AS(spectral_decompose(build_lax_symmetric(LatticeState::toda_ab(a, b))), DegeneracyError);
}

TEST_CASE("Weyl function") {
  const JacobiMatrix swap = build_lax_symmetric(LatticeState::toda_ab(Vector::Ones(1), Vector::Zero(2)));
  const auto w = weyl_eval(swap, 2.0);
  CHECK(w.resolvent == doctest::Approx(2.0 / 3.0));
  CHECK(w.recursion == doctest::Approx(2.0 / 3.0));
  CHECK(w.partial_fractions == doctest::Approx(2.0 / 3.0));

  const double big = 1e6;
  CHECK(std::abs(big * weyl_eval(swap, big).resolvent - 1.0) < 1e-5);

  const JacobiMatrix one(Vector::Constant(1, 0.3), Vector(0));
  CHECK(weyl_eval(one, 1.3).resolvent == doctest::Approx(1.0));
  CHECK_THROWS_AS(weyl_eval(swap, 1.0), DomainError);
}

TEST_CASE("evolution of the spectral data") {
  const SpectralData sd = n2_data();
  CHECK(max_diff(evolve_spectral(sd, 0.0).residue_roots(), sd.residue_roots()) < 1e-15);

  Vector l(2), r(2);
  l << -1, 1;
  r << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  CHECK(evolve_spectral(SpectralData(l, r), 20.0).residue_roots()[0] > 1 - 1e-8);

  // Large t must not overflow.
  const SpectralData far = evolve_spectral(sd, 800.0);
  CHECK(std::isfinite(far.residue_roots()[0]));

  // RK4 integration of r_i' = -(lambda_i - sum lambda_j r_j^2) r_i.
  std::mt19937_64 rng(61);
  const SpectralData s3 = spectral_decompose(build_lax_symmetric(random_state(rng, 3)));
  Vector x = s3.residue_roots();
  const Vector lam = s3.lambdas();
  const auto f = [&lam](const Vector& y) {
    const double mean = (lam.array() * y.array().square()).sum();
    return Vector(-(lam.array() - mean) * y.array());
  };
  const double h = 1e-3;
  for (int k = 0; k < 1000; ++k) {
    const Vector k1 = f(x), k2 = f(x + h / 2 * k1), k3 = f(x + h / 2 * k2), k4 = f(x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  CHECK(max_diff(x, evolve_spectral(s3, 1.0).residue_roots()) < 1e-8);
}

TEST_CASE("moments and Hankel determinants, N = 2") {
  const Vector c = moments(n2_data(), 4);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(1.6));
  CHECK(c[2] == doctest::Approx(2.8));
  CHECK(c[3] == doctest::Approx(5.2));

  const auto h = hankel_determinants(n2_data());
  CHECK(h.a[1] == doctest::Approx(1.0));
  CHECK(h.a[2] == doctest::Approx(0.24));
  CHECK(h.b[1] == doctest::Approx(1.6));
  CHECK(h.b[2] == doctest::Approx(0.48));
}

TEST_CASE("Stieltjes inversion, N = 2") {
  const auto result = stieltjes_invert(n2_data());
  CHECK_FALSE(result.used_fallback);
  const Vector ab = result.state.coords();
  CHECK(std::abs(ab[0] * ab[0] - 0.24) < 1e-12);
  CHECK(std::abs(ab[1] - 1.4) < 1e-12);
  CHECK(std::abs(ab[2] - 1.6) < 1e-12);

  // b_1 = r_1^2 lambda_2 + r_2^2 lambda_1, a_1^2 = r_1^2 r_2^2 (lambda_2 - lambda_1)^2
  const double r1 = 0.4, r2 = 0.6;
  CHECK(ab[1] == doctest::Approx(r1 * 2 + r2 * 1).epsilon(1e-14));
  CHECK(ab[0] * ab[0] == doctest::Approx(r1 * r2).epsilon(1e-14));
}

TEST_CASE("symmetric spectrum takes the fallback") {
  Vector l(2), r(2);
  l << -1, 1;
  r << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const auto result = stieltjes_invert(SpectralData(l, r));
  CHECK(result.used_fallback);
  CHECK(result.state.a()[0] == doctest::Approx(1.0));
  CHECK(std::abs(result.state.b()[0]) < 1e-12);
  CHECK(std::abs(result.state.b()[1]) < 1e-12);
  CHECK_THROWS_AS(stieltjes_invert(SpectralData(l, r), InversionMethod::Hankel), SingularityError);
}

TEST_CASE("round trip and trace consistency") {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 6 + (trial % 6 == 0 ? 1 : 0);
    const auto s = random_state(rng, n);
    const SpectralData sd = spectral_decompose(build_lax_symmetric(s));
    const auto back = stieltjes_invert(sd);
    CHECK(max_diff(back.state.coords(), s.coords()) < 1e-9);
    CHECK(max_diff(lanczos_invert(sd).coords(), s.coords()) < 1e-9);
    CHECK(back.state.b().sum() == doctest::Approx(sd.lambdas().sum()).epsilon(1e-10));
  }
}

TEST_CASE("explicit solution") {
  const auto s0 = LatticeState::toda_ab(Vector::Ones(1), Vector::Zero(2));
  CHECK(max_diff(solve_toda_explicit(s0, 0.0).state.coords(), s0.coords()) < 1e-9);

  // a_1(t) = 1 / cosh(2t), b_1(t) = tanh(2t) = -b_2(t) for a = (1), b = (0, 0).
  const Vector at1 = solve_toda_explicit(s0, 1.0).state.coords();
  CHECK(at1[0] == doctest::Approx(1.0 / std::cosh(2.0)).epsilon(1e-12));
  CHECK(at1[1] == doctest::Approx(std::tanh(2.0)).epsilon(1e-12));
  CHECK(at1[2] == doctest::Approx(-std::tanh(2.0)).epsilon(1e-12));
  const Vector ode = integrate(System::TODA_TRI, s0, 1.0, 0.5, Method::RK45).states.back().coords();
  CHECK(max_diff(at1, ode) < 1e-7);

  std::mt19937_64 rng(63);
  Vector x(5);
  x << support::uniform(rng, 2, 0.8, 1.2), support::uniform(rng, 3, -0.5, 0.5);
  const auto s3 = LatticeState::from_coords(StateKind::TodaAB, x);
  const Vector rk = integrate(System::TODA_TRI, s3, 2.0, 1.0, Method::RK45).states.back().coords();
  CHECK(max_diff(solve_toda_explicit(s3, 2.0).state.coords(), rk) < 1e-6);
}

TEST_CASE("flow property, homogeneity and asymptotics") {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_state(rng, 2 + trial % 5);
    const Vector once = solve_toda_explicit(s, 1.3).state.coords();
    const Vector twice = solve_toda_explicit(solve_toda_explicit(s, 0.5).state, 0.8).state.coords();
    CHECK(max_diff(once, twice) < 1e-8);

    const SpectralData sd = spectral_decompose(build_lax_symmetric(s));
    const SpectralData scaled = SpectralData::normalized(sd.lambdas(), 3.0 * sd.residue_roots());
    CHECK(max_diff(stieltjes_invert(sd).state.coords(), stieltjes_invert(scaled).state.coords()) < 1e-10);
  }
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_state(rng, 3);
    const Vector lambdas = spectrum(build_lax_symmetric(s));
    const auto late = solve_toda_explicit(s, 30.0).state;
    CHECK(late.a().maxCoeff() < 1e-6);
    // b_1 tends to the largest eigenvalue.
    CHECK(max_diff(Vector(late.b().reverse()), lambdas) < 1e-5);
  }
}
