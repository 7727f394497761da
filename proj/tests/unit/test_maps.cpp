#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "todavolt/coordinates.hpp"
#include "todavolt/errors.hpp"
#include "todavolt/flows.hpp"
#include "todavolt/maps.hpp"

using namespace todavolt;
using support::max_diff;

TEST_CASE("Flaschka map") {
  const auto zero = flaschka(LatticeState::toda_qp(Vector::Zero(3), Vector::Zero(3)));
  CHECK(zero.a() == Vector::Ones(2));
  CHECK(zero.b() == Vector::Zero(3));

  Vector q(2), p(2);
  q << 1, 0;
  p << 2, 3;
  const auto s = flaschka(LatticeState::toda_qp(q, p));
  CHECK(s.a()[0] == doctest::Approx(std::exp(1.0)));
  CHECK(s.b()[0] == -2.0);
  CHECK(s.b()[1] == -3.0);

  std::mt19937_64 rng(50);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector x = support::uniform(rng, 8, -1, 1);
    const Matrix pushed = coordinates::push_forward(coordinates::flaschka_jacobian(x), tensors::toda_j1(x));
    CHECK(max_diff(pushed, tensors::toda_pi1(coordinates::flaschka(x))) < 1e-8);
  }
}

TEST_CASE("realization map G") {
  CHECK(gmap(LatticeState::volterra_q(Vector::Zero(4))).a() == Vector::Ones(3));
  Vector q(4);
  q << 3, 2, 1, 0;
  for (double a : gmap(LatticeState::volterra_q(q)).a()) CHECK(a == doctest::Approx(std::exp(1.0)));

  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector x = support::uniform(rng, 6, -0.5, 0.5);
    const Matrix d = coordinates::realization_jacobian(x);
    const Vector a = coordinates::realization(x);
    CHECK(max_diff(coordinates::push_forward(d, tensors::realization_w2(x)), tensors::volterra_v2(a)) < 1e-8);
    CHECK(max_diff(coordinates::push_forward(d, tensors::realization_w3(x)), tensors::volterra_v3(a)) < 1e-8);
  }
}

TEST_CASE("chopping the square of the symmetric Volterra matrix") {
  Vector expected(5);
  expected << 1, 1, 1, 2, 1;
  CHECK(chop_square(Vector::Ones(4)) == expected);

  // A_i = s_{2i-1} s_{2i}, B_i = s_{2i-2}^2 + s_{2i-1}^2
  Vector s(5);
  s << 1, 2, 3, 4, 5;
  Vector direct(5);
  direct << 1 * 2, 3 * 4, 1, 4 + 9, 16 + 25;
  CHECK(chop_square(s) == direct);

  const auto image = volterra_to_toda(LatticeState::volterra_a(s), VolterraToTodaMode::CHOP_SQUARE);
  CHECK(image.state.coords() == direct);
  CHECK(image.offdiag_sign == 1);
  CHECK_THROWS_AS(volterra_to_toda(LatticeState::volterra_a(Vector::Ones(1)), VolterraToTodaMode::CHOP_SQUARE),
                  DomainError);

  Vector k(3);
  k << 4, 9, 16;
  CHECK(max_diff(volterra_kostant_to_symmetric(k), Vector(Eigen::Vector3d(2, 3, 4))) == 0.0);
  CHECK(max_diff(volterra_symmetric_to_kostant(volterra_kostant_to_symmetric(k)), k) < 1e-14);
}

TEST_CASE("chopped spectrum is the squared Volterra spectrum") {
  std::mt19937_64 rng(52);
  const Vector s = support::uniform(rng, 5, 0.5, 2.0);
  const Vector ab = chop_square(s);
  const Vector chopped = tridiagonal_spectrum(ab.tail(3), ab.head(2));
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric_volterra_lax(s));
  const Vector squares = es.eigenvalues().array().square();
  for (double mu : chopped) CHECK((squares.array() - mu).abs().minCoeff() < 1e-8);
}

TEST_CASE("Henon map") {
  const auto image = volterra_to_toda(LatticeState::volterra_a(Vector::Ones(5)), VolterraToTodaMode::HENON);
  Vector expected(5);
  expected << 0.5, 0.5, 0.5, 1.0, 1.0;
  CHECK(max_diff(image.state.coords(), expected) < 1e-15);
  CHECK(image.offdiag_sign == -1);
  CHECK(volterra_to_toda_mode_from_string("henon") == VolterraToTodaMode::HENON);
  CHECK_THROWS_AS(volterra_to_toda_mode_from_string("square"), ConfigError);
}

TEST_CASE("Henon image of a KM trajectory is a Toda trajectory") {
  Vector a0(5);
  a0 << 0.9, 1.3, 0.7, 1.1, 1.4;
  const Trajectory tr = integrate(System::VOLTERRA_A, LatticeState::volterra_a(a0), 2.0, 0.01, Method::RK45);
  const auto henon = [](const Vector& a) {
    return Vector(volterra_to_toda(LatticeState::volterra_a(a), VolterraToTodaMode::HENON).state.coords());
  };
  // Differentiate the image along the sampled trajectory by central differences in time.
  for (std::size_t k = 1; k + 1 < tr.states.size(); k += 20) {
    const double h = tr.times[k + 1] - tr.times[k];
    const Vector lhs = (henon(tr.states[k + 1].coords()) - henon(tr.states[k - 1].coords())) / (2 * h);
    const Vector target = rhs(System::TODA_TRI, henon(tr.states[k].coords()));
    CHECK(max_diff(lhs, target) < 1e-3);  // O(h^2) time differencing
  }
  // Directional derivative along the KM field is exact to FD accuracy.
  for (const auto& st : tr.states) {
    const Vector a = st.coords();
    const Vector da = rhs(System::VOLTERRA_A, a);
    const double h = 1e-6;
    const Vector lhs = (henon(a + h * da) - henon(a - h * da)) / (2 * h);
    CHECK(max_diff(lhs, rhs(System::TODA_TRI, henon(a))) < 1e-6);
  }
}

TEST_CASE("involutions") {
  const auto psi = make_involution(InvolutionId::PSI, 6);
  std::mt19937_64 rng(53);
  const Vector x = support::uniform(rng, 6, -1, 1);
  CHECK(apply_involution(psi, apply_involution(psi, x)) == x);
  CHECK(apply_involution(psi, x).tail(3) == Vector(-x.tail(3)));

  const auto phi = make_involution(InvolutionId::PHI, 5);
  CHECK(phi.fixed_coords == std::vector<int>{0, 1});
  CHECK(phi.anti_coords == std::vector<int>{2, 3, 4});
  const Vector y = phi.embed(Vector::Ones(2));
  CHECK(apply_involution(phi, y) == y);

  const Vector ab = support::toda_ab(rng, 3);
  CHECK(automorphism_residual(catalog_tensor(TensorTag::PI2, 5), phi, ab) < 1e-10);
  CHECK(automorphism_residual(catalog_tensor(TensorTag::PI3, 5), phi, ab) > 0.1);
  CHECK_THROWS_AS(apply_involution(phi, LatticeState::volterra_a(Vector::Ones(3))), KindError);
}

TEST_CASE("fixed-set reductions") {
  Vector a(3);
  a << 1, 2, 3;
  const auto phi = make_involution(InvolutionId::PHI, 7);
  CHECK(max_diff(fixed_set_reduce(catalog_tensor(TensorTag::PI2, 7), phi, a), tensors::volterra_v2(a)) < 1e-12);
  CHECK(max_diff(fixed_set_reduce(catalog_tensor(TensorTag::PIk, 7, 4), phi, a), tensors::volterra_v3(a)) < 1e-8);
  CHECK_THROWS_AS(fixed_set_reduce(catalog_tensor(TensorTag::PI3, 7), phi, a), InvarianceViolation);

  std::mt19937_64 rng(54);
  const Vector q = support::uniform(rng, 4, -0.5, 0.5);
  const auto psi = make_involution(InvolutionId::PSI, 8);
  CHECK(max_diff(fixed_set_reduce(catalog_tensor(TensorTag::J2, 8), psi, q), tensors::realization_w2(q)) == 0.0);
  CHECK(max_diff(fixed_set_reduce(catalog_tensor(TensorTag::Jk, 8, 4), psi, q), tensors::realization_w3(q)) < 1e-8);
}

TEST_CASE("diagram commutes") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector q = support::uniform(rng, 4, -0.5, 0.5);
    CHECK(diagram_residual(1, q) < 1e-7);
    CHECK(diagram_residual(2, q) < 1e-7);
  }
}
