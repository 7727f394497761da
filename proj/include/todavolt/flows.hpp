#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "todavolt/lattice.hpp"

namespace todavolt {

/// The equation systems and the phase space each one acts on.
///
///   TODA_TRI      TodaAB, symmetric Jacobi variables
///                   a_i' = a_i (b_{i+1} - b_i),  b_i' = 2 (a_i^2 - a_{i-1}^2)
///   TODA_KOSTANT  TodaAB, Kostant variables
///                   a_i' = a_i (b_{i+1} - b_i),  b_i' = a_i - a_{i-1}
///   TODA_QP       TodaQP, q' = p, p_i' = e^{q_{i-1}-q_i} - e^{q_i-q_{i+1}}
///   VOLTERRA_A    VolterraA, a_i' = a_i (a_{i+1} - a_{i-1})
///   VOLTERRA_Q    VolterraQ, q_i' = -e^{q_{i-1}-q_i} - e^{q_i-q_{i+1}}
///
/// Out-of-range neighbours (a_0, a_{m+1}, q_0, q_{N+1} terms) are dropped.
enum class System { TODA_TRI, TODA_KOSTANT, TODA_QP, VOLTERRA_A, VOLTERRA_Q };

std::string_view to_string(System system);
System system_from_string(std::string_view name);
StateKind system_space(System system);

Vector rhs(System system, const LatticeState& s);
/// Raw-coordinate form, no validation.
Vector rhs(System system, const Vector& x);

enum class Method { RK4, RK45 };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);

struct Trajectory {
  System system;
  Method method;
  double dt;
  std::vector<double> times;
  std::vector<LatticeState> states;
};

struct IntegrateOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
};

/// RK4: fixed step dt, samples at multiples of dt (plus t_end if it is not a
/// multiple). RK45: Dormand-Prince with dense output at the same sample
/// times. Throws DomainExit when some a_i <= 0 and StepUnderflow when the
/// adaptive step collapses.
Trajectory integrate(System system, const LatticeState& s0, double t_end, double dt,
                     Method method = Method::RK4, const IntegrateOptions& options = {});

/// Final state only, RK45 at the given tolerances.
LatticeState integrate_to(System system, const LatticeState& s0, double t_end,
                          const IntegrateOptions& options = {});

/// Lax matrix attached to a state of the given system: symmetric Jacobi
/// matrix for TODA_TRI, Kostant form for TODA_KOSTANT / TODA_QP (through
/// Flaschka), Kostant Volterra matrix for VOLTERRA_A / VOLTERRA_Q (through G).
Matrix system_lax(System system, const LatticeState& s);

/// Ascending spectrum of system_lax.
Vector system_spectrum(System system, const LatticeState& s);

struct ConservationReport {
  std::vector<std::string> names;  // H1.., or I1.., plus detL for Volterra
  std::vector<double> drift;       // max_t |f(t) - f(0)|
  Vector eigenvalue_drift;         // per eigenvalue, ascending order
  double max_invariant_drift() const;
  double max_eigenvalue_drift() const;
};

ConservationReport conservation_report(const Trajectory& tr, int k_max);

/// Header "t,x_1,...,x_d", one row per sample, %.17g.
std::string trajectory_csv(const Trajectory& tr);
/// {"dt", "method", "states", "system", "times"}
std::string trajectory_json(const Trajectory& tr);

}  // namespace todavolt
