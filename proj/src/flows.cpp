#include "todavolt/flows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <boost/numeric/odeint.hpp>
#include "json.hpp"

#include "todavolt/coordinates.hpp"
#include "todavolt/errors.hpp"

namespace odeint = boost::numeric::odeint;

namespace todavolt {

std::string_view to_string(System system) {
  switch (system) {
    case System::TODA_TRI: return "toda_tri";
    case System::TODA_KOSTANT: return "toda_kostant";
    case System::TODA_QP: return "toda_qp";
    case System::VOLTERRA_A: return "volterra_a";
    case System::VOLTERRA_Q: return "volterra_q";
  }
  return "?";
}

System system_from_string(std::string_view name) {
  for (System s : {System::TODA_TRI, System::TODA_KOSTANT, System::TODA_QP, System::VOLTERRA_A,
                   System::VOLTERRA_Q}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("unknown system '" + std::string(name) + "'");
}

StateKind system_space(System system) {
  switch (system) {
    case System::TODA_TRI:
    case System::TODA_KOSTANT: return StateKind::TodaAB;
    case System::TODA_QP: return StateKind::TodaQP;
    case System::VOLTERRA_A: return StateKind::VolterraA;
    case System::VOLTERRA_Q: return StateKind::VolterraQ;
  }
  return StateKind::TodaAB;
}

std::string_view to_string(Method method) { return method == Method::RK4 ? "rk4" : "rk45"; }

Method method_from_string(std::string_view name) {
  if (name == "rk4") return Method::RK4;
  if (name == "rk45") return Method::RK45;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

Vector rhs(System system, const Vector& x) {
  const auto d = x.size();
  Vector dx = Vector::Zero(d);
  switch (system) {
    case System::TODA_TRI:
    case System::TODA_KOSTANT: {
      const auto n = (d + 1) / 2;
      const auto a = x.head(n - 1);
      const auto b = x.tail(n);
      const bool tri = system == System::TODA_TRI;
      for (Eigen::Index i = 0; i + 1 < n; ++i) {
        dx[i] = a[i] * (b[i + 1] - b[i]);
        const double flux = tri ? 2.0 * a[i] * a[i] : a[i];
        dx[n - 1 + i] += flux;
        dx[n + i] -= flux;
      }
      break;
    }
    case System::TODA_QP: {
      const auto n = d / 2;
      dx.head(n) = x.tail(n);
      for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double e = std::exp(x[i] - x[i + 1]);
        dx[n + i] -= e;
        dx[n + i + 1] += e;
      }
      break;
    }
    case System::VOLTERRA_A:
      for (Eigen::Index i = 0; i < d; ++i) {
        const double next = i + 1 < d ? x[i + 1] : 0.0;
        const double prev = i > 0 ? x[i - 1] : 0.0;
        dx[i] = x[i] * (next - prev);
      }
      break;
    case System::VOLTERRA_Q:
      for (Eigen::Index i = 0; i + 1 < d; ++i) {
        const double e = std::exp(x[i] - x[i + 1]);
        dx[i] -= e;
        dx[i + 1] -= e;
      }
      break;
  }
  return dx;
}

Vector rhs(System system, const LatticeState& s) {
  require_kind(s, system_space(system), "rhs");
  return rhs(system, s.coords());
}

namespace {

using OdeState = std::vector<double>;

Vector to_vector(const OdeState& x) { return Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size())); }

OdeState to_ode(const Vector& x) { return OdeState(x.data(), x.data() + x.size()); }

LatticeState checked_state(System system, const OdeState& x, double t) {
  const Vector v = to_vector(x);
  if (!v.allFinite()) {
    throw DomainExit("integration produced a non-finite state at t = " + std::to_string(t));
  }
  const StateKind kind = system_space(system);
  if (kind == StateKind::TodaAB || kind == StateKind::VolterraA) {
    const Eigen::Index na = kind == StateKind::TodaAB ? (v.size() - 1) / 2 : v.size();
    for (Eigen::Index i = 0; i < na; ++i) {
      if (!(v[i] > 0.0)) {
        throw DomainExit("a_" + std::to_string(i + 1) + " <= 0 at t = " + std::to_string(t));
      }
    }
  }
  return LatticeState::from_coords(kind, v);
}

std::vector<double> sample_times(double t_end, double dt) {
  std::vector<double> times{0.0};
  if (t_end == 0.0) return times;
  const auto steps = static_cast<long long>(std::floor(t_end / dt + 1e-9));
  for (long long k = 1; k <= steps; ++k) times.push_back(static_cast<double>(k) * dt);
  if (t_end - times.back() > 1e-12 * std::max(1.0, t_end)) times.push_back(t_end);
  else times.back() = std::min(times.back(), t_end);
  return times;
}

}  // namespace

Trajectory integrate(System system, const LatticeState& s0, double t_end, double dt, Method method,
                     const IntegrateOptions& options) {
  require_kind(s0, system_space(system), "integrate");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("integrate: dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("integrate: t_end must be non-negative");

  Trajectory tr{system, method, dt, sample_times(t_end, dt), {}};
  tr.states.reserve(tr.times.size());
  const auto field = [system](const OdeState& x, OdeState& dxdt, double) {
    dxdt = to_ode(rhs(system, to_vector(x)));
  };
  OdeState x = to_ode(s0.coords());

  if (method == Method::RK4) {
    odeint::runge_kutta4<OdeState> stepper;
    tr.states.push_back(s0);
    for (std::size_t k = 1; k < tr.times.size(); ++k) {
      stepper.do_step(field, x, tr.times[k - 1], tr.times[k] - tr.times[k - 1]);
      tr.states.push_back(checked_state(system, x, tr.times[k]));
    }
    return tr;
  }

  auto stepper = odeint::make_dense_output(options.atol, options.rtol, odeint::runge_kutta_dopri5<OdeState>());
  try {
    odeint::integrate_times(
        stepper, field, x, tr.times.begin(), tr.times.end(), dt,
        [&](const OdeState& y, double t) { tr.states.push_back(checked_state(system, y, t)); },
        odeint::max_step_checker(100000));
  } catch (const odeint::step_adjustment_error& e) {
    throw StepUnderflow(std::string("adaptive step collapsed: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw StepUnderflow(std::string("adaptive integration made no progress: ") + e.what());
  }
  return tr;
}

LatticeState integrate_to(System system, const LatticeState& s0, double t_end, const IntegrateOptions& options) {
  if (t_end == 0.0) return s0;
  return integrate(system, s0, t_end, t_end, Method::RK45, options).states.back();
}

Matrix system_lax(System system, const LatticeState& s) {
  require_kind(s, system_space(system), "system_lax");
  switch (system) {
    case System::TODA_TRI: return build_lax_symmetric(s).dense();
    case System::TODA_KOSTANT: return kostant_matrix(s.a(), s.b());
    case System::TODA_QP: {
      const Vector ab = coordinates::flaschka(s.coords());
      const auto n = s.lattice_size();
      return kostant_matrix(ab.head(n - 1), ab.tail(n));
    }
    case System::VOLTERRA_A: return build_lax_volterra(s, VolterraLaxMode::Kostant);
    case System::VOLTERRA_Q:
      return build_lax_volterra(LatticeState::volterra_a(coordinates::realization(s.coords())),
                                VolterraLaxMode::Kostant);
  }
  return {};
}

Vector system_spectrum(System system, const LatticeState& s) {
  switch (system) {
    case System::TODA_TRI: return spectrum(build_lax_symmetric(s));
    case System::TODA_KOSTANT: return kostant_spectrum(s.a(), s.b());
    case System::TODA_QP: {
      const Vector ab = coordinates::flaschka(s.coords());
      const auto n = s.lattice_size();
      return kostant_spectrum(ab.head(n - 1), ab.tail(n));
    }
    case System::VOLTERRA_A:
    case System::VOLTERRA_Q: {
      const Vector a = system == System::VOLTERRA_A ? s.a() : coordinates::realization(s.coords());
      return kostant_spectrum(a, Vector::Zero(a.size() + 1));
    }
  }
  return {};
}

double ConservationReport::max_invariant_drift() const {
  return drift.empty() ? 0.0 : *std::max_element(drift.begin(), drift.end());
}

double ConservationReport::max_eigenvalue_drift() const {
  return eigenvalue_drift.size() == 0 ? 0.0 : eigenvalue_drift.maxCoeff();
}

ConservationReport conservation_report(const Trajectory& tr, int k_max) {
  if (tr.states.empty()) throw DomainError("conservation_report: empty trajectory");
  if (k_max < 1) throw DomainError("conservation_report: k_max must be positive");
  const bool volterra = tr.system == System::VOLTERRA_A || tr.system == System::VOLTERRA_Q;
  const TraceConvention convention = volterra ? TraceConvention::Volterra : TraceConvention::Toda;

  const auto invariants = [&](const LatticeState& s) {
    const Matrix lax = system_lax(tr.system, s);
    std::vector<double> values = trace_invariants(lax, k_max, convention);
    if (volterra) values.push_back(lax.determinant());
    return values;
  };

  ConservationReport report;
  for (int k = 1; k <= k_max; ++k) report.names.push_back((volterra ? "I" : "H") + std::to_string(k));
  if (volterra) report.names.push_back("detL");

  const std::vector<double> first = invariants(tr.states.front());
  const Vector first_spectrum = system_spectrum(tr.system, tr.states.front());
  report.drift.assign(first.size(), 0.0);
  report.eigenvalue_drift = Vector::Zero(first_spectrum.size());
  for (const auto& s : tr.states) {
    const std::vector<double> values = invariants(s);
    for (std::size_t k = 0; k < values.size(); ++k) {
      report.drift[k] = std::max(report.drift[k], std::abs(values[k] - first[k]));
    }
    report.eigenvalue_drift =
        report.eigenvalue_drift.cwiseMax((system_spectrum(tr.system, s) - first_spectrum).cwiseAbs());
  }
  return report;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "t";
  const auto dim = tr.states.empty() ? 0 : tr.states.front().dim();
  for (Eigen::Index l = 1; l <= dim; ++l) out += ",x_" + std::to_string(l);
  out += '\n';
  char buf[32];
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", tr.times[k]);
    out += buf;
    const Vector& x = tr.states[k].coords();
    for (Eigen::Index l = 0; l < x.size(); ++l) {
      std::snprintf(buf, sizeof buf, ",%.17g", x[l]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string trajectory_json(const Trajectory& tr) {
  nlohmann::json states = nlohmann::json::array();
  for (const auto& s : tr.states) states.push_back(std::vector<double>(s.coords().begin(), s.coords().end()));
  const nlohmann::json doc = {
      {"system", std::string(to_string(tr.system))},
      {"method", std::string(to_string(tr.method))},
      {"dt", tr.dt},
      {"times", tr.times},
      {"states", std::move(states)},
  };
  return doc.dump(2) + "\n";
}

}  // namespace todavolt
