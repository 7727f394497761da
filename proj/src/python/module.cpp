#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>

#include "todavolt/calculus.hpp"
#include "todavolt/coordinates.hpp"
#include "todavolt/errors.hpp"
#include "todavolt/flows.hpp"
#include "todavolt/hierarchy.hpp"
#include "todavolt/maps.hpp"
#include "todavolt/moser.hpp"
#include "todavolt/verify.hpp"

namespace py = pybind11;
using namespace todavolt;

namespace {

TensorTag tensor_tag(const std::string& name) {
  static const std::map<std::string, TensorTag> tags{
      {"J1", TensorTag::J1}, {"J2", TensorTag::J2}, {"Jk", TensorTag::Jk},   {"PI1", TensorTag::PI1},
      {"PI2", TensorTag::PI2}, {"PI3", TensorTag::PI3}, {"PIk", TensorTag::PIk}, {"V1", TensorTag::V1},
      {"V2", TensorTag::V2}, {"V3", TensorTag::V3}, {"VK", TensorTag::VK},   {"W1", TensorTag::W1},
      {"W2", TensorTag::W2}, {"W3", TensorTag::W3}, {"WK", TensorTag::WK}};
  const auto it = tags.find(name);
  if (it == tags.end()) throw ConfigError("unknown tensor '" + name + "'");
  return it->second;
}

StateKind space(const std::string& name) { return state_kind_from_string(name); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Toda and Volterra lattices: flows, Poisson tensors, maps and Moser's explicit solution";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<KindError>(m, "KindError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DomainExit>(m, "DomainExit", base.ptr());
  py::register_exception<DegeneracyError>(m, "DegeneracyError", base.ptr());
  py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
  py::register_exception<InvarianceViolation>(m, "InvarianceViolation", base.ptr());

  m.def(
      "rhs",
      [](const std::string& system, const Vector& x) {
        const System s = system_from_string(system);
        return rhs(s, LatticeState::from_coords(system_space(s), x));
      },
      py::arg("system"), py::arg("x"), "Right-hand side of a lattice system at x.");

  m.def(
      "integrate",
      [](const std::string& system, const Vector& x0, double t_end, double dt, const std::string& method) {
        const System s = system_from_string(system);
        const Trajectory tr = integrate(s, LatticeState::from_coords(system_space(s), x0), t_end, dt,
                                        method_from_string(method));
        Matrix states(static_cast<Eigen::Index>(tr.states.size()), x0.size());
        for (std::size_t k = 0; k < tr.states.size(); ++k) states.row(k) = tr.states[k].coords().transpose();
        return py::make_tuple(Vector(Eigen::Map<const Vector>(tr.times.data(), tr.times.size())), states);
      },
      py::arg("system"), py::arg("x0"), py::arg("t_end"), py::arg("dt"), py::arg("method") = "rk4",
      "Integrate and return (times, states) with one state per row.");

  m.def(
      "spectrum",
      [](const std::string& system, const Vector& x) {
        const System s = system_from_string(system);
        return system_spectrum(s, LatticeState::from_coords(system_space(s), x));
      },
      py::arg("system"), py::arg("x"));

  m.def(
      "flaschka", [](const Vector& qp) { return coordinates::flaschka(qp); }, py::arg("qp"));
  m.def(
      "gmap", [](const Vector& q) { return gmap(LatticeState::volterra_q(q)).coords(); }, py::arg("q"));
  m.def(
      "volterra_to_toda",
      [](const Vector& a, const std::string& mode) {
        const auto image = volterra_to_toda(LatticeState::volterra_a(a), volterra_to_toda_mode_from_string(mode));
        return py::make_tuple(image.state.coords(), image.offdiag_sign);
      },
      py::arg("a"), py::arg("mode") = "henon", "Returns (toda_ab_coords, offdiag_sign).");
  m.def("chop_square", &chop_square, py::arg("symmetric_entries"));

  m.def(
      "eval_tensor", [](const std::string& tag, const Vector& x, int k) { return eval_tensor(tensor_tag(tag), x, k); },
      py::arg("tag"), py::arg("x"), py::arg("k") = 0);
  m.def(
      "jacobiator_max",
      [](const std::string& tag, const Vector& x, int k) {
        return jacobiator_all(catalog_tensor(tensor_tag(tag), static_cast<int>(x.size()), k), x).max_abs;
      },
      py::arg("tag"), py::arg("x"), py::arg("k") = 0, "Largest |Jacobiator| over all index triples.");
  m.def(
      "recursion_operator", [](const std::string& s, const Vector& x) { return recursion_operator(space(s), x); },
      py::arg("space"), py::arg("x"));
  m.def(
      "oevel_residuals",
      [](const std::string& s, int i, int j, const Vector& x) {
        const auto r = oevel_relation_check(space(s), i, j, x);
        return py::dict(py::arg("a") = r.a, py::arg("b") = r.b, py::arg("c") = r.c);
      },
      py::arg("space"), py::arg("i"), py::arg("j"), py::arg("x"));

  m.def(
      "spectral_decompose",
      [](const Vector& ab) {
        const SpectralData sd = spectral_decompose(build_lax_symmetric(LatticeState::from_coords(StateKind::TodaAB, ab)));
        return py::make_tuple(sd.lambdas(), sd.residue_roots());
      },
      py::arg("ab"), "Returns (lambdas, r) of the symmetric Jacobi matrix.");
  m.def(
      "stieltjes_invert",
      [](const Vector& lambdas, const Vector& r) {
        const auto result = stieltjes_invert(SpectralData::normalized(lambdas, r));
        return py::make_tuple(result.state.coords(), result.used_fallback);
      },
      py::arg("lambdas"), py::arg("r"), "Returns (ab, used_fallback); r is normalized first.");
  m.def(
      "solve_toda_explicit",
      [](const Vector& ab, double t) {
        const auto sol = solve_toda_explicit(LatticeState::from_coords(StateKind::TodaAB, ab), t);
        return py::make_tuple(sol.state.coords(), sol.used_fallback);
      },
      py::arg("ab"), py::arg("t"));

  m.def(
      "verify",
      [](const std::string& suite, int n, int points, std::uint64_t seed, int threads) {
        VerifyOptions options{suite, n, points, seed, threads};
        std::string json;
        {
          py::gil_scoped_release release;
          json = report_json(run_verification(options));
        }
        return json;
      },
      py::arg("suite") = "all", py::arg("n") = 5, py::arg("points") = 20, py::arg("seed") = 1, py::arg("threads") = 1,
      "Run a verification suite and return the JSON report.");
}
