#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "todavolt/lattice.hpp"

namespace todavolt::cli {

enum class Command { Simulate, Solve, Map, Verify, Spectrum };

std::string to_string(Command command);
Command command_from_string(const std::string& name);

/// Everything a run depends on. Identical configs give byte-identical output.
struct RunConfig {
  Command command = Command::Simulate;
  std::string system = "toda_tri";      // simulate, solve, spectrum
  std::string map = "flaschka";         // flaschka, gmap, henon, chop_square, phi, psi
  std::vector<double> state;            // inline initial state, layout of the system's space
  std::string state_file;               // alternative to `state`
  bool random = false;
  int n = 4;                            // lattice size for random states
  std::uint64_t seed = 1;
  double t_end = 1.0;
  double dt = 1e-3;
  std::string method = "rk4";
  std::string output;                   // empty: standard output
  std::string format = "csv";           // csv or json
  std::string suite = "all";
  int points = 20;

  bool operator==(const RunConfig&) const = default;
};

std::string config_to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys and bad values throw ConfigError.
RunConfig config_from_json(const std::string& text);

/// Space a `system` name (or a map's source) works on.
StateKind config_space(const RunConfig& cfg);

/// Initial state from `state`, `state_file` or the seeded generator. Random
/// draws: a in [0.5, 2], b and p in [-1, 1], Toda q in [-1, 1], Volterra q
/// in [-0.5, 0.5].
LatticeState initial_state(const RunConfig& cfg);

/// Comma- or whitespace-separated reals.
std::vector<double> parse_reals(const std::string& text);

/// Exit codes: 0 success, 1 failed verification, 2 bad configuration,
/// 3 trajectory left the domain, 4 explicit solution failed.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_map(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace todavolt::cli
