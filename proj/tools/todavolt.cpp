#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "todavolt/cli.hpp"
#include "todavolt/errors.hpp"

namespace tc = todavolt::cli;

namespace {

// Flags shared by every subcommand. Values given on the command line win
// over a --config file.
struct Flags {
  std::string config;
  std::string system, map, state, state_file, method, output, format, suite;
  bool random = false;
  int n = 0, points = 0;
  std::uint64_t seed = 0;
  double t = 0, dt = 0;
  std::string save_config;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration");
  sub->add_option("--save-config", f.save_config, "write the effective configuration as JSON");
  sub->add_option("--state", f.state, "initial state, comma-separated");
  sub->add_option("--state-file", f.state_file, "file with the initial state (reals or JSON array)");
  sub->add_flag("--random", f.random, "seeded random initial state");
  sub->add_option("--n", f.n, "lattice size for random states / verification");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--output,-o", f.output, "output path (default: stdout)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toda and Volterra lattices: simulation, explicit solution, maps and verification"};
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate", "integrate a system and report invariant drift");
  auto* solve = app.add_subcommand("solve", "compare the explicit spectral solution with integration");
  auto* map = app.add_subcommand("map", "apply a coordinate map or involution to a state");
  auto* verify = app.add_subcommand("verify", "run the verification suites and emit a JSON report");
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the Lax matrix");

  for (auto* sub : {simulate, solve, map, verify, spectrum}) add_common(sub, f);
  for (auto* sub : {simulate, solve, spectrum}) sub->add_option("--system", f.system, "toda_tri, toda_kostant, toda_qp, volterra_a, volterra_q");
  for (auto* sub : {simulate, solve}) {
    sub->add_option("--t", f.t, "final time");
    sub->add_option("--dt", f.dt, "sample spacing (RK4 step)");
  }
  simulate->add_option("--method", f.method, "rk4 or rk45");
  map->add_option("--map", f.map, "flaschka, gmap, henon, chop_square, phi, psi");
  verify->add_option("--suite", f.suite, "brackets, hierarchy, reduction, diagram, moser, all");
  verify->add_option("--points", f.points, "random points per check");

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  tc::RunConfig cfg;
  try {
    if (!f.config.empty()) {
      std::ifstream in(f.config, std::ios::binary);
      if (!in) throw todavolt::ConfigError("cannot read config '" + f.config + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      cfg = tc::config_from_json(ss.str());
    }
    cfg.command = tc::command_from_string(sub->get_name());
    const auto given = [sub](const char* name) {
      const CLI::Option* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--system")) cfg.system = f.system;
    if (given("--map")) cfg.map = f.map;
    if (given("--state")) cfg.state = tc::parse_reals(f.state);
    if (given("--state-file")) cfg.state_file = f.state_file;
    if (given("--random")) cfg.random = true;
    if (given("--n")) cfg.n = f.n;
    if (given("--seed")) cfg.seed = f.seed;
    if (given("--t")) cfg.t_end = f.t;
    if (given("--dt")) cfg.dt = f.dt;
    if (given("--method")) cfg.method = f.method;
    if (given("--output")) cfg.output = f.output;
    if (given("--format")) cfg.format = f.format;
    if (given("--suite")) cfg.suite = f.suite;
    if (given("--points")) cfg.points = f.points;
    if (!f.save_config.empty()) {
      std::ofstream out(f.save_config, std::ios::binary);
      if (!out) throw todavolt::ConfigError("cannot write config '" + f.save_config + "'");
      out << tc::config_to_json(cfg);
    }
  } catch (const todavolt::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return tc::run(cfg, std::cout, std::cerr);
}
