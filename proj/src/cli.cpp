#include "todavolt/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "todavolt/errors.hpp"
#include "todavolt/flows.hpp"
#include "todavolt/maps.hpp"
#include "todavolt/moser.hpp"
#include "todavolt/verify.hpp"

namespace todavolt::cli {

namespace {

using Json = nlohmann::json;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_row(const std::vector<double>& values) {
  std::string line;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) line += ',';
    line += fmt(values[k]);
  }
  return line + "\n";
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + cfg.output + "'");
  file << text;
}

/// Side report next to the output file, or on the error stream for stdout runs.
void emit_side(const RunConfig& cfg, const std::string& suffix, const std::string& text, std::ostream& err) {
  if (cfg.output.empty()) {
    err << text;
    return;
  }
  const std::string path = cfg.output + suffix;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  file << text;
}

void validate(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("format must be csv or json");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t must be non-negative");
  if (cfg.n < 1 || cfg.n > 64) throw ConfigError("n must lie in [1, 64]");
  if (cfg.points < 1) throw ConfigError("points must be positive");
  method_from_string(cfg.method);
}

StateKind map_source(const std::string& name) {
  if (name == "flaschka" || name == "psi") return StateKind::TodaQP;
  if (name == "phi") return StateKind::TodaAB;
  if (name == "gmap") return StateKind::VolterraQ;
  if (name == "henon" || name == "chop_square") return StateKind::VolterraA;
  throw ConfigError("unknown map '" + name + "'");
}

Vector random_coords(StateKind kind, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto draw = [&rng](int count, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vector v(count);
    for (auto& x : v) x = dist(rng);
    return v;
  };
  switch (kind) {
    case StateKind::TodaAB: {
      if (n < 2) throw ConfigError("Toda states need n >= 2");
      Vector x(2 * n - 1);
      x << draw(n - 1, 0.5, 2.0), draw(n, -1.0, 1.0);
      return x;
    }
    case StateKind::TodaQP: {
      Vector x(2 * n);
      x << draw(n, -1.0, 1.0), draw(n, -1.0, 1.0);
      return x;
    }
    case StateKind::VolterraA: return draw(n, 0.5, 2.0);
    case StateKind::VolterraQ: return draw(n, -0.5, 0.5);
  }
  return {};
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::Simulate: return "simulate";
    case Command::Solve: return "solve";
    case Command::Map: return "map";
    case Command::Verify: return "verify";
    case Command::Spectrum: return "spectrum";
  }
  return "?";
}

Command command_from_string(const std::string& name) {
  for (Command c : {Command::Simulate, Command::Solve, Command::Map, Command::Verify, Command::Spectrum}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown command '" + name + "'");
}

std::string config_to_json(const RunConfig& cfg) {
  const Json doc = {
      {"command", to_string(cfg.command)},
      {"system", cfg.system},
      {"map", cfg.map},
      {"state", cfg.state},
      {"state_file", cfg.state_file},
      {"random", cfg.random},
      {"n", cfg.n},
      {"seed", cfg.seed},
      {"t_end", cfg.t_end},
      {"dt", cfg.dt},
      {"method", cfg.method},
      {"output", cfg.output},
      {"format", cfg.format},
      {"suite", cfg.suite},
      {"points", cfg.points},
  };
  return doc.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "command") cfg.command = command_from_string(value.get<std::string>());
      else if (key == "system") cfg.system = value.get<std::string>();
      else if (key == "map") cfg.map = value.get<std::string>();
      else if (key == "state") cfg.state = value.get<std::vector<double>>();
      else if (key == "state_file") cfg.state_file = value.get<std::string>();
      else if (key == "random") cfg.random = value.get<bool>();
      else if (key == "n") cfg.n = value.get<int>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "t_end") cfg.t_end = value.get<double>();
      else if (key == "dt") cfg.dt = value.get<double>();
      else if (key == "method") cfg.method = value.get<std::string>();
      else if (key == "output") cfg.output = value.get<std::string>();
      else if (key == "format") cfg.format = value.get<std::string>();
      else if (key == "suite") cfg.suite = value.get<std::string>();
      else if (key == "points") cfg.points = value.get<int>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const Json::type_error& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
  return cfg;
}

StateKind config_space(const RunConfig& cfg) {
  if (cfg.command == Command::Map) return map_source(cfg.map);
  return system_space(system_from_string(cfg.system));
}

std::vector<double> parse_reals(const std::string& text) {
  std::string cleaned = text;
  for (char& c : cleaned) {
    if (c == ',' || c == ';' || c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  std::istringstream in(cleaned);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ConfigError("not a number: '" + token + "'");
    values.push_back(v);
  }
  return values;
}

LatticeState initial_state(const RunConfig& cfg) {
  const StateKind kind = config_space(cfg);
  const int sources = (cfg.random ? 1 : 0) + (cfg.state.empty() ? 0 : 1) + (cfg.state_file.empty() ? 0 : 1);
  if (sources != 1) throw ConfigError("give exactly one of --state, --state-file, --random");
  Vector coords;
  if (cfg.random) {
    coords = random_coords(kind, cfg.n, cfg.seed);
  } else {
    std::vector<double> values = cfg.state;
    if (!cfg.state_file.empty()) {
      const std::string text = read_file(cfg.state_file);
      const auto first = text.find_first_not_of(" \t\r\n");
      if (first != std::string::npos && text[first] == '[') {
        try {
          values = Json::parse(text).get<std::vector<double>>();
        } catch (const Json::exception& e) {
          throw ConfigError(std::string("state file: ") + e.what());
        }
      } else {
        values = parse_reals(text);
      }
    }
    coords = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  }
  try {
    return LatticeState::from_coords(kind, coords);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid initial state: ") + e.what());
  }
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const System system = system_from_string(cfg.system);
  const LatticeState s0 = initial_state(cfg);
  const Trajectory tr = integrate(system, s0, cfg.t_end, cfg.dt, method_from_string(cfg.method));
  emit(cfg, cfg.format == "csv" ? trajectory_csv(tr) : trajectory_json(tr), out);

  const ConservationReport cr = conservation_report(tr, 3);
  std::string side;
  if (cfg.format == "csv") {
    side = "quantity,drift\n";
    for (std::size_t k = 0; k < cr.names.size(); ++k) side += cr.names[k] + "," + fmt(cr.drift[k]) + "\n";
    side += "spectrum," + fmt(cr.max_eigenvalue_drift()) + "\n";
  } else {
    Json drift = Json::object();
    for (std::size_t k = 0; k < cr.names.size(); ++k) drift[cr.names[k]] = cr.drift[k];
    drift["spectrum"] = cr.max_eigenvalue_drift();
    side = Json{{"drift", drift}}.dump(2) + "\n";
  }
  emit_side(cfg, ".drift." + cfg.format, side, err);
  return 0;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const System system = system_from_string(cfg.system);
  if (system != System::TODA_TRI) throw ConfigError("solve works on toda_tri only");
  const LatticeState s0 = initial_state(cfg);
  const int n = s0.lattice_size();
  const Trajectory tr = integrate(system, s0, cfg.t_end, cfg.dt, Method::RK45);

  std::vector<std::string> columns{"t"};
  for (const char* prefix : {"explicit_", "integrated_"}) {
    for (int i = 1; i < n; ++i) columns.push_back(prefix + std::string("a_") + std::to_string(i));
    for (int i = 1; i <= n; ++i) columns.push_back(prefix + std::string("b_") + std::to_string(i));
  }
  columns.push_back("max_abs_delta");
  columns.push_back("fallback");

  std::vector<std::vector<double>> rows;
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    ExplicitSolution sol{s0, false};
    try {
      sol = solve_toda_explicit(s0, tr.times[k]);
    } catch (const Error& e) {
      err << "error: explicit solution failed at t = " << fmt(tr.times[k]) << ": " << e.what() << "\n";
      return 4;
    }
    const Vector ex = sol.state.coords();
    const Vector in = tr.states[k].coords();
    const double delta = max_abs(Vector(ex - in));
    worst = std::max(worst, delta);
    std::vector<double> row{tr.times[k]};
    for (double x : ex) row.push_back(x);
    for (double x : in) row.push_back(x);
    row.push_back(delta);
    row.push_back(sol.used_fallback ? 1.0 : 0.0);
    rows.push_back(std::move(row));
  }

  if (cfg.format == "csv") {
    std::string text;
    for (std::size_t k = 0; k < columns.size(); ++k) text += (k ? "," : "") + columns[k];
    text += "\n";
    for (const auto& row : rows) text += csv_row(row);
    emit(cfg, text, out);
  } else {
    Json doc = {{"columns", columns}, {"rows", rows}, {"max_abs_delta", worst}, {"system", cfg.system}};
    emit(cfg, doc.dump(2) + "\n", out);
  }
  err << "max |delta| = " << fmt(worst) << "\n";
  return 0;
}

int cmd_map(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const LatticeState s = initial_state(cfg);
  Vector image;
  std::optional<int> sign;
  if (cfg.map == "flaschka") {
    image = flaschka(s).coords();
  } else if (cfg.map == "gmap") {
    image = gmap(s).coords();
  } else if (cfg.map == "henon" || cfg.map == "chop_square") {
    const auto t = volterra_to_toda(s, volterra_to_toda_mode_from_string(cfg.map));
    image = t.state.coords();
    sign = t.offdiag_sign;
  } else {
    const auto id = cfg.map == "phi" ? InvolutionId::PHI : InvolutionId::PSI;
    image = apply_involution(make_involution(id, static_cast<int>(s.dim())), s).coords();
  }
  if (cfg.format == "csv") {
    std::string text;
    for (Eigen::Index k = 0; k < image.size(); ++k) text += (k ? ",x_" : "x_") + std::to_string(k + 1);
    if (sign) text += ",offdiag_sign";
    text += "\n";
    auto row = to_std(image);
    if (sign) row.push_back(*sign);
    emit(cfg, text + csv_row(row), out);
  } else {
    Json doc = {{"map", cfg.map}, {"input", to_std(s.coords())}, {"output", to_std(image)}};
    if (sign) doc["offdiag_sign"] = *sign;
    emit(cfg, doc.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const System system = system_from_string(cfg.system);
  const LatticeState s = initial_state(cfg);
  const Vector lambdas = system_spectrum(system, s);
  std::optional<Vector> residues;
  if (system == System::TODA_TRI) residues = spectral_decompose(build_lax_symmetric(s)).residue_roots();
  if (cfg.format == "csv") {
    std::string text = residues ? "i,lambda,r\n" : "i,lambda\n";
    for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
      text += std::to_string(k + 1) + "," + fmt(lambdas[k]);
      if (residues) text += "," + fmt((*residues)[k]);
      text += "\n";
    }
    emit(cfg, text, out);
  } else {
    Json doc = {{"system", cfg.system}, {"lambda", to_std(lambdas)}};
    if (residues) doc["r"] = to_std(*residues);
    emit(cfg, doc.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  options.suite = cfg.suite;
  options.n = cfg.n;
  options.points = cfg.points;
  options.seed = cfg.seed;
  options.threads = threads_from_env();
  const VerifyReport report = run_verification(options);
  emit(cfg, report_json(report), out);
  int failed = 0;
  for (const auto& c : report.checks) {
    if (c.status == CheckStatus::Fail || c.status == CheckStatus::UnexpectedPass) {
      err << "FAIL " << c.name << ": residual " << fmt(c.max_residual) << " tolerance " << fmt(c.tolerance)
          << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
      ++failed;
    }
  }
  err << report.checks.size() - failed << "/" << report.checks.size() << " checks as expected\n";
  return report.passed() ? 0 : 1;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    switch (cfg.command) {
      case Command::Simulate: return cmd_simulate(cfg, out, err);
      case Command::Solve: return cmd_solve(cfg, out, err);
      case Command::Map: return cmd_map(cfg, out, err);
      case Command::Verify: return cmd_verify(cfg, out, err);
      case Command::Spectrum: return cmd_spectrum(cfg, out, err);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainExit& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const KindError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace todavolt::cli
