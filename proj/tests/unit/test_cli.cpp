#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "todavolt/cli.hpp"
#include "todavolt/errors.hpp"
#include "todavolt/verify.hpp"

using namespace todavolt;
using namespace todavolt::cli;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_config(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

RunConfig simulate(const std::string& system, std::vector<double> state) {
  RunConfig cfg;
  cfg.command = Command::Simulate;
  cfg.system = system;
  cfg.state = std::move(state);
  return cfg;
}

}  // namespace

TEST_CASE("config round-trips through JSON") {
  RunConfig cfg;
  cfg.command = Command::Solve;
  cfg.system = "toda_tri";
  cfg.state = {0.25, -1.5, 3.0};
  cfg.seed = 18446744073709551557ull;
  cfg.t_end = 2.5;
  cfg.dt = 0.125;
  cfg.format = "json";
  cfg.points = 7;
  CHECK(config_from_json(config_to_json(cfg)) == cfg);
  CHECK(config_to_json(config_from_json(config_to_json(cfg))) == config_to_json(cfg));

  CHECK(config_from_json("{\"n\": 6}").n == 6);
  CHECK_THROWS_AS(config_from_json("{\"bogus\": 1}"), ConfigError);
  CHECK_THROWS_AS(config_from_json("{\"n\": \"six\"}"), ConfigError);
  CHECK_THROWS_AS(config_from_json("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(config_from_json("{"), ConfigError);
}

TEST_CASE("state parsing") {
  CHECK(parse_reals("1,2.5, -3e-1") == std::vector<double>{1, 2.5, -0.3});
  CHECK(parse_reals("1 2\n3") == std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(parse_reals("1,x"), ConfigError);

  RunConfig cfg = simulate("toda_tri", {});
  cfg.random = true;
  cfg.n = 5;
  cfg.seed = 3;
  const LatticeState a = initial_state(cfg);
  CHECK(a.kind() == StateKind::TodaAB);
  CHECK(a.dim() == 9);
  CHECK(initial_state(cfg).coords() == a.coords());
  cfg.seed = 4;
  CHECK(initial_state(cfg).coords() != a.coords());

  cfg.state = {1.0};
  CHECK_THROWS_AS(initial_state(cfg), ConfigError);

  const auto path = std::filesystem::temp_directory_path() / "todavolt_state.json";
  std::ofstream(path) << "[1, 0.5, 0.25]";
  RunConfig from_file = simulate("volterra_a", {});
  from_file.state_file = path.string();
  CHECK(initial_state(from_file).coords()[2] == 0.25);
  std::filesystem::remove(path);
}

TEST_CASE("simulate") {
  RunConfig cfg = simulate("volterra_a", {1, 1, 1});
  cfg.t_end = 1.0;
  cfg.dt = 1e-3;
  const Run r = run_config(cfg);
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  CHECK(rows.size() == 1002);
  CHECK(rows.front() == "t,x_1,x_2,x_3");

  // Drift table: I1 below 1e-9.
  const auto drift = lines(r.err);
  REQUIRE(drift.size() >= 2);
  CHECK(drift[0] == "quantity,drift");
  CHECK(drift[1].rfind("I1,", 0) == 0);
  CHECK(std::stod(drift[1].substr(3)) < 1e-9);

  RunConfig random = simulate("toda_tri", {});
  random.random = true;
  random.n = 4;
  random.seed = 7;
  const Run first = run_config(random);
  const Run second = run_config(random);
  CHECK(first.code == 0);
  CHECK(first.out == second.out);

  random.format = "json";
  const Json doc = Json::parse(run_config(random).out);
  CHECK(doc["system"] == "toda_tri");
}

TEST_CASE("exit codes") {
  CHECK(run_config(simulate("bogus", {1})).code == 2);
  CHECK(run_config(simulate("volterra_a", {1, 1})).code == 2);
  RunConfig bad_dt = simulate("volterra_a", {1, 1, 1});
  bad_dt.dt = -1;
  CHECK(run_config(bad_dt).code == 2);
  RunConfig bad_format = simulate("volterra_a", {1, 1, 1});
  bad_format.format = "xml";
  CHECK(run_config(bad_format).code == 2);
  RunConfig bad_suite;
  bad_suite.command = Command::Verify;
  bad_suite.suite = "everything";
  CHECK(run_config(bad_suite).code == 2);

  RunConfig degenerate;
  degenerate.command = Command::Solve;
  degenerate.state = {1e-12, 0, 0};
  degenerate.t_end = 0.0;
  CHECK(run_config(degenerate).code == 4);
}

TEST_CASE("solve compares explicit and integrated solutions") {
  RunConfig cfg;
  cfg.command = Command::Solve;
  cfg.state = {1, 0, 0};
  cfg.t_end = 1.0;
  cfg.dt = 0.5;
  const Run r = run_config(cfg);
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] ==
        "t,explicit_a_1,explicit_b_1,explicit_b_2,integrated_a_1,integrated_b_1,integrated_b_2,max_abs_delta,fallback");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    std::vector<std::string> cells;
    std::istringstream in(rows[k]);
    for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
    CHECK(std::stod(cells[7]) < 1e-7);
  }
  // Symmetric spectrum at t = 0 is flagged.
  CHECK(rows[1].back() == '1');

  cfg.state.clear();
  cfg.random = true;
  cfg.n = 3;
  cfg.seed = 42;
  cfg.format = "json";
  const Json doc = Json::parse(run_config(cfg).out);
  CHECK(doc["columns"].back() == "fallback");
  CHECK(doc["max_abs_delta"].get<double>() < 1e-6);

  RunConfig wrong = cfg;
  wrong.system = "volterra_a";
  CHECK(run_config(wrong).code == 2);
}

TEST_CASE("map and spectrum") {
  RunConfig cfg;
  cfg.command = Command::Map;
  cfg.map = "henon";
  cfg.state = {1, 1, 1, 1, 1};
  Run r = run_config(cfg);
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[0] == "x_1,x_2,x_3,x_4,x_5,offdiag_sign");
  CHECK(lines(r.out)[1] == "0.5,0.5,0.5,1,1,-1");

  cfg.map = "gmap";
  cfg.state = {3, 2, 1, 0};
  cfg.format = "json";
  const Json doc = Json::parse(run_config(cfg).out);
  CHECK(doc["output"][0].get<double>() == doctest::Approx(std::exp(1.0)));

  cfg.map = "nope";
  CHECK(run_config(cfg).code == 2);

  RunConfig spec;
  spec.command = Command::Spectrum;
  spec.state = {1, 0, 0};
  r = run_config(spec);
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[0] == "i,lambda,r");
  CHECK(lines(r.out).size() == 3);
}

TEST_CASE("verify emits a sorted, schema-versioned report") {
  RunConfig cfg;
  cfg.command = Command::Verify;
  cfg.suite = "diagram";
  cfg.points = 3;
  const Run r = run_config(cfg);
  CHECK(r.code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["schema"] == 1);
  CHECK(doc["suite"] == "diagram");
  CHECK(doc["passed"] == true);
  CHECK(doc["tolerances"]["diagram.k1"] == 1e-7);
  CHECK(doc["traceability"].contains("diagram.k2"));
  std::vector<std::string> names;
  for (const auto& c : doc["checks"]) names.push_back(c["name"]);
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(run_config(cfg).out == r.out);
}

TEST_CASE("negative controls are reported as expected failures") {
  VerifyOptions options;
  options.suite = "brackets";
  options.points = 2;
  const VerifyReport report = run_verification(options);
  const auto it = std::find_if(report.checks.begin(), report.checks.end(),
                               [](const CheckResult& c) { return c.name == "jacobi.negative_control"; });
  REQUIRE(it != report.checks.end());
  CHECK(it->status == CheckStatus::ExpectedFail);
  CHECK(it->max_residual == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(report.passed());
}

TEST_CASE("thread count does not change the report") {
  VerifyOptions options;
  options.suite = "reduction";
  options.points = 4;
  const std::string serial = report_json(run_verification(options));
  options.threads = 4;
  CHECK(report_json(run_verification(options)) == serial);
}

TEST_CASE("LATTICE_THREADS") {
  ::setenv("LATTICE_THREADS", "3", 1);
  CHECK(threads_from_env() == 3);
  ::setenv("LATTICE_THREADS", "0", 1);
  CHECK_THROWS_AS(threads_from_env(), ConfigError);
  ::setenv("LATTICE_THREADS", "two", 1);
  CHECK_THROWS_AS(threads_from_env(), ConfigError);
  ::unsetenv("LATTICE_THREADS");
  CHECK(threads_from_env() == 1);
}
