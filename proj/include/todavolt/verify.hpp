#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Randomized verification suites over the catalog: Jacobi identities,
// bi-Hamiltonian pairs, hierarchy relations, reductions, the commutative
// diagram and Moser's solution. Points are pre-generated from the seed so
// results do not depend on the thread count.

namespace todavolt {

struct VerifyOptions {
  std::string suite = "all";  // brackets, hierarchy, reduction, diagram, moser, all
  int n = 5;                  // Toda size N; Volterra uses the nearest even N' >= n, m = N' - 1
  int points = 20;
  std::uint64_t seed = 1;
  int threads = 1;
};

enum class CheckStatus { Pass, Fail, ExpectedFail, UnexpectedPass };

struct CheckResult {
  std::string name;
  std::string module;
  std::string property;   // the invariant this check witnesses
  double max_residual = 0.0;
  double tolerance = 0.0;
  int points = 0;
  bool negative_control = false;
  CheckStatus status = CheckStatus::Pass;
  std::string note;
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<CheckResult> checks;  // sorted by name
  std::vector<std::pair<std::string, std::string>> findings;
  bool passed() const;
};

const std::vector<std::string>& verify_suites();

/// Throws ConfigError on an unknown suite or bad parameters.
VerifyReport run_verification(const VerifyOptions& options);

/// Schema-versioned JSON with sorted keys.
std::string report_json(const VerifyReport& report);

/// Thread cap from LATTICE_THREADS (positive integer), else 1.
int threads_from_env();

}  // namespace todavolt
