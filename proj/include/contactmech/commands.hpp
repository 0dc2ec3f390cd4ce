#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "contactmech/config.hpp"

namespace contactmech {

struct CheckOptions {
  std::uint64_t seed = 42;
  double boxLo = -2.0;
  double boxHi = 2.0;
  double tol = 1e-9;    // scaled residual tolerance for pointwise sweeps
  int points = 1000;    // sample points per sweep
  std::filesystem::path outDir = ".";
};

struct CheckEntry {
  std::string name;
  bool passed = true;
  bool skipped = false;
  double worst = 0.0;
  std::vector<double> worstPoint;
  std::string note;
};

struct RunReport {
  std::string title;
  std::vector<std::pair<std::string, std::string>> derived;  // label -> printed expression
  std::vector<CheckEntry> checks;
  std::vector<std::string> outputs;  // files written

  bool allPassed() const;
  std::string text() const;
};

/// Prints the derived field, Reeb field, energy and contact form, and writes
/// derived.json. Lagrangian configs get a pointwise regularity warning that
/// lists sampled points where the velocity Hessian is singular.
RunReport cmdDerive(const SystemConfig& cfg, const CheckOptions& opts);

/// Integrates from the configured initial state and writes an RFC-4180 CSV
/// with columns t, coordinates..., then one column per declared quantity.
/// 17 significant digits; identical config and seed give identical bytes.
RunReport cmdSimulate(const SystemConfig& cfg, const CheckOptions& opts);

/// Runs the selected residual suites on the seeded sample box and, where a
/// trajectory is configured, along a short integration.
/// suite ∈ {identities, symmetries, legendre, all}.
RunReport cmdCheck(const SystemConfig& cfg, const std::string& suite, const CheckOptions& opts);

}  // namespace contactmech
