#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "contactmech/hamiltonian.hpp"
#include "contactmech/integrate.hpp"
#include "contactmech/lagrangian.hpp"

namespace contactmech {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string pointer)
      : std::runtime_error(pointer.empty() ? message : message + " (at " + pointer + ")"),
        pointer_(std::move(pointer)) {}
  /// JSON pointer of the offending element, when known.
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct SymmetrySpec {
  std::string name;
  std::vector<std::string> components;  // 2n+1 expressions
};

struct QuantitySpec {
  std::string name;
  std::string expression;
  std::string kind;  // "dissipated" or "conserved"
};

struct CompanionHamiltonian {
  std::vector<std::string> momentum;  // n names
  std::string expression;
};

/// Parsed and validated system definition; see schema.json for the format.
struct SystemConfig {
  std::string name;
  std::string formalism;  // "lagrangian" or "hamiltonian"
  int n = 0;
  std::vector<std::string> position;           // n names
  std::vector<std::string> velocityOrMomentum; // n names
  std::string action = "s";
  std::string expression;  // L or H
  Bindings params;
  std::vector<SymmetrySpec> symmetries;
  std::vector<QuantitySpec> quantities;
  std::optional<CompanionHamiltonian> companion;  // lagrangian configs only
  IntegratorConfig integration;
  std::vector<double> initialState;

  std::vector<std::string> coordinates() const;
  bool isLagrangian() const { return formalism == "lagrangian"; }
  ContactLagrangianSystem toLagrangian() const;
  ContactHamiltonianSystem toHamiltonian() const;
  /// The companion Hamiltonian of a Lagrangian config, sharing q and s names.
  ContactHamiltonianSystem companionHamiltonian() const;
};

/// Loads and validates a JSON config. Structural problems raise ConfigError
/// with a JSON pointer; expression problems carry the parser message.
SystemConfig loadConfig(const std::filesystem::path& path);
SystemConfig parseConfig(const std::string& text, const std::string& origin);

}  // namespace contactmech
