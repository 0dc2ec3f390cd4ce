#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "contactmech/commands.hpp"

namespace {

// Exit codes: 0 pass, 1 check failure, 2 usage/config error, 3 numeric failure.
constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericFailure = 3;

struct CommonArgs {
  std::string configPath;
  std::uint64_t seed = 42;
  std::string box = "-2,2";
  double tol = 1e-9;
  int points = 1000;
  std::string outDir = ".";
};

void addCommon(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.configPath, "system definition (JSON, see schema.json)")
      ->required();
  cmd->add_option("--seed", args.seed, "seed for the sample-point generator")
      ->capture_default_str();
  cmd->add_option("--box", args.box, "sample box as lo,hi")->capture_default_str();
  cmd->add_option("--tol", args.tol, "scaled residual tolerance for pointwise checks")
      ->capture_default_str();
  cmd->add_option("--points", args.points, "sample points per sweep")->capture_default_str();
  cmd->add_option("--out", args.outDir, "output directory")->capture_default_str();
}

contactmech::CheckOptions toOptions(const CommonArgs& args) {
  contactmech::CheckOptions opts;
  opts.seed = args.seed;
  auto comma = args.box.find(',');
  if (comma == std::string::npos)
    throw contactmech::ConfigError("--box expects lo,hi", "");
  try {
    opts.boxLo = std::stod(args.box.substr(0, comma));
    opts.boxHi = std::stod(args.box.substr(comma + 1));
  } catch (const std::exception&) {
    throw contactmech::ConfigError("--box expects numeric lo,hi", "");
  }
  if (opts.boxLo >= opts.boxHi)
    throw contactmech::ConfigError("--box expects lo < hi", "");
  opts.tol = args.tol;
  opts.points = args.points;
  opts.outDir = args.outDir;
  return opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contactmech: dissipative mechanics in the contact formalism"};
  app.require_subcommand(1);

  CommonArgs deriveArgs, simulateArgs, checkArgs;
  std::string suite = "all";

  CLI::App* derive =
      app.add_subcommand("derive", "construct the dynamics and print derived objects");
  addCommon(derive, deriveArgs);
  CLI::App* simulate =
      app.add_subcommand("simulate", "integrate the dynamics and write a trajectory CSV");
  addCommon(simulate, simulateArgs);
  CLI::App* check = app.add_subcommand("check", "verify the structural identities");
  addCommon(check, checkArgs);
  check->add_option("--suite", suite, "identities, symmetries, legendre, or all")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitConfigError;
  }

  try {
    contactmech::RunReport report;
    if (derive->parsed()) {
      report = contactmech::cmdDerive(contactmech::loadConfig(deriveArgs.configPath),
                                      toOptions(deriveArgs));
    } else if (simulate->parsed()) {
      report = contactmech::cmdSimulate(contactmech::loadConfig(simulateArgs.configPath),
                                        toOptions(simulateArgs));
    } else {
      report = contactmech::cmdCheck(contactmech::loadConfig(checkArgs.configPath), suite,
                                     toOptions(checkArgs));
    }
    std::cout << report.text();
    return report.allPassed() ? kExitPass : kExitCheckFailure;
  } catch (const contactmech::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const contactmech::ParseError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const contactmech::SingularLagrangianError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumericFailure;
  } catch (const contactmech::IntegrationError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumericFailure;
  } catch (const contactmech::EvalError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericFailure;
  }
}
