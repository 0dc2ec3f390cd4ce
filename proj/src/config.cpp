#include "contactmech/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "contactmech/validate.hpp"

namespace contactmech {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& message, const std::string& pointer) {
  throw ConfigError(message, pointer);
}

const Json& require(const Json& j, const std::string& key, const std::string& pointer) {
  auto it = j.find(key);
  if (it == j.end()) fail("missing required field '" + key + "'", pointer);
  return *it;
}

std::string asString(const Json& j, const std::string& pointer) {
  if (!j.is_string()) fail("expected a string", pointer);
  return j.get<std::string>();
}

double asNumber(const Json& j, const std::string& pointer) {
  if (!j.is_number()) fail("expected a number", pointer);
  return j.get<double>();
}

int asInt(const Json& j, const std::string& pointer) {
  if (!j.is_number_integer()) fail("expected an integer", pointer);
  return j.get<int>();
}

std::vector<std::string> asStringList(const Json& j, const std::string& pointer) {
  if (!j.is_array()) fail("expected an array of strings", pointer);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(asString(j[i], pointer + "/" + std::to_string(i)));
  return out;
}

Expr parseCheckedExpr(const std::string& text, const std::string& pointer) {
  try {
    return parseExpr(text);
  } catch (const ParseError& e) {
    fail(std::string("expression does not parse: ") + e.what(), pointer);
  }
}

IntegratorConfig readIntegration(const Json& j, const std::string& pointer) {
  IntegratorConfig cfg;
  if (j.contains("method")) {
    std::string method = asString(j["method"], pointer + "/method");
    if (method == "rk4-fixed") {
      cfg.method = Method::Rk4Fixed;
    } else if (method == "rk45-adaptive") {
      cfg.method = Method::Rk45Adaptive;
    } else {
      fail("unknown method '" + method + "' (use rk4-fixed or rk45-adaptive)",
           pointer + "/method");
    }
  }
  if (j.contains("dt")) cfg.dt = asNumber(j["dt"], pointer + "/dt");
  if (j.contains("atol")) cfg.atol = asNumber(j["atol"], pointer + "/atol");
  if (j.contains("rtol")) cfg.rtol = asNumber(j["rtol"], pointer + "/rtol");
  if (j.contains("tMax")) cfg.tMax = asNumber(j["tMax"], pointer + "/tMax");
  if (j.contains("maxSteps")) cfg.maxSteps = asInt(j["maxSteps"], pointer + "/maxSteps");
  if (cfg.dt <= 0.0) fail("dt must be positive", pointer + "/dt");
  if (cfg.atol <= 0.0 || cfg.rtol <= 0.0)
    fail("atol and rtol must be positive", pointer);
  if (cfg.maxSteps <= 0) fail("maxSteps must be positive", pointer + "/maxSteps");
  return cfg;
}

}  // namespace

std::vector<std::string> SystemConfig::coordinates() const {
  std::vector<std::string> out = position;
  out.insert(out.end(), velocityOrMomentum.begin(), velocityOrMomentum.end());
  out.push_back(action);
  return out;
}

ContactLagrangianSystem SystemConfig::toLagrangian() const {
  if (!isLagrangian()) throw ConfigError("config is not a Lagrangian system", "/formalism");
  ContactLagrangianSystem sys;
  sys.n = n;
  sys.coords = coordinates();
  sys.L = parseExpr(expression);
  sys.params = params;
  return sys;
}

ContactHamiltonianSystem SystemConfig::toHamiltonian() const {
  if (isLagrangian()) throw ConfigError("config is not a Hamiltonian system", "/formalism");
  ContactHamiltonianSystem sys;
  sys.n = n;
  sys.coords = coordinates();
  sys.H = parseExpr(expression);
  sys.params = params;
  return sys;
}

ContactHamiltonianSystem SystemConfig::companionHamiltonian() const {
  if (!companion) throw ConfigError("config has no companion Hamiltonian", "/hamiltonian");
  ContactHamiltonianSystem sys;
  sys.n = n;
  sys.coords = position;
  sys.coords.insert(sys.coords.end(), companion->momentum.begin(), companion->momentum.end());
  sys.coords.push_back(action);
  sys.H = parseExpr(companion->expression);
  sys.params = params;
  return sys;
}

SystemConfig parseConfig(const std::string& text, const std::string& origin) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(origin + " is not valid JSON: " + e.what(), "");
  }
  if (!j.is_object()) fail("config root must be an object", "");

  SystemConfig cfg;
  cfg.name = asString(require(j, "name", ""), "/name");
  cfg.formalism = asString(require(j, "formalism", ""), "/formalism");
  if (cfg.formalism != "lagrangian" && cfg.formalism != "hamiltonian")
    fail("formalism must be 'lagrangian' or 'hamiltonian'", "/formalism");
  cfg.n = asInt(require(j, "n", ""), "/n");
  if (cfg.n <= 0) fail("n must be positive", "/n");

  const Json& coords = require(j, "coordinates", "");
  if (!coords.is_object()) fail("expected an object", "/coordinates");
  cfg.position = asStringList(require(coords, "position", "/coordinates"), "/coordinates/position");
  const char* secondBlock = cfg.formalism == "lagrangian" ? "velocity" : "momentum";
  cfg.velocityOrMomentum = asStringList(require(coords, secondBlock, "/coordinates"),
                                        std::string("/coordinates/") + secondBlock);
  if (coords.contains("action")) cfg.action = asString(coords["action"], "/coordinates/action");
  if (static_cast<int>(cfg.position.size()) != cfg.n)
    fail("expected " + std::to_string(cfg.n) + " position names, got " +
             std::to_string(cfg.position.size()),
         "/coordinates/position");
  if (static_cast<int>(cfg.velocityOrMomentum.size()) != cfg.n)
    fail("expected " + std::to_string(cfg.n) + " " + secondBlock + " names, got " +
             std::to_string(cfg.velocityOrMomentum.size()),
         std::string("/coordinates/") + secondBlock);

  cfg.expression = asString(require(j, "expression", ""), "/expression");

  if (j.contains("params")) {
    const Json& params = j["params"];
    if (!params.is_object()) fail("expected an object", "/params");
    for (const auto& [key, value] : params.items())
      cfg.params[key] = asNumber(value, "/params/" + key);
  }

  try {
    validateCoordinateNames(cfg.coordinates(), 2 * cfg.n + 1);
  } catch (const std::invalid_argument& e) {
    fail(e.what(), "/coordinates");
  }
  Expr main = parseCheckedExpr(cfg.expression, "/expression");
  try {
    validateFreeVariables(main, cfg.coordinates(), cfg.params, "expression");
  } catch (const std::invalid_argument& e) {
    fail(e.what(), "/expression");
  }

  if (j.contains("symmetries")) {
    const Json& sym = j["symmetries"];
    if (!sym.is_object()) fail("expected an object", "/symmetries");
    for (const auto& [key, value] : sym.items()) {
      std::string pointer = "/symmetries/" + key;
      SymmetrySpec spec;
      spec.name = key;
      spec.components = asStringList(value, pointer);
      if (static_cast<int>(spec.components.size()) != 2 * cfg.n + 1)
        fail("expected " + std::to_string(2 * cfg.n + 1) + " components", pointer);
      for (std::size_t i = 0; i < spec.components.size(); ++i) {
        Expr c = parseCheckedExpr(spec.components[i], pointer + "/" + std::to_string(i));
        try {
          validateFreeVariables(c, cfg.coordinates(), cfg.params, "symmetry component");
        } catch (const std::invalid_argument& e) {
          fail(e.what(), pointer + "/" + std::to_string(i));
        }
      }
      cfg.symmetries.push_back(std::move(spec));
    }
  }

  if (j.contains("quantities")) {
    const Json& quant = j["quantities"];
    if (!quant.is_object()) fail("expected an object", "/quantities");
    for (const auto& [key, value] : quant.items()) {
      std::string pointer = "/quantities/" + key;
      QuantitySpec spec;
      spec.name = key;
      if (value.is_string()) {
        spec.expression = value.get<std::string>();
        spec.kind = "dissipated";
      } else if (value.is_object()) {
        spec.expression = asString(require(value, "expression", pointer), pointer + "/expression");
        spec.kind = value.contains("kind") ? asString(value["kind"], pointer + "/kind")
                                           : std::string("dissipated");
      } else {
        fail("expected a string or an object", pointer);
      }
      if (spec.kind != "dissipated" && spec.kind != "conserved")
        fail("kind must be 'dissipated' or 'conserved'", pointer + "/kind");
      Expr q = parseCheckedExpr(spec.expression, pointer);
      try {
        validateFreeVariables(q, cfg.coordinates(), cfg.params, "quantity");
      } catch (const std::invalid_argument& e) {
        fail(e.what(), pointer);
      }
      cfg.quantities.push_back(std::move(spec));
    }
  }

  if (j.contains("hamiltonian")) {
    if (cfg.formalism != "lagrangian")
      fail("companion 'hamiltonian' block is only valid for lagrangian configs", "/hamiltonian");
    const Json& comp = j["hamiltonian"];
    if (!comp.is_object()) fail("expected an object", "/hamiltonian");
    CompanionHamiltonian companion;
    companion.momentum =
        asStringList(require(comp, "momentum", "/hamiltonian"), "/hamiltonian/momentum");
    companion.expression =
        asString(require(comp, "expression", "/hamiltonian"), "/hamiltonian/expression");
    if (static_cast<int>(companion.momentum.size()) != cfg.n)
      fail("expected " + std::to_string(cfg.n) + " momentum names", "/hamiltonian/momentum");
    cfg.companion = std::move(companion);
    Expr h = parseCheckedExpr(cfg.companion->expression, "/hamiltonian/expression");
    std::vector<std::string> hCoords = cfg.position;
    hCoords.insert(hCoords.end(), cfg.companion->momentum.begin(), cfg.companion->momentum.end());
    hCoords.push_back(cfg.action);
    try {
      validateCoordinateNames(hCoords, 2 * cfg.n + 1);
      validateFreeVariables(h, hCoords, cfg.params, "companion Hamiltonian");
    } catch (const std::invalid_argument& e) {
      fail(e.what(), "/hamiltonian");
    }
  }

  if (j.contains("integration"))
    cfg.integration = readIntegration(j["integration"], "/integration");

  if (j.contains("initialState")) {
    const Json& init = j["initialState"];
    if (!init.is_array()) fail("expected an array of numbers", "/initialState");
    for (std::size_t i = 0; i < init.size(); ++i)
      cfg.initialState.push_back(asNumber(init[i], "/initialState/" + std::to_string(i)));
    if (static_cast<int>(cfg.initialState.size()) != 2 * cfg.n + 1)
      fail("initial state must have length 2n+1 = " + std::to_string(2 * cfg.n + 1),
           "/initialState");
  }

  return cfg;
}

SystemConfig loadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string(), "");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parseConfig(text, path.string());
}

}  // namespace contactmech
