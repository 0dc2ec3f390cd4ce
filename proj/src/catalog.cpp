#include "contactmech/catalog.hpp"

namespace contactmech {

namespace {

VectorFieldExpr fieldFromStrings(const std::vector<std::string>& components) {
  VectorFieldExpr f;
  for (const auto& c : components) f.components.push_back(parseExpr(c));
  return f;
}

}  // namespace

CatalogEntry dampedOscillator(double m, double omega, double gamma) {
  CatalogEntry e;
  e.name = "damped_oscillator";
  e.lagrangian.n = 1;
  e.lagrangian.coords = {"q", "v", "s"};
  e.lagrangian.L = parseExpr("(1/2)*m*v^2 - (1/2)*m*omega^2*q^2 - gamma*s");
  e.lagrangian.params = {{"m", m}, {"omega", omega}, {"gamma", gamma}};

  ContactHamiltonianSystem h;
  h.n = 1;
  h.coords = {"q", "p", "s"};
  h.H = parseExpr("p^2/(2*m) + (1/2)*m*omega^2*q^2 + gamma*s");
  h.params = e.lagrangian.params;
  e.hamiltonian = h;

  e.symmetries.push_back({eulerLagrangeField(e.lagrangian), "dynamics"});

  Quantity energy;
  energy.expression = lagrangianEnergy(e.lagrangian);
  energy.kind = QuantityKind::Dissipated;
  energy.label = "energy";
  e.quantities.push_back(energy);

  e.initialState = {1.0, 0.0, 0.0};
  e.integration.method = Method::Rk4Fixed;
  e.integration.dt = 1e-3;
  e.integration.tMax = 5.0;
  return e;
}

CatalogEntry gravityWithFriction(double m, double g, double gamma) {
  CatalogEntry e;
  e.name = "gravity_friction";
  e.lagrangian.n = 2;
  e.lagrangian.coords = {"x", "y", "vx", "vy", "s"};
  e.lagrangian.L = parseExpr("(1/2)*m*(vx^2 + vy^2) - m*g*y - gamma*s");
  e.lagrangian.params = {{"m", m}, {"g", g}, {"gamma", gamma}};

  ContactHamiltonianSystem h;
  h.n = 2;
  h.coords = {"x", "y", "px", "py", "s"};
  h.H = parseExpr("(px^2 + py^2)/(2*m) + m*g*y + gamma*s");
  h.params = e.lagrangian.params;
  e.hamiltonian = h;

  e.symmetries.push_back({eulerLagrangeField(e.lagrangian), "dynamics"});
  e.symmetries.push_back(
      {fieldFromStrings({"1", "0", "0", "0", "0"}), "translation-x"});

  Quantity energy;
  energy.expression = lagrangianEnergy(e.lagrangian);
  energy.kind = QuantityKind::Dissipated;
  energy.label = "energy";
  Quantity px;
  px.expression = parseExpr("m*vx");
  px.kind = QuantityKind::Dissipated;
  px.label = "px";
  e.quantities.push_back(energy);
  e.quantities.push_back(px);
  e.quantities.push_back(quotientQuantity(energy, px));
  e.quantities.back().label = "energy/px";

  e.initialState = {0.0, 2.0, 1.0, 0.0, 0.0};
  e.integration.method = Method::Rk4Fixed;
  e.integration.dt = 1e-3;
  e.integration.tMax = 5.0;
  return e;
}

CatalogEntry parachute(double m, double g, double gamma) {
  CatalogEntry e;
  e.name = "parachute";
  e.lagrangian.n = 1;
  e.lagrangian.coords = {"y", "v", "s"};
  if (gamma == 0.0) {
    // gamma -> 0 limit: the exponential potential tends to m*g*y.
    e.lagrangian.L = parseExpr("(1/2)*m*v^2 - m*g*y");
  } else {
    e.lagrangian.L = parseExpr("(1/2)*m*v^2 - (m*g/(2*gamma))*(exp(2*gamma*y) - 1) + 2*gamma*v*s");
  }
  e.lagrangian.params = {{"m", m}, {"g", g}, {"gamma", gamma}};

  ContactHamiltonianSystem h;
  h.n = 1;
  h.coords = {"y", "p", "s"};
  if (gamma == 0.0) {
    h.H = parseExpr("p^2/(2*m) + m*g*y");
  } else {
    h.H = parseExpr("(p - 2*gamma*s)^2/(2*m) + (m*g/(2*gamma))*(exp(2*gamma*y) - 1)");
  }
  h.params = e.lagrangian.params;
  e.hamiltonian = h;

  e.symmetries.push_back({eulerLagrangeField(e.lagrangian), "dynamics"});

  Quantity energy;
  energy.expression = lagrangianEnergy(e.lagrangian);
  energy.kind = QuantityKind::Dissipated;
  energy.label = "energy";
  e.quantities.push_back(energy);

  e.initialState = {0.0, 0.0, 0.0};
  e.integration.method = Method::Rk4Fixed;
  e.integration.dt = 1e-3;
  e.integration.tMax = 10.0;
  return e;
}

std::vector<CatalogEntry> builtinCatalog() {
  return {dampedOscillator(), gravityWithFriction(), parachute()};
}

}  // namespace contactmech
