#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contactmech/hamiltonian.hpp"
#include "contactmech/integrate.hpp"
#include "contactmech/lagrangian.hpp"
#include "contactmech/symmetry.hpp"

namespace contactmech {

/// A ready-to-run example system: Lagrangian side, matching Hamiltonian in
/// Darboux coordinates, known symmetries and quantities, and a sensible
/// integration setup.
struct CatalogEntry {
  std::string name;
  ContactLagrangianSystem lagrangian;
  std::optional<ContactHamiltonianSystem> hamiltonian;
  std::vector<SymmetryCandidate> symmetries;
  std::vector<Quantity> quantities;
  std::vector<double> initialState;
  IntegratorConfig integration;
};

/// L = ½mv² - ½mω²q² - γs on (q, v, s).
CatalogEntry dampedOscillator(double m = 1.0, double omega = 2.0, double gamma = 0.3);

/// L = ½m(vx²+vy²) - mgy - γs on (x, y, vx, vy, s).
CatalogEntry gravityWithFriction(double m = 1.0, double g = 9.8, double gamma = 0.3);

/// L = ½mv² - (mg/2γ)(e^{2γy} - 1) + 2γvs on (y, v, s); for γ = 0 the
/// potential term degenerates to the free-fall limit mgy.
CatalogEntry parachute(double m = 1.0, double g = 9.8, double gamma = 0.1);

std::vector<CatalogEntry> builtinCatalog();

}  // namespace contactmech
