#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contactmech/expr.hpp"
#include "contactmech/exterior.hpp"
#include "contactmech/hamiltonian.hpp"
#include "contactmech/integrate.hpp"
#include "contactmech/lagrangian.hpp"
#include "contactmech/vectorfield.hpp"

namespace contactmech {

struct SymmetryCandidate {
  VectorFieldExpr field;
  std::string label;
};

enum class QuantityKind { Dissipated, Conserved, Unknown };

struct Quantity {
  Expr expression;
  QuantityKind kind = QuantityKind::Unknown;
  std::string label;
};

struct SampleBox {
  double lo = -2.0;
  double hi = 2.0;
};

struct SymmetryReport {
  bool passed = false;
  bool symbolic = false;  // short-circuited by a symbolic zero after simplify
  double worst = 0.0;
  std::vector<double> worstPoint;
  std::string detail;
};

struct QuantityReport {
  bool passed = false;
  double worstPointwise = 0.0;  // rate-law residual at trajectory states
  double worstGlobal = 0.0;     // relative error of the exponential law / drift
  std::string detail;
};

/// [X, Y]^i = X^j ∂Y^i/∂x^j - Y^j ∂X^i/∂x^j, simplified.
VectorFieldExpr lieBracket(const VectorFieldExpr& x, const VectorFieldExpr& y,
                           const std::vector<std::string>& coords);

/// Cartan formula i(Y)df + d(i(Y)f) for forms of degree ≤ 1.
FormExpr lieDerivativeOneForm(const VectorFieldExpr& y, const FormExpr& f);

/// Evaluates [Y, X] at seeded sample points. Passes symbolically when every
/// bracket component simplifies to zero.
SymmetryReport isDynamicalSymmetry(const VectorFieldExpr& y, const VectorFieldExpr& x,
                                   const std::vector<std::string>& coords,
                                   const Bindings& params, SampleBox box, std::uint64_t seed,
                                   int points, double tol);

/// Checks L_Y η = 0 and L_Y H = 0, plus the consequence [Y, R] = 0.
SymmetryReport isContactSymmetry(const VectorFieldExpr& y, const FormExpr& eta, const Expr& h,
                                 const VectorFieldExpr& reeb,
                                 const std::vector<std::string>& coords, const Bindings& params,
                                 SampleBox box, std::uint64_t seed, int points, double tol);
SymmetryReport isContactSymmetry(const VectorFieldExpr& y, const ContactHamiltonianSystem& sys,
                                 SampleBox box, std::uint64_t seed, int points, double tol);
SymmetryReport isContactSymmetry(const VectorFieldExpr& y, const ContactLagrangianSystem& sys,
                                 SampleBox box, std::uint64_t seed, int points, double tol);

/// F = -i(Y)η, the dissipated quantity of the dissipation theorem.
Quantity dissipatedFromSymmetry(const VectorFieldExpr& y, const FormExpr& eta);

/// Verifies the rate law X(F) = -rate·F pointwise at trajectory states and
/// the global decay F(x(t)) = F(x(0))·exp(-∫ rate dτ).
QuantityReport checkRateLaw(const Expr& f, const VectorFieldExpr& x, const Expr& rate,
                            const Trajectory& traj, double tolPointwise, double tolGlobal);

QuantityReport checkDissipated(const Quantity& f, const ContactHamiltonianSystem& sys,
                               const Trajectory& traj, double tolPointwise, double tolGlobal);
QuantityReport checkDissipated(const Quantity& f, const ContactLagrangianSystem& sys,
                               const Trajectory& traj, double tolPointwise, double tolGlobal);

/// F1/F2 of two dissipated quantities is conserved.
Quantity quotientQuantity(const Quantity& f1, const Quantity& f2);

QuantityReport checkConserved(const Quantity& g, const ContactHamiltonianSystem& sys,
                              const Trajectory& traj, double tolPointwise, double tolDrift);
QuantityReport checkConserved(const Quantity& g, const ContactLagrangianSystem& sys,
                              const Trajectory& traj, double tolPointwise, double tolDrift);

enum class LiftKind { Tangent, Cotangent };

/// Complete lift of a base vector field Z = Z^i(q) ∂/∂q^i to TQ×ℝ (tangent)
/// or T*Q×ℝ (cotangent); the s-component is zero.
VectorFieldExpr completeLift(const std::vector<Expr>& z, LiftKind kind,
                             const std::vector<std::string>& coords);

/// For an s-independent Hamiltonian and a dynamical symmetry Y, the quantity
/// G = -i(Y)η is conserved (not merely dissipated) along the flow.
QuantityReport contactifiedConservationCheck(const ContactHamiltonianSystem& sys,
                                             const VectorFieldExpr& y, const Trajectory& traj,
                                             double tolPointwise, double tolDrift);

}  // namespace contactmech
