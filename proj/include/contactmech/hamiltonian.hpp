#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "contactmech/expr.hpp"
#include "contactmech/exterior.hpp"
#include "contactmech/vectorfield.hpp"

namespace contactmech {

/// The triple (M, η, H) in Darboux coordinates (q^1..q^n, p_1..p_n, s) with
/// η = ds - p_i dq^i.
struct ContactHamiltonianSystem {
  int n = 0;
  std::vector<std::string> coords;  // q-block, p-block, s
  Expr H;
  Bindings params;

  int dim() const { return 2 * n + 1; }
  const std::string& q(int i) const { return coords[static_cast<std::size_t>(i)]; }
  const std::string& p(int i) const { return coords[static_cast<std::size_t>(n + i)]; }
  const std::string& s() const { return coords[static_cast<std::size_t>(2 * n)]; }

  /// Canonical contact form ds - p_i dq^i.
  FormExpr contactForm() const;

  /// Coordinate bindings for a state vector, merged with the parameters.
  Bindings bind(const std::vector<double>& state) const;

  /// Checks coordinate arity, name validity/distinctness and that the free
  /// variables of H are covered by coordinates and parameters.
  void validate() const;
};

/// Throwing variant of the |H| = 0 locus refusal for the Ω-form equations.
class ZeroHamiltonianLocusError : public std::domain_error {
 public:
  explicit ZeroHamiltonianLocusError(double hValue)
      : std::domain_error("omega residuals are undefined on the H=0 locus (|H| = " +
                          std::to_string(std::abs(hValue)) + ")"),
        hValue_(hValue) {}
  double hamiltonianValue() const { return hValue_; }

 private:
  double hValue_;
};

/// R = ∂/∂s in Darboux coordinates.
VectorFieldExpr reebField(const ContactHamiltonianSystem& sys);

/// q̇^i = ∂H/∂p_i, ṗ_i = -(∂H/∂q^i + p_i ∂H/∂s), ṡ = p_i ∂H/∂p_i - H.
VectorFieldExpr hamiltonianVectorField(const ContactHamiltonianSystem& sys);

struct OneFormResidual {
  std::vector<double> oneForm;  // dense components of the 1-form residual
  double scalar = 0.0;
  double oneFormMax() const;
  double maxAbs() const;
};

struct OmegaResidual {
  double oneFormMax = 0.0;
  double scalar = 0.0;
};

/// Symbolic structures of a system, computed once so point sweeps do not pay
/// for repeated differentiation.
class HamiltonianStructure {
 public:
  explicit HamiltonianStructure(const ContactHamiltonianSystem& sys);

  const ContactHamiltonianSystem& system() const { return sys_; }
  const FormExpr& eta() const { return eta_; }
  const FormExpr& dEta() const { return dEta_; }
  const FormExpr& dH() const { return dH_; }
  const FormExpr& omega() const { return omega_; }
  const Expr& reebRate() const { return reebRate_; }  // L_R H = ∂H/∂s
  const VectorFieldExpr& field() const { return field_; }

  /// Residuals of i(X)dη = dH - (L_R H)η and i(X)η = -H at the point.
  OneFormResidual hamiltonResiduals(const VectorFieldExpr& x, const Bindings& b) const;

  /// Residuals of i(X)Ω = 0 and i(X)η = -H; refuses near the H = 0 locus.
  OmegaResidual omegaResiduals(const VectorFieldExpr& x, const Bindings& b,
                               double zeroLocusTol = 1e-6) const;

  /// ♭(X) = i(X)dη + (i(X)η)η at the point, as a dense covector.
  std::vector<double> flat(const VectorValue& x, const Bindings& b) const;

  /// X_H(H) + (∂H/∂s)·H at the point; vanishes identically.
  double dissipationRateResidual(const Bindings& b) const;

  /// ♭(X_H) - (dH - (L_R H + H)η) max-norm at the point.
  double flatIdentityResidual(const Bindings& b) const;

  /// 1 + max |coordinate| + |H|, the residual scale used by the tolerances.
  double scaleAt(const Bindings& b) const;

 private:
  ContactHamiltonianSystem sys_;
  FormExpr eta_, dEta_, dH_, omega_;
  Expr reebRate_;
  Expr dissipationResidual_;
  VectorFieldExpr field_;
};

OneFormResidual hamiltonEquationResiduals(const ContactHamiltonianSystem& sys,
                                          const VectorFieldExpr& x, const Bindings& b);
OmegaResidual omegaResiduals(const ContactHamiltonianSystem& sys, const VectorFieldExpr& x,
                             const Bindings& b, double zeroLocusTol = 1e-6);
std::vector<double> flatMap(const ContactHamiltonianSystem& sys, const VectorFieldExpr& x,
                            const Bindings& b);
double dissipationRateResidual(const ContactHamiltonianSystem& sys, const Bindings& b);

}  // namespace contactmech
