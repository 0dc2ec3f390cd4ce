#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "contactmech/expr.hpp"
#include "contactmech/exterior.hpp"
#include "contactmech/hamiltonian.hpp"
#include "contactmech/vectorfield.hpp"

namespace contactmech {

/// (TQ×ℝ, L) in natural coordinates (q^1..q^n, v^1..v^n, s).
struct ContactLagrangianSystem {
  int n = 0;
  std::vector<std::string> coords;  // q-block, v-block, s
  Expr L;
  Bindings params;

  int dim() const { return 2 * n + 1; }
  const std::string& q(int i) const { return coords[static_cast<std::size_t>(i)]; }
  const std::string& v(int i) const { return coords[static_cast<std::size_t>(n + i)]; }
  const std::string& s() const { return coords[static_cast<std::size_t>(2 * n)]; }
  std::vector<std::string> velocityNames() const {
    return {coords.begin() + n, coords.begin() + 2 * n};
  }

  Bindings bind(const std::vector<double>& state) const;
  void validate() const;
};

class SingularLagrangianError : public std::runtime_error {
 public:
  explicit SingularLagrangianError(const std::string& message) : std::runtime_error(message) {}
};

/// E_L = v^i ∂L/∂v^i - L, simplified.
Expr lagrangianEnergy(const ContactLagrangianSystem& sys);

struct CartanForms {
  FormExpr theta;  // (∂L/∂v^i) dq^i
  FormExpr eta;    // ds - θ_L
};
CartanForms cartanForms(const ContactLagrangianSystem& sys);

/// Velocity Hessian W_ij = ∂²L/∂v^i∂v^j evaluated at a point, with inverse,
/// determinant and ∞-norm condition number. `regular` is false when
/// |det W| < tol·(1 + ‖W‖); the inverse is not meaningful in that case.
struct HessianValue {
  Eigen::MatrixXd W;
  Eigen::MatrixXd Winv;
  double det = 0.0;
  double cond = 0.0;
  bool regular = false;
};
HessianValue hessian(const ContactLagrangianSystem& sys, const Bindings& b,
                     double singularTol = 1e-10);

/// R_L = ∂/∂s - W^{ji} ∂²L/∂s∂v^j ∂/∂v^i with the symbolic adjugate inverse;
/// only n ≤ 3 is supported symbolically (use reebLagrangianAt beyond).
VectorFieldExpr reebLagrangian(const ContactLagrangianSystem& sys);
/// Pointwise numeric evaluation of R_L, valid for any n.
VectorValue reebLagrangianAt(const ContactLagrangianSystem& sys, const Bindings& b);

/// The Euler-Lagrange SODE: q̇ = v, ṡ = L, and
/// v̇^i = W^{ik}(∂L/∂q^k - v^j ∂²L/∂q^j∂v^k - L ∂²L/∂s∂v^k + ∂L/∂s ∂L/∂v^k).
/// Throws SingularLagrangianError when det W vanishes identically.
VectorFieldExpr eulerLagrangeField(const ContactLagrangianSystem& sys);
/// Pointwise numeric evaluation, valid for any n; throws
/// SingularLagrangianError when the Hessian is singular at the point.
VectorValue eulerLagrangeFieldAt(const ContactLagrangianSystem& sys, const Bindings& b);

/// Symbolic structures computed once per system.
class LagrangianStructure {
 public:
  explicit LagrangianStructure(const ContactLagrangianSystem& sys);

  const ContactLagrangianSystem& system() const { return sys_; }
  const FormExpr& theta() const { return theta_; }
  const FormExpr& eta() const { return eta_; }
  const FormExpr& dEta() const { return dEta_; }
  const Expr& energy() const { return energy_; }
  const FormExpr& dEnergy() const { return dEnergy_; }
  /// L_{R_L} E_L, computed as -∂L/∂s.
  const Expr& reebRate() const { return reebRate_; }
  /// Γ_L (symbolic, n ≤ 3), constructed on first use.
  const VectorFieldExpr& field() const;
  /// R_L (symbolic, n ≤ 3), constructed on first use.
  const VectorFieldExpr& reeb() const;

  /// Residuals of i(X)dη_L = dE_L - (L_{R_L}E_L)η_L and i(X)η_L = -E_L.
  OneFormResidual lagrangeResiduals(const VectorFieldExpr& x, const Bindings& b) const;

  /// R_L(E_L) + ∂L/∂s at the point: the direct-contraction cross-check of
  /// the reebRate() shortcut.
  double reebEnergyRateResidual(const Bindings& b) const;

  /// i(R_L)dη_L max-norm and i(R_L)η_L - 1 at the point.
  OneFormResidual reebDefinitionResiduals(const Bindings& b) const;

  /// Residuals of i(X)Ω_L = 0, i(X)η_L = -E_L with
  /// Ω_L = -E_L dη_L + dE_L ∧ η_L; refuses near the E_L = 0 locus.
  OmegaResidual omegaResiduals(const VectorFieldExpr& x, const Bindings& b,
                               double zeroLocusTol = 1e-6) const;

  /// ♭(Γ_L) - (dE_L - (L_{R_L}E_L + E_L)η_L) max-norm at the point.
  double flatIdentityResidual(const Bindings& b) const;

  /// Γ_L(E_L) + (L_{R_L}E_L)·E_L at the point.
  double dissipationRateResidual(const Bindings& b) const;

  double scaleAt(const Bindings& b) const;

 private:
  ContactLagrangianSystem sys_;
  FormExpr theta_, eta_, dEta_;
  Expr energy_;
  FormExpr dEnergy_;
  Expr reebRate_;
  mutable VectorFieldExpr field_, reebField_;
  mutable bool haveField_ = false, haveReeb_ = false;
};

OneFormResidual lagrangeEquationResiduals(const ContactLagrangianSystem& sys,
                                          const VectorFieldExpr& x, const Bindings& b);

/// True iff the first n components are, after simplification, exactly the
/// velocity variables.
bool sodeCheck(const VectorFieldExpr& x, const std::vector<std::string>& velocityNames);

/// Legendre image of a point: values ordered (q^i, ∂L/∂v^i, s).
std::vector<double> legendreMap(const ContactLagrangianSystem& sys, const Bindings& b);

/// Pointwise test of FL_* Γ_L = X_H and FL* H = E_L against a user-supplied
/// Hamiltonian on matching Darboux coordinates.
class LegendreEquivalence {
 public:
  LegendreEquivalence(const ContactLagrangianSystem& sysL,
                      const ContactHamiltonianSystem& sysH);
  /// max(|H(FL(b)) - E_L(b)|, ‖J_FL(b)·Γ_L(b) - X_H(FL(b))‖∞).
  double residualAt(const Bindings& b) const;

 private:
  ContactLagrangianSystem sysL_;
  ContactHamiltonianSystem sysH_;
  VectorFieldExpr gammaL_, xH_;
  Expr energy_;
  std::vector<Expr> legendre_;                // components of FL
  std::vector<std::vector<Expr>> jacobian_;   // J_FL
};

double checkLegendreEquivalence(const ContactLagrangianSystem& sysL,
                                const ContactHamiltonianSystem& sysH, const Bindings& b);

/// L = L₀(q, v) + φ(q, s); guarantees ∂²L/∂v∂s = 0.
struct HolonomicDissipationLagrangian {
  int n = 0;
  std::vector<std::string> coords;  // q-block, v-block, s
  Expr base;                        // L₀
  Expr dissipation;                 // φ
  Bindings params;

  ContactLagrangianSystem combined() const;
  /// Throws std::invalid_argument when ∂²(L₀+φ)/∂v^i∂s does not vanish
  /// identically.
  void validate() const;
};

/// Aggregated residual of the holonomic-dissipation specialization at b:
/// energy splitting E_L = E_{L₀} - φ, Reeb field ∂/∂s, and the force form
/// ∂φ/∂q^i + (∂φ/∂s)(∂L₀/∂v^i) against the generic Euler-Lagrange route.
double holonomicSpecializationCheck(const HolonomicDissipationLagrangian& hd, const Bindings& b);

}  // namespace contactmech
