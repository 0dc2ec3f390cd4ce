#include "contactmech/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "contactmech/validate.hpp"

namespace contactmech {

namespace {

using ExprMatrix = std::vector<std::vector<Expr>>;

ExprMatrix velocityHessianExpr(const ContactLagrangianSystem& sys) {
  ExprMatrix w(static_cast<std::size_t>(sys.n),
               std::vector<Expr>(static_cast<std::size_t>(sys.n), Expr::constant(0.0)));
  for (int i = 0; i < sys.n; ++i) {
    Expr dLdvi = sys.L.diff(sys.v(i));
    for (int j = 0; j < sys.n; ++j)
      w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = dLdvi.diff(sys.v(j));
  }
  return w;
}

struct SymbolicInverse {
  Expr det;
  ExprMatrix inv;
};

// Adjugate inverse; kept to n ≤ 3 to bound expression growth.
SymbolicInverse symbolicInverse(const ExprMatrix& w, int n) {
  SymbolicInverse out;
  if (n == 1) {
    out.det = w[0][0].simplified();
    out.inv = {{(Expr::constant(1.0) / w[0][0]).simplified()}};
    return out;
  }
  if (n == 2) {
    out.det = (w[0][0] * w[1][1] - w[0][1] * w[1][0]).simplified();
    out.inv = {{(w[1][1] / out.det).simplified(), (-(w[0][1] / out.det)).simplified()},
               {(-(w[1][0] / out.det)).simplified(), (w[0][0] / out.det).simplified()}};
    return out;
  }
  if (n == 3) {
    auto minor2 = [&](int r0, int r1, int c0, int c1) {
      return w[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c0)] *
                 w[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c1)] -
             w[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c1)] *
                 w[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c0)];
    };
    out.det = (w[0][0] * minor2(1, 2, 1, 2) - w[0][1] * minor2(1, 2, 0, 2) +
               w[0][2] * minor2(1, 2, 0, 1))
                  .simplified();
    out.inv.assign(3, std::vector<Expr>(3, Expr::constant(0.0)));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        int r0 = (j == 0) ? 1 : 0, r1 = (j == 2) ? 1 : 2;
        int c0 = (i == 0) ? 1 : 0, c1 = (i == 2) ? 1 : 2;
        Expr cof = minor2(r0, r1, c0, c1);
        if ((i + j) % 2 == 1) cof = -cof;
        out.inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            (cof / out.det).simplified();
      }
    }
    return out;
  }
  throw std::invalid_argument(
      "symbolic Hessian inversion is limited to n <= 3; use the pointwise variants");
}

Eigen::MatrixXd evalMatrix(const ExprMatrix& m, const Bindings& b) {
  const auto n = m.size();
  Eigen::MatrixXd out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j].eval(b);
  return out;
}

// ∂L/∂q^k - v^j ∂²L/∂q^j∂v^k - L ∂²L/∂s∂v^k + ∂L/∂s ∂L/∂v^k
std::vector<Expr> eulerLagrangeForce(const ContactLagrangianSystem& sys) {
  std::vector<Expr> force;
  force.reserve(static_cast<std::size_t>(sys.n));
  Expr dLds = sys.L.diff(sys.s());
  for (int k = 0; k < sys.n; ++k) {
    Expr dLdvk = sys.L.diff(sys.v(k));
    Expr acc = sys.L.diff(sys.q(k));
    for (int j = 0; j < sys.n; ++j)
      acc = acc - Expr::variable(sys.v(j)) * dLdvk.diff(sys.q(j));
    acc = acc - sys.L * dLdvk.diff(sys.s());
    acc = acc + dLds * dLdvk;
    force.push_back(acc.simplified());
  }
  return force;
}

}  // namespace

Bindings ContactLagrangianSystem::bind(const std::vector<double>& state) const {
  Bindings b = params;
  for (std::size_t i = 0; i < coords.size(); ++i) b[coords[i]] = state[i];
  return b;
}

void ContactLagrangianSystem::validate() const {
  if (n <= 0) throw std::invalid_argument("dimension n must be positive");
  validateCoordinateNames(coords, 2 * n + 1);
  validateFreeVariables(L, coords, params, "Lagrangian");
}

Expr lagrangianEnergy(const ContactLagrangianSystem& sys) {
  Expr acc = Expr::constant(0.0);
  for (int i = 0; i < sys.n; ++i)
    acc = acc + Expr::variable(sys.v(i)) * sys.L.diff(sys.v(i));
  return (acc - sys.L).simplified();
}

CartanForms cartanForms(const ContactLagrangianSystem& sys) {
  CartanForms out;
  out.theta = FormExpr::zero(sys.coords, 1);
  for (int i = 0; i < sys.n; ++i) out.theta.set({i}, sys.L.diff(sys.v(i)));
  out.eta = FormExpr::zero(sys.coords, 1);
  for (const auto& [idx, e] : out.theta.comps) out.eta.set(idx, -e);
  out.eta.set({2 * sys.n}, Expr::constant(1.0));
  return out;
}

HessianValue hessian(const ContactLagrangianSystem& sys, const Bindings& b, double singularTol) {
  HessianValue out;
  out.W = evalMatrix(velocityHessianExpr(sys), b);
  out.det = out.W.determinant();
  double norm = out.W.cwiseAbs().rowwise().sum().maxCoeff();  // ∞-norm
  out.regular = std::abs(out.det) >= singularTol * (1.0 + norm);
  if (out.regular) {
    out.Winv = out.W.inverse();
    out.cond = norm * out.Winv.cwiseAbs().rowwise().sum().maxCoeff();
  } else {
    out.Winv = Eigen::MatrixXd::Zero(out.W.rows(), out.W.cols());
    out.cond = std::numeric_limits<double>::infinity();
  }
  return out;
}

VectorFieldExpr reebLagrangian(const ContactLagrangianSystem& sys) {
  sys.validate();
  ExprMatrix w = velocityHessianExpr(sys);
  SymbolicInverse inv = symbolicInverse(w, sys.n);
  if (inv.det.isConstant(0.0))
    throw SingularLagrangianError("Lagrangian is singular: det W vanishes identically");
  std::vector<Expr> mixed;  // ∂²L/∂s∂v^j
  for (int j = 0; j < sys.n; ++j) mixed.push_back(sys.L.diff(sys.v(j)).diff(sys.s()));
  VectorFieldExpr r = VectorFieldExpr::zero(sys.dim());
  for (int i = 0; i < sys.n; ++i) {
    Expr acc = Expr::constant(0.0);
    for (int j = 0; j < sys.n; ++j)
      acc = acc + inv.inv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] *
                      mixed[static_cast<std::size_t>(j)];
    r.components[static_cast<std::size_t>(sys.n + i)] = (-acc).simplified();
  }
  r.components[static_cast<std::size_t>(2 * sys.n)] = Expr::constant(1.0);
  return r;
}

VectorValue reebLagrangianAt(const ContactLagrangianSystem& sys, const Bindings& b) {
  HessianValue h = hessian(sys, b);
  if (!h.regular)
    throw SingularLagrangianError("Lagrangian is not regular at the requested point");
  Eigen::VectorXd mixed(sys.n);
  for (int j = 0; j < sys.n; ++j) mixed(j) = sys.L.diff(sys.v(j)).diff(sys.s()).eval(b);
  Eigen::VectorXd vComp = -(h.Winv.transpose() * mixed);
  VectorValue out(static_cast<std::size_t>(sys.dim()), 0.0);
  for (int i = 0; i < sys.n; ++i) out[static_cast<std::size_t>(sys.n + i)] = vComp(i);
  out[static_cast<std::size_t>(2 * sys.n)] = 1.0;
  return out;
}

VectorFieldExpr eulerLagrangeField(const ContactLagrangianSystem& sys) {
  sys.validate();
  ExprMatrix w = velocityHessianExpr(sys);
  SymbolicInverse inv = symbolicInverse(w, sys.n);
  if (inv.det.isConstant(0.0))
    throw SingularLagrangianError("Lagrangian is singular: det W vanishes identically");
  std::vector<Expr> force = eulerLagrangeForce(sys);
  VectorFieldExpr x = VectorFieldExpr::zero(sys.dim());
  for (int i = 0; i < sys.n; ++i) {
    x.components[static_cast<std::size_t>(i)] = Expr::variable(sys.v(i));
    Expr acc = Expr::constant(0.0);
    for (int k = 0; k < sys.n; ++k)
      acc = acc + inv.inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                      force[static_cast<std::size_t>(k)];
    x.components[static_cast<std::size_t>(sys.n + i)] = acc.simplified();
  }
  x.components[static_cast<std::size_t>(2 * sys.n)] = sys.L.simplified();
  return x;
}

VectorValue eulerLagrangeFieldAt(const ContactLagrangianSystem& sys, const Bindings& b) {
  HessianValue h = hessian(sys, b);
  if (!h.regular)
    throw SingularLagrangianError("Lagrangian is not regular at the requested point");
  std::vector<Expr> force = eulerLagrangeForce(sys);
  Eigen::VectorXd rhs(sys.n);
  for (int k = 0; k < sys.n; ++k) rhs(k) = force[static_cast<std::size_t>(k)].eval(b);
  Eigen::VectorXd accel = h.Winv * rhs;
  VectorValue out(static_cast<std::size_t>(sys.dim()), 0.0);
  for (int i = 0; i < sys.n; ++i) {
    out[static_cast<std::size_t>(i)] = Expr::variable(sys.v(i)).eval(b);
    out[static_cast<std::size_t>(sys.n + i)] = accel(i);
  }
  out[static_cast<std::size_t>(2 * sys.n)] = sys.L.eval(b);
  return out;
}

LagrangianStructure::LagrangianStructure(const ContactLagrangianSystem& sys) : sys_(sys) {
  sys_.validate();
  CartanForms forms = cartanForms(sys_);
  theta_ = std::move(forms.theta);
  eta_ = std::move(forms.eta);
  dEta_ = exteriorDerivative(eta_);
  energy_ = lagrangianEnergy(sys_);
  dEnergy_ = exteriorDerivative(FormExpr::scalar(sys_.coords, energy_));
  reebRate_ = (-sys_.L.diff(sys_.s())).simplified();
}

const VectorFieldExpr& LagrangianStructure::field() const {
  if (!haveField_) {
    field_ = eulerLagrangeField(sys_);
    haveField_ = true;
  }
  return field_;
}

const VectorFieldExpr& LagrangianStructure::reeb() const {
  if (!haveReeb_) {
    reebField_ = reebLagrangian(sys_);
    haveReeb_ = true;
  }
  return reebField_;
}

namespace {

std::vector<double> denseOneForm(const FormValue& f) {
  std::vector<double> out(static_cast<std::size_t>(f.dim), 0.0);
  for (const auto& [idx, v] : f.comps) out[static_cast<std::size_t>(idx[0])] = v;
  return out;
}

double pairing(const VectorValue& x, const std::vector<double>& covector) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * covector[i];
  return acc;
}

}  // namespace

OneFormResidual LagrangianStructure::lagrangeResiduals(const VectorFieldExpr& x,
                                                       const Bindings& b) const {
  VectorValue xv = evalField(x, b);
  std::vector<double> etaD = denseOneForm(evalForm(eta_, b));
  std::vector<double> dED = denseOneForm(evalForm(dEnergy_, b));
  std::vector<double> lhs = denseOneForm(contract(xv, evalForm(dEta_, b)));
  double rate = reebRate_.eval(b);
  double eVal = energy_.eval(b);

  OneFormResidual res;
  res.oneForm.assign(etaD.size(), 0.0);
  for (std::size_t i = 0; i < etaD.size(); ++i)
    res.oneForm[i] = lhs[i] - dED[i] + rate * etaD[i];
  res.scalar = pairing(xv, etaD) + eVal;
  return res;
}

double LagrangianStructure::reebEnergyRateResidual(const Bindings& b) const {
  VectorValue rv = reebLagrangianAt(sys_, b);
  std::vector<double> dED = denseOneForm(evalForm(dEnergy_, b));
  return pairing(rv, dED) + sys_.L.diff(sys_.s()).eval(b);
}

OneFormResidual LagrangianStructure::reebDefinitionResiduals(const Bindings& b) const {
  VectorValue rv = reebLagrangianAt(sys_, b);
  std::vector<double> etaD = denseOneForm(evalForm(eta_, b));
  OneFormResidual res;
  res.oneForm = denseOneForm(contract(rv, evalForm(dEta_, b)));
  res.scalar = pairing(rv, etaD) - 1.0;
  return res;
}

OmegaResidual LagrangianStructure::omegaResiduals(const VectorFieldExpr& x, const Bindings& b,
                                                  double zeroLocusTol) const {
  double eVal = energy_.eval(b);
  double coordScale = 1.0;
  for (const auto& name : sys_.coords) {
    auto it = b.find(name);
    if (it != b.end()) coordScale = std::max(coordScale, 1.0 + std::abs(it->second));
  }
  if (std::abs(eVal) <= zeroLocusTol * coordScale) throw ZeroHamiltonianLocusError(eVal);

  VectorValue xv = evalField(x, b);
  FormValue etaV = evalForm(eta_, b);
  FormValue dEtaV = evalForm(dEta_, b);
  FormValue dEV = evalForm(dEnergy_, b);
  // Ω_L at the point: -E_L dη_L + dE_L ∧ η_L
  FormValue omegaV = wedge(dEV, etaV);
  for (const auto& [idx, v] : dEtaV.comps) omegaV.comps[idx] -= eVal * v;
  std::erase_if(omegaV.comps, [](const auto& kv) { return kv.second == 0.0; });

  OmegaResidual res;
  res.oneFormMax = contract(xv, omegaV).maxAbs();
  res.scalar = pairing(xv, denseOneForm(etaV)) + eVal;
  return res;
}

double LagrangianStructure::flatIdentityResidual(const Bindings& b) const {
  VectorValue xv = evalField(field(), b);
  std::vector<double> etaD = denseOneForm(evalForm(eta_, b));
  std::vector<double> dED = denseOneForm(evalForm(dEnergy_, b));
  std::vector<double> flat = denseOneForm(contract(xv, evalForm(dEta_, b)));
  double ix_eta = pairing(xv, etaD);
  double factor = reebRate_.eval(b) + energy_.eval(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    double lhs = flat[i] + ix_eta * etaD[i];
    worst = std::max(worst, std::abs(lhs - (dED[i] - factor * etaD[i])));
  }
  return worst;
}

double LagrangianStructure::dissipationRateResidual(const Bindings& b) const {
  VectorValue xv = evalField(field(), b);
  std::vector<double> dED = denseOneForm(evalForm(dEnergy_, b));
  return pairing(xv, dED) + reebRate_.eval(b) * energy_.eval(b);
}

double LagrangianStructure::scaleAt(const Bindings& b) const {
  double m = 0.0;
  for (const auto& name : sys_.coords) {
    auto it = b.find(name);
    if (it != b.end()) m = std::max(m, std::abs(it->second));
  }
  return 1.0 + m + std::abs(energy_.eval(b));
}

OneFormResidual lagrangeEquationResiduals(const ContactLagrangianSystem& sys,
                                          const VectorFieldExpr& x, const Bindings& b) {
  return LagrangianStructure(sys).lagrangeResiduals(x, b);
}

bool sodeCheck(const VectorFieldExpr& x, const std::vector<std::string>& velocityNames) {
  if (x.components.size() < 2 * velocityNames.size() + 1) return false;
  for (std::size_t i = 0; i < velocityNames.size(); ++i) {
    Expr c = x.components[i].simplified();
    if (!c.identicalTo(Expr::variable(velocityNames[i]))) return false;
  }
  return true;
}

std::vector<double> legendreMap(const ContactLagrangianSystem& sys, const Bindings& b) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(sys.dim()));
  for (int i = 0; i < sys.n; ++i) out.push_back(Expr::variable(sys.q(i)).eval(b));
  for (int i = 0; i < sys.n; ++i) out.push_back(sys.L.diff(sys.v(i)).eval(b));
  out.push_back(Expr::variable(sys.s()).eval(b));
  return out;
}

LegendreEquivalence::LegendreEquivalence(const ContactLagrangianSystem& sysL,
                                         const ContactHamiltonianSystem& sysH)
    : sysL_(sysL), sysH_(sysH) {
  if (sysL_.n != sysH_.n)
    throw std::invalid_argument("Lagrangian and Hamiltonian systems have different n");
  sysL_.validate();
  sysH_.validate();
  gammaL_ = eulerLagrangeField(sysL_);
  xH_ = hamiltonianVectorField(sysH_);
  energy_ = lagrangianEnergy(sysL_);
  for (int i = 0; i < sysL_.n; ++i) legendre_.push_back(Expr::variable(sysL_.q(i)));
  for (int i = 0; i < sysL_.n; ++i) legendre_.push_back(sysL_.L.diff(sysL_.v(i)).simplified());
  legendre_.push_back(Expr::variable(sysL_.s()));
  for (const auto& component : legendre_) {
    std::vector<Expr> row;
    row.reserve(sysL_.coords.size());
    for (const auto& coord : sysL_.coords) row.push_back(component.diff(coord));
    jacobian_.push_back(std::move(row));
  }
}

double LegendreEquivalence::residualAt(const Bindings& b) const {
  const std::size_t d = legendre_.size();
  std::vector<double> image(d);
  for (std::size_t i = 0; i < d; ++i) image[i] = legendre_[i].eval(b);

  Bindings bh = sysH_.params;
  for (std::size_t i = 0; i < d; ++i) bh[sysH_.coords[i]] = image[i];

  double energyResidual = std::abs(sysH_.H.eval(bh) - energy_.eval(b));

  VectorValue gamma = evalField(gammaL_, b);
  VectorValue xh = evalField(xH_, bh);
  double pushforwardResidual = 0.0;
  for (std::size_t r = 0; r < d; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) acc += jacobian_[r][c].eval(b) * gamma[c];
    pushforwardResidual = std::max(pushforwardResidual, std::abs(acc - xh[r]));
  }
  return std::max(energyResidual, pushforwardResidual);
}

double checkLegendreEquivalence(const ContactLagrangianSystem& sysL,
                                const ContactHamiltonianSystem& sysH, const Bindings& b) {
  return LegendreEquivalence(sysL, sysH).residualAt(b);
}

ContactLagrangianSystem HolonomicDissipationLagrangian::combined() const {
  ContactLagrangianSystem sys;
  sys.n = n;
  sys.coords = coords;
  sys.L = (base + dissipation).simplified();
  sys.params = params;
  return sys;
}

void HolonomicDissipationLagrangian::validate() const {
  ContactLagrangianSystem sys = combined();
  sys.validate();
  for (int i = 0; i < n; ++i) {
    Expr mixed = sys.L.diff(sys.v(i)).diff(sys.s());
    if (!mixed.isConstant(0.0))
      throw std::invalid_argument(
          "not a holonomic dissipation term: d²L/dv ds does not vanish identically");
  }
}

double holonomicSpecializationCheck(const HolonomicDissipationLagrangian& hd, const Bindings& b) {
  hd.validate();
  ContactLagrangianSystem sys = hd.combined();

  // E_{L₀+φ} = E_{L₀} - φ
  Expr baseEnergy = Expr::constant(0.0);
  for (int i = 0; i < hd.n; ++i)
    baseEnergy = baseEnergy + Expr::variable(sys.v(i)) * hd.base.diff(sys.v(i));
  baseEnergy = (baseEnergy - hd.base).simplified();
  double energyResidual =
      std::abs(lagrangianEnergy(sys).eval(b) - (baseEnergy.eval(b) - hd.dissipation.eval(b)));

  // R_L = ∂/∂s
  VectorValue reeb = reebLagrangianAt(sys, b);
  double reebResidual = 0.0;
  for (std::size_t i = 0; i < reeb.size(); ++i) {
    double expected = (i + 1 == reeb.size()) ? 1.0 : 0.0;
    reebResidual = std::max(reebResidual, std::abs(reeb[i] - expected));
  }

  // Accelerations from the generic field versus the base Lagrangian driven by
  // the dissipation force ∂φ/∂q^i + (∂φ/∂s)(∂L₀/∂v^i).
  VectorValue generic = eulerLagrangeFieldAt(sys, b);
  Eigen::MatrixXd w0(hd.n, hd.n);
  Eigen::VectorXd rhs(hd.n);
  for (int i = 0; i < hd.n; ++i) {
    Expr dL0dvi = hd.base.diff(sys.v(i));
    for (int j = 0; j < hd.n; ++j) w0(i, j) = dL0dvi.diff(sys.v(j)).eval(b);
    Expr acc = hd.base.diff(sys.q(i));
    for (int j = 0; j < hd.n; ++j)
      acc = acc - Expr::variable(sys.v(j)) * dL0dvi.diff(sys.q(j));
    acc = acc + hd.dissipation.diff(sys.q(i)) + hd.dissipation.diff(sys.s()) * dL0dvi;
    rhs(i) = acc.eval(b);
  }
  Eigen::VectorXd accel = w0.partialPivLu().solve(rhs);
  double forceResidual = 0.0;
  for (int i = 0; i < hd.n; ++i)
    forceResidual =
        std::max(forceResidual, std::abs(generic[static_cast<std::size_t>(hd.n + i)] - accel(i)));

  return std::max({energyResidual, reebResidual, forceResidual});
}

}  // namespace contactmech
