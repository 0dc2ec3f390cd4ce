#include "contactmech/hamiltonian.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "contactmech/validate.hpp"

namespace contactmech {

namespace {

bool validIdentifier(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

void validateCoordinateNames(const std::vector<std::string>& coords, int expected) {
  if (static_cast<int>(coords.size()) != expected)
    throw std::invalid_argument("expected " + std::to_string(expected) + " coordinate names, got " +
                                std::to_string(coords.size()));
  std::set<std::string> seen;
  for (const auto& name : coords) {
    if (!validIdentifier(name)) throw std::invalid_argument("invalid coordinate name '" + name + "'");
    if (!seen.insert(name).second)
      throw std::invalid_argument("duplicate coordinate name '" + name + "'");
  }
}

void validateFreeVariables(const Expr& e, const std::vector<std::string>& coords,
                           const Bindings& params, const std::string& what) {
  std::set<std::string> allowed(coords.begin(), coords.end());
  for (const auto& [name, value] : params) allowed.insert(name);
  for (const auto& v : e.freeVariables())
    if (!allowed.count(v))
      throw std::invalid_argument(what + " references unbound symbol '" + v + "'");
}

FormExpr ContactHamiltonianSystem::contactForm() const {
  FormExpr eta = FormExpr::zero(coords, 1);
  for (int i = 0; i < n; ++i) eta.set({i}, -Expr::variable(p(i)));
  eta.set({2 * n}, Expr::constant(1.0));
  return eta;
}

Bindings ContactHamiltonianSystem::bind(const std::vector<double>& state) const {
  Bindings b = params;
  for (std::size_t i = 0; i < coords.size(); ++i) b[coords[i]] = state[i];
  return b;
}

void ContactHamiltonianSystem::validate() const {
  if (n <= 0) throw std::invalid_argument("dimension n must be positive");
  validateCoordinateNames(coords, 2 * n + 1);
  validateFreeVariables(H, coords, params, "Hamiltonian");
}

VectorFieldExpr reebField(const ContactHamiltonianSystem& sys) {
  return VectorFieldExpr::basis(sys.dim(), 2 * sys.n);
}

VectorFieldExpr hamiltonianVectorField(const ContactHamiltonianSystem& sys) {
  VectorFieldExpr x = VectorFieldExpr::zero(sys.dim());
  Expr dHds = sys.H.diff(sys.s());
  Expr sdot = Expr::constant(0.0);
  for (int i = 0; i < sys.n; ++i) {
    Expr dHdp = sys.H.diff(sys.p(i));
    Expr dHdq = sys.H.diff(sys.q(i));
    Expr pi = Expr::variable(sys.p(i));
    x.components[static_cast<std::size_t>(i)] = dHdp;
    x.components[static_cast<std::size_t>(sys.n + i)] = (-(dHdq + pi * dHds)).simplified();
    sdot = sdot + pi * dHdp;
  }
  x.components[static_cast<std::size_t>(2 * sys.n)] = (sdot - sys.H).simplified();
  return x;
}

double OneFormResidual::oneFormMax() const {
  double m = 0.0;
  for (double v : oneForm) m = std::max(m, std::abs(v));
  return m;
}

double OneFormResidual::maxAbs() const { return std::max(oneFormMax(), std::abs(scalar)); }

HamiltonianStructure::HamiltonianStructure(const ContactHamiltonianSystem& sys) : sys_(sys) {
  sys_.validate();
  eta_ = sys_.contactForm();
  dEta_ = exteriorDerivative(eta_);
  dH_ = exteriorDerivative(FormExpr::scalar(sys_.coords, sys_.H));
  reebRate_ = sys_.H.diff(sys_.s());
  omega_ = addForms(scaleForm(-sys_.H, dEta_), wedgeExpr(dH_, eta_));
  field_ = hamiltonianVectorField(sys_);
  dissipationResidual_ =
      (directionalDerivative(field_, sys_.H, sys_.coords) + reebRate_ * sys_.H).simplified();
}

namespace {

std::vector<double> denseOneForm(const FormValue& f) {
  std::vector<double> out(static_cast<std::size_t>(f.dim), 0.0);
  for (const auto& [idx, v] : f.comps) out[static_cast<std::size_t>(idx[0])] = v;
  return out;
}

}  // namespace

OneFormResidual HamiltonianStructure::hamiltonResiduals(const VectorFieldExpr& x,
                                                        const Bindings& b) const {
  VectorValue xv = evalField(x, b);
  FormValue etaV = evalForm(eta_, b);
  FormValue dEtaV = evalForm(dEta_, b);
  FormValue dHV = evalForm(dH_, b);
  double rate = reebRate_.eval(b);
  double hVal = sys_.H.eval(b);

  FormValue lhs = contract(xv, dEtaV);
  OneFormResidual res;
  res.oneForm.assign(static_cast<std::size_t>(sys_.dim()), 0.0);
  std::vector<double> lhsD = denseOneForm(lhs);
  std::vector<double> dHD = denseOneForm(dHV);
  std::vector<double> etaD = denseOneForm(etaV);
  for (std::size_t i = 0; i < res.oneForm.size(); ++i)
    res.oneForm[i] = lhsD[i] - dHD[i] + rate * etaD[i];

  double ix_eta = 0.0;
  for (std::size_t i = 0; i < etaD.size(); ++i) ix_eta += xv[i] * etaD[i];
  res.scalar = ix_eta + hVal;
  return res;
}

OmegaResidual HamiltonianStructure::omegaResiduals(const VectorFieldExpr& x, const Bindings& b,
                                                   double zeroLocusTol) const {
  double hVal = sys_.H.eval(b);
  double coordScale = 1.0;
  for (const auto& name : sys_.coords) {
    auto it = b.find(name);
    if (it != b.end()) coordScale = std::max(coordScale, 1.0 + std::abs(it->second));
  }
  if (std::abs(hVal) <= zeroLocusTol * coordScale) throw ZeroHamiltonianLocusError(hVal);

  VectorValue xv = evalField(x, b);
  FormValue omegaV = evalForm(omega_, b);
  FormValue etaV = evalForm(eta_, b);
  OmegaResidual res;
  res.oneFormMax = contract(xv, omegaV).maxAbs();
  double ix_eta = 0.0;
  for (const auto& [idx, v] : etaV.comps) ix_eta += xv[static_cast<std::size_t>(idx[0])] * v;
  res.scalar = ix_eta + hVal;
  return res;
}

std::vector<double> HamiltonianStructure::flat(const VectorValue& x, const Bindings& b) const {
  FormValue etaV = evalForm(eta_, b);
  FormValue dEtaV = evalForm(dEta_, b);
  std::vector<double> out = denseOneForm(contract(x, dEtaV));
  std::vector<double> etaD = denseOneForm(etaV);
  double ix_eta = 0.0;
  for (std::size_t i = 0; i < etaD.size(); ++i) ix_eta += x[i] * etaD[i];
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += ix_eta * etaD[i];
  return out;
}

double HamiltonianStructure::dissipationRateResidual(const Bindings& b) const {
  return dissipationResidual_.eval(b);
}

double HamiltonianStructure::flatIdentityResidual(const Bindings& b) const {
  VectorValue xv = evalField(field_, b);
  std::vector<double> lhs = flat(xv, b);
  std::vector<double> dHD = denseOneForm(evalForm(dH_, b));
  std::vector<double> etaD = denseOneForm(evalForm(eta_, b));
  double factor = reebRate_.eval(b) + sys_.H.eval(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    worst = std::max(worst, std::abs(lhs[i] - (dHD[i] - factor * etaD[i])));
  return worst;
}

double HamiltonianStructure::scaleAt(const Bindings& b) const {
  double m = 0.0;
  for (const auto& name : sys_.coords) {
    auto it = b.find(name);
    if (it != b.end()) m = std::max(m, std::abs(it->second));
  }
  return 1.0 + m + std::abs(sys_.H.eval(b));
}

OneFormResidual hamiltonEquationResiduals(const ContactHamiltonianSystem& sys,
                                          const VectorFieldExpr& x, const Bindings& b) {
  return HamiltonianStructure(sys).hamiltonResiduals(x, b);
}

OmegaResidual omegaResiduals(const ContactHamiltonianSystem& sys, const VectorFieldExpr& x,
                             const Bindings& b, double zeroLocusTol) {
  return HamiltonianStructure(sys).omegaResiduals(x, b, zeroLocusTol);
}

std::vector<double> flatMap(const ContactHamiltonianSystem& sys, const VectorFieldExpr& x,
                            const Bindings& b) {
  return HamiltonianStructure(sys).flat(evalField(x, b), b);
}

double dissipationRateResidual(const ContactHamiltonianSystem& sys, const Bindings& b) {
  return HamiltonianStructure(sys).dissipationRateResidual(b);
}

}  // namespace contactmech
