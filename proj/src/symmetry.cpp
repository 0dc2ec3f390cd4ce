#include "contactmech/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace contactmech {

namespace {

std::vector<std::vector<double>> sampleStates(int dim, int points, SampleBox box,
                                              std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  auto uniform = [&]() { return (eng() >> 11) * 0x1.0p-53; };
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (auto& v : x) v = box.lo + (box.hi - box.lo) * uniform();
    out.push_back(std::move(x));
  }
  return out;
}

double stateScale(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return 1.0 + m;
}

bool allComponentsZero(const VectorFieldExpr& f) {
  for (const auto& c : f.components)
    if (!structurallyZero(c)) return false;
  return true;
}

bool allComponentsZero(const FormExpr& f) {
  for (const auto& [idx, e] : f.comps)
    if (!structurallyZero(e)) return false;
  return true;
}

}  // namespace

VectorFieldExpr lieBracket(const VectorFieldExpr& x, const VectorFieldExpr& y,
                           const std::vector<std::string>& coords) {
  if (x.dim() != y.dim() || x.dim() != static_cast<int>(coords.size()))
    throw std::invalid_argument("lieBracket: dimension mismatch");
  VectorFieldExpr out = VectorFieldExpr::zero(x.dim());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    Expr acc = Expr::constant(0.0);
    for (std::size_t j = 0; j < coords.size(); ++j) {
      acc = acc + x.components[j] * y.components[i].diff(coords[j]) -
            y.components[j] * x.components[i].diff(coords[j]);
    }
    out.components[i] = acc.simplified();
  }
  return out;
}

FormExpr lieDerivativeOneForm(const VectorFieldExpr& y, const FormExpr& f) {
  if (f.degree > 1)
    throw std::domain_error("lieDerivativeOneForm supports degrees 0 and 1 only");
  if (y.dim() != f.dim()) throw std::invalid_argument("lieDerivativeOneForm: dimension mismatch");
  FormExpr df = exteriorDerivative(f);
  FormExpr iydf = contractExpr(y.components, df);
  if (f.degree == 0) return iydf;  // d(i(Y)f) is zero for scalars
  FormExpr iyf = contractExpr(y.components, f);
  return addForms(iydf, exteriorDerivative(iyf));
}

SymmetryReport isDynamicalSymmetry(const VectorFieldExpr& y, const VectorFieldExpr& x,
                                   const std::vector<std::string>& coords,
                                   const Bindings& params, SampleBox box, std::uint64_t seed,
                                   int points, double tol) {
  VectorFieldExpr bracket = lieBracket(y, x, coords);
  SymmetryReport rep;
  if (allComponentsZero(bracket)) {
    rep.passed = true;
    rep.symbolic = true;
    rep.detail = "[Y, X] = 0 symbolically";
    return rep;
  }
  Bindings b = params;
  for (const auto& state : sampleStates(static_cast<int>(coords.size()), points, box, seed)) {
    for (std::size_t i = 0; i < coords.size(); ++i) b[coords[i]] = state[i];
    double worst = 0.0;
    for (const auto& c : bracket.components) worst = std::max(worst, std::abs(c.eval(b)));
    worst /= stateScale(state);
    if (worst > rep.worst) {
      rep.worst = worst;
      rep.worstPoint = state;
    }
  }
  rep.passed = rep.worst <= tol;
  rep.detail = "max |[Y, X]| / scale = " + std::to_string(rep.worst);
  return rep;
}

SymmetryReport isContactSymmetry(const VectorFieldExpr& y, const FormExpr& eta, const Expr& h,
                                 const VectorFieldExpr& reeb,
                                 const std::vector<std::string>& coords, const Bindings& params,
                                 SampleBox box, std::uint64_t seed, int points, double tol) {
  FormExpr lieEta = lieDerivativeOneForm(y, eta);
  Expr lieH = directionalDerivative(y, h, coords);
  VectorFieldExpr bracketReeb = lieBracket(y, reeb, coords);

  SymmetryReport rep;
  if (allComponentsZero(lieEta) && structurallyZero(lieH) && allComponentsZero(bracketReeb)) {
    rep.passed = true;
    rep.symbolic = true;
    rep.detail = "L_Y eta = 0, L_Y H = 0, [Y, R] = 0 symbolically";
    return rep;
  }

  Bindings b = params;
  for (const auto& state : sampleStates(static_cast<int>(coords.size()), points, box, seed)) {
    for (std::size_t i = 0; i < coords.size(); ++i) b[coords[i]] = state[i];
    double worst = std::abs(lieH.eval(b));
    for (const auto& [idx, e] : lieEta.comps) worst = std::max(worst, std::abs(e.eval(b)));
    for (const auto& c : bracketReeb.components) worst = std::max(worst, std::abs(c.eval(b)));
    worst /= stateScale(state);
    if (worst > rep.worst) {
      rep.worst = worst;
      rep.worstPoint = state;
    }
  }
  rep.passed = rep.worst <= tol;
  rep.detail = "max contact-symmetry residual / scale = " + std::to_string(rep.worst);
  return rep;
}

SymmetryReport isContactSymmetry(const VectorFieldExpr& y, const ContactHamiltonianSystem& sys,
                                 SampleBox box, std::uint64_t seed, int points, double tol) {
  return isContactSymmetry(y, sys.contactForm(), sys.H, reebField(sys), sys.coords, sys.params,
                           box, seed, points, tol);
}

SymmetryReport isContactSymmetry(const VectorFieldExpr& y, const ContactLagrangianSystem& sys,
                                 SampleBox box, std::uint64_t seed, int points, double tol) {
  LagrangianStructure st(sys);
  return isContactSymmetry(y, st.eta(), st.energy(), st.reeb(), sys.coords, sys.params, box,
                           seed, points, tol);
}

Quantity dissipatedFromSymmetry(const VectorFieldExpr& y, const FormExpr& eta) {
  FormExpr contracted = contractExpr(y.components, eta);
  Quantity q;
  q.expression = (-contracted.coefficient({})).simplified();
  q.kind = QuantityKind::Dissipated;
  return q;
}

QuantityReport checkRateLaw(const Expr& f, const VectorFieldExpr& x, const Expr& rate,
                            const Trajectory& traj, double tolPointwise, double tolGlobal) {
  Expr pointwise = (directionalDerivative(x, f, traj.coords) + rate * f).simplified();

  QuantityReport rep;
  std::vector<double> fVals = observe(traj, f);
  std::vector<double> rateVals = observe(traj, rate);
  Bindings b = traj.params;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    for (std::size_t i = 0; i < traj.coords.size(); ++i) b[traj.coords[i]] = traj.states[k][i];
    double scale = (1.0 + std::abs(fVals[k])) * stateScale(traj.states[k]);
    rep.worstPointwise = std::max(rep.worstPointwise, std::abs(pointwise.eval(b)) / scale);
  }

  std::vector<double> integral = cumulativeQuadrature(traj.times, rateVals);
  double f0 = fVals.front();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    double predicted = f0 * std::exp(-integral[k]);
    double denom = std::max(std::abs(predicted), 1e-12);
    rep.worstGlobal = std::max(rep.worstGlobal, std::abs(fVals[k] - predicted) / denom);
  }

  rep.passed = rep.worstPointwise <= tolPointwise && rep.worstGlobal <= tolGlobal;
  rep.detail = "pointwise " + std::to_string(rep.worstPointwise) + ", global " +
               std::to_string(rep.worstGlobal);
  return rep;
}

QuantityReport checkDissipated(const Quantity& f, const ContactHamiltonianSystem& sys,
                               const Trajectory& traj, double tolPointwise, double tolGlobal) {
  return checkRateLaw(f.expression, hamiltonianVectorField(sys), sys.H.diff(sys.s()), traj,
                      tolPointwise, tolGlobal);
}

QuantityReport checkDissipated(const Quantity& f, const ContactLagrangianSystem& sys,
                               const Trajectory& traj, double tolPointwise, double tolGlobal) {
  LagrangianStructure st(sys);
  return checkRateLaw(f.expression, st.field(), st.reebRate(), traj, tolPointwise, tolGlobal);
}

Quantity quotientQuantity(const Quantity& f1, const Quantity& f2) {
  if (f1.kind != QuantityKind::Dissipated || f2.kind != QuantityKind::Dissipated)
    throw std::invalid_argument("quotientQuantity expects two dissipated quantities");
  Quantity q;
  q.expression = (f1.expression / f2.expression).simplified();
  q.kind = QuantityKind::Conserved;
  q.label = f1.label.empty() || f2.label.empty() ? "" : f1.label + "/" + f2.label;
  return q;
}

namespace {

QuantityReport conservedReport(const Expr& g, const VectorFieldExpr& x, const Trajectory& traj,
                               double tolPointwise, double tolDrift) {
  QuantityReport rep = checkRateLaw(g, x, Expr::constant(0.0), traj, tolPointwise,
                                    std::numeric_limits<double>::infinity());
  std::vector<double> vals = observe(traj, g);
  double g0 = vals.front();
  double drift = 0.0;
  for (double v : vals) drift = std::max(drift, std::abs(v - g0));
  rep.worstGlobal = drift / (1.0 + std::abs(g0));
  rep.passed = rep.worstPointwise <= tolPointwise && rep.worstGlobal <= tolDrift;
  rep.detail = "pointwise " + std::to_string(rep.worstPointwise) + ", drift " +
               std::to_string(rep.worstGlobal);
  return rep;
}

}  // namespace

QuantityReport checkConserved(const Quantity& g, const ContactHamiltonianSystem& sys,
                              const Trajectory& traj, double tolPointwise, double tolDrift) {
  return conservedReport(g.expression, hamiltonianVectorField(sys), traj, tolPointwise, tolDrift);
}

QuantityReport checkConserved(const Quantity& g, const ContactLagrangianSystem& sys,
                              const Trajectory& traj, double tolPointwise, double tolDrift) {
  LagrangianStructure st(sys);
  return conservedReport(g.expression, st.field(), traj, tolPointwise, tolDrift);
}

VectorFieldExpr completeLift(const std::vector<Expr>& z, LiftKind kind,
                             const std::vector<std::string>& coords) {
  const int n = static_cast<int>(z.size());
  if (static_cast<int>(coords.size()) != 2 * n + 1)
    throw std::invalid_argument("completeLift: coordinate count must be 2n+1");
  VectorFieldExpr out = VectorFieldExpr::zero(2 * n + 1);
  for (int i = 0; i < n; ++i) out.components[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)].simplified();
  if (kind == LiftKind::Tangent) {
    // v-components: v^j ∂Z^i/∂q^j
    for (int i = 0; i < n; ++i) {
      Expr acc = Expr::constant(0.0);
      for (int j = 0; j < n; ++j)
        acc = acc + Expr::variable(coords[static_cast<std::size_t>(n + j)]) *
                        z[static_cast<std::size_t>(i)].diff(coords[static_cast<std::size_t>(j)]);
      out.components[static_cast<std::size_t>(n + i)] = acc.simplified();
    }
  } else {
    // p-components: -p_j ∂Z^j/∂q^i
    for (int i = 0; i < n; ++i) {
      Expr acc = Expr::constant(0.0);
      for (int j = 0; j < n; ++j)
        acc = acc + Expr::variable(coords[static_cast<std::size_t>(n + j)]) *
                        z[static_cast<std::size_t>(j)].diff(coords[static_cast<std::size_t>(i)]);
      out.components[static_cast<std::size_t>(n + i)] = (-acc).simplified();
    }
  }
  return out;
}

QuantityReport contactifiedConservationCheck(const ContactHamiltonianSystem& sys,
                                             const VectorFieldExpr& y, const Trajectory& traj,
                                             double tolPointwise, double tolDrift) {
  if (!structurallyZero(sys.H.diff(sys.s()))) {
    QuantityReport rep;
    rep.passed = false;
    rep.detail = "precondition violated: H depends on " + sys.s();
    return rep;
  }
  VectorFieldExpr xh = hamiltonianVectorField(sys);
  SymmetryReport dyn =
      isDynamicalSymmetry(y, xh, sys.coords, sys.params, SampleBox{}, 2024, 100, 1e-8);
  if (!dyn.passed) {
    QuantityReport rep;
    rep.passed = false;
    rep.detail = "precondition violated: Y is not a dynamical symmetry (worst " +
                 std::to_string(dyn.worst) + ")";
    return rep;
  }
  Quantity g = dissipatedFromSymmetry(y, sys.contactForm());
  return conservedReport(g.expression, xh, traj, tolPointwise, tolDrift);
}

}  // namespace contactmech
