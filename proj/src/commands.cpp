#include "contactmech/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "contactmech/catalog.hpp"
#include "contactmech/sweep.hpp"
#include "contactmech/symmetry.hpp"

namespace contactmech {

namespace {

using Json = nlohmann::ordered_json;

std::string formatG17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string formatShort(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string pointToString(const std::vector<std::string>& coords,
                          const std::vector<double>& point) {
  if (point.empty()) return "";
  std::string out = "(";
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i) out += ", ";
    if (i < coords.size()) out += coords[i] + "=";
    out += formatShort(point[i]);
  }
  out += ")";
  return out;
}

CheckEntry sweepEntry(const std::string& name, const std::vector<std::string>& coords,
                      const std::vector<std::vector<double>>& points, double tol,
                      const std::function<double(const std::vector<double>&)>& f) {
  CheckEntry entry;
  entry.name = name;
  SweepResult res = sweepMax(points, f);
  if (res.evaluated == 0) {
    entry.skipped = true;
    entry.note = "all " + std::to_string(res.skipped) + " points outside the admissible region";
    return entry;
  }
  entry.worst = res.worst;
  if (res.worstIndex >= 0) entry.worstPoint = points[static_cast<std::size_t>(res.worstIndex)];
  entry.passed = res.worst <= tol;
  entry.note = std::to_string(res.evaluated) + " points";
  if (res.skipped > 0) entry.note += ", " + std::to_string(res.skipped) + " skipped";
  if (!entry.worstPoint.empty())
    entry.note += ", worst at " + pointToString(coords, entry.worstPoint);
  return entry;
}

CheckEntry reportEntry(const std::string& name, const SymmetryReport& rep) {
  CheckEntry entry;
  entry.name = name;
  entry.passed = rep.passed;
  entry.worst = rep.worst;
  entry.worstPoint = rep.worstPoint;
  entry.note = rep.detail;
  return entry;
}

CheckEntry reportEntry(const std::string& name, const QuantityReport& rep) {
  CheckEntry entry;
  entry.name = name;
  entry.passed = rep.passed;
  entry.worst = std::max(rep.worstPointwise, rep.worstGlobal);
  entry.note = rep.detail;
  return entry;
}

CheckEntry skippedEntry(const std::string& name, const std::string& why) {
  CheckEntry entry;
  entry.name = name;
  entry.skipped = true;
  entry.note = why;
  return entry;
}

Json fieldToJson(const VectorFieldExpr& f) {
  Json arr = Json::array();
  for (const auto& c : f.components) arr.push_back(c.simplified().str());
  return arr;
}

Json formToJson(const FormExpr& f) {
  Json arr = Json::array();
  for (const auto& [idx, e] : f.comps) {
    Json comp;
    Json indices = Json::array();
    for (int i : idx) indices.push_back(i);
    comp["indices"] = indices;
    comp["coefficient"] = e.str();
    arr.push_back(comp);
  }
  return arr;
}

Trajectory integrateConfigured(const SystemConfig& cfg, const VectorFieldExpr& field,
                               const std::vector<std::string>& coords, const Bindings& params) {
  Trajectory traj = integrate(field, coords, params, cfg.initialState, cfg.integration);
  traj.systemLabel = cfg.name;
  return traj;
}

}  // namespace

bool RunReport::allPassed() const {
  for (const auto& c : checks)
    if (!c.skipped && !c.passed) return false;
  return true;
}

std::string RunReport::text() const {
  std::ostringstream out;
  out << "== " << title << " ==\n";
  for (const auto& [label, value] : derived) out << label << " = " << value << "\n";
  for (const auto& c : checks) {
    const char* tag = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
    out << "[" << tag << "] " << c.name;
    if (!c.skipped) out << "  worst " << formatShort(c.worst);
    if (!c.note.empty()) out << "  (" << c.note << ")";
    out << "\n";
  }
  for (const auto& path : outputs) out << "wrote " << path << "\n";
  return out.str();
}

RunReport cmdDerive(const SystemConfig& cfg, const CheckOptions& opts) {
  RunReport report;
  report.title = "derive " + cfg.name;

  Json derived;
  derived["name"] = cfg.name;
  derived["formalism"] = cfg.formalism;
  VectorFieldExpr field, reeb;
  FormExpr eta;
  Expr energy;
  std::vector<std::string> coords;

  if (cfg.isLagrangian()) {
    ContactLagrangianSystem sys = cfg.toLagrangian();
    coords = sys.coords;
    LagrangianStructure st(sys);
    field = st.field();
    reeb = st.reeb();
    eta = st.eta();
    energy = st.energy();

    // Pointwise regularity scan of the velocity Hessian.
    auto points = samplePoints(sys.dim(), std::min(opts.points, 200), opts.boxLo, opts.boxHi,
                               opts.seed);
    std::vector<std::vector<double>> singular;
    for (const auto& pt : points) {
      if (!hessian(sys, sys.bind(pt)).regular) {
        singular.push_back(pt);
        if (singular.size() >= 3) break;
      }
    }
    if (!singular.empty()) {
      CheckEntry warn;
      warn.name = "regularity";
      warn.passed = false;
      warn.note = "velocity Hessian singular at sampled points:";
      for (const auto& pt : singular) warn.note += " " + pointToString(coords, pt);
      report.checks.push_back(warn);
    }
  } else {
    ContactHamiltonianSystem sys = cfg.toHamiltonian();
    coords = sys.coords;
    HamiltonianStructure st(sys);
    field = st.field();
    reeb = reebField(sys);
    eta = st.eta();
    energy = sys.H;
  }

  Json coordsJson = Json::array();
  for (const auto& c : coords) coordsJson.push_back(c);
  derived["coordinates"] = coordsJson;
  derived["field"] = fieldToJson(field);
  derived["reeb"] = fieldToJson(reeb);
  derived["energy"] = energy.simplified().str();
  derived["eta"] = formToJson(eta);

  for (std::size_t i = 0; i < field.components.size(); ++i)
    report.derived.emplace_back("field[" + coords[i] + "]", field.components[i].simplified().str());
  for (std::size_t i = 0; i < reeb.components.size(); ++i)
    if (!reeb.components[i].simplified().isConstant(0.0))
      report.derived.emplace_back("reeb[" + coords[i] + "]", reeb.components[i].simplified().str());
  report.derived.emplace_back("energy", energy.simplified().str());

  std::filesystem::create_directories(opts.outDir);
  std::filesystem::path path = opts.outDir / "derived.json";
  std::ofstream out(path);
  out << derived.dump(2) << "\n";
  report.outputs.push_back(path.string());
  return report;
}

RunReport cmdSimulate(const SystemConfig& cfg, const CheckOptions& opts) {
  RunReport report;
  report.title = "simulate " + cfg.name;
  if (cfg.initialState.empty())
    throw ConfigError("simulate requires an initialState", "/initialState");

  std::vector<std::string> coords;
  VectorFieldExpr field;
  Bindings params = cfg.params;
  if (cfg.isLagrangian()) {
    ContactLagrangianSystem sys = cfg.toLagrangian();
    coords = sys.coords;
    field = eulerLagrangeField(sys);
  } else {
    ContactHamiltonianSystem sys = cfg.toHamiltonian();
    coords = sys.coords;
    field = hamiltonianVectorField(sys);
  }

  Trajectory traj = integrateConfigured(cfg, field, coords, params);

  std::vector<std::pair<std::string, Expr>> observables;
  for (const auto& q : cfg.quantities) observables.emplace_back(q.name, parseExpr(q.expression));
  std::vector<std::vector<double>> columns;
  for (const auto& [name, expr] : observables) columns.push_back(observe(traj, expr));

  std::filesystem::create_directories(opts.outDir);
  std::filesystem::path path = opts.outDir / (cfg.name + "_trajectory.csv");
  std::ofstream out(path, std::ios::binary);
  out << "t";
  for (const auto& c : coords) out << "," << c;
  for (const auto& [name, expr] : observables) out << "," << name;
  out << "\r\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << formatG17(traj.times[k]);
    for (double v : traj.states[k]) out << "," << formatG17(v);
    for (const auto& col : columns) out << "," << formatG17(col[k]);
    out << "\r\n";
  }
  out.close();

  report.outputs.push_back(path.string());
  CheckEntry summary;
  summary.name = "integration";
  summary.passed = true;
  summary.note = std::to_string(traj.size()) + " states, method " + traj.method +
                 ", final t = " + formatShort(traj.times.back());
  report.checks.push_back(summary);
  return report;
}

namespace {

void identitiesLagrangian(const SystemConfig& cfg, const CheckOptions& opts, RunReport& report) {
  ContactLagrangianSystem sys = cfg.toLagrangian();
  LagrangianStructure st(sys);
  const VectorFieldExpr& gamma = st.field();
  auto points = samplePoints(sys.dim(), opts.points, opts.boxLo, opts.boxHi, opts.seed);

  report.checks.push_back(sweepEntry(
      "lagrange-residuals", sys.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        return st.lagrangeResiduals(gamma, b).maxAbs() / st.scaleAt(b);
      }));
  report.checks.push_back(sweepEntry(
      "reeb-definition", sys.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        return st.reebDefinitionResiduals(b).maxAbs() / st.scaleAt(b);
      }));
  report.checks.push_back(sweepEntry(
      "reeb-energy-rate", sys.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        return std::abs(st.reebEnergyRateResidual(b)) / st.scaleAt(b);
      }));
  report.checks.push_back(sweepEntry(
      "dissipation-rate", sys.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        return std::abs(st.dissipationRateResidual(b)) / st.scaleAt(b);
      }));
  report.checks.push_back(sweepEntry(
      "flat-identity", sys.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        return st.flatIdentityResidual(b) / st.scaleAt(b);
      }));
  report.checks.push_back(sweepEntry(
      "omega-residuals", sys.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        if (std::abs(st.energy().eval(b)) <= 0.1) return std::nan("");
        try {
          OmegaResidual r = st.omegaResiduals(gamma, b);
          return std::max(r.oneFormMax, std::abs(r.scalar)) / st.scaleAt(b);
        } catch (const ZeroHamiltonianLocusError&) {
          return std::nan("");
        }
      }));
  report.checks.push_back(sweepEntry(
      "contact-volume", sys.coords, points, std::max(opts.tol, 1e-9),
      [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        HessianValue h = hessian(sys, b);
        if (std::abs(h.det) <= 1e-6) return std::nan("");
        double vol = contactVolumeCoefficient(st.eta(), b, sys.n);
        return std::abs(std::abs(vol) - std::abs(h.det)) / std::abs(h.det);
      }));

  CheckEntry sode;
  sode.name = "sode";
  sode.passed = sodeCheck(gamma, sys.velocityNames());
  sode.note = sode.passed ? "first n components are the velocities" : "SODE condition violated";
  report.checks.push_back(sode);

  if (cfg.initialState.empty()) {
    report.checks.push_back(skippedEntry("energy-decay", "no initialState in config"));
  } else {
    Trajectory traj = integrateConfigured(cfg, gamma, sys.coords, sys.params);
    QuantityReport decay = checkRateLaw(st.energy(), gamma, st.reebRate(), traj,
                                        std::max(opts.tol, 1e-9), 1e-6);
    report.checks.push_back(reportEntry("energy-decay", decay));

    // Curve-level omega equations, sampled along the trajectory.
    std::vector<std::vector<double>> trajPoints;
    std::size_t stride = std::max<std::size_t>(1, traj.size() / 100);
    for (std::size_t k = 0; k < traj.size(); k += stride) trajPoints.push_back(traj.states[k]);
    report.checks.push_back(sweepEntry(
        "omega-on-trajectory", sys.coords, trajPoints, opts.tol,
        [&](const std::vector<double>& pt) {
          Bindings b = sys.bind(pt);
          if (std::abs(st.energy().eval(b)) <= 0.1) return std::nan("");
          try {
            OmegaResidual r = st.omegaResiduals(gamma, b);
            return std::max(r.oneFormMax, std::abs(r.scalar)) / st.scaleAt(b);
          } catch (const ZeroHamiltonianLocusError&) {
            return std::nan("");
          }
        }));
  }
}

void identitiesHamiltonian(const SystemConfig& cfg, const CheckOptions& opts, RunReport& report) {
  ContactHamiltonianSystem sys = cfg.toHamiltonian();
  HamiltonianStructure st(sys);
  const VectorFieldExpr& xh = st.field();
  VectorFieldExpr reeb = reebField(sys);
  auto points = samplePoints(sys.dim(), opts.points, opts.boxLo, opts.boxHi, opts.seed);

  report.checks.push_back(sweepEntry(
      "hamilton-residuals", sys.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        return st.hamiltonResiduals(xh, b).maxAbs() / st.scaleAt(b);
      }));
  report.checks.push_back(sweepEntry(
      "reeb-definition", sys.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        VectorValue rv = evalField(reeb, b);
        FormValue etaV = evalForm(st.eta(), b);
        FormValue dEtaV = evalForm(st.dEta(), b);
        double r1 = contract(rv, dEtaV).maxAbs();
        double r2 = 0.0;
        for (const auto& [idx, v] : etaV.comps) r2 += rv[static_cast<std::size_t>(idx[0])] * v;
        return std::max(r1, std::abs(r2 - 1.0)) / st.scaleAt(b);
      }));
  report.checks.push_back(sweepEntry(
      "dissipation-rate", sys.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        return std::abs(st.dissipationRateResidual(b)) / st.scaleAt(b);
      }));
  report.checks.push_back(sweepEntry(
      "flat-identity", sys.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        return st.flatIdentityResidual(b) / st.scaleAt(b);
      }));
  report.checks.push_back(sweepEntry(
      "omega-residuals", sys.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sys.bind(pt);
        if (std::abs(sys.H.eval(b)) <= 0.1) return std::nan("");
        try {
          OmegaResidual r = st.omegaResiduals(xh, b);
          return std::max(r.oneFormMax, std::abs(r.scalar)) / st.scaleAt(b);
        } catch (const ZeroHamiltonianLocusError&) {
          return std::nan("");
        }
      }));

  if (cfg.initialState.empty()) {
    report.checks.push_back(skippedEntry("energy-decay", "no initialState in config"));
  } else {
    Trajectory traj = integrateConfigured(cfg, xh, sys.coords, sys.params);
    QuantityReport decay =
        checkRateLaw(sys.H, xh, st.reebRate(), traj, std::max(opts.tol, 1e-9), 1e-6);
    report.checks.push_back(reportEntry("energy-decay", decay));
  }
}

void symmetrySuite(const SystemConfig& cfg, const CheckOptions& opts, RunReport& report) {
  SampleBox box{opts.boxLo, opts.boxHi};
  int points = std::min(opts.points, 200);

  if (cfg.symmetries.empty() && cfg.quantities.empty()) {
    report.checks.push_back(skippedEntry("symmetries", "none declared in config"));
    return;
  }

  std::vector<std::string> coords;
  VectorFieldExpr field;
  FormExpr eta;
  Expr rate;
  if (cfg.isLagrangian()) {
    ContactLagrangianSystem sys = cfg.toLagrangian();
    LagrangianStructure st(sys);
    coords = sys.coords;
    field = st.field();
    eta = st.eta();
    rate = st.reebRate();
  } else {
    ContactHamiltonianSystem sys = cfg.toHamiltonian();
    HamiltonianStructure st(sys);
    coords = sys.coords;
    field = st.field();
    eta = st.eta();
    rate = st.reebRate();
  }

  bool haveTrajectory = !cfg.initialState.empty();
  Trajectory traj;
  if (haveTrajectory) traj = integrateConfigured(cfg, field, coords, cfg.params);

  for (const auto& spec : cfg.symmetries) {
    VectorFieldExpr y;
    for (const auto& c : spec.components) y.components.push_back(parseExpr(c));

    report.checks.push_back(reportEntry(
        spec.name + ":dynamical",
        isDynamicalSymmetry(y, field, coords, cfg.params, box, opts.seed, points, opts.tol)));

    SymmetryReport contact =
        cfg.isLagrangian()
            ? isContactSymmetry(y, cfg.toLagrangian(), box, opts.seed, points, opts.tol)
            : isContactSymmetry(y, cfg.toHamiltonian(), box, opts.seed, points, opts.tol);
    report.checks.push_back(reportEntry(spec.name + ":contact", contact));

    if (haveTrajectory) {
      Quantity f = dissipatedFromSymmetry(y, eta);
      QuantityReport law =
          checkRateLaw(f.expression, field, rate, traj, std::max(opts.tol, 1e-9), 1e-6);
      report.checks.push_back(reportEntry(spec.name + ":dissipation-law", law));
    } else {
      report.checks.push_back(
          skippedEntry(spec.name + ":dissipation-law", "no initialState in config"));
    }
  }

  for (const auto& spec : cfg.quantities) {
    if (!haveTrajectory) {
      report.checks.push_back(
          skippedEntry(spec.name + ":" + spec.kind, "no initialState in config"));
      continue;
    }
    Quantity q;
    q.expression = parseExpr(spec.expression);
    q.label = spec.name;
    if (spec.kind == "dissipated") {
      q.kind = QuantityKind::Dissipated;
      QuantityReport rep =
          checkRateLaw(q.expression, field, rate, traj, std::max(opts.tol, 1e-9), 1e-6);
      report.checks.push_back(reportEntry(spec.name + ":dissipated", rep));
    } else {
      q.kind = QuantityKind::Conserved;
      QuantityReport rep = checkRateLaw(q.expression, field, Expr::constant(0.0), traj,
                                        std::max(opts.tol, 1e-9),
                                        std::numeric_limits<double>::infinity());
      std::vector<double> vals = observe(traj, q.expression);
      double drift = 0.0;
      for (double v : vals) drift = std::max(drift, std::abs(v - vals.front()));
      rep.worstGlobal = drift / (1.0 + std::abs(vals.front()));
      rep.passed = rep.passed && rep.worstGlobal <= 1e-6;
      rep.detail = "pointwise " + std::to_string(rep.worstPointwise) + ", drift " +
                   std::to_string(rep.worstGlobal);
      report.checks.push_back(reportEntry(spec.name + ":conserved", rep));
    }
  }
}

void legendreSuite(const SystemConfig& cfg, const CheckOptions& opts, RunReport& report) {
  if (!cfg.isLagrangian()) {
    report.checks.push_back(
        skippedEntry("legendre-equivalence", "only applicable to lagrangian configs"));
    return;
  }
  if (!cfg.companion) {
    report.checks.push_back(
        skippedEntry("legendre-equivalence", "no companion Hamiltonian in config"));
    return;
  }
  ContactLagrangianSystem sysL = cfg.toLagrangian();
  ContactHamiltonianSystem sysH = cfg.companionHamiltonian();
  LegendreEquivalence eq(sysL, sysH);
  LagrangianStructure st(sysL);
  auto points = samplePoints(sysL.dim(), std::min(opts.points, 100), opts.boxLo, opts.boxHi,
                             opts.seed);
  report.checks.push_back(sweepEntry(
      "legendre-equivalence", sysL.coords, points, opts.tol, [&](const std::vector<double>& pt) {
        Bindings b = sysL.bind(pt);
        return eq.residualAt(b) / st.scaleAt(b);
      }));
}

}  // namespace

RunReport cmdCheck(const SystemConfig& cfg, const std::string& suite, const CheckOptions& opts) {
  if (suite != "identities" && suite != "symmetries" && suite != "legendre" && suite != "all")
    throw ConfigError("unknown suite '" + suite + "' (use identities, symmetries, legendre, all)",
                      "");
  RunReport report;
  report.title = "check " + cfg.name + " [" + suite + "]";

  if (suite == "identities" || suite == "all") {
    if (cfg.isLagrangian()) {
      identitiesLagrangian(cfg, opts, report);
    } else {
      identitiesHamiltonian(cfg, opts, report);
    }
  }
  if (suite == "symmetries" || suite == "all") symmetrySuite(cfg, opts, report);
  if (suite == "legendre" || suite == "all") legendreSuite(cfg, opts, report);
  return report;
}

}  // namespace contactmech
