#include "contactmech/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace contactmech {

namespace {

constexpr double kBlowUpGuard = 1e12;

class FieldEvaluator {
 public:
  FieldEvaluator(const VectorFieldExpr& field, const std::vector<std::string>& coords,
                 const Bindings& params)
      : field_(field), coords_(coords), bindings_(params) {
    for (const auto& c : coords_) bindings_[c] = 0.0;
  }

  void operator()(const std::vector<double>& x, std::vector<double>& dxdt) {
    for (std::size_t i = 0; i < coords_.size(); ++i) bindings_[coords_[i]] = x[i];
    dxdt.resize(x.size());
    for (std::size_t i = 0; i < field_.components.size(); ++i)
      dxdt[i] = field_.components[i].eval(bindings_);
  }

 private:
  const VectorFieldExpr& field_;
  const std::vector<std::string>& coords_;
  Bindings bindings_;
};

double maxAbs(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

void rk4Step(FieldEvaluator& f, const std::vector<double>& x, double h,
             std::vector<double>& out) {
  const std::size_t d = x.size();
  std::vector<double> k1, k2, k3, k4, tmp(d);
  f(x, k1);
  for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
  f(tmp, k2);
  for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
  f(tmp, k3);
  for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * k3[i];
  f(tmp, k4);
  out.resize(d);
  for (std::size_t i = 0; i < d; ++i)
    out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

Trajectory integrateRk4(FieldEvaluator& f, const std::vector<double>& x0,
                        const IntegratorConfig& cfg) {
  Trajectory traj;
  traj.dt = cfg.dt;
  std::vector<double> x = x0;
  traj.times.push_back(0.0);
  traj.states.push_back(x);

  long fullSteps = static_cast<long>(std::floor(cfg.tMax / cfg.dt + 1e-9));
  double remainder = cfg.tMax - static_cast<double>(fullSteps) * cfg.dt;
  if (remainder < 1e-12 * std::max(1.0, cfg.tMax)) remainder = 0.0;
  if (fullSteps + 1 > cfg.maxSteps)
    throw IntegrationError("maxSteps exceeded", 0.0, cfg.maxSteps);

  std::vector<double> next;
  for (long k = 0; k < fullSteps; ++k) {
    rk4Step(f, x, cfg.dt, next);
    x = next;
    double t = static_cast<double>(k + 1) * cfg.dt;
    if (maxAbs(x) > kBlowUpGuard) throw IntegrationError("state blow-up", t, k + 1);
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  if (remainder > 0.0) {
    rk4Step(f, x, remainder, next);
    x = next;
    if (maxAbs(x) > kBlowUpGuard)
      throw IntegrationError("state blow-up", cfg.tMax, fullSteps + 1);
    traj.times.push_back(cfg.tMax);
    traj.states.push_back(x);
  }
  return traj;
}

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
// Error coefficients: b - b̂ of the embedded 4th-order solution.
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

Trajectory integrateDopri(FieldEvaluator& f, const std::vector<double>& x0,
                          const IntegratorConfig& cfg) {
  Trajectory traj;
  traj.dt = cfg.dt;
  const std::size_t d = x0.size();
  std::vector<double> x = x0;
  double t = 0.0;
  traj.times.push_back(t);
  traj.states.push_back(x);

  std::vector<double> k1(d), k2(d), k3(d), k4(d), k5(d), k6(d), k7(d), tmp(d), xNew(d);
  f(x, k1);  // FSAL
  double h = std::min(cfg.dt, cfg.tMax > 0.0 ? cfg.tMax : cfg.dt);
  double facold = 1e-4;
  long attempts = 0;

  while (t < cfg.tMax * (1.0 - 1e-14)) {
    if (++attempts > cfg.maxSteps) throw IntegrationError("maxSteps exceeded", t, attempts);
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw IntegrationError("step size underflow", t, attempts);
    h = std::min(h, cfg.tMax - t);

    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * A21 * k1[i];
    f(tmp, k2);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * (A31 * k1[i] + A32 * k2[i]);
    f(tmp, k3);
    for (std::size_t i = 0; i < d; ++i)
      tmp[i] = x[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    f(tmp, k4);
    for (std::size_t i = 0; i < d; ++i)
      tmp[i] = x[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    f(tmp, k5);
    for (std::size_t i = 0; i < d; ++i)
      tmp[i] = x[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    f(tmp, k6);
    for (std::size_t i = 0; i < d; ++i)
      xNew[i] = x[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    f(xNew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
      double tol = cfg.atol + cfg.rtol * std::max(std::abs(x[i]), std::abs(xNew[i]));
      err = std::max(err, std::abs(e) / tol);
    }

    if (err <= 1.0) {
      t += h;
      x = xNew;
      k1 = k7;  // FSAL
      if (maxAbs(x) > kBlowUpGuard) throw IntegrationError("state blow-up", t, attempts);
      traj.times.push_back(t);
      traj.states.push_back(x);
      double fac11 = std::pow(std::max(err, 1e-16), 0.17);
      double fac = fac11 * std::pow(facold, -0.04) / 0.9;
      fac = std::clamp(fac, 0.2, 5.0);
      h = h / fac;
      facold = std::max(err, 1e-4);
    } else {
      double fac = std::clamp(std::pow(err, 0.2) / 0.9, 0.2, 5.0);
      h = h / fac;
    }
  }
  return traj;
}

}  // namespace

Bindings Trajectory::bindAt(std::size_t k) const {
  Bindings b = params;
  for (std::size_t i = 0; i < coords.size(); ++i) b[coords[i]] = states[k][i];
  return b;
}

Trajectory integrate(const VectorFieldExpr& field, const std::vector<std::string>& coords,
                     const Bindings& params, const std::vector<double>& x0,
                     const IntegratorConfig& cfg) {
  if (field.components.size() != coords.size())
    throw std::invalid_argument("field dimension does not match coordinate count");
  if (x0.size() != coords.size())
    throw std::invalid_argument("initial state dimension does not match coordinate count");
  if (cfg.dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (cfg.tMax < 0.0) throw std::invalid_argument("tMax must be non-negative");

  FieldEvaluator f(field, coords, params);
  Trajectory traj;
  if (cfg.tMax == 0.0) {
    traj.times.push_back(0.0);
    traj.states.push_back(x0);
    traj.dt = cfg.dt;
  } else if (cfg.method == Method::Rk4Fixed) {
    traj = integrateRk4(f, x0, cfg);
  } else {
    traj = integrateDopri(f, x0, cfg);
  }
  traj.coords = coords;
  traj.params = params;
  traj.method = cfg.method == Method::Rk4Fixed ? "rk4-fixed" : "rk45-adaptive";
  return traj;
}

std::vector<double> observe(const Trajectory& traj, const Expr& f) {
  std::vector<double> out;
  out.reserve(traj.size());
  Bindings b = traj.params;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    for (std::size_t i = 0; i < traj.coords.size(); ++i) b[traj.coords[i]] = traj.states[k][i];
    try {
      out.push_back(f.eval(b));
    } catch (const EvalError& e) {
      throw EvalError(std::string(e.what()) + " at trajectory step " + std::to_string(k),
                      e.subexpression());
    }
  }
  return out;
}

std::vector<double> cumulativeQuadrature(const std::vector<double>& times,
                                         const std::vector<double>& values) {
  if (times.size() != values.size()) throw std::invalid_argument("length mismatch");
  std::vector<double> out(times.size(), 0.0);
  if (times.size() < 2) return out;

  bool uniform = true;
  double h = times[1] - times[0];
  for (std::size_t k = 1; k + 1 < times.size(); ++k)
    if (std::abs((times[k + 1] - times[k]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      uniform = false;
      break;
    }

  if (!uniform || times.size() < 3) {
    for (std::size_t k = 1; k < times.size(); ++k)
      out[k] = out[k - 1] + 0.5 * (times[k] - times[k - 1]) * (values[k] + values[k - 1]);
    return out;
  }

  // Simpson over pairs of intervals; odd prefixes get the 3-point
  // Newton-Cotes open-ended rule, keeping every prefix O(h⁴).
  for (std::size_t k = 2; k < times.size(); k += 2)
    out[k] = out[k - 2] + h / 3.0 * (values[k - 2] + 4.0 * values[k - 1] + values[k]);
  for (std::size_t k = 1; k < times.size(); k += 2) {
    if (k + 1 < times.size()) {
      out[k] = out[k - 1] + h / 12.0 * (5.0 * values[k - 1] + 8.0 * values[k] - values[k + 1]);
    } else {
      out[k] = out[k - 1] + h / 12.0 * (-values[k - 2] + 8.0 * values[k - 1] + 5.0 * values[k]);
    }
  }
  return out;
}

}  // namespace contactmech
