#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "contactmech/expr.hpp"
#include "contactmech/vectorfield.hpp"

namespace contactmech {

enum class Method { Rk4Fixed, Rk45Adaptive };

struct IntegratorConfig {
  Method method = Method::Rk4Fixed;
  double dt = 1e-3;     // fixed step; initial step for the adaptive method
  double atol = 1e-9;   // adaptive only
  double rtol = 1e-9;   // adaptive only
  double tMax = 5.0;
  long maxSteps = 2'000'000;
};

/// Time-stamped states with the metadata needed to evaluate observables.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::string> coords;
  Bindings params;
  std::string systemLabel;
  std::string method;
  double dt = 0.0;

  std::size_t size() const { return times.size(); }
  Bindings bindAt(std::size_t k) const;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& message, double t, long step)
      : std::runtime_error(message + " (t = " + std::to_string(t) + ", step " +
                           std::to_string(step) + ")"),
        t_(t),
        step_(step) {}
  double time() const { return t_; }
  long step() const { return step_; }

 private:
  double t_;
  long step_;
};

/// Deterministic explicit Runge-Kutta integration of a symbolic field.
/// rk4-fixed takes classical steps of cfg.dt (with one clipped final step to
/// land exactly on tMax); rk45-adaptive is a Dormand-Prince 5(4) pair with a
/// PI controller, accepting steps when the mixed error estimate
/// err ≤ atol + rtol·|x| holds componentwise.
Trajectory integrate(const VectorFieldExpr& field, const std::vector<std::string>& coords,
                     const Bindings& params, const std::vector<double>& x0,
                     const IntegratorConfig& cfg);

/// F evaluated at every trajectory state; evaluation failures are rethrown
/// with the step index.
std::vector<double> observe(const Trajectory& traj, const Expr& f);

/// Cumulative quadrature of sampled values: composite Simpson on uniform
/// grids (O(dt⁴)), trapezoid otherwise. result[k] ≈ ∫_{t_0}^{t_k} f dt.
std::vector<double> cumulativeQuadrature(const std::vector<double>& times,
                                         const std::vector<double>& values);

}  // namespace contactmech
