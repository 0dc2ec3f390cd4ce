#pragma once

#include <string>
#include <vector>

#include "contactmech/expr.hpp"
#include "contactmech/exterior.hpp"

namespace contactmech {

/// Symbolic vector field: one component per coordinate, ordered
/// (q-block, p/v-block, s).
struct VectorFieldExpr {
  std::vector<Expr> components;

  int dim() const { return static_cast<int>(components.size()); }

  static VectorFieldExpr zero(int dim) {
    VectorFieldExpr f;
    f.components.assign(static_cast<std::size_t>(dim), Expr::constant(0.0));
    return f;
  }
  /// The coordinate field ∂/∂x^index.
  static VectorFieldExpr basis(int dim, int index) {
    VectorFieldExpr f = zero(dim);
    f.components[static_cast<std::size_t>(index)] = Expr::constant(1.0);
    return f;
  }
};

inline VectorValue evalField(const VectorFieldExpr& f, const Bindings& b) {
  VectorValue out;
  out.reserve(f.components.size());
  for (const auto& c : f.components) out.push_back(c.eval(b));
  return out;
}

/// X(f) = Σ_i X^i ∂f/∂x^i, simplified.
inline Expr directionalDerivative(const VectorFieldExpr& x, const Expr& f,
                                  const std::vector<std::string>& coords) {
  Expr acc = Expr::constant(0.0);
  for (std::size_t i = 0; i < coords.size(); ++i)
    acc = acc + x.components[i] * f.diff(coords[i]);
  return acc.simplified();
}

inline VectorFieldExpr addFields(const VectorFieldExpr& a, const VectorFieldExpr& b) {
  VectorFieldExpr out = VectorFieldExpr::zero(a.dim());
  for (std::size_t i = 0; i < a.components.size(); ++i)
    out.components[i] = (a.components[i] + b.components[i]).simplified();
  return out;
}

}  // namespace contactmech
