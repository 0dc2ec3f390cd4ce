#pragma once

#include <map>
#include <string>
#include <vector>

#include "contactmech/expr.hpp"

namespace contactmech {

/// Strictly increasing coordinate indices identifying a basis k-form
/// dx^{i_1} ∧ ... ∧ dx^{i_k}.
using IndexTuple = std::vector<int>;

/// Numeric value of a k-form at a point. Components are stored sparsely over
/// sorted index tuples; antisymmetry is implicit in the representation.
struct FormValue {
  int dim = 0;
  int degree = 0;
  std::map<IndexTuple, double> comps;

  double coefficient(const IndexTuple& idx) const {
    auto it = comps.find(idx);
    return it == comps.end() ? 0.0 : it->second;
  }
  double maxAbs() const;
};

/// Value of a vector field at a point.
using VectorValue = std::vector<double>;

/// Symbolic k-form (k ≤ 2) with named coordinates. Missing tuples are zero.
struct FormExpr {
  std::vector<std::string> coords;
  int degree = 0;
  std::map<IndexTuple, Expr> comps;

  int dim() const { return static_cast<int>(coords.size()); }

  static FormExpr zero(std::vector<std::string> coords, int degree);
  /// Degree-0 form holding a scalar function.
  static FormExpr scalar(std::vector<std::string> coords, const Expr& f);
  /// a_i dx^i with the given coefficient at coordinate index i.
  static FormExpr covector(std::vector<std::string> coords,
                           const std::map<int, Expr>& coefficients);

  void set(IndexTuple idx, const Expr& value);
  Expr coefficient(const IndexTuple& idx) const;
};

/// d of a symbolic form, degree 0 or 1 only; higher degrees signal
/// out-of-scope use with std::domain_error.
FormExpr exteriorDerivative(const FormExpr& f);

/// Componentwise evaluation; exact zeros are dropped.
FormValue evalForm(const FormExpr& f, const Bindings& b);

/// Shuffle-sum wedge with permutation signs; bilinear, graded-commutative.
FormValue wedge(const FormValue& a, const FormValue& b);

/// Interior product with the vector inserted in the first slot:
/// (i(X)f)_J = Σ_t (-1)^t X^{i_t} f_{I} over removals from each tuple I.
FormValue contract(const VectorValue& x, const FormValue& f);

/// Symbolic counterparts, used to build Ω and Lie derivatives. wedgeExpr is
/// restricted to result degree ≤ 2.
FormExpr wedgeExpr(const FormExpr& a, const FormExpr& b);
FormExpr contractExpr(const std::vector<Expr>& x, const FormExpr& f);
FormExpr addForms(const FormExpr& a, const FormExpr& b);
FormExpr scaleForm(const Expr& factor, const FormExpr& f);

/// Coefficient of η ∧ (dη)^n at the point, normalized by n! so that the
/// Darboux form gives ±1 in every dimension. Nonzero iff the contact
/// condition holds at the point; for a Cartan 1-form the magnitude equals
/// |det W| of the velocity Hessian.
double contactVolumeCoefficient(const FormExpr& eta, const Bindings& b, int n);

}  // namespace contactmech
