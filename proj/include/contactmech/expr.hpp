#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace contactmech {

/// Variable bindings for evaluation: name -> value.
using Bindings = std::map<std::string, double>;

enum class BinaryOp { Add, Sub, Mul, Div, Pow };

enum class FuncOp { Sin, Cos, Tan, Exp, Log, Sqrt, Tanh, Abs, Sign };

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::string expected);
  std::size_t offset() const { return offset_; }
  /// Human-readable set of tokens that would have been accepted.
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& message, std::string subexpression);
  /// Printed form of the subexpression where evaluation failed.
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

/// Immutable symbolic expression over named real variables.
///
/// Value-semantic handle over a shared tree. Supported operators are
/// +, -, *, /, ^ (right associative) and unary minus; supported functions
/// are sin, cos, tan, exp, log, sqrt, tanh, abs, sign and pow(a, b).
/// `sign` exists so that diff(abs(x)) has a printable, re-parseable result.
class Expr {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(std::string name);

  bool isConstant() const;
  bool isConstant(double value) const;
  double constantValue() const;
  bool isVariable() const;
  const std::string& variableName() const;

  /// IEEE double evaluation; throws EvalError on unbound variables and
  /// domain errors (log of non-positive, division by zero, negative base
  /// with non-integer exponent, ...), naming the offending subexpression.
  double eval(const Bindings& bindings) const;

  /// Exact symbolic derivative, simplified. The derivative of abs is the
  /// formal sign(x); the derivative of sign is 0.
  Expr diff(const std::string& var) const;

  /// Constant folding plus the safe identities (x+0, x*1, x*0, x^1, 0/x, ...)
  /// applied to fixpoint, together with sign hoisting and pairwise
  /// cancellation of syntactically equal addends of opposite sign. No
  /// distribution and no collection of like terms.
  Expr simplified() const;

  /// Fully parenthesized canonical form; parse(str()) reproduces the tree.
  std::string str() const;

  std::set<std::string> freeVariables() const;
  bool dependsOn(const std::string& var) const;

  /// Strict structural equality.
  bool identicalTo(const Expr& other) const;

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);

  static Expr call(FuncOp op, const Expr& argument);
  static Expr binary(BinaryOp op, const Expr& a, const Expr& b);

  const NodePtr& node() const { return node_; }
  explicit Expr(NodePtr node);

 private:
  NodePtr node_;
};

Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, double exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);
Expr tanh(const Expr& e);
Expr abs(const Expr& e);
Expr sign(const Expr& e);

/// Parse the expression grammar. Precedence: ^ binds tighter than unary
/// minus, which binds tighter than * and /, which bind tighter than + and -.
/// Throws ParseError with a byte offset and the expected-token set.
Expr parseExpr(std::string_view text);

/// Seeded randomized equality: samples `points` assignments of `vars`
/// uniformly from [lo, hi], merges `fixed`, and compares evaluations to
/// tol*(1 + max(|a|, |b|)). Points where either side raises a domain error
/// are skipped; fails if fewer than 10 points could be evaluated.
bool numericallyEquivalent(const Expr& a, const Expr& b,
                           const std::vector<std::string>& vars,
                           const Bindings& fixed, double lo, double hi,
                           std::uint64_t seed, int points, double tol);

/// True when simplified() collapses the expression to the constant 0.
bool structurallyZero(const Expr& e);

}  // namespace contactmech
