#include "contactmech/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

namespace contactmech {

enum class NodeKind { Constant, Variable, Neg, Binary, Call };

struct Expr::Node {
  NodeKind kind{};
  double value = 0.0;     // Constant
  std::string name;       // Variable
  BinaryOp bop{};         // Binary
  FuncOp fop{};           // Call
  NodePtr a, b;           // children

  static NodePtr makeConstant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->value = v;
    return n;
  }
  static NodePtr makeVariable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Variable;
    n->name = std::move(name);
    return n;
  }
  static NodePtr makeNeg(NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Neg;
    n->a = std::move(a);
    return n;
  }
  static NodePtr makeBinary(BinaryOp op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Binary;
    n->bop = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }
  static NodePtr makeCall(FuncOp op, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->fop = op;
    n->a = std::move(a);
    return n;
  }
};

using Node = Expr::Node;
using NodePtr = Expr::NodePtr;

ParseError::ParseError(const std::string& message, std::size_t offset, std::string expected)
    : std::runtime_error(message), offset_(offset), expected_(std::move(expected)) {}

EvalError::EvalError(const std::string& message, std::string subexpression)
    : std::runtime_error(message + " in `" + subexpression + "`"),
      subexpression_(std::move(subexpression)) {}

namespace {

const char* funcName(FuncOp op) {
  switch (op) {
    case FuncOp::Sin: return "sin";
    case FuncOp::Cos: return "cos";
    case FuncOp::Tan: return "tan";
    case FuncOp::Exp: return "exp";
    case FuncOp::Log: return "log";
    case FuncOp::Sqrt: return "sqrt";
    case FuncOp::Tanh: return "tanh";
    case FuncOp::Abs: return "abs";
    case FuncOp::Sign: return "sign";
  }
  return "?";
}

char opChar(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

std::string formatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void printNode(const NodePtr& n, std::string& out) {
  switch (n->kind) {
    case NodeKind::Constant:
      if (std::signbit(n->value)) {
        out += "(-";
        out += formatDouble(-n->value);
        out += ')';
      } else {
        out += formatDouble(n->value);
      }
      break;
    case NodeKind::Variable:
      out += n->name;
      break;
    case NodeKind::Neg:
      out += "(-";
      printNode(n->a, out);
      out += ')';
      break;
    case NodeKind::Binary:
      out += '(';
      printNode(n->a, out);
      out += ' ';
      out += opChar(n->bop);
      out += ' ';
      printNode(n->b, out);
      out += ')';
      break;
    case NodeKind::Call:
      out += funcName(n->fop);
      out += '(';
      printNode(n->a, out);
      out += ')';
      break;
  }
}

std::string printNode(const NodePtr& n) {
  std::string out;
  printNode(n, out);
  return out;
}

bool isConst(const NodePtr& n) { return n->kind == NodeKind::Constant; }
bool isConst(const NodePtr& n, double v) {
  return n->kind == NodeKind::Constant && n->value == v;
}

bool structEqual(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Constant: return a->value == b->value;
    case NodeKind::Variable: return a->name == b->name;
    case NodeKind::Neg: return structEqual(a->a, b->a);
    case NodeKind::Call: return a->fop == b->fop && structEqual(a->a, b->a);
    case NodeKind::Binary: return a->bop == b->bop && structEqual(a->a, b->a) && structEqual(a->b, b->b);
  }
  return false;
}

// Structural equality treating Add and Mul as commutative. Used only to
// decide term cancellation, never to reorder anything.
bool commEqual(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Constant: return a->value == b->value;
    case NodeKind::Variable: return a->name == b->name;
    case NodeKind::Neg: return commEqual(a->a, b->a);
    case NodeKind::Call: return a->fop == b->fop && commEqual(a->a, b->a);
    case NodeKind::Binary:
      if (a->bop != b->bop) return false;
      if (a->bop == BinaryOp::Add || a->bop == BinaryOp::Mul) {
        if (commEqual(a->a, b->a) && commEqual(a->b, b->b)) return true;
        return commEqual(a->a, b->b) && commEqual(a->b, b->a);
      }
      return commEqual(a->a, b->a) && commEqual(a->b, b->b);
  }
  return false;
}

double evalNode(const NodePtr& n, const Bindings& b);

double evalCall(const NodePtr& n, double x) {
  switch (n->fop) {
    case FuncOp::Sin: return std::sin(x);
    case FuncOp::Cos: return std::cos(x);
    case FuncOp::Tan: return std::tan(x);
    case FuncOp::Exp: return std::exp(x);
    case FuncOp::Log:
      if (x <= 0.0) throw EvalError("log of non-positive value", printNode(n));
      return std::log(x);
    case FuncOp::Sqrt:
      if (x < 0.0) throw EvalError("sqrt of negative value", printNode(n));
      return std::sqrt(x);
    case FuncOp::Tanh: return std::tanh(x);
    case FuncOp::Abs: return std::fabs(x);
    case FuncOp::Sign: return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  }
  return 0.0;
}

double evalPow(const NodePtr& n, double base, double expo) {
  if (base < 0.0 && expo != std::nearbyint(expo))
    throw EvalError("negative base with non-integer exponent", printNode(n));
  if (base == 0.0 && expo < 0.0)
    throw EvalError("zero base with negative exponent", printNode(n));
  return std::pow(base, expo);
}

double evalNode(const NodePtr& n, const Bindings& b) {
  switch (n->kind) {
    case NodeKind::Constant:
      return n->value;
    case NodeKind::Variable: {
      auto it = b.find(n->name);
      if (it == b.end()) throw EvalError("unbound variable '" + n->name + "'", n->name);
      return it->second;
    }
    case NodeKind::Neg:
      return -evalNode(n->a, b);
    case NodeKind::Call:
      return evalCall(n, evalNode(n->a, b));
    case NodeKind::Binary: {
      double x = evalNode(n->a, b);
      double y = evalNode(n->b, b);
      switch (n->bop) {
        case BinaryOp::Add: return x + y;
        case BinaryOp::Sub: return x - y;
        case BinaryOp::Mul: return x * y;
        case BinaryOp::Div:
          if (y == 0.0) throw EvalError("division by zero", printNode(n));
          return x / y;
        case BinaryOp::Pow: return evalPow(n, x, y);
      }
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Simplification

NodePtr simplifyNode(const NodePtr& n);

struct SignedTerm {
  int sign;  // +1 or -1
  NodePtr term;
};

// Flatten a (+,-,neg) spine into signed non-constant terms plus a folded
// constant. Children are already simplified.
void collectTerms(const NodePtr& n, int sign, std::vector<SignedTerm>& terms, double& constant) {
  if (n->kind == NodeKind::Binary && n->bop == BinaryOp::Add) {
    collectTerms(n->a, sign, terms, constant);
    collectTerms(n->b, sign, terms, constant);
  } else if (n->kind == NodeKind::Binary && n->bop == BinaryOp::Sub) {
    collectTerms(n->a, sign, terms, constant);
    collectTerms(n->b, -sign, terms, constant);
  } else if (n->kind == NodeKind::Neg) {
    collectTerms(n->a, -sign, terms, constant);
  } else if (n->kind == NodeKind::Constant) {
    constant += sign * n->value;
  } else {
    terms.push_back({sign, n});
  }
}

NodePtr rebuildSum(std::vector<SignedTerm> terms, double constant) {
  // Cancel syntactically equal terms of opposite sign, keeping order stable.
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (terms[i].sign == -terms[j].sign && commEqual(terms[i].term, terms[j].term)) {
        terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(j));
        terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(i));
        --i;
        break;
      }
    }
  }
  if (terms.empty()) return Node::makeConstant(constant == 0.0 ? 0.0 : constant);

  NodePtr acc;
  if (constant != 0.0) acc = Node::makeConstant(constant);
  for (const auto& t : terms) {
    if (!acc) {
      acc = t.sign > 0 ? t.term : Node::makeNeg(t.term);
    } else {
      acc = Node::makeBinary(t.sign > 0 ? BinaryOp::Add : BinaryOp::Sub, acc, t.term);
    }
  }
  return acc;
}

// Flatten a (*,/,neg) spine into numerator/denominator factor lists with a
// folded numeric coefficient. Children are already simplified.
struct ProductParts {
  double coefficient = 1.0;
  std::vector<NodePtr> numerator;
  std::vector<NodePtr> denominator;
  bool zeroDenominator = false;  // an exact 0 constant in a denominator
};

void collectFactors(const NodePtr& n, bool denominator, ProductParts& parts) {
  if (n->kind == NodeKind::Binary && n->bop == BinaryOp::Mul) {
    collectFactors(n->a, denominator, parts);
    collectFactors(n->b, denominator, parts);
  } else if (n->kind == NodeKind::Binary && n->bop == BinaryOp::Div) {
    collectFactors(n->a, denominator, parts);
    collectFactors(n->b, !denominator, parts);
  } else if (n->kind == NodeKind::Neg) {
    parts.coefficient = -parts.coefficient;
    collectFactors(n->a, denominator, parts);
  } else if (n->kind == NodeKind::Constant) {
    if (denominator) {
      if (n->value == 0.0) {
        parts.zeroDenominator = true;
        parts.denominator.push_back(n);
      } else {
        parts.coefficient /= n->value;
      }
    } else {
      parts.coefficient *= n->value;
    }
  } else {
    (denominator ? parts.denominator : parts.numerator).push_back(n);
  }
}

NodePtr rebuildProduct(const ProductParts& parts) {
  if (parts.zeroDenominator) {
    // Leave the division in place so evaluation reports the domain error.
    NodePtr num = Node::makeConstant(parts.coefficient);
    for (const auto& f : parts.numerator) num = Node::makeBinary(BinaryOp::Mul, num, f);
    NodePtr den;
    for (const auto& f : parts.denominator)
      den = den ? Node::makeBinary(BinaryOp::Mul, den, f) : f;
    return Node::makeBinary(BinaryOp::Div, num, den);
  }
  if (parts.coefficient == 0.0) return Node::makeConstant(0.0);
  if (!std::isfinite(parts.coefficient))
    return Node::makeConstant(parts.coefficient);  // degenerate; eval will surface it

  bool negate = parts.coefficient < 0.0;
  double coef = negate ? -parts.coefficient : parts.coefficient;

  NodePtr num;
  if (coef != 1.0 || parts.numerator.empty()) num = Node::makeConstant(coef);
  for (const auto& f : parts.numerator)
    num = num ? Node::makeBinary(BinaryOp::Mul, num, f) : f;

  NodePtr result = num;
  if (!parts.denominator.empty()) {
    NodePtr den;
    for (const auto& f : parts.denominator)
      den = den ? Node::makeBinary(BinaryOp::Mul, den, f) : f;
    result = Node::makeBinary(BinaryOp::Div, result, den);
  }
  if (negate) result = Node::makeNeg(result);
  return result;
}

NodePtr simplifyPow(NodePtr a, NodePtr b) {
  if (isConst(a) && isConst(b)) {
    double base = a->value, expo = b->value;
    bool domainOk = !(base < 0.0 && expo != std::nearbyint(expo)) && !(base == 0.0 && expo < 0.0);
    if (domainOk) {
      double v = std::pow(base, expo);
      if (std::isfinite(v)) return Node::makeConstant(v);
    }
    return Node::makeBinary(BinaryOp::Pow, a, b);
  }
  if (isConst(b, 1.0)) return a;
  if (isConst(b, 0.0)) return Node::makeConstant(1.0);
  if (isConst(a, 1.0)) return Node::makeConstant(1.0);
  return Node::makeBinary(BinaryOp::Pow, std::move(a), std::move(b));
}

NodePtr simplifyNode(const NodePtr& n) {
  switch (n->kind) {
    case NodeKind::Constant:
    case NodeKind::Variable:
      return n;
    case NodeKind::Neg: {
      NodePtr a = simplifyNode(n->a);
      if (isConst(a)) return Node::makeConstant(-a->value);
      if (a->kind == NodeKind::Neg) return a->a;
      // Normalize signs through products and sums below this node.
      std::vector<SignedTerm> terms;
      double constant = 0.0;
      collectTerms(Node::makeNeg(a), 1, terms, constant);
      if (terms.size() != 1 || constant != 0.0 || terms[0].sign != -1 ||
          !structEqual(terms[0].term, a))
        return rebuildSum(std::move(terms), constant);
      return Node::makeNeg(a);
    }
    case NodeKind::Call: {
      NodePtr a = simplifyNode(n->a);
      if (isConst(a)) {
        try {
          NodePtr probe = Node::makeCall(n->fop, a);
          double v = evalCall(probe, a->value);
          if (std::isfinite(v)) return Node::makeConstant(v);
        } catch (const EvalError&) {
          // leave unfolded; evaluation will report the domain error
        }
      }
      return Node::makeCall(n->fop, std::move(a));
    }
    case NodeKind::Binary: {
      NodePtr a = simplifyNode(n->a);
      NodePtr b = simplifyNode(n->b);
      switch (n->bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: {
          std::vector<SignedTerm> terms;
          double constant = 0.0;
          NodePtr node = Node::makeBinary(n->bop, a, b);
          collectTerms(node, 1, terms, constant);
          return rebuildSum(std::move(terms), constant);
        }
        case BinaryOp::Mul:
        case BinaryOp::Div: {
          ProductParts parts;
          NodePtr node = Node::makeBinary(n->bop, a, b);
          collectFactors(node, false, parts);
          return rebuildProduct(parts);
        }
        case BinaryOp::Pow:
          return simplifyPow(std::move(a), std::move(b));
      }
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Differentiation

NodePtr diffNode(const NodePtr& n, const std::string& var);

NodePtr diffCall(const NodePtr& n, const std::string& var) {
  const NodePtr& u = n->a;
  NodePtr du = diffNode(u, var);
  auto mul = [](NodePtr x, NodePtr y) { return Node::makeBinary(BinaryOp::Mul, std::move(x), std::move(y)); };
  auto div = [](NodePtr x, NodePtr y) { return Node::makeBinary(BinaryOp::Div, std::move(x), std::move(y)); };
  switch (n->fop) {
    case FuncOp::Sin: return mul(Node::makeCall(FuncOp::Cos, u), du);
    case FuncOp::Cos: return Node::makeNeg(mul(Node::makeCall(FuncOp::Sin, u), du));
    case FuncOp::Tan:
      return div(du, Node::makeBinary(BinaryOp::Pow, Node::makeCall(FuncOp::Cos, u), Node::makeConstant(2)));
    case FuncOp::Exp: return mul(Node::makeCall(FuncOp::Exp, u), du);
    case FuncOp::Log: return div(du, u);
    case FuncOp::Sqrt:
      return div(du, mul(Node::makeConstant(2), Node::makeCall(FuncOp::Sqrt, u)));
    case FuncOp::Tanh:
      return mul(Node::makeBinary(BinaryOp::Sub, Node::makeConstant(1),
                                  Node::makeBinary(BinaryOp::Pow, Node::makeCall(FuncOp::Tanh, u),
                                                   Node::makeConstant(2))),
                 du);
    case FuncOp::Abs: return mul(Node::makeCall(FuncOp::Sign, u), du);
    case FuncOp::Sign: return Node::makeConstant(0);
  }
  return Node::makeConstant(0);
}

NodePtr diffNode(const NodePtr& n, const std::string& var) {
  auto mul = [](NodePtr x, NodePtr y) { return Node::makeBinary(BinaryOp::Mul, std::move(x), std::move(y)); };
  switch (n->kind) {
    case NodeKind::Constant:
      return Node::makeConstant(0);
    case NodeKind::Variable:
      return Node::makeConstant(n->name == var ? 1 : 0);
    case NodeKind::Neg:
      return Node::makeNeg(diffNode(n->a, var));
    case NodeKind::Call:
      return diffCall(n, var);
    case NodeKind::Binary: {
      const NodePtr& u = n->a;
      const NodePtr& v = n->b;
      switch (n->bop) {
        case BinaryOp::Add:
          return Node::makeBinary(BinaryOp::Add, diffNode(u, var), diffNode(v, var));
        case BinaryOp::Sub:
          return Node::makeBinary(BinaryOp::Sub, diffNode(u, var), diffNode(v, var));
        case BinaryOp::Mul:
          return Node::makeBinary(BinaryOp::Add, mul(diffNode(u, var), v), mul(u, diffNode(v, var)));
        case BinaryOp::Div:
          return Node::makeBinary(
              BinaryOp::Div,
              Node::makeBinary(BinaryOp::Sub, mul(diffNode(u, var), v), mul(u, diffNode(v, var))),
              Node::makeBinary(BinaryOp::Pow, v, Node::makeConstant(2)));
        case BinaryOp::Pow: {
          if (isConst(v)) {
            // c * u^(c-1) * u'
            NodePtr power = Node::makeBinary(BinaryOp::Pow, u, Node::makeConstant(v->value - 1));
            return mul(mul(Node::makeConstant(v->value), power), diffNode(u, var));
          }
          if (isConst(u)) {
            // u^v * log(u) * v'
            return mul(mul(Node::makeBinary(BinaryOp::Pow, u, v), Node::makeCall(FuncOp::Log, u)),
                       diffNode(v, var));
          }
          // u^v * (v' * log(u) + v * u' / u)
          NodePtr lhs = mul(diffNode(v, var), Node::makeCall(FuncOp::Log, u));
          NodePtr rhs = Node::makeBinary(BinaryOp::Div, mul(v, diffNode(u, var)), u);
          return mul(Node::makeBinary(BinaryOp::Pow, u, v),
                     Node::makeBinary(BinaryOp::Add, lhs, rhs));
        }
      }
    }
  }
  return Node::makeConstant(0);
}

void collectVariables(const NodePtr& n, std::set<std::string>& out) {
  switch (n->kind) {
    case NodeKind::Constant: return;
    case NodeKind::Variable: out.insert(n->name); return;
    case NodeKind::Neg:
    case NodeKind::Call: collectVariables(n->a, out); return;
    case NodeKind::Binary:
      collectVariables(n->a, out);
      collectVariables(n->b, out);
      return;
  }
}

// ---------------------------------------------------------------------------
// Parser

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  TokKind kind;
  std::size_t offset;
  double number = 0.0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= text_.size()) return {TokKind::End, start};
    char c = text_[pos_];
    switch (c) {
      case '+': ++pos_; return {TokKind::Plus, start};
      case '-': ++pos_; return {TokKind::Minus, start};
      case '*': ++pos_; return {TokKind::Star, start};
      case '/': ++pos_; return {TokKind::Slash, start};
      case '^': ++pos_; return {TokKind::Caret, start};
      case '(': ++pos_; return {TokKind::LParen, start};
      case ')': ++pos_; return {TokKind::RParen, start};
      case ',': ++pos_; return {TokKind::Comma, start};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lexNumber(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      Token t{TokKind::Ident, start};
      t.ident = std::string(text_.substr(start, pos_ - start));
      return t;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                         std::to_string(start),
                     start, "number, identifier, operator, or parenthesis");
  }

 private:
  Token lexNumber(std::size_t start) {
    std::size_t p = pos_;
    bool sawDigit = false;
    while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
      ++p;
      sawDigit = true;
    }
    if (p < text_.size() && text_[p] == '.') {
      ++p;
      while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        ++p;
        sawDigit = true;
      }
    }
    if (!sawDigit)
      throw ParseError("malformed number at offset " + std::to_string(start), start, "digit");
    if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
      if (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) {
        ++q;
        while (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) ++q;
        p = q;
      }
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + p, value);
    if (res.ec != std::errc{})
      throw ParseError("malformed number at offset " + std::to_string(start), start, "number");
    pos_ = p;
    Token t{TokKind::Number, start};
    t.number = value;
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  NodePtr parse() {
    NodePtr e = expression();
    expect(TokKind::End, "end of input");
    return e;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  void expect(TokKind kind, const std::string& what) {
    if (tok_.kind != kind)
      throw ParseError("syntax error at offset " + std::to_string(tok_.offset) + ": expected " + what,
                       tok_.offset, what);
    advance();
  }

  NodePtr expression() {
    NodePtr e = term();
    while (tok_.kind == TokKind::Plus || tok_.kind == TokKind::Minus) {
      BinaryOp op = tok_.kind == TokKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      e = Node::makeBinary(op, e, term());
    }
    return e;
  }

  NodePtr term() {
    NodePtr e = factor();
    while (tok_.kind == TokKind::Star || tok_.kind == TokKind::Slash) {
      BinaryOp op = tok_.kind == TokKind::Star ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      e = Node::makeBinary(op, e, factor());
    }
    return e;
  }

  NodePtr factor() {
    if (tok_.kind == TokKind::Minus) {
      advance();
      NodePtr operand = factor();
      // A negated literal is a negative constant, so printing round-trips.
      if (operand->kind == NodeKind::Constant) return Node::makeConstant(-operand->value);
      return Node::makeNeg(operand);
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (tok_.kind == TokKind::Caret) {
      advance();
      return Node::makeBinary(BinaryOp::Pow, base, factor());  // right associative
    }
    return base;
  }

  NodePtr atom() {
    switch (tok_.kind) {
      case TokKind::Number: {
        double v = tok_.number;
        advance();
        return Node::makeConstant(v);
      }
      case TokKind::LParen: {
        advance();
        NodePtr e = expression();
        expect(TokKind::RParen, "')'");
        return e;
      }
      case TokKind::Ident: {
        std::string name = tok_.ident;
        std::size_t off = tok_.offset;
        advance();
        if (tok_.kind != TokKind::LParen) return Node::makeVariable(std::move(name));
        advance();
        std::vector<NodePtr> args;
        args.push_back(expression());
        while (tok_.kind == TokKind::Comma) {
          advance();
          args.push_back(expression());
        }
        expect(TokKind::RParen, "')'");
        return makeFunction(name, std::move(args), off);
      }
      default:
        throw ParseError("syntax error at offset " + std::to_string(tok_.offset) +
                             ": expected number, identifier, '(', or '-'",
                         tok_.offset, "number, identifier, '(', or '-'");
    }
  }

  NodePtr makeFunction(const std::string& name, std::vector<NodePtr> args, std::size_t off) {
    if (name == "pow") {
      if (args.size() != 2)
        throw ParseError("function 'pow' takes 2 arguments", off, "2 arguments");
      return Node::makeBinary(BinaryOp::Pow, args[0], args[1]);
    }
    static const std::map<std::string, FuncOp> table = {
        {"sin", FuncOp::Sin},   {"cos", FuncOp::Cos}, {"tan", FuncOp::Tan},
        {"exp", FuncOp::Exp},   {"log", FuncOp::Log}, {"sqrt", FuncOp::Sqrt},
        {"tanh", FuncOp::Tanh}, {"abs", FuncOp::Abs}, {"sign", FuncOp::Sign}};
    auto it = table.find(name);
    if (it == table.end())
      throw ParseError("unknown function '" + name + "'",
                       off, "sin, cos, tan, exp, log, sqrt, tanh, abs, sign, pow");
    if (args.size() != 1)
      throw ParseError("function '" + name + "' takes 1 argument", off, "1 argument");
    return Node::makeCall(it->second, args[0]);
  }

  Lexer lexer_;
  Token tok_{TokKind::End, 0};
};

}  // namespace

// ---------------------------------------------------------------------------
// Expr interface

Expr::Expr() : node_(Node::makeConstant(0.0)) {}
Expr::Expr(NodePtr node) : node_(std::move(node)) { assert(node_); }

Expr Expr::constant(double value) { return Expr(Node::makeConstant(value)); }
Expr Expr::variable(std::string name) { return Expr(Node::makeVariable(std::move(name))); }

bool Expr::isConstant() const { return node_->kind == NodeKind::Constant; }
bool Expr::isConstant(double value) const { return isConst(node_, value); }
double Expr::constantValue() const {
  assert(isConstant());
  return node_->value;
}
bool Expr::isVariable() const { return node_->kind == NodeKind::Variable; }
const std::string& Expr::variableName() const {
  assert(isVariable());
  return node_->name;
}

double Expr::eval(const Bindings& bindings) const { return evalNode(node_, bindings); }

Expr Expr::diff(const std::string& var) const {
  return Expr(simplifyNode(diffNode(node_, var)));
}

Expr Expr::simplified() const { return Expr(simplifyNode(node_)); }

std::string Expr::str() const { return printNode(node_); }

std::set<std::string> Expr::freeVariables() const {
  std::set<std::string> out;
  collectVariables(node_, out);
  return out;
}

bool Expr::dependsOn(const std::string& var) const {
  return freeVariables().count(var) > 0;
}

bool Expr::identicalTo(const Expr& other) const { return structEqual(node_, other.node_); }

Expr Expr::operator-() const { return Expr(Node::makeNeg(node_)); }

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(Node::makeBinary(BinaryOp::Add, a.node_, b.node_));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(Node::makeBinary(BinaryOp::Sub, a.node_, b.node_));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(Node::makeBinary(BinaryOp::Mul, a.node_, b.node_));
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(Node::makeBinary(BinaryOp::Div, a.node_, b.node_));
}

Expr Expr::call(FuncOp op, const Expr& argument) {
  return Expr(Node::makeCall(op, argument.node_));
}
Expr Expr::binary(BinaryOp op, const Expr& a, const Expr& b) {
  return Expr(Node::makeBinary(op, a.node_, b.node_));
}

Expr pow(const Expr& base, const Expr& exponent) {
  return Expr::binary(BinaryOp::Pow, base, exponent);
}
Expr pow(const Expr& base, double exponent) { return pow(base, Expr::constant(exponent)); }
Expr sin(const Expr& e) { return Expr::call(FuncOp::Sin, e); }
Expr cos(const Expr& e) { return Expr::call(FuncOp::Cos, e); }
Expr tan(const Expr& e) { return Expr::call(FuncOp::Tan, e); }
Expr exp(const Expr& e) { return Expr::call(FuncOp::Exp, e); }
Expr log(const Expr& e) { return Expr::call(FuncOp::Log, e); }
Expr sqrt(const Expr& e) { return Expr::call(FuncOp::Sqrt, e); }
Expr tanh(const Expr& e) { return Expr::call(FuncOp::Tanh, e); }
Expr abs(const Expr& e) { return Expr::call(FuncOp::Abs, e); }
Expr sign(const Expr& e) { return Expr::call(FuncOp::Sign, e); }

Expr parseExpr(std::string_view text) {
  if (text.empty()) throw ParseError("empty expression", 0, "expression");
  Parser parser(text);
  return Expr(parser.parse());
}

bool numericallyEquivalent(const Expr& a, const Expr& b,
                           const std::vector<std::string>& vars,
                           const Bindings& fixed, double lo, double hi,
                           std::uint64_t seed, int points, double tol) {
  std::mt19937_64 eng(seed);
  auto uniform = [&]() { return (eng() >> 11) * 0x1.0p-53; };
  int evaluated = 0;
  for (int k = 0; k < points; ++k) {
    Bindings bind = fixed;
    for (const auto& v : vars) bind[v] = lo + (hi - lo) * uniform();
    double va, vb;
    try {
      va = a.eval(bind);
      vb = b.eval(bind);
    } catch (const EvalError&) {
      continue;
    }
    ++evaluated;
    if (std::abs(va - vb) > tol * (1.0 + std::max(std::abs(va), std::abs(vb)))) return false;
  }
  return evaluated >= std::min(points, 10);
}

bool structurallyZero(const Expr& e) { return e.simplified().isConstant(0.0); }

}  // namespace contactmech
