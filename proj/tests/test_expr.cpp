#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "contactmech/expr.hpp"

using namespace contactmech;

namespace {

// Independent derivative oracle: central finite differences.
double centralFD(const Expr& e, const std::string& var, Bindings b, double h = 1e-6) {
  double x = b.at(var);
  b[var] = x + h;
  double fp = e.eval(b);
  b[var] = x - h;
  double fm = e.eval(b);
  return (fp - fm) / (2.0 * h);
}

double uniform(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * ((eng() >> 11) * 0x1.0p-53);
}

// Small random AST generator for the round-trip and simplify properties.
Expr randomExpr(std::mt19937_64& eng, int depth) {
  auto pick = [&](int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); };
  if (depth <= 0 || pick(4) == 0) {
    switch (pick(3)) {
      case 0: return Expr::constant(uniform(eng, -5.0, 5.0));
      case 1: return Expr::variable("x");
      default: return Expr::variable("y");
    }
  }
  switch (pick(8)) {
    case 0: return randomExpr(eng, depth - 1) + randomExpr(eng, depth - 1);
    case 1: return randomExpr(eng, depth - 1) - randomExpr(eng, depth - 1);
    case 2: return randomExpr(eng, depth - 1) * randomExpr(eng, depth - 1);
    case 3: return randomExpr(eng, depth - 1) / randomExpr(eng, depth - 1);
    case 4: return -randomExpr(eng, depth - 1);
    case 5: return sin(randomExpr(eng, depth - 1));
    case 6: return exp(randomExpr(eng, depth - 1));
    default: return pow(randomExpr(eng, depth - 1), Expr::constant(pick(4)));
  }
}

}  // namespace

TEST_CASE("parse honors precedence and shape") {
  Expr e = parseExpr("v^2/2 - q^2/2");
  // Sub(Div(Pow(v,2),2), Div(Pow(q,2),2))
  Expr expected = pow(Expr::variable("v"), 2) / Expr::constant(2) -
                  pow(Expr::variable("q"), 2) / Expr::constant(2);
  CHECK(e.identicalTo(expected));

  CHECK(parseExpr("2^3^2").eval({}) == doctest::Approx(512.0));   // right assoc
  CHECK(parseExpr("-2^2").eval({}) == doctest::Approx(-4.0));     // ^ binds tighter than unary -
  CHECK(parseExpr("2*-3").eval({}) == doctest::Approx(-6.0));
  CHECK(parseExpr("x^-1").eval({{"x", 4.0}}) == doctest::Approx(0.25));
  CHECK(parseExpr("pow(2, 10)").eval({}) == doctest::Approx(1024.0));
}

TEST_CASE("parse collects free variables of the parachute Lagrangian term") {
  Expr e = parseExpr("m*g/(2*gamma)*(exp(2*gamma*y)-1)");
  auto vars = e.freeVariables();
  CHECK(vars == std::set<std::string>{"m", "g", "gamma", "y"});
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK_THROWS_AS(parseExpr("sin("), ParseError);
  try {
    parseExpr("sin(");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(e.expected().find("number") != std::string::npos);
  }
  CHECK_THROWS_AS(parseExpr(""), ParseError);
  CHECK_THROWS_AS(parseExpr("foo(x)"), ParseError);
  try {
    parseExpr("foo(x)");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unknown function") != std::string::npos);
  }
  CHECK_THROWS_AS(parseExpr("sin(x, y)"), ParseError);
  CHECK_THROWS_AS(parseExpr("1 + "), ParseError);
  CHECK_THROWS_AS(parseExpr("(x"), ParseError);
}

TEST_CASE("diff: power rule, dissipation term, chain rule") {
  Expr d1 = parseExpr("v^2/2").diff("v");
  CHECK(d1.identicalTo(Expr::variable("v")));

  Expr d2 = parseExpr("-gamma*s").diff("s");
  CHECK(d2.identicalTo(parseExpr("-gamma")));

  Expr d3 = parseExpr("exp(2*gamma*y)").diff("y");
  CHECK(numericallyEquivalent(d3, parseExpr("2*gamma*exp(2*gamma*y)"), {"gamma", "y"}, {}, -2, 2,
                              7, 50, 1e-12));

  Expr dabs = abs(Expr::variable("x")).diff("x");
  CHECK(dabs.identicalTo(sign(Expr::variable("x"))));
  CHECK(dabs.eval({{"x", -3.0}}) == -1.0);
}

TEST_CASE("diff matches central finite differences on seeded points") {
  std::vector<Expr> exprs = {
      parseExpr("v^2/2 - q^2/2"),
      parseExpr("sin(x)*cos(y) + tan(x/4)"),
      parseExpr("exp(2*gamma*y) - sqrt(abs(x) + 2)"),
      parseExpr("tanh(x*y) + x^3/(1 + y^2)"),
      parseExpr("log(q^2 + 1) * p"),
  };
  std::mt19937_64 eng(12345);
  int checked = 0;
  for (const auto& e : exprs) {
    auto vars = e.freeVariables();
    for (const auto& var : vars) {
      Expr de = e.diff(var);
      for (int k = 0; k < 200; ++k) {
        Bindings b;
        for (const auto& v : vars) b[v] = uniform(eng, -1.5, 1.5);
        double symbolic, numeric;
        try {
          symbolic = de.eval(b);
          numeric = centralFD(e, var, b);
        } catch (const EvalError&) {
          continue;
        }
        CAPTURE(e.str());
        CAPTURE(var);
        CHECK(std::abs(symbolic - numeric) <= 1e-5 * (1.0 + std::abs(symbolic)));
        ++checked;
      }
    }
  }
  CHECK(checked >= 1000);
}

TEST_CASE("simplify: listed identities") {
  CHECK(parseExpr("0*q + 1*v").simplified().identicalTo(Expr::variable("v")));
  CHECK(parseExpr("2+3").simplified().identicalTo(Expr::constant(5)));
  CHECK(parseExpr("q*(1-0)").simplified().identicalTo(Expr::variable("q")));
  CHECK(parseExpr("x^1").simplified().identicalTo(Expr::variable("x")));
  CHECK(parseExpr("0/x").simplified().isConstant(0.0));
  CHECK(parseExpr("x - x").simplified().isConstant(0.0));
  CHECK(parseExpr("x + 0").simplified().identicalTo(Expr::variable("x")));
  CHECK(parseExpr("p - p + q").simplified().identicalTo(Expr::variable("q")));
  // domain-error subtrees are left unfolded
  CHECK_FALSE(parseExpr("1/0").simplified().isConstant());
  CHECK_FALSE(parseExpr("log(0)").simplified().isConstant());
}

TEST_CASE("simplify preserves value on random expressions") {
  std::mt19937_64 eng(777);
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    Expr e = randomExpr(eng, 4);
    Expr s = e.simplified();
    for (int j = 0; j < 5; ++j) {
      Bindings b{{"x", uniform(eng, -3.0, 3.0)}, {"y", uniform(eng, -3.0, 3.0)}};
      double v0, v1;
      try {
        v0 = e.eval(b);
        v1 = s.eval(b);
      } catch (const EvalError&) {
        continue;
      }
      if (!std::isfinite(v0)) continue;
      CAPTURE(e.str());
      CHECK(std::abs(v0 - v1) <= 1e-12 * (1.0 + std::max(std::abs(v0), std::abs(v1))));
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("print-parse round trip is idempotent") {
  std::mt19937_64 eng(999);
  for (int k = 0; k < 300; ++k) {
    Expr e = randomExpr(eng, 4);
    std::string once = e.str();
    Expr reparsed = parseExpr(once);
    CHECK(reparsed.identicalTo(e));
    CHECK(reparsed.str() == once);
  }
  // negative constants survive the round trip
  Expr c = Expr::constant(-3.0);
  CHECK(parseExpr(c.str()).identicalTo(c));
  Expr p = pow(Expr::constant(-3.0), Expr::constant(2.0));
  CHECK(parseExpr(p.str()).identicalTo(p));
}

TEST_CASE("eval: values and domain errors") {
  CHECK(parseExpr("v^2/2").eval({{"v", 2.0}}) == 2.0);
  CHECK(parseExpr("p^2/2 + q^2/2 + 0.1*s").eval({{"q", 1.0}, {"p", 0.0}, {"s", 0.0}}) == 0.5);

  CHECK_THROWS_AS(parseExpr("log(q)").eval({{"q", 0.0}}), EvalError);
  CHECK_THROWS_AS(parseExpr("1/x").eval({{"x", 0.0}}), EvalError);
  CHECK_THROWS_AS(parseExpr("sqrt(x)").eval({{"x", -1.0}}), EvalError);
  CHECK_THROWS_AS(parseExpr("x^0.5").eval({{"x", -2.0}}), EvalError);
  CHECK_THROWS_AS(parseExpr("x + y").eval({{"x", 1.0}}), EvalError);
  try {
    parseExpr("x + y").eval({{"x", 1.0}});
  } catch (const EvalError& e) {
    CHECK(std::string(e.what()).find("'y'") != std::string::npos);
  }
  try {
    parseExpr("1 + log(q)").eval({{"q", -1.0}});
  } catch (const EvalError& e) {
    CHECK(e.subexpression().find("log") != std::string::npos);
  }
}

TEST_CASE("numericallyEquivalent distinguishes expressions") {
  CHECK(numericallyEquivalent(parseExpr("(x+1)^2"), parseExpr("x^2 + 2*x + 1"), {"x"}, {}, -3, 3,
                              42, 100, 1e-12));
  CHECK_FALSE(numericallyEquivalent(parseExpr("(x+1)^2"), parseExpr("x^2 + 2*x"), {"x"}, {}, -3,
                                    3, 42, 100, 1e-12));
}
