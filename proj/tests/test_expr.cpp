#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "fcontact/expr.hpp"

using namespace fcontact;

namespace {

// Independent reference model: a tiny tree built by the test, rendered to a
// string for the library parser and evaluated by its own walker.
struct RefNode {
  enum Kind { Num, Var, Add, Sub, Mul, Neg, Pow, Sin, Cos, Exp } kind;
  double num = 0.0;
  int var = 0;
  int exponent = 0;
  std::shared_ptr<RefNode> a, b;
};
using Ref = std::shared_ptr<RefNode>;

Ref ref(RefNode n) { return std::make_shared<RefNode>(std::move(n)); }

double ref_eval(const Ref& r, const std::vector<double>& x) {
  switch (r->kind) {
    case RefNode::Num: return r->num;
    case RefNode::Var: return x[r->var];
    case RefNode::Add: return ref_eval(r->a, x) + ref_eval(r->b, x);
    case RefNode::Sub: return ref_eval(r->a, x) - ref_eval(r->b, x);
    case RefNode::Mul: return ref_eval(r->a, x) * ref_eval(r->b, x);
    case RefNode::Neg: return -ref_eval(r->a, x);
    case RefNode::Pow: return std::pow(ref_eval(r->a, x), r->exponent);
    case RefNode::Sin: return std::sin(ref_eval(r->a, x));
    case RefNode::Cos: return std::cos(ref_eval(r->a, x));
    case RefNode::Exp: return std::exp(ref_eval(r->a, x));
  }
  return 0.0;
}

std::string ref_render(const Ref& r, const std::vector<std::string>& names) {
  switch (r->kind) {
    case RefNode::Num: {
      char buf[64];
      snprintf(buf, sizeof buf, "%.17g", r->num);
      return std::string(buf);
    }
    case RefNode::Var: return names[r->var];
    case RefNode::Add:
      return "(" + ref_render(r->a, names) + "+" + ref_render(r->b, names) + ")";
    case RefNode::Sub:
      return "(" + ref_render(r->a, names) + "-" + ref_render(r->b, names) + ")";
    case RefNode::Mul:
      return "(" + ref_render(r->a, names) + "*" + ref_render(r->b, names) + ")";
    case RefNode::Neg: return "(-" + ref_render(r->a, names) + ")";
    case RefNode::Pow:
      return "(" + ref_render(r->a, names) + ")^" + std::to_string(r->exponent);
    case RefNode::Sin: return "sin(" + ref_render(r->a, names) + ")";
    case RefNode::Cos: return "cos(" + ref_render(r->a, names) + ")";
    case RefNode::Exp: return "exp(" + ref_render(r->a, names) + ")";
  }
  return "0";
}

Ref random_tree(std::mt19937_64& gen, int depth) {
  auto pick = [&gen](int n) { return static_cast<int>(gen() % n); };
  auto uniform = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53 * 4.0 - 2.0;
  };
  if (depth == 0 || pick(4) == 0) {
    if (pick(2) == 0) return ref({.kind = RefNode::Num, .num = uniform()});
    return ref({.kind = RefNode::Var, .var = pick(2)});
  }
  switch (pick(7)) {
    case 0: return ref({.kind = RefNode::Add, .a = random_tree(gen, depth - 1),
                        .b = random_tree(gen, depth - 1)});
    case 1: return ref({.kind = RefNode::Sub, .a = random_tree(gen, depth - 1),
                        .b = random_tree(gen, depth - 1)});
    case 2: return ref({.kind = RefNode::Mul, .a = random_tree(gen, depth - 1),
                        .b = random_tree(gen, depth - 1)});
    case 3: return ref({.kind = RefNode::Neg, .a = random_tree(gen, depth - 1)});
    case 4: return ref({.kind = RefNode::Pow, .exponent = pick(4),
                        .a = random_tree(gen, depth - 1)});
    case 5: return ref({.kind = RefNode::Sin, .a = random_tree(gen, depth - 1)});
    default: return ref({.kind = RefNode::Cos, .a = random_tree(gen, depth - 1)});
  }
}

}  // namespace

TEST_CASE("parse builds the expected shape for x1 + 2*x2") {
  Chart chart({"x1", "x2"});
  const Expr e = Expr::parse("x1 + 2*x2", chart);
  CHECK(e.str() == "(x1 + (2 * x2))");
  std::vector<double> x = {5.0, 7.0};
  CHECK(e.eval(x) == 19.0);
}

TEST_CASE("precedence and associativity") {
  Chart chart({"x1", "x2"});
  CHECK(Expr::parse("1 - 2 - 3", chart).eval_at(Point::Zero(2)) == -4.0);
  CHECK(Expr::parse("2*3^2", chart).eval_at(Point::Zero(2)) == 18.0);
  CHECK(Expr::parse("-x1^2", chart).eval_at(Point::Constant(2, 3.0)) == -9.0);
  CHECK(Expr::parse("x1^-2", chart).eval_at(Point::Constant(2, 2.0)) == 0.25);
  CHECK(Expr::parse("12/4/3", chart).eval_at(Point::Zero(2)) == 1.0);
  CHECK(Expr::parse("2*-3", chart).eval_at(Point::Zero(2)) == -6.0);
}

TEST_CASE("unknown identifiers carry a location") {
  Chart chart({"x1", "x2"});
  try {
    Expr::parse("sin(q)", chart);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(e.line() == 1);
    CHECK(e.column() == 5);
    CHECK(std::string(e.what()).find("unknown identifier 'q'") != std::string::npos);
  }
}

TEST_CASE("parameters are bound at parse time") {
  Chart chart({"x1"});
  const Expr e = Expr::parse("a*x1 + b", chart, {{"a", 2.0}, {"b", -1.0}});
  CHECK(e.eval_at(Point::Constant(1, 3.0)) == 5.0);
  CHECK_THROWS_AS(Expr::parse("a*x1", chart), ParseError);
}

TEST_CASE("x1^2 - x1*x1 evaluates to exactly zero") {
  Chart chart({"x1", "x2"});
  const Expr e = Expr::parse("x1^2 - x1*x1", chart);
  for (const auto& p : sample_points(chart, 20, 9)) CHECK(e.eval_at(p) == 0.0);
}

TEST_CASE("domain errors at singular arguments") {
  Chart chart({"x1", "x2"});
  const Expr e = Expr::parse("x1/x2", chart);
  Point p(2);
  p << 1.0, 0.0;
  CHECK_THROWS_AS(e.eval_at(p), DomainError);

  Chart line({"x1"});
  const Expr g = Expr::parse("exp(x1)", line);
  const Dual d = g.eval_dual(Point::Zero(1));
  CHECK(d.value() == 1.0);
  CHECK(d.grad(1)[0] == 1.0);
}

TEST_CASE("random expressions agree with the independent reference walker") {
  Chart chart({"x1", "x2"});
  std::mt19937_64 gen(1234);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Ref r = random_tree(gen, 4);
    const std::string text = ref_render(r, chart.coord_names());
    const Expr e = Expr::parse(text, chart);
    for (const auto& p : sample_points(chart, 5, trial)) {
      std::vector<double> x(p.data(), p.data() + p.size());
      const double want = ref_eval(r, x);
      const double got = e.eval(x);
      if (!std::isfinite(want) || std::abs(want) > 1e12) continue;
      CHECK(std::abs(got - want) <= 1e-9 * (1.0 + std::abs(want)));
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("canonical printing is round-trip stable") {
  Chart chart({"x1", "x2"});
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Ref r = random_tree(gen, 4);
    const Expr e = Expr::parse(ref_render(r, chart.coord_names()), chart);
    const std::string once = e.str();
    const Expr again = Expr::parse(once, chart);
    CHECK(again.str() == once);
  }
}

TEST_CASE("symbolic derivative matches the dual gradient") {
  Chart chart({"x1", "x2"});
  const Expr e = Expr::parse("sin(x1*x2) + x1^3/(2 + x2)", chart);
  for (const auto& p : sample_points(chart, 30, 4)) {
    const Dual d = e.eval_dual(p);
    for (int j = 0; j < 2; ++j) {
      const double sym = e.derivative(j).eval_at(p);
      CHECK(std::abs(sym - d.grad(2)[j]) <= 1e-12 * (1.0 + std::abs(sym)));
    }
  }
}

TEST_CASE("truncated and mutated inputs never crash the parser") {
  Chart chart({"x1", "x2"});
  const std::vector<std::string> corpus = {
      "x1 + 2*x2", "sin(x1*x2) - cos(x2)^3", "exp(-x1^2) / (1 + x2^2)",
      "-(x1 - x2)*(x1 + x2)", "1.5e-3*x1^4"};
  int rejected = 0;
  for (const auto& text : corpus) {
    for (std::size_t cut = 0; cut < text.size(); ++cut) {
      try {
        Expr::parse(text.substr(0, cut), chart);
      } catch (const ParseError&) {
        ++rejected;
      }
    }
  }
  CHECK(rejected > 50);

  std::mt19937_64 gen(2024);
  const std::string chars = "x12+-*/^()sincoexp. ";
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const int len = 1 + static_cast<int>(gen() % 24);
    for (int i = 0; i < len; ++i) text += chars[gen() % chars.size()];
    try {
      Expr::parse(text, chart);
    } catch (const ParseError&) {
      // rejected cleanly
    }
  }
}

TEST_CASE("multi-line input reports 1-based line and column") {
  Chart chart({"x1"});
  try {
    Expr::parse("x1 +\n  @", chart);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
}
