#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fcontact/chart.hpp"
#include "fcontact/dual.hpp"
#include "fcontact/errors.hpp"

namespace fcontact {

/// Named constants bound when an expression is parsed. They become numeric
/// literals in the tree; nothing is resolved at evaluation time.
using Params = std::map<std::string, double>;

/// Immutable arithmetic expression over the coordinates of one chart.
///
/// Grammar (documented in the README):
///   expr    := term (('+'|'-') term)*
///   term    := unary (('*'|'/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' ['-'] integer)?
///   primary := number | name | name '(' expr ')' | '(' expr ')'
/// with functions sin, cos, exp and integer-only exponents.
class Expr {
 public:
  Expr() = default;  // the zero expression

  /// Parses `text` against the chart's coordinate names and the given
  /// parameters. Throws ParseError with byte offset and 1-based line/column.
  static Expr parse(std::string_view text, const Chart& chart,
                    const Params& params = {});

  static Expr constant(double value);
  static Expr coordinate(const Chart& chart, int index);

  /// Evaluates at coordinates of scalar type S (double or Dual). Throws
  /// DomainError on singular arithmetic.
  template <class S>
  S eval(const std::vector<S>& coords) const;

  double eval_at(const Point& p) const;
  Dual eval_dual(const Point& p) const;

  /// Exact symbolic partial derivative with respect to coordinate `var`.
  Expr derivative(int var) const;

  /// Canonical fully-parenthesized rendering; parse(str()) reproduces the
  /// same tree (up to constant formatting, which round-trips bit-exactly).
  std::string str() const;

  bool is_zero_literal() const;

  // Structural constructors, used by generated tensors and by tests.
  friend Expr operator+(Expr a, Expr b);
  friend Expr operator-(Expr a, Expr b);
  friend Expr operator*(Expr a, Expr b);
  friend Expr operator/(Expr a, Expr b);
  friend Expr operator-(Expr a);
  static Expr pow(Expr base, int exponent);
  static Expr sin(Expr a);
  static Expr cos(Expr a);
  static Expr exp(Expr a);

 private:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp };

  struct Node {
    Kind kind = Kind::Const;
    double num = 0.0;        // Const
    int var = -1;            // Var
    std::string var_name;    // Var (for printing)
    int exponent = 0;        // Pow
    std::vector<Expr> kids;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Node n);
  const Node& node() const;

  std::shared_ptr<const Node> node_;
};

}  // namespace fcontact
