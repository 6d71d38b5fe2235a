#include "fcontact/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace fcontact {

namespace {

constexpr int kMaxExponent = 64;

double checked_div(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return a / b;
}

Dual checked_div(const Dual& a, const Dual& b) { return a / b; }  // throws itself

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Expr Expr::make(Node n) {
  return Expr(std::make_shared<const Node>(std::move(n)));
}

const Expr::Node& Expr::node() const {
  static const Node zero{};
  return node_ ? *node_ : zero;
}

Expr Expr::constant(double value) {
  Node n;
  n.kind = Kind::Const;
  n.num = value;
  return make(std::move(n));
}

Expr Expr::coordinate(const Chart& chart, int index) {
  Node n;
  n.kind = Kind::Var;
  n.var = index;
  n.var_name = chart.coord_name(index);
  return make(std::move(n));
}

bool Expr::is_zero_literal() const {
  return node().kind == Kind::Const && node().num == 0.0;
}

Expr operator+(Expr a, Expr b) {
  Expr::Node n;
  n.kind = Expr::Kind::Add;
  n.kids = {std::move(a), std::move(b)};
  return Expr::make(std::move(n));
}

Expr operator-(Expr a, Expr b) {
  Expr::Node n;
  n.kind = Expr::Kind::Sub;
  n.kids = {std::move(a), std::move(b)};
  return Expr::make(std::move(n));
}

Expr operator*(Expr a, Expr b) {
  Expr::Node n;
  n.kind = Expr::Kind::Mul;
  n.kids = {std::move(a), std::move(b)};
  return Expr::make(std::move(n));
}

Expr operator/(Expr a, Expr b) {
  Expr::Node n;
  n.kind = Expr::Kind::Div;
  n.kids = {std::move(a), std::move(b)};
  return Expr::make(std::move(n));
}

Expr operator-(Expr a) {
  Expr::Node n;
  n.kind = Expr::Kind::Neg;
  n.kids = {std::move(a)};
  return Expr::make(std::move(n));
}

Expr Expr::pow(Expr base, int exponent) {
  Node n;
  n.kind = Kind::Pow;
  n.exponent = exponent;
  n.kids = {std::move(base)};
  return make(std::move(n));
}

Expr Expr::sin(Expr a) {
  Node n;
  n.kind = Kind::Sin;
  n.kids = {std::move(a)};
  return make(std::move(n));
}

Expr Expr::cos(Expr a) {
  Node n;
  n.kind = Kind::Cos;
  n.kids = {std::move(a)};
  return make(std::move(n));
}

Expr Expr::exp(Expr a) {
  Node n;
  n.kind = Kind::Exp;
  n.kids = {std::move(a)};
  return make(std::move(n));
}

template <class S>
S Expr::eval(const std::vector<S>& coords) const {
  const Node& n = node();
  switch (n.kind) {
    case Kind::Const:
      return S(n.num);
    case Kind::Var:
      if (n.var < 0 || n.var >= static_cast<int>(coords.size()))
        throw DimensionError("coordinate index out of range for this chart");
      return coords[n.var];
    case Kind::Add:
      return n.kids[0].eval(coords) + n.kids[1].eval(coords);
    case Kind::Sub:
      return n.kids[0].eval(coords) - n.kids[1].eval(coords);
    case Kind::Mul:
      return n.kids[0].eval(coords) * n.kids[1].eval(coords);
    case Kind::Div:
      return checked_div(n.kids[0].eval(coords), n.kids[1].eval(coords));
    case Kind::Neg:
      return -n.kids[0].eval(coords);
    case Kind::Pow:
      return ipow(n.kids[0].eval(coords), n.exponent);
    case Kind::Sin: {
      using std::sin;
      return sin(n.kids[0].eval(coords));
    }
    case Kind::Cos: {
      using std::cos;
      return cos(n.kids[0].eval(coords));
    }
    case Kind::Exp: {
      using std::exp;
      return exp(n.kids[0].eval(coords));
    }
  }
  throw Error("corrupt expression node");
}

template double Expr::eval<double>(const std::vector<double>&) const;
template Dual Expr::eval<Dual>(const std::vector<Dual>&) const;

double Expr::eval_at(const Point& p) const {
  std::vector<double> coords(p.data(), p.data() + p.size());
  return eval(coords);
}

Dual Expr::eval_dual(const Point& p) const {
  const int n = static_cast<int>(p.size());
  std::vector<Dual> coords;
  coords.reserve(n);
  for (int i = 0; i < n; ++i) coords.push_back(Dual::variable(p[i], i, n));
  return eval(coords);
}

Expr Expr::derivative(int var) const {
  const Node& n = node();
  switch (n.kind) {
    case Kind::Const:
      return constant(0.0);
    case Kind::Var:
      return constant(n.var == var ? 1.0 : 0.0);
    case Kind::Add:
      return n.kids[0].derivative(var) + n.kids[1].derivative(var);
    case Kind::Sub:
      return n.kids[0].derivative(var) - n.kids[1].derivative(var);
    case Kind::Mul:
      return n.kids[0].derivative(var) * n.kids[1] +
             n.kids[0] * n.kids[1].derivative(var);
    case Kind::Div:
      return (n.kids[0].derivative(var) * n.kids[1] -
              n.kids[0] * n.kids[1].derivative(var)) /
             (n.kids[1] * n.kids[1]);
    case Kind::Neg:
      return -n.kids[0].derivative(var);
    case Kind::Pow: {
      if (n.exponent == 0) return constant(0.0);
      return constant(static_cast<double>(n.exponent)) *
             pow(n.kids[0], n.exponent - 1) * n.kids[0].derivative(var);
    }
    case Kind::Sin:
      return cos(n.kids[0]) * n.kids[0].derivative(var);
    case Kind::Cos:
      return -(sin(n.kids[0]) * n.kids[0].derivative(var));
    case Kind::Exp:
      return exp(n.kids[0]) * n.kids[0].derivative(var);
  }
  throw Error("corrupt expression node");
}

std::string Expr::str() const {
  const Node& n = node();
  switch (n.kind) {
    case Kind::Const:
      return format_double(n.num);
    case Kind::Var:
      return n.var_name.empty() ? "#" + std::to_string(n.var) : n.var_name;
    case Kind::Add:
      return "(" + n.kids[0].str() + " + " + n.kids[1].str() + ")";
    case Kind::Sub:
      return "(" + n.kids[0].str() + " - " + n.kids[1].str() + ")";
    case Kind::Mul:
      return "(" + n.kids[0].str() + " * " + n.kids[1].str() + ")";
    case Kind::Div:
      return "(" + n.kids[0].str() + " / " + n.kids[1].str() + ")";
    case Kind::Neg:
      return "(-" + n.kids[0].str() + ")";
    case Kind::Pow:
      return "(" + n.kids[0].str() + ")^" + std::to_string(n.exponent);
    case Kind::Sin:
      return "sin(" + n.kids[0].str() + ")";
    case Kind::Cos:
      return "cos(" + n.kids[0].str() + ")";
    case Kind::Exp:
      return "exp(" + n.kids[0].str() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parser: recursive descent with offset / line / column tracking.
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }

  void advance() {
    if (done()) return;
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_space() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos, line, col);
  }
};

class Parser {
 public:
  Parser(std::string_view text, const Chart& chart, const Params& params)
      : cur_{text}, chart_(chart), params_(params) {}

  Expr run() {
    cur_.skip_space();
    if (cur_.done()) cur_.fail("empty expression");
    Expr e = expr();
    cur_.skip_space();
    if (!cur_.done()) cur_.fail("unexpected trailing input");
    return e;
  }

 private:
  Expr expr() {
    Expr e = term();
    for (;;) {
      cur_.skip_space();
      char c = cur_.peek();
      if (c == '+') {
        cur_.advance();
        e = std::move(e) + term();
      } else if (c == '-') {
        cur_.advance();
        e = std::move(e) - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      cur_.skip_space();
      char c = cur_.peek();
      if (c == '*') {
        cur_.advance();
        e = std::move(e) * unary();
      } else if (c == '/') {
        cur_.advance();
        e = std::move(e) / unary();
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    cur_.skip_space();
    if (cur_.peek() == '-') {
      cur_.advance();
      return -unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    cur_.skip_space();
    if (cur_.peek() != '^') return base;
    cur_.advance();
    cur_.skip_space();
    bool negative = false;
    if (cur_.peek() == '-') {
      negative = true;
      cur_.advance();
    }
    if (!std::isdigit(static_cast<unsigned char>(cur_.peek())))
      cur_.fail("integer exponent expected after '^'");
    long value = 0;
    while (std::isdigit(static_cast<unsigned char>(cur_.peek()))) {
      value = value * 10 + (cur_.peek() - '0');
      if (value > kMaxExponent)
        cur_.fail("exponent magnitude exceeds " + std::to_string(kMaxExponent));
      cur_.advance();
    }
    if (cur_.peek() == '.') cur_.fail("integer exponent expected after '^'");
    if (cur_.peek() == '^') cur_.fail("chained '^' is not supported; use parentheses");
    return Expr::pow(std::move(base), static_cast<int>(negative ? -value : value));
  }

  Expr primary() {
    cur_.skip_space();
    char c = cur_.peek();
    if (c == '(') {
      cur_.advance();
      Expr e = expr();
      cur_.skip_space();
      if (cur_.peek() != ')') cur_.fail("expected ')'");
      cur_.advance();
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (cur_.done()) cur_.fail("unexpected end of expression");
    cur_.fail(std::string("unexpected character '") + c + "'");
  }

  Expr number() {
    const std::size_t start = cur_.pos;
    while (std::isdigit(static_cast<unsigned char>(cur_.peek()))) cur_.advance();
    if (cur_.peek() == '.') {
      cur_.advance();
      while (std::isdigit(static_cast<unsigned char>(cur_.peek()))) cur_.advance();
    }
    if (cur_.peek() == 'e' || cur_.peek() == 'E') {
      cur_.advance();
      if (cur_.peek() == '+' || cur_.peek() == '-') cur_.advance();
      if (!std::isdigit(static_cast<unsigned char>(cur_.peek())))
        cur_.fail("malformed exponent in number literal");
      while (std::isdigit(static_cast<unsigned char>(cur_.peek()))) cur_.advance();
    }
    const std::string_view token = cur_.text.substr(start, cur_.pos - start);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
      cur_.fail("malformed number literal '" + std::string(token) + "'");
    return Expr::constant(value);
  }

  Expr identifier() {
    const std::size_t start = cur_.pos;
    const int line = cur_.line;
    const int col = cur_.col;
    while (std::isalnum(static_cast<unsigned char>(cur_.peek())) || cur_.peek() == '_')
      cur_.advance();
    const std::string name(cur_.text.substr(start, cur_.pos - start));
    if (name == "sin" || name == "cos" || name == "exp") {
      cur_.skip_space();
      if (cur_.peek() != '(')
        throw ParseError("function '" + name + "' requires parentheses", start, line, col);
      cur_.advance();
      Expr arg = expr();
      cur_.skip_space();
      if (cur_.peek() != ')') cur_.fail("expected ')'");
      cur_.advance();
      if (name == "sin") return Expr::sin(std::move(arg));
      if (name == "cos") return Expr::cos(std::move(arg));
      return Expr::exp(std::move(arg));
    }
    const int index = chart_.index_of(name);
    if (index >= 0) return Expr::coordinate(chart_, index);
    auto it = params_.find(name);
    if (it != params_.end()) return Expr::constant(it->second);
    throw ParseError("unknown identifier '" + name + "'", start, line, col);
  }

  Cursor cur_;
  const Chart& chart_;
  const Params& params_;
};

}  // namespace

Expr Expr::parse(std::string_view text, const Chart& chart, const Params& params) {
  return Parser(text, chart, params).run();
}

}  // namespace fcontact
