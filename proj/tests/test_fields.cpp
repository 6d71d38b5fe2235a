#include <doctest.h>

#include "fcontact/fields.hpp"

using namespace fcontact;

namespace {

Chart plane() { return Chart({"x1", "x2"}); }

}  // namespace

TEST_CASE("vector field jets expose values and jacobians") {
  Chart chart = plane();
  const auto X = VectorField::from_exprs(
      chart, {Expr::parse("x1*x2", chart), Expr::parse("x2^2", chart)});
  Point p(2);
  p << 2.0, 3.0;
  const VecJet j = X.jet(p);
  CHECK(j.value[0] == 6.0);
  CHECK(j.value[1] == 9.0);
  CHECK(j.jac(0, 0) == 3.0);  // d(x1 x2)/dx1
  CHECK(j.jac(0, 1) == 2.0);
  CHECK(j.jac(1, 0) == 0.0);
  CHECK(j.jac(1, 1) == 6.0);
}

TEST_CASE("metric mirrors the upper triangle") {
  Chart chart = plane();
  const auto g = Metric::from_exprs(
      chart, {{Expr::parse("1", chart), Expr::parse("x1", chart)},
              {Expr::parse("137", chart), Expr::parse("2", chart)}});
  Point p(2);
  p << 0.5, 0.0;
  const auto G = g.value(p);
  CHECK(G(0, 1) == 0.5);
  CHECK(G(1, 0) == 0.5);  // lower triangle ignored, mirrored from upper
  CHECK(G(1, 1) == 2.0);
}

TEST_CASE("compose and pairing build working closures") {
  Chart chart = plane();
  const auto f = Tensor11::from_exprs(
      chart, {{Expr::parse("0", chart), Expr::parse("-1", chart)},
              {Expr::parse("1", chart), Expr::parse("0", chart)}});
  const auto X = VectorField::from_exprs(
      chart, {Expr::parse("x1", chart), Expr::parse("x2", chart)});
  const auto fX = compose(f, X);
  Point p(2);
  p << 0.25, -0.75;
  CHECK(fX.value(p)[0] == 0.75);
  CHECK(fX.value(p)[1] == 0.25);
  // Dual path of the composite agrees with the hand jacobian of (-x2, x1).
  const VecJet j = fX.jet(p);
  CHECK(j.jac(0, 1) == -1.0);
  CHECK(j.jac(1, 0) == 1.0);

  const auto theta = OneForm::from_exprs(
      chart, {Expr::parse("x2", chart), Expr::parse("0", chart)});
  const auto s = pairing(theta, X);
  CHECK(s.value(p) == -0.1875);  // x2 * x1
  const Dual d = s.dual(p);
  CHECK(d.grad(2)[0] == -0.75);
  CHECK(d.grad(2)[1] == 0.25);
}

TEST_CASE("lincomb of forms and fields") {
  Chart chart = plane();
  const auto a = OneForm::constant(2, Eigen::Vector2d(1.0, 0.0));
  const auto b = OneForm::constant(2, Eigen::Vector2d(0.0, 1.0));
  const auto combo = lincomb({2.0, -3.0}, {a, b});
  Point p = Point::Zero(2);
  CHECK(combo.value(p)[0] == 2.0);
  CHECK(combo.value(p)[1] == -3.0);
  CHECK_THROWS_AS(lincomb({1.0}, {a, b}), DimensionError);
}

TEST_CASE("differential of a scalar field is exact") {
  Chart chart = plane();
  const Expr h = Expr::parse("x1^2*x2 + cos(x2)", chart);
  const auto dh = OneForm::differential(chart, h);
  for (const auto& p : sample_points(chart, 10, 2)) {
    const auto v = dh.value(p);
    CHECK(v[0] == doctest::Approx(2.0 * p[0] * p[1]).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(p[0] * p[0] - std::sin(p[1])).epsilon(1e-14));
  }
}
