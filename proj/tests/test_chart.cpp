#include <doctest.h>

#include <random>

#include "fcontact/chart.hpp"
#include "fcontact/expr.hpp"
#include "fcontact/fields.hpp"

using namespace fcontact;

TEST_CASE("sampling is deterministic, in-box and duplicate free") {
  Chart chart({"x1"}, {Interval{-1.0, 1.0}});
  const auto a = sample_points(chart, 3, 7);
  const auto b = sample_points(chart, 3, 7);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(chart.contains(a[i]));
  }
  CHECK(a[0] != a[1]);
  CHECK(a[1] != a[2]);
  CHECK(a[0] != a[2]);

  const auto c = sample_points(chart, 3, 8);
  CHECK(a[0] != c[0]);
}

TEST_CASE("chart construction rejects bad input") {
  CHECK_THROWS_AS(Chart({"x1", "x1"}), PreconditionError);
  CHECK_THROWS_AS(Chart({"x1"}, {Interval{0.0, 0.0}}), PreconditionError);
  CHECK_THROWS_AS(Chart({"x1"}, {Interval{0.0, 1e-12}}), PreconditionError);
  CHECK_THROWS_AS(Chart({"sin"}), PreconditionError);
  CHECK_THROWS_AS(Chart({"2x"}), PreconditionError);
  CHECK_THROWS_AS(Chart({}), DimensionError);
  CHECK_THROWS_AS(Chart(std::vector<std::string>(17, "x")), DimensionError);
}

TEST_CASE("eval_dual: value equals plain evaluation, partials are exact") {
  Chart chart({"x1", "x2"});
  const auto f = ScalarField::from_expr(chart, Expr::parse("x1*x2", chart));
  Point p(2);
  p << 2.0, 3.0;
  const Dual d = f.dual(p);
  CHECK(d.value() == 6.0);
  CHECK(d.grad(2)[0] == 3.0);
  CHECK(d.grad(2)[1] == 2.0);
  CHECK(f.value(p) == d.value());

  Chart line({"x1"});
  const auto s = ScalarField::from_expr(line, Expr::parse("sin(x1)", line));
  Point origin(1);
  origin << 0.0;
  const Dual ds = s.dual(origin);
  CHECK(ds.value() == 0.0);
  CHECK(ds.grad(1)[0] == 1.0);
}

TEST_CASE("singular component functions raise domain errors") {
  Chart chart({"x1", "x2"});
  const auto f = ScalarField::from_expr(chart, Expr::parse("x1^2/x2", chart));
  Point p(2);
  p << 1.0, 0.0;
  CHECK_THROWS_AS(f.value(p), DomainError);
  CHECK_THROWS_AS(f.dual(p), DomainError);
}

TEST_CASE("apply: identity tensor, metric pairing, dimension mismatch") {
  const int n = 2;
  const auto id = Tensor11::identity(n);
  Point p(2);
  p << 0.3, -0.4;
  Eigen::VectorXd v(2);
  v << 3.0, 4.0;
  CHECK((id.apply(p, v) - v).cwiseAbs().maxCoeff() == 0.0);

  const auto g = Metric::identity(n);
  CHECK(g.apply(p, v, v) == 25.0);

  Eigen::VectorXd bad(3);
  bad << 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(id.apply(p, bad), DimensionError);
  CHECK_THROWS_AS(g.apply(p, v, bad), DimensionError);
}

TEST_CASE("bilinearity of metric application at random samples") {
  Chart chart({"x1", "x2"});
  const auto g = Metric::from_exprs(
      chart, {{Expr::parse("1 + x1^2", chart), Expr::parse("x1*x2", chart)},
              {Expr::parse("0", chart), Expr::parse("2 + x2^2", chart)}});
  std::mt19937_64 gen(5);
  auto u = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  for (const auto& p : sample_points(chart, 20, 3)) {
    Eigen::VectorXd v(2), w(2), z(2);
    v << u(), u();
    w << u(), u();
    z << u(), u();
    const double a = u(), b = u();
    const double lhs = g.apply(p, a * v + b * w, z);
    const double rhs = a * g.apply(p, v, z) + b * g.apply(p, w, z);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("AD partials match central differences on sampled DSL fields") {
  Chart chart({"x1", "x2", "x3"});
  const std::vector<std::string> exprs = {
      "x1*x2 + sin(x3)", "exp(x1 - x2^2)", "x1^3 - 2*x2/(x3 + 4)",
      "cos(x1*x2)*x3 + 0.5"};
  const double h = 1e-5;
  for (const auto& text : exprs) {
    const auto f = ScalarField::from_expr(chart, Expr::parse(text, chart));
    for (const auto& p : sample_points(chart, 100, 42)) {
      const Dual d = f.dual(p);
      for (int j = 0; j < 3; ++j) {
        Point hi = p, lo = p;
        hi[j] += h;
        lo[j] -= h;
        const double fd = (f.value(hi) - f.value(lo)) / (2.0 * h);
        CHECK(std::abs(d.grad(3)[j] - fd) <= 1e-5 * (1.0 + std::abs(d.value())));
      }
    }
  }
}

TEST_CASE("fresh coordinate names avoid collisions") {
  Chart chart({"x1", "t"});
  CHECK(fresh_coord_name(chart, "t") == "t2");
  CHECK(fresh_coord_name(chart, "u") == "u");
}
