#include <doctest.h>

#include "fcontact/catalog.hpp"
#include "fcontact/deformations.hpp"

using namespace fcontact;

TEST_CASE("every catalog entry passes its declared level") {
  for (const auto& [name, n, s] : {std::tuple<const char*, int, int>{
                                       "sasakian-model", 1, 1},
                                   {"sasakian-model", 2, 1},
                                   {"s-model", 1, 2},
                                   {"s-model", 1, 3},
                                   {"s-model", 0, 1},
                                   {"s-model", 2, 2},
                                   {"lifted-k", 1, 2}}) {
    const auto entry = catalog_get(name, n, s);
    const auto report = verify(entry.structure, entry.declared_level);
    INFO(name, " n=", n, " s=", s);
    CHECK(report.passed());
    CHECK(report.max_residual() <= 1e-9);
  }
}

TEST_CASE("catalog companions are closed and basic to rounding") {
  for (const auto& [name, n, s] : {std::tuple<const char*, int, int>{
                                       "sasakian-model", 2, 1},
                                   {"s-model", 1, 2},
                                   {"lifted-k", 1, 2}}) {
    const auto entry = catalog_get(name, n, s);
    std::vector<OneForm> theta;
    for (int i = 0; i < entry.s; ++i)
      theta.push_back(entry.theta_basis[i % entry.theta_basis.size()]);
    const auto pre = type2_preconditions(entry.structure, theta);
    INFO(name, " n=", n, " s=", s);
    CHECK(pre.max_residual() <= 1e-12);
  }
}

TEST_CASE("unknown names and out-of-range parameters are rejected") {
  CHECK_THROWS_AS(catalog_get("torus", 1, 1), ConfigError);
  CHECK_THROWS_AS(catalog_get("s-model", 5, 2), ConfigError);
  CHECK_THROWS_AS(catalog_get("s-model", 1, 0), ConfigError);
  CHECK_THROWS_AS(catalog_get("sasakian-model", 1, 2), ConfigError);
  CHECK_THROWS_AS(catalog_get("lifted-k", 1, 1), ConfigError);
}

TEST_CASE("make_theta spans only the horizontal directions") {
  const auto entry = catalog_get("s-model", 2, 2);
  Eigen::VectorXd coeffs(4);
  coeffs << 1.0, -2.0, 0.5, 0.25;
  const auto theta = make_theta(entry, coeffs);
  const Point p = Point::Zero(entry.structure.dim());
  const auto v = theta.value(p);
  CHECK(v[0] == 1.0);
  CHECK(v[3] == 0.25);
  CHECK(v[4] == 0.0);  // no dz legs
  CHECK(v[5] == 0.0);
  CHECK_THROWS_AS(make_theta(entry, Eigen::VectorXd::Zero(3)), DimensionError);
}
