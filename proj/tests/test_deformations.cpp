#include <doctest.h>

#include <random>

#include "fcontact/catalog.hpp"
#include "fcontact/deformations.hpp"

using namespace fcontact;

namespace {

Eigen::MatrixXd rotation2(double angle) {
  Eigen::MatrixXd A(2, 2);
  A << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return A;
}

// Haar-ish random orthogonal matrix with row sums bounded away from zero.
Eigen::MatrixXd random_orthogonal(int s, std::mt19937_64& gen, double floor = 0.05) {
  auto normal = [&gen] {
    double u1 = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
    double u2 = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  for (;;) {
    Eigen::MatrixXd M(s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) M(i, j) = normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::MatrixXd Q = qr.householderQ();
    if (Q.rowwise().sum().cwiseAbs().minCoeff() >= floor) return Q;
  }
}

Eigen::VectorXd random_coeffs(int m, std::mt19937_64& gen, double scale = 0.5) {
  Eigen::VectorXd c(m);
  for (int i = 0; i < m; ++i)
    c[i] = (static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * scale;
  return c;
}

}  // namespace

TEST_CASE("rotation matrix validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(RotationMatrix{bad}, PreconditionError);
  // orthogonal but with a zero row sum
  Eigen::MatrixXd zero_sum(2, 2);
  zero_sum << M_SQRT1_2, -M_SQRT1_2, M_SQRT1_2, M_SQRT1_2;
  // row 1 sums to 0
  CHECK_THROWS_AS(RotationMatrix{zero_sum}, PreconditionError);
  CHECK_NOTHROW(RotationMatrix{rotation2(M_PI / 6.0)});
}

TEST_CASE("rotation by the identity is the identity transformation") {
  const auto entry = catalog_get("s-model", 1, 2);
  const RotationMatrix I(Eigen::MatrixXd::Identity(2, 2));
  const auto rotated = rotate(entry.structure, I);
  const auto points = sample_points(entry.structure.chart, 32, 11);
  CHECK(structure_max_difference(entry.structure, rotated, points) == 0.0);
  const auto anti = antirotate(entry.structure, I);
  CHECK(structure_max_difference(entry.structure, anti, points) == 0.0);
}

TEST_CASE("the swap matrix exchanges the two characteristic pairs") {
  const auto entry = catalog_get("s-model", 1, 2);
  Eigen::MatrixXd swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;  // row sums (1, 1)
  const auto rotated = rotate(entry.structure, RotationMatrix(swap));
  for (const auto& p : sample_points(entry.structure.chart, 32, 12)) {
    CHECK((rotated.eta[0].value(p) - entry.structure.eta[1].value(p))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((rotated.eta[1].value(p) - entry.structure.eta[0].value(p))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((rotated.xi[0].value(p) - entry.structure.xi[1].value(p))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((rotated.g.value(p) - entry.structure.g.value(p)).cwiseAbs().maxCoeff() <=
          1e-15);
  }
}

TEST_CASE("rotation by pi/6 preserves level S and the fundamental form") {
  const auto entry = catalog_get("s-model", 1, 2);
  const RotationMatrix A(rotation2(M_PI / 6.0));
  const auto rotated = rotate(entry.structure, A);
  const auto report = verify(rotated, Level::S);
  CHECK(report.passed());
  CHECK(report.max_residual() <= 1e-9);
  for (const auto& p : sample_points(entry.structure.chart, 32, 13)) {
    const auto diff = fundamental_form_frame(entry.structure, p) -
                      fundamental_form_frame(rotated, p);
    CHECK(diff.cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("rotation and anti-rotation invert each other") {
  std::mt19937_64 gen(2025);
  for (int s : {2, 3}) {
    const auto entry = catalog_get("s-model", 1, s);
    const auto points = sample_points(entry.structure.chart, 32, 14);
    for (int trial = 0; trial < 5; ++trial) {
      const RotationMatrix A(random_orthogonal(s, gen));
      const auto there = antirotate(rotate(entry.structure, A), A);
      CHECK(structure_max_difference(entry.structure, there, points) <= 1e-12);
      const auto back = rotate(antirotate(entry.structure, A), A);
      CHECK(structure_max_difference(entry.structure, back, points) <= 1e-12);
    }
  }
}

TEST_CASE("base changes leave the characteristic span invariant pointwise") {
  const auto entry = catalog_get("s-model", 1, 3);
  std::mt19937_64 gen(31);
  const RotationMatrix A(random_orthogonal(3, gen));
  const auto rotated = rotate(entry.structure, A);
  const auto anti = antirotate(entry.structure, A);
  for (const auto& p : sample_points(entry.structure.chart, 16, 15)) {
    Eigen::MatrixXd span(entry.structure.dim(), 3);
    for (int i = 0; i < 3; ++i) span.col(i) = entry.structure.xi[i].value(p);
    const auto solver = span.colPivHouseholderQr();
    for (const auto* S : {&rotated, &anti}) {
      for (int i = 0; i < 3; ++i) {
        const Eigen::VectorXd v = S->xi[i].value(p);
        const Eigen::VectorXd coeffs = solver.solve(v);
        CHECK((span * coeffs - v).cwiseAbs().maxCoeff() <= 1e-10);
      }
    }
  }
}

TEST_CASE("s = 1 base changes are the identity: the sign cancels against c") {
  // A = [-1] gives eta' = a c eta = eta and xi' = (a / c) xi = xi.
  const auto entry = catalog_get("s-model", 0, 1);
  Eigen::MatrixXd flip(1, 1);
  flip << -1.0;
  const auto rotated = rotate(entry.structure, RotationMatrix(flip));
  const auto points = sample_points(entry.structure.chart, 8, 30);
  CHECK(structure_max_difference(entry.structure, rotated, points) == 0.0);
  const auto anti = antirotate(entry.structure, RotationMatrix(flip));
  CHECK(structure_max_difference(entry.structure, anti, points) == 0.0);
}

TEST_CASE("type2 with zero forms is the identity") {
  const auto entry = catalog_get("s-model", 1, 2);
  std::vector<OneForm> theta(2, OneForm::constant(4, Eigen::VectorXd::Zero(4)));
  const auto deformed = type2(entry.structure, theta);
  const auto points = sample_points(entry.structure.chart, 32, 16);
  CHECK(structure_max_difference(entry.structure, deformed, points) == 0.0);
}

TEST_CASE("type2 with constant horizontal forms preserves level S") {
  const auto entry = catalog_get("s-model", 1, 2);
  std::mt19937_64 gen(17);
  std::vector<OneForm> theta;
  for (int i = 0; i < 2; ++i)
    theta.push_back(make_theta(entry, random_coeffs(2, gen)));
  const auto deformed = type2(entry.structure, theta);
  const auto report = verify(deformed, Level::S);
  CHECK(report.passed());
  CHECK(report.max_residual() <= 1e-9);

  // xi is untouched, bit for bit
  const auto points = sample_points(entry.structure.chart, 32, 18);
  for (const auto& p : points)
    for (int i = 0; i < 2; ++i)
      CHECK((deformed.xi[i].value(p) - entry.structure.xi[i].value(p))
                .cwiseAbs()
                .maxCoeff() == 0.0);

  // f_bar^2 = -id + sum eta_bar_i x xi_i
  for (const auto& p : points) {
    const auto F = deformed.f.value(p);
    Eigen::MatrixXd rhs = -Eigen::MatrixXd::Identity(4, 4);
    for (int i = 0; i < 2; ++i)
      rhs += deformed.xi[i].value(p) * deformed.eta[i].value(p).transpose();
    CHECK((F * F - rhs).cwiseAbs().maxCoeff() <= 1e-9);
  }

  // d eta_bar = d eta on the coordinate frame
  for (const auto& p : points)
    for (int i = 0; i < 2; ++i) {
      const VecJet before = entry.structure.eta[i].jet(p);
      const VecJet after = deformed.eta[i].jet(p);
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
          CHECK(std::abs(d_oneform_frame(before, a, b) -
                         d_oneform_frame(after, a, b)) <= 1e-12);
    }
}

TEST_CASE("type2 rejects forms that are not closed or not basic") {
  const auto entry = catalog_get("s-model", 1, 2);
  const auto& chart = entry.structure.chart;
  // theta = y1 dx1 is horizontal but not closed
  std::vector<OneForm> not_closed = {
      OneForm::from_exprs(chart, {Expr::parse("y1", chart), Expr::parse("0", chart),
                                  Expr::parse("0", chart), Expr::parse("0", chart)}),
      OneForm::constant(4, Eigen::VectorXd::Zero(4))};
  CHECK_THROWS_AS(type2(entry.structure, not_closed), PreconditionError);

  // theta = dz1 is closed but pairs with xi_1
  std::vector<OneForm> not_basic = {
      OneForm::constant(4, Eigen::Vector4d(0.0, 0.0, 1.0, 0.0)),
      OneForm::constant(4, Eigen::VectorXd::Zero(4))};
  CHECK_THROWS_AS(type2(entry.structure, not_basic), PreconditionError);

  const auto pre = type2_preconditions(entry.structure, not_basic);
  CHECK(pre.annihilates_xi[0] > 0.1);
  CHECK(pre.closed[0] <= 1e-15);
}

TEST_CASE("type2 composes additively and -theta inverts") {
  const auto entry = catalog_get("s-model", 1, 2);
  std::mt19937_64 gen(19);
  std::vector<OneForm> theta, theta2, sum, neg;
  for (int i = 0; i < 2; ++i) {
    const Eigen::VectorXd a = random_coeffs(2, gen);
    const Eigen::VectorXd b = random_coeffs(2, gen);
    theta.push_back(make_theta(entry, a));
    theta2.push_back(make_theta(entry, b));
    sum.push_back(make_theta(entry, a + b));
    neg.push_back(make_theta(entry, -a));
  }
  const auto points = sample_points(entry.structure.chart, 32, 20);
  const auto two_steps = type2(type2(entry.structure, theta), theta2);
  const auto one_step = type2(entry.structure, sum);
  CHECK(structure_max_difference(two_steps, one_step, points) <= 1e-10);

  const auto back = type2(type2(entry.structure, theta), neg);
  CHECK(structure_max_difference(entry.structure, back, points) <= 1e-10);
}

TEST_CASE("rotation and type2 commute through the coefficient transform") {
  std::mt19937_64 gen(21);
  for (int s : {2, 3}) {
    const auto entry = catalog_get("s-model", 1, s);
    const RotationMatrix A(random_orthogonal(s, gen));
    std::vector<OneForm> theta;
    for (int i = 0; i < s; ++i)
      theta.push_back(make_theta(entry, random_coeffs(2, gen)));
    const auto report = compose_checks(entry.structure, A, theta);
    CHECK(report.max_difference() <= 1e-10);
  }

  // trivial cases: theta = 0 reduces to a plain rotation, A = I to plain type2
  const auto entry = catalog_get("s-model", 1, 2);
  std::vector<OneForm> zero(2, OneForm::constant(4, Eigen::VectorXd::Zero(4)));
  const auto z = compose_checks(entry.structure, RotationMatrix(rotation2(0.4)), zero);
  CHECK(z.max_difference() <= 1e-14);
  std::vector<OneForm> theta;
  for (int i = 0; i < 2; ++i) theta.push_back(make_theta(entry, random_coeffs(2, gen)));
  const auto w = compose_checks(entry.structure,
                                RotationMatrix(Eigen::MatrixXd::Identity(2, 2)), theta);
  CHECK(w.max_difference() <= 1e-14);
}
