#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcontact/calculus.hpp"
#include "fcontact/chart.hpp"
#include "fcontact/fields.hpp"

namespace fcontact {

/// Verification hierarchy. Each level includes everything below it.
enum class Level { None, MetricF, FContact, FKContact, S };

std::string level_name(Level l);
std::optional<Level> level_from_name(const std::string& name);

/// The bundle (f, ξ_1..ξ_s, η_1..η_s, g) on a chart of dimension 2n + s.
struct FStructure {
  FStructure(Chart chart, int n, int s, Tensor11 f, std::vector<VectorField> xi,
             std::vector<OneForm> eta, Metric g);

  int dim() const { return chart.dim(); }

  Chart chart;
  int n;
  int s;
  Tensor11 f;
  std::vector<VectorField> xi;
  std::vector<OneForm> eta;
  Metric g;
};

struct AxiomResult {
  std::string name;
  Level level = Level::MetricF;  // the level this axiom belongs to
  double max_residual = 0.0;
  bool pass = false;
  int points_evaluated = 0;
};

struct VerificationReport {
  Level requested = Level::S;
  Level achieved = Level::None;
  int samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::vector<AxiomResult> axioms;
  std::vector<std::string> errors;  // evaluation (domain) errors, if any

  bool passed() const;
  const AxiomResult* find(const std::string& name) const;
  double max_residual() const;
};

struct VerifyOptions {
  SampleSpec samples;
  double tol = 1e-9;
  bool fd_check = false;
  double fd_step = 1e-5;
  double fd_tol = 1e-5;
};

/// Checks the structure axioms up to `target` at seeded sample points.
/// Residuals are normalized by (1 + max tensor magnitude at the point);
/// every axiom of every level up to `target` is reported even past a failure,
/// and axioms hit by domain errors are reported with the points they did
/// evaluate at.
VerificationReport verify(const FStructure& S, Level target,
                          const VerifyOptions& opts = {});

/// ω(X, Y) = g(X, fY) at p.
double fundamental_form(const FStructure& S, const Eigen::VectorXd& X,
                        const Eigen::VectorXd& Y, const Point& p);

/// ω on the coordinate frame at p, as the matrix ω(∂_a, ∂_b).
Eigen::MatrixXd fundamental_form_frame(const FStructure& S, const Point& p);

/// Largest absolute componentwise difference of all structure tensors
/// (f, g, ξ_i, η_i) over the given points. Structures must share dimensions.
double structure_max_difference(const FStructure& A, const FStructure& B,
                                const std::vector<Point>& points);

/// Largest |AD partial - central finite difference| over all components of
/// all structure tensors at the given points, normalized by (1 + |value|).
double fd_cross_check(const FStructure& S, const std::vector<Point>& points,
                      double step);

}  // namespace fcontact
