#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcontact/structures.hpp"

namespace fcontact {

/// A smooth map of a chart to itself, given by one expression per coordinate,
/// with an optional explicit inverse. When the inverse is supplied,
/// φ ∘ φ⁻¹ = id is validated at sample points.
class AutomorphismMap {
 public:
  AutomorphismMap(Chart chart, std::vector<Expr> components,
                  std::optional<std::vector<Expr>> inverse = std::nullopt,
                  const SampleSpec& validation_samples = {});

  const Chart& chart() const { return chart_; }
  const std::vector<Expr>& components() const { return comps_; }
  bool has_inverse() const { return inverse_.has_value(); }
  const std::vector<Expr>& inverse_components() const;

  Point apply(const Point& p) const;
  /// Differential dφ_p by dual evaluation: J(k, j) = ∂_j φ^k.
  Eigen::MatrixXd differential(const Point& p) const;

  /// The map with components and inverse swapped (requires an inverse).
  AutomorphismMap inverse_map() const;

 private:
  Chart chart_;
  std::vector<Expr> comps_;
  std::optional<std::vector<Expr>> inverse_;
};

struct IdentityResidual {
  std::string name;
  double max_residual = 0.0;
};

struct AutomorphismReport {
  std::vector<IdentityResidual> identities;
  bool inverse_checked = false;

  double max_residual() const;
  bool pass(double tol) const { return max_residual() <= tol; }
  const IdentityResidual* find(const std::string& name) const;
};

/// Checks the four tensor-preservation identities of an automorphism at
/// sample points: φ*η_i = η_i, φ*g = g, dφ ∘ f = f ∘ dφ, dφ(ξ_i) = ξ_i ∘ φ.
AutomorphismReport check_automorphism(const FStructure& S, const AutomorphismMap& phi,
                                      const SampleSpec& samples = {});

/// Lift to chart × R: one more characteristic pair and the completed metric.
/// The new coordinate is appended last and named "t" (fresh-named "t2", ...
/// when lifting repeatedly). Preserves the verification level.
FStructure lift(const FStructure& S);

/// The closed nowhere-vanishing form η = η_s - (1/(s-1)) (η_1 + ... + η_{s-1})
/// whose kernel cuts out the leaf used by `slice`. For a lifted structure its
/// components are exactly (0, ..., 0, 1).
OneForm leaf_form(const FStructure& S);

struct SliceOptions {
  SampleSpec samples;
  double tol = 1e-9;
};

/// Restriction to the {t = 0} hyperplane (t = last coordinate): inverse of
/// `lift` up to rounding. Requires leaf_form(S) to annihilate the slice, i.e.
/// to have vanishing non-t components at the sample points.
FStructure slice(const FStructure& S, const SliceOptions& opts = {});

/// Deck-transformation check for the Z-action (p, t) -> (φ(p), t + t0) on a
/// lifted structure; checks the inverse map as well when φ carries one.
AutomorphismReport check_deck_invariance(const FStructure& lifted,
                                         const AutomorphismMap& phi_base, double t0,
                                         const SampleSpec& samples = {});

}  // namespace fcontact
