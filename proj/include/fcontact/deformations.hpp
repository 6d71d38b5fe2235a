#pragma once

#include <Eigen/Dense>

#include "fcontact/structures.hpp"

namespace fcontact {

/// Orthogonal s x s base-change matrix with nonzero row sums. Row sums below
/// the floor are refused: they would put 1/c_i blow-up into the new tensors.
class RotationMatrix {
 public:
  static constexpr double kOrthoTol = 1e-10;
  static constexpr double kRowSumFloor = 1e-8;

  /// Throws PreconditionError if A is not orthogonal to kOrthoTol or any
  /// |row sum| is below kRowSumFloor.
  explicit RotationMatrix(Eigen::MatrixXd A);

  int s() const { return static_cast<int>(A_.rows()); }
  const Eigen::MatrixXd& matrix() const { return A_; }
  const Eigen::VectorXd& row_sums() const { return c_; }

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd c_;
};

/// Rotation: η'_i = Σ_t a_ti c_t η_t, ξ'_i = Σ_t (a_ti / c_t) ξ_t,
/// g' = g - Σ η_α ⊗ η_α + Σ η'_α ⊗ η'_α, f' = f. Preserves the verification
/// level and the fundamental 2-form.
FStructure rotate(const FStructure& S, const RotationMatrix& A);

/// Anti-rotation: η̃_i = (1/c_i) Σ_t a_it η_t, ξ̃_i = c_i Σ_t a_it ξ_t, and the
/// analogous metric; the inverse of the rotation by the same matrix.
FStructure antirotate(const FStructure& S, const RotationMatrix& A);

struct Type2Options {
  SampleSpec samples;
  double tol = 1e-9;
  bool check_preconditions = true;
};

/// Residuals of the admissibility conditions of the forms θ_i:
/// closed (dθ_i = 0), vanishing on the characteristic fields, and invariant
/// along them.
struct Type2Preconditions {
  std::vector<double> closed;
  std::vector<double> annihilates_xi;
  std::vector<double> lie_along_xi;

  double max_residual() const;
  bool ok(double tol) const { return max_residual() <= tol; }
};

Type2Preconditions type2_preconditions(const FStructure& S,
                                       const std::vector<OneForm>& theta,
                                       const SampleSpec& samples = {});

/// Type II deformation: η̄_i = η_i + θ_i, ξ unchanged,
/// ḡ = g + Σ (η_i ⊗ θ_i + θ_i ⊗ η̄_i), f̄ = f - Σ (θ_i ∘ f) ⊗ ξ_i.
/// Throws PreconditionError (with per-form residuals) unless every θ_i is
/// closed and basic at the sample points.
FStructure type2(const FStructure& S, const std::vector<OneForm>& theta,
                 const Type2Options& opts = {});

struct ComposeReport {
  double max_f = 0.0;
  double max_g = 0.0;
  double max_xi = 0.0;
  double max_eta = 0.0;

  double max_difference() const;
  bool agree(double tol) const { return max_difference() <= tol; }
};

/// Compares rotate-then-type2(θ) against type2(θ̃)-then-rotate, where
/// θ̃_i = (1/c_i) Σ_k a_ik θ_k. The two paths produce the same structure.
ComposeReport compose_checks(const FStructure& S, const RotationMatrix& A,
                             const std::vector<OneForm>& theta,
                             const Type2Options& opts = {});

}  // namespace fcontact
