#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "fcontact/errors.hpp"

namespace fcontact {

/// Matrix exponential by scaling-and-squaring with a Taylor series truncated
/// at term magnitude 1e-15. For skew input the result is orthogonal to
/// rounding.
Eigen::MatrixXd expm(const Eigen::MatrixXd& X);

/// c_k(A) = Σ_j a_kj.
Eigen::VectorXd row_sums(const Eigen::MatrixXd& A);

/// The fixed target direction v = (-1/(s-1), ..., -1/(s-1), 1).
Eigen::VectorXd v_vector(int s);

/// h(A) = A^T diag(1/c_i(A)) v. Requires s >= 2 and |c_i(A)| >= 1e-8; on the
/// orthogonal group the image lies in the trace-zero hyperplane V.
Eigen::VectorXd h_map(const Eigen::MatrixXd& A);

/// The differential of h at the identity, (dh)_I(X) = X^T v - diag(c_i(X)) v,
/// defined on skew-symmetric X (|X + X^T|_max <= 1e-10 enforced).
Eigen::VectorXd dh_identity(const Eigen::MatrixXd& X);

/// Numerical rank of (dh)_I over a basis of skew matrices (singular values
/// above 1e-10), after checking that the image lies in V. Throws
/// PreconditionError if the rank falls below s - 1, the dimension of V.
int image_rank(int s);

/// A target in the trace-zero hyperplane V ⊂ R^s. Construction rejects
/// vectors with |Σ u_i| > 1e-10.
class TargetVector {
 public:
  explicit TargetVector(Eigen::VectorXd u);

  int s() const { return static_cast<int>(u_.size()); }
  const Eigen::VectorXd& coords() const { return u_; }

 private:
  Eigen::VectorXd u_;
};

struct RotationSolveOptions {
  int max_iterations = 200;
  int restarts = 8;
  std::uint64_t seed = 42;
  double residual_tol = 1e-10;
  double fd_step = 1e-7;
};

struct RotationSolution {
  Eigen::MatrixXd A;     // orthogonal, h(A) = target
  Eigen::MatrixXd skew;  // A = expm(skew)
  Eigen::VectorXd row_sums;
  double residual = 0.0;
  int iterations = 0;
  int restarts_used = 0;
};

/// Finds A in O(s) with nonzero row sums and h(A) = u, by damped Gauss-Newton
/// on skew parameters with the exponential retraction, starting at the
/// identity (h(I) = v) with seeded random restarts. Throws NoConvergenceError
/// (carrying the best residual) when the target is out of reach.
RotationSolution solve_rotation(const TargetVector& u,
                                const RotationSolveOptions& opts = {});

}  // namespace fcontact
