#pragma once

#include <Eigen/Dense>

#include "fcontact/fields.hpp"

namespace fcontact {

// Jet-level kernels. All differential operators reduce to linear algebra on
// the jets (values + first derivatives) of their arguments, so verification
// can evaluate each field once per point and reuse it across every check.

/// [X, Y]^k = Σ_j (X^j ∂_j Y^k - Y^j ∂_j X^k).
Eigen::VectorXd lie_bracket(const VecJet& X, const VecJet& Y);

/// Exterior derivative of a 1-form with the 1/2 convention:
/// dθ(X, Y) = 1/2 (X(θ(Y)) - Y(θ(X)) - θ([X, Y])).
/// On coordinate fields this is 1/2 (∂_a θ_b - ∂_b θ_a).
double d_oneform(const VecJet& theta, const VecJet& X, const VecJet& Y);
double d_oneform_frame(const VecJet& theta, int a, int b);

/// (L_X θ)(Y) = X(θ(Y)) - θ([X, Y]).
double lie_derivative_oneform(const VecJet& X, const VecJet& theta, const VecJet& Y);

/// L_X f as a matrix: (L_X f)(∂_a) = column a.
Eigen::MatrixXd lie_derivative_t11(const VecJet& X, const MatJet& F);

/// L_X g as a symmetric matrix of frame values.
Eigen::MatrixXd lie_derivative_metric(const VecJet& X, const MatJet& G);

/// Nijenhuis torsion [f, f](X, Y) = f^2 [X,Y] + [fX, fY] - f [X, fY] - f [fX, Y].
Eigen::VectorXd nijenhuis(const MatJet& F, const VecJet& X, const VecJet& Y);
Eigen::VectorXd nijenhuis_frame(const MatJet& F, int a, int b);

// Field-level convenience wrappers evaluating jets at a point.

Eigen::VectorXd lie_bracket(const VectorField& X, const VectorField& Y, const Point& p);

double d_oneform(const OneForm& theta, const VectorField& X, const VectorField& Y,
                 const Point& p);

double lie_derivative_oneform(const VectorField& X, const OneForm& theta,
                              const VectorField& Y, const Point& p);

Eigen::VectorXd lie_derivative_t11(const VectorField& X, const Tensor11& f,
                                   const VectorField& Y, const Point& p);

double lie_derivative_metric(const VectorField& X, const Metric& g,
                             const VectorField& Y, const VectorField& Z,
                             const Point& p);

Eigen::VectorXd nijenhuis(const Tensor11& f, const VectorField& X,
                          const VectorField& Y, const Point& p);

/// Jet of the composite field p -> F(p) X(p) from the jets of its factors.
VecJet compose_jet(const MatJet& F, const VecJet& X);

/// Gradient of the scalar field p -> θ_p(X_p).
Eigen::VectorXd pairing_gradient(const VecJet& theta, const VecJet& X);

}  // namespace fcontact
