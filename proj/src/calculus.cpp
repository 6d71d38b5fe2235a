#include "fcontact/calculus.hpp"

namespace fcontact {

Eigen::VectorXd lie_bracket(const VecJet& X, const VecJet& Y) {
  return Y.jac * X.value - X.jac * Y.value;
}

Eigen::VectorXd pairing_gradient(const VecJet& theta, const VecJet& X) {
  return theta.jac.transpose() * X.value + X.jac.transpose() * theta.value;
}

double d_oneform(const VecJet& theta, const VecJet& X, const VecJet& Y) {
  const double x_of = X.value.dot(pairing_gradient(theta, Y));
  const double y_of = Y.value.dot(pairing_gradient(theta, X));
  const double on_bracket = theta.value.dot(lie_bracket(X, Y));
  return 0.5 * (x_of - y_of - on_bracket);
}

double d_oneform_frame(const VecJet& theta, int a, int b) {
  return 0.5 * (theta.jac(b, a) - theta.jac(a, b));
}

double lie_derivative_oneform(const VecJet& X, const VecJet& theta, const VecJet& Y) {
  return X.value.dot(pairing_gradient(theta, Y)) -
         theta.value.dot(lie_bracket(X, Y));
}

Eigen::MatrixXd lie_derivative_t11(const VecJet& X, const MatJet& F) {
  const int n = static_cast<int>(F.value.rows());
  Eigen::MatrixXd out = -X.jac * F.value + F.value * X.jac;
  for (int j = 0; j < n; ++j) out += X.value[j] * F.d[j];
  return out;
}

Eigen::MatrixXd lie_derivative_metric(const VecJet& X, const MatJet& G) {
  const int n = static_cast<int>(G.value.rows());
  Eigen::MatrixXd out = X.jac.transpose() * G.value + G.value * X.jac;
  for (int j = 0; j < n; ++j) out += X.value[j] * G.d[j];
  return out;
}

VecJet compose_jet(const MatJet& F, const VecJet& X) {
  const int n = static_cast<int>(X.value.size());
  VecJet out;
  out.value = F.value * X.value;
  out.jac.resize(n, n);
  for (int j = 0; j < n; ++j)
    out.jac.col(j) = F.d[j] * X.value + F.value * X.jac.col(j);
  return out;
}

Eigen::VectorXd nijenhuis(const MatJet& F, const VecJet& X, const VecJet& Y) {
  const VecJet fX = compose_jet(F, X);
  const VecJet fY = compose_jet(F, Y);
  return F.value * (F.value * lie_bracket(X, Y)) + lie_bracket(fX, fY) -
         F.value * lie_bracket(X, fY) - F.value * lie_bracket(fX, Y);
}

Eigen::VectorXd nijenhuis_frame(const MatJet& F, int a, int b) {
  const int n = static_cast<int>(F.value.rows());
  // Jacobians of the composite fields f ∂_a and f ∂_b.
  Eigen::MatrixXd Ja(n, n), Jb(n, n);
  for (int j = 0; j < n; ++j) {
    Ja.col(j) = F.d[j].col(a);
    Jb.col(j) = F.d[j].col(b);
  }
  const Eigen::VectorXd fa = F.value.col(a);
  const Eigen::VectorXd fb = F.value.col(b);
  // [∂_a, ∂_b] = 0, so the f^2 term drops.
  return (Jb * fa - Ja * fb) - F.value * (Jb.col(a)) + F.value * (Ja.col(b));
}

Eigen::VectorXd lie_bracket(const VectorField& X, const VectorField& Y, const Point& p) {
  if (X.dim() != Y.dim()) throw DimensionError("lie_bracket: dimension mismatch");
  return lie_bracket(X.jet(p), Y.jet(p));
}

double d_oneform(const OneForm& theta, const VectorField& X, const VectorField& Y,
                 const Point& p) {
  if (theta.dim() != X.dim() || X.dim() != Y.dim())
    throw DimensionError("d_oneform: dimension mismatch");
  return d_oneform(theta.jet(p), X.jet(p), Y.jet(p));
}

double lie_derivative_oneform(const VectorField& X, const OneForm& theta,
                              const VectorField& Y, const Point& p) {
  if (theta.dim() != X.dim() || X.dim() != Y.dim())
    throw DimensionError("lie_derivative_oneform: dimension mismatch");
  return lie_derivative_oneform(X.jet(p), theta.jet(p), Y.jet(p));
}

Eigen::VectorXd lie_derivative_t11(const VectorField& X, const Tensor11& f,
                                   const VectorField& Y, const Point& p) {
  if (f.dim() != X.dim() || X.dim() != Y.dim())
    throw DimensionError("lie_derivative_t11: dimension mismatch");
  return lie_derivative_t11(X.jet(p), f.jet(p)) * Y.value(p);
}

double lie_derivative_metric(const VectorField& X, const Metric& g,
                             const VectorField& Y, const VectorField& Z,
                             const Point& p) {
  if (g.dim() != X.dim() || X.dim() != Y.dim() || Y.dim() != Z.dim())
    throw DimensionError("lie_derivative_metric: dimension mismatch");
  return Y.value(p).dot(lie_derivative_metric(X.jet(p), g.jet(p)) * Z.value(p));
}

Eigen::VectorXd nijenhuis(const Tensor11& f, const VectorField& X,
                          const VectorField& Y, const Point& p) {
  if (f.dim() != X.dim() || X.dim() != Y.dim())
    throw DimensionError("nijenhuis: dimension mismatch");
  return nijenhuis(f.jet(p), X.jet(p), Y.jet(p));
}

}  // namespace fcontact
