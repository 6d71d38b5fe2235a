#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "fcontact/chart.hpp"
#include "fcontact/dual.hpp"
#include "fcontact/expr.hpp"

namespace fcontact {

template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

/// Seeds the coordinates of p as dual variables.
std::vector<Dual> dual_coords(const Point& p);

/// One scalar component of a tensor field: a function of the chart
/// coordinates evaluable at double and at Dual scalars. Deformed structures
/// compose these as closures over the original components, so the algebraic
/// identities of the constructions hold to rounding, never to a re-fitting
/// tolerance.
class ComponentFn {
 public:
  ComponentFn() : ComponentFn(constant(0.0)) {}

  static ComponentFn constant(double c) {
    return wrap([c](const auto& x) {
      using S = typename std::decay_t<decltype(x)>::value_type;
      (void)x;
      return S(c);
    });
  }

  static ComponentFn from_expr(const Expr& e) {
    return wrap([e](const auto& x) { return e.eval(x); });
  }

  /// Wraps a generic callable S(const std::vector<S>&).
  template <class F>
  static ComponentFn wrap(F f) {
    auto fns = std::make_shared<Fns>();
    fns->real = [f](const std::vector<double>& x) -> double { return f(x); };
    fns->dual = [f](const std::vector<Dual>& x) -> Dual { return f(x); };
    return ComponentFn(std::move(fns));
  }

  double operator()(const std::vector<double>& x) const { return fns_->real(x); }
  Dual operator()(const std::vector<Dual>& x) const { return fns_->dual(x); }

  double value(const Point& p) const {
    std::vector<double> x(p.data(), p.data() + p.size());
    return fns_->real(x);
  }
  Dual dual(const Point& p) const { return fns_->dual(dual_coords(p)); }

 private:
  struct Fns {
    std::function<double(const std::vector<double>&)> real;
    std::function<Dual(const std::vector<Dual>&)> dual;
  };
  explicit ComponentFn(std::shared_ptr<const Fns> fns) : fns_(std::move(fns)) {}
  std::shared_ptr<const Fns> fns_;
};

/// Value and first derivatives of a vector-valued field at a point:
/// jac(k, j) = d value_k / d x_j.
struct VecJet {
  Eigen::VectorXd value;
  Eigen::MatrixXd jac;
};

/// Value and first derivatives of a matrix-valued field at a point:
/// d[j](a, b) = d value(a, b) / d x_j.
struct MatJet {
  Eigen::MatrixXd value;
  std::vector<Eigen::MatrixXd> d;
};

class ScalarField {
 public:
  ScalarField(int dim, ComponentFn c) : dim_(dim), c_(std::move(c)) {}
  static ScalarField from_expr(const Chart& chart, const Expr& e) {
    return ScalarField(chart.dim(), ComponentFn::from_expr(e));
  }

  int dim() const { return dim_; }
  const ComponentFn& component() const { return c_; }

  template <class S>
  S eval(const std::vector<S>& x) const {
    return c_(x);
  }

  double value(const Point& p) const;
  Dual dual(const Point& p) const;

 private:
  int dim_;
  ComponentFn c_;
};

namespace detail {

/// Shared storage for a list of components; copies of fields are O(1).
class ComponentTable {
 public:
  ComponentTable(int dim, std::vector<ComponentFn> comps)
      : dim_(dim), comps_(std::make_shared<const std::vector<ComponentFn>>(
                       std::move(comps))) {}

  int dim() const { return dim_; }
  const std::vector<ComponentFn>& comps() const { return *comps_; }

 private:
  int dim_;
  std::shared_ptr<const std::vector<ComponentFn>> comps_;
};

}  // namespace detail

/// A vector field as N coordinate components X^k.
class VectorField {
 public:
  VectorField(int dim, std::vector<ComponentFn> comps);
  static VectorField from_exprs(const Chart& chart, const std::vector<Expr>& comps);
  static VectorField constant(int dim, const Eigen::VectorXd& v);
  /// The coordinate field ∂_k.
  static VectorField coordinate(int dim, int k);

  int dim() const { return t_.dim(); }
  const ComponentFn& component(int k) const { return t_.comps().at(k); }

  template <class S>
  VecX<S> eval(const std::vector<S>& x) const {
    VecX<S> out(dim());
    for (int k = 0; k < dim(); ++k) out[k] = t_.comps()[k](x);
    return out;
  }

  Eigen::VectorXd value(const Point& p) const;
  VecJet jet(const Point& p) const;

 private:
  detail::ComponentTable t_;
};

/// A 1-form as N coordinate components θ_k.
class OneForm {
 public:
  OneForm(int dim, std::vector<ComponentFn> comps);
  static OneForm from_exprs(const Chart& chart, const std::vector<Expr>& comps);
  static OneForm constant(int dim, const Eigen::VectorXd& coeffs);
  /// The exterior derivative of a scalar field, as exact symbolic components.
  static OneForm differential(const Chart& chart, const Expr& e);

  int dim() const { return t_.dim(); }
  const ComponentFn& component(int k) const { return t_.comps().at(k); }

  template <class S>
  VecX<S> eval(const std::vector<S>& x) const {
    VecX<S> out(dim());
    for (int k = 0; k < dim(); ++k) out[k] = t_.comps()[k](x);
    return out;
  }

  Eigen::VectorXd value(const Point& p) const;
  VecJet jet(const Point& p) const;

  /// θ(X) at p.
  double apply(const Point& p, const Eigen::VectorXd& X) const;

 private:
  detail::ComponentTable t_;
};

/// A (1,1)-tensor as an N x N component matrix T(k, j) = (T ∂_j)^k.
class Tensor11 {
 public:
  Tensor11(int dim, std::vector<ComponentFn> comps);  // row-major, size N*N
  static Tensor11 from_exprs(const Chart& chart,
                             const std::vector<std::vector<Expr>>& rows);
  static Tensor11 constant(int dim, const Eigen::MatrixXd& m);
  static Tensor11 identity(int dim);
  static Tensor11 zero(int dim);

  int dim() const { return t_.dim(); }
  const ComponentFn& component(int k, int j) const {
    return t_.comps().at(static_cast<std::size_t>(k) * dim() + j);
  }

  template <class S>
  MatX<S> eval(const std::vector<S>& x) const {
    const int n = dim();
    MatX<S> out(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) out(k, j) = component(k, j)(x);
    return out;
  }

  Eigen::MatrixXd value(const Point& p) const;
  MatJet jet(const Point& p) const;

  /// (T X) at p.
  Eigen::VectorXd apply(const Point& p, const Eigen::VectorXd& X) const;

 private:
  detail::ComponentTable t_;
};

/// A metric as symmetric N x N components; construction mirrors the upper
/// triangle so symmetry holds by sharing, not by approximation.
class Metric {
 public:
  /// `upper` holds entries (a, b) with a <= b, row by row.
  Metric(int dim, std::vector<ComponentFn> upper);
  static Metric from_exprs(const Chart& chart,
                           const std::vector<std::vector<Expr>>& rows);
  static Metric constant(int dim, const Eigen::MatrixXd& m);
  static Metric identity(int dim);

  int dim() const { return dim_; }
  /// Component (a, b); symmetric by construction.
  const ComponentFn& component(int a, int b) const;

  template <class S>
  MatX<S> eval(const std::vector<S>& x) const {
    const int n = dim();
    MatX<S> out(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        S v = component(a, b)(x);
        out(a, b) = v;
        if (a != b) out(b, a) = v;
      }
    return out;
  }

  Eigen::MatrixXd value(const Point& p) const;
  MatJet jet(const Point& p) const;

  /// g(X, Y) at p.
  double apply(const Point& p, const Eigen::VectorXd& X,
               const Eigen::VectorXd& Y) const;

 private:
  int dim_;
  std::shared_ptr<const std::vector<ComponentFn>> upper_;
};

/// The composite vector field p -> T(p) X(p).
VectorField compose(const Tensor11& T, const VectorField& X);

/// The scalar field p -> θ_p(X_p).
ScalarField pairing(const OneForm& theta, const VectorField& X);

/// Constant-coefficient linear combination Σ c_i f_i of one-forms.
OneForm lincomb(const std::vector<double>& coeffs, const std::vector<OneForm>& forms);

/// Constant-coefficient linear combination Σ c_i X_i of vector fields.
VectorField lincomb(const std::vector<double>& coeffs,
                    const std::vector<VectorField>& fields);

}  // namespace fcontact
