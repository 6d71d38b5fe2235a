#include "fcontact/fields.hpp"

#include <string>

namespace fcontact {

namespace {

void expect_dim(int have, int want, const char* what) {
  if (have != want)
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(want) + ", got " + std::to_string(have));
}

VecJet vector_jet(const std::vector<ComponentFn>& comps, int dim, const Point& p) {
  expect_dim(static_cast<int>(p.size()), dim, "jet");
  const auto coords = dual_coords(p);
  VecJet out;
  out.value.resize(dim);
  out.jac.resize(dim, dim);
  for (int k = 0; k < dim; ++k) {
    Dual d = comps[k](coords);
    out.value[k] = d.value();
    out.jac.row(k) = d.grad(dim).transpose();
  }
  return out;
}

Eigen::VectorXd vector_value(const std::vector<ComponentFn>& comps, int dim,
                             const Point& p) {
  expect_dim(static_cast<int>(p.size()), dim, "value");
  std::vector<double> x(p.data(), p.data() + p.size());
  Eigen::VectorXd out(dim);
  for (int k = 0; k < dim; ++k) out[k] = comps[k](x);
  return out;
}

}  // namespace

std::vector<Dual> dual_coords(const Point& p) {
  const int n = static_cast<int>(p.size());
  std::vector<Dual> coords;
  coords.reserve(n);
  for (int i = 0; i < n; ++i) coords.push_back(Dual::variable(p[i], i, n));
  return coords;
}

double ScalarField::value(const Point& p) const {
  expect_dim(static_cast<int>(p.size()), dim_, "ScalarField::value");
  return c_.value(p);
}

Dual ScalarField::dual(const Point& p) const {
  expect_dim(static_cast<int>(p.size()), dim_, "ScalarField::dual");
  return c_.dual(p);
}

VectorField::VectorField(int dim, std::vector<ComponentFn> comps)
    : t_(dim, std::move(comps)) {
  expect_dim(static_cast<int>(t_.comps().size()), dim, "VectorField");
}

VectorField VectorField::from_exprs(const Chart& chart, const std::vector<Expr>& comps) {
  std::vector<ComponentFn> c;
  c.reserve(comps.size());
  for (const auto& e : comps) c.push_back(ComponentFn::from_expr(e));
  return VectorField(chart.dim(), std::move(c));
}

VectorField VectorField::constant(int dim, const Eigen::VectorXd& v) {
  expect_dim(static_cast<int>(v.size()), dim, "VectorField::constant");
  std::vector<ComponentFn> c;
  c.reserve(dim);
  for (int k = 0; k < dim; ++k) c.push_back(ComponentFn::constant(v[k]));
  return VectorField(dim, std::move(c));
}

VectorField VectorField::coordinate(int dim, int k) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v[k] = 1.0;
  return constant(dim, v);
}

Eigen::VectorXd VectorField::value(const Point& p) const {
  return vector_value(t_.comps(), dim(), p);
}

VecJet VectorField::jet(const Point& p) const {
  return vector_jet(t_.comps(), dim(), p);
}

OneForm::OneForm(int dim, std::vector<ComponentFn> comps)
    : t_(dim, std::move(comps)) {
  expect_dim(static_cast<int>(t_.comps().size()), dim, "OneForm");
}

OneForm OneForm::from_exprs(const Chart& chart, const std::vector<Expr>& comps) {
  std::vector<ComponentFn> c;
  c.reserve(comps.size());
  for (const auto& e : comps) c.push_back(ComponentFn::from_expr(e));
  return OneForm(chart.dim(), std::move(c));
}

OneForm OneForm::constant(int dim, const Eigen::VectorXd& coeffs) {
  expect_dim(static_cast<int>(coeffs.size()), dim, "OneForm::constant");
  std::vector<ComponentFn> c;
  c.reserve(dim);
  for (int k = 0; k < dim; ++k) c.push_back(ComponentFn::constant(coeffs[k]));
  return OneForm(dim, std::move(c));
}

OneForm OneForm::differential(const Chart& chart, const Expr& e) {
  std::vector<ComponentFn> c;
  c.reserve(chart.dim());
  for (int k = 0; k < chart.dim(); ++k)
    c.push_back(ComponentFn::from_expr(e.derivative(k)));
  return OneForm(chart.dim(), std::move(c));
}

Eigen::VectorXd OneForm::value(const Point& p) const {
  return vector_value(t_.comps(), dim(), p);
}

VecJet OneForm::jet(const Point& p) const {
  return vector_jet(t_.comps(), dim(), p);
}

double OneForm::apply(const Point& p, const Eigen::VectorXd& X) const {
  expect_dim(static_cast<int>(X.size()), dim(), "OneForm::apply");
  return value(p).dot(X);
}

Tensor11::Tensor11(int dim, std::vector<ComponentFn> comps)
    : t_(dim, std::move(comps)) {
  expect_dim(static_cast<int>(t_.comps().size()), dim * dim, "Tensor11");
}

Tensor11 Tensor11::from_exprs(const Chart& chart,
                              const std::vector<std::vector<Expr>>& rows) {
  const int n = chart.dim();
  expect_dim(static_cast<int>(rows.size()), n, "Tensor11::from_exprs");
  std::vector<ComponentFn> c;
  c.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows) {
    expect_dim(static_cast<int>(row.size()), n, "Tensor11::from_exprs row");
    for (const auto& e : row) c.push_back(ComponentFn::from_expr(e));
  }
  return Tensor11(n, std::move(c));
}

Tensor11 Tensor11::constant(int dim, const Eigen::MatrixXd& m) {
  expect_dim(static_cast<int>(m.rows()), dim, "Tensor11::constant");
  expect_dim(static_cast<int>(m.cols()), dim, "Tensor11::constant");
  std::vector<ComponentFn> c;
  c.reserve(static_cast<std::size_t>(dim) * dim);
  for (int k = 0; k < dim; ++k)
    for (int j = 0; j < dim; ++j) c.push_back(ComponentFn::constant(m(k, j)));
  return Tensor11(dim, std::move(c));
}

Tensor11 Tensor11::identity(int dim) {
  return constant(dim, Eigen::MatrixXd::Identity(dim, dim));
}

Tensor11 Tensor11::zero(int dim) {
  return constant(dim, Eigen::MatrixXd::Zero(dim, dim));
}

Eigen::MatrixXd Tensor11::value(const Point& p) const {
  expect_dim(static_cast<int>(p.size()), dim(), "Tensor11::value");
  std::vector<double> x(p.data(), p.data() + p.size());
  return eval(x);
}

MatJet Tensor11::jet(const Point& p) const {
  const int n = dim();
  expect_dim(static_cast<int>(p.size()), n, "Tensor11::jet");
  const auto coords = dual_coords(p);
  MatJet out;
  out.value.resize(n, n);
  out.d.assign(n, Eigen::MatrixXd(n, n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      Dual v = component(k, j)(coords);
      out.value(k, j) = v.value();
      const auto g = v.grad(n);
      for (int m = 0; m < n; ++m) out.d[m](k, j) = g[m];
    }
  return out;
}

Eigen::VectorXd Tensor11::apply(const Point& p, const Eigen::VectorXd& X) const {
  expect_dim(static_cast<int>(X.size()), dim(), "Tensor11::apply");
  return value(p) * X;
}

Metric::Metric(int dim, std::vector<ComponentFn> upper) : dim_(dim) {
  const std::size_t want = static_cast<std::size_t>(dim) * (dim + 1) / 2;
  if (upper.size() != want)
    throw DimensionError("Metric: expected " + std::to_string(want) +
                         " upper-triangle components, got " +
                         std::to_string(upper.size()));
  upper_ = std::make_shared<const std::vector<ComponentFn>>(std::move(upper));
}

const ComponentFn& Metric::component(int a, int b) const {
  if (a > b) std::swap(a, b);
  // row-by-row upper triangle layout
  const std::size_t off =
      static_cast<std::size_t>(a) * dim_ - static_cast<std::size_t>(a) * (a - 1) / 2;
  return upper_->at(off + (b - a));
}

Metric Metric::from_exprs(const Chart& chart,
                          const std::vector<std::vector<Expr>>& rows) {
  const int n = chart.dim();
  expect_dim(static_cast<int>(rows.size()), n, "Metric::from_exprs");
  std::vector<ComponentFn> upper;
  upper.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int a = 0; a < n; ++a) {
    expect_dim(static_cast<int>(rows[a].size()), n, "Metric::from_exprs row");
    for (int b = a; b < n; ++b) upper.push_back(ComponentFn::from_expr(rows[a][b]));
  }
  return Metric(n, std::move(upper));
}

Metric Metric::constant(int dim, const Eigen::MatrixXd& m) {
  expect_dim(static_cast<int>(m.rows()), dim, "Metric::constant");
  expect_dim(static_cast<int>(m.cols()), dim, "Metric::constant");
  std::vector<ComponentFn> upper;
  upper.reserve(static_cast<std::size_t>(dim) * (dim + 1) / 2);
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b) upper.push_back(ComponentFn::constant(m(a, b)));
  return Metric(dim, std::move(upper));
}

Metric Metric::identity(int dim) {
  return constant(dim, Eigen::MatrixXd::Identity(dim, dim));
}

Eigen::MatrixXd Metric::value(const Point& p) const {
  expect_dim(static_cast<int>(p.size()), dim_, "Metric::value");
  std::vector<double> x(p.data(), p.data() + p.size());
  return eval(x);
}

MatJet Metric::jet(const Point& p) const {
  const int n = dim_;
  expect_dim(static_cast<int>(p.size()), n, "Metric::jet");
  const auto coords = dual_coords(p);
  MatJet out;
  out.value.resize(n, n);
  out.d.assign(n, Eigen::MatrixXd(n, n));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Dual v = component(a, b)(coords);
      out.value(a, b) = v.value();
      out.value(b, a) = v.value();
      const auto g = v.grad(n);
      for (int m = 0; m < n; ++m) {
        out.d[m](a, b) = g[m];
        out.d[m](b, a) = g[m];
      }
    }
  return out;
}

double Metric::apply(const Point& p, const Eigen::VectorXd& X,
                     const Eigen::VectorXd& Y) const {
  expect_dim(static_cast<int>(X.size()), dim_, "Metric::apply");
  expect_dim(static_cast<int>(Y.size()), dim_, "Metric::apply");
  return X.dot(value(p) * Y);
}

VectorField compose(const Tensor11& T, const VectorField& X) {
  if (T.dim() != X.dim()) throw DimensionError("compose: dimension mismatch");
  const int n = T.dim();
  std::vector<ComponentFn> comps;
  comps.reserve(n);
  for (int k = 0; k < n; ++k) {
    comps.push_back(ComponentFn::wrap([T, X, k, n](const auto& x) {
      using S = typename std::decay_t<decltype(x)>::value_type;
      S acc(0.0);
      for (int j = 0; j < n; ++j) acc += T.component(k, j)(x) * X.component(j)(x);
      return acc;
    }));
  }
  return VectorField(n, std::move(comps));
}

ScalarField pairing(const OneForm& theta, const VectorField& X) {
  if (theta.dim() != X.dim()) throw DimensionError("pairing: dimension mismatch");
  const int n = theta.dim();
  return ScalarField(n, ComponentFn::wrap([theta, X, n](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::value_type;
    S acc(0.0);
    for (int k = 0; k < n; ++k) acc += theta.component(k)(x) * X.component(k)(x);
    return acc;
  }));
}

OneForm lincomb(const std::vector<double>& coeffs, const std::vector<OneForm>& forms) {
  if (coeffs.size() != forms.size() || forms.empty())
    throw DimensionError("lincomb: coefficient/form count mismatch");
  const int n = forms.front().dim();
  for (const auto& f : forms)
    if (f.dim() != n) throw DimensionError("lincomb: mixed dimensions");
  std::vector<ComponentFn> comps;
  comps.reserve(n);
  for (int k = 0; k < n; ++k) {
    comps.push_back(ComponentFn::wrap([coeffs, forms, k](const auto& x) {
      using S = typename std::decay_t<decltype(x)>::value_type;
      S acc(0.0);
      for (std::size_t i = 0; i < forms.size(); ++i)
        acc += S(coeffs[i]) * forms[i].component(k)(x);
      return acc;
    }));
  }
  return OneForm(n, std::move(comps));
}

VectorField lincomb(const std::vector<double>& coeffs,
                    const std::vector<VectorField>& fields) {
  if (coeffs.size() != fields.size() || fields.empty())
    throw DimensionError("lincomb: coefficient/field count mismatch");
  const int n = fields.front().dim();
  for (const auto& f : fields)
    if (f.dim() != n) throw DimensionError("lincomb: mixed dimensions");
  std::vector<ComponentFn> comps;
  comps.reserve(n);
  for (int k = 0; k < n; ++k) {
    comps.push_back(ComponentFn::wrap([coeffs, fields, k](const auto& x) {
      using S = typename std::decay_t<decltype(x)>::value_type;
      S acc(0.0);
      for (std::size_t i = 0; i < fields.size(); ++i)
        acc += S(coeffs[i]) * fields[i].component(k)(x);
      return acc;
    }));
  }
  return VectorField(n, std::move(comps));
}

}  // namespace fcontact
