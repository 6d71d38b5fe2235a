#include "fcontact/deformations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fcontact {

RotationMatrix::RotationMatrix(Eigen::MatrixXd A) : A_(std::move(A)) {
  if (A_.rows() != A_.cols() || A_.rows() < 1)
    throw PreconditionError("rotation matrix must be square");
  const int s = static_cast<int>(A_.rows());
  const double defect =
      (A_.transpose() * A_ - Eigen::MatrixXd::Identity(s, s)).cwiseAbs().maxCoeff();
  if (defect > kOrthoTol) {
    std::ostringstream os;
    os << "matrix is not orthogonal: |A^T A - I|_max = " << defect;
    throw PreconditionError(os.str());
  }
  c_ = A_.rowwise().sum();
  for (int i = 0; i < s; ++i) {
    if (std::abs(c_[i]) < kRowSumFloor) {
      std::ostringstream os;
      os << "row sum c_" << (i + 1) << " = " << c_[i]
         << " is below the floor " << kRowSumFloor;
      throw PreconditionError(os.str());
    }
  }
}

namespace {

/// g - Σ_α old_α ⊗ old_α + Σ_α new_α ⊗ new_α, as closures over the captured
/// components. The terms are paired per α so that an identity base change
/// cancels exactly, not merely to rounding.
Metric metric_with_square_terms(const Metric& g, const std::vector<OneForm>& old_forms,
                                const std::vector<OneForm>& new_forms) {
  const int N = g.dim();
  std::vector<ComponentFn> upper;
  upper.reserve(static_cast<std::size_t>(N) * (N + 1) / 2);
  for (int a = 0; a < N; ++a)
    for (int b = a; b < N; ++b) {
      upper.push_back(ComponentFn::wrap([g, old_forms, new_forms, a, b](const auto& x) {
        auto acc = g.component(a, b)(x);
        for (std::size_t i = 0; i < old_forms.size(); ++i) {
          acc += new_forms[i].component(a)(x) * new_forms[i].component(b)(x) -
                 old_forms[i].component(a)(x) * old_forms[i].component(b)(x);
        }
        return acc;
      }));
    }
  return Metric(N, std::move(upper));
}

std::vector<OneForm> transformed_forms(const FStructure& S, const Eigen::MatrixXd& A,
                                       const Eigen::VectorXd& c, bool rotation) {
  const int s = S.s;
  std::vector<OneForm> out;
  out.reserve(s);
  for (int i = 0; i < s; ++i) {
    std::vector<double> coeffs(s);
    for (int t = 0; t < s; ++t)
      coeffs[t] = rotation ? A(t, i) * c[t] : A(i, t) / c[i];
    out.push_back(lincomb(coeffs, S.eta));
  }
  return out;
}

std::vector<VectorField> transformed_fields(const FStructure& S,
                                            const Eigen::MatrixXd& A,
                                            const Eigen::VectorXd& c, bool rotation) {
  const int s = S.s;
  std::vector<VectorField> out;
  out.reserve(s);
  for (int i = 0; i < s; ++i) {
    std::vector<double> coeffs(s);
    for (int t = 0; t < s; ++t)
      coeffs[t] = rotation ? A(t, i) / c[t] : A(i, t) * c[i];
    out.push_back(lincomb(coeffs, S.xi));
  }
  return out;
}

FStructure base_change(const FStructure& S, const RotationMatrix& A, bool rotation) {
  if (A.s() != S.s)
    throw DimensionError("base change: matrix size does not match s");
  auto eta_new = transformed_forms(S, A.matrix(), A.row_sums(), rotation);
  auto xi_new = transformed_fields(S, A.matrix(), A.row_sums(), rotation);
  Metric g_new = metric_with_square_terms(S.g, S.eta, eta_new);
  return FStructure(S.chart, S.n, S.s, S.f, std::move(xi_new), std::move(eta_new),
                    std::move(g_new));
}

}  // namespace

FStructure rotate(const FStructure& S, const RotationMatrix& A) {
  return base_change(S, A, /*rotation=*/true);
}

FStructure antirotate(const FStructure& S, const RotationMatrix& A) {
  return base_change(S, A, /*rotation=*/false);
}

double Type2Preconditions::max_residual() const {
  double r = 0.0;
  for (double v : closed) r = std::max(r, v);
  for (double v : annihilates_xi) r = std::max(r, v);
  for (double v : lie_along_xi) r = std::max(r, v);
  return r;
}

Type2Preconditions type2_preconditions(const FStructure& S,
                                       const std::vector<OneForm>& theta,
                                       const SampleSpec& samples) {
  if (static_cast<int>(theta.size()) != S.s)
    throw DimensionError("type2: need exactly s one-forms");
  const int N = S.dim();
  const auto points = sample_points(S.chart, samples.count, samples.seed);

  Type2Preconditions pre;
  pre.closed.assign(theta.size(), 0.0);
  pre.annihilates_xi.assign(theta.size(), 0.0);
  pre.lie_along_xi.assign(theta.size(), 0.0);

  for (const auto& p : points) {
    std::vector<VecJet> xi_jets(S.s);
    for (int j = 0; j < S.s; ++j) xi_jets[j] = S.xi[j].jet(p);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (theta[i].dim() != N) throw DimensionError("type2: form dimension mismatch");
      const VecJet th = theta[i].jet(p);
      for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b)
          pre.closed[i] = std::max(pre.closed[i], std::abs(d_oneform_frame(th, a, b)));
      for (int j = 0; j < S.s; ++j) {
        pre.annihilates_xi[i] =
            std::max(pre.annihilates_xi[i], std::abs(th.value.dot(xi_jets[j].value)));
        for (int a = 0; a < N; ++a) {
          VecJet ea;
          ea.value = Eigen::VectorXd::Zero(N);
          ea.value[a] = 1.0;
          ea.jac = Eigen::MatrixXd::Zero(N, N);
          pre.lie_along_xi[i] = std::max(
              pre.lie_along_xi[i], std::abs(lie_derivative_oneform(xi_jets[j], th, ea)));
        }
      }
    }
  }
  return pre;
}

FStructure type2(const FStructure& S, const std::vector<OneForm>& theta,
                 const Type2Options& opts) {
  if (static_cast<int>(theta.size()) != S.s)
    throw DimensionError("type2: need exactly s one-forms");
  const int N = S.dim();
  const int s = S.s;

  if (opts.check_preconditions) {
    const auto pre = type2_preconditions(S, theta, opts.samples);
    if (!pre.ok(opts.tol)) {
      std::ostringstream os;
      os << "type2: forms are not closed and basic at tolerance " << opts.tol << ":";
      for (int i = 0; i < s; ++i) {
        os << " theta_" << (i + 1) << " (closed " << pre.closed[i] << ", on-xi "
           << pre.annihilates_xi[i] << ", lie " << pre.lie_along_xi[i] << ")";
      }
      throw PreconditionError(os.str());
    }
  }

  // eta_bar_i = eta_i + theta_i
  std::vector<OneForm> eta_new;
  eta_new.reserve(s);
  for (int i = 0; i < s; ++i) eta_new.push_back(lincomb({1.0, 1.0}, {S.eta[i], theta[i]}));

  // f_bar = f - Σ_i (theta_i ∘ f) ⊗ ξ_i
  std::vector<ComponentFn> f_comps;
  f_comps.reserve(static_cast<std::size_t>(N) * N);
  const Tensor11 f0 = S.f;
  const auto xi0 = S.xi;
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j) {
      f_comps.push_back(ComponentFn::wrap([f0, xi0, theta, k, j, N, s](const auto& x) {
        using S_ = typename std::decay_t<decltype(x)>::value_type;
        S_ acc = f0.component(k, j)(x);
        for (int i = 0; i < s; ++i) {
          S_ theta_of_fj(0.0);
          for (int m = 0; m < N; ++m)
            theta_of_fj += theta[i].component(m)(x) * f0.component(m, j)(x);
          acc -= theta_of_fj * xi0[i].component(k)(x);
        }
        return acc;
      }));
    }
  Tensor11 f_new(N, std::move(f_comps));

  // g_bar = g + Σ_i (η_i ⊗ θ_i + θ_i ⊗ η_i + θ_i ⊗ θ_i), symmetric in (a, b).
  const Metric g0 = S.g;
  const auto eta0 = S.eta;
  std::vector<ComponentFn> upper;
  upper.reserve(static_cast<std::size_t>(N) * (N + 1) / 2);
  for (int a = 0; a < N; ++a)
    for (int b = a; b < N; ++b) {
      upper.push_back(ComponentFn::wrap([g0, eta0, theta, a, b, s](const auto& x) {
        auto acc = g0.component(a, b)(x);
        for (int i = 0; i < s; ++i) {
          const auto ea = eta0[i].component(a)(x);
          const auto eb = eta0[i].component(b)(x);
          const auto ta = theta[i].component(a)(x);
          const auto tb = theta[i].component(b)(x);
          acc += ea * tb + ta * eb + ta * tb;
        }
        return acc;
      }));
    }
  Metric g_new(N, std::move(upper));

  return FStructure(S.chart, S.n, S.s, std::move(f_new), S.xi, std::move(eta_new),
                    std::move(g_new));
}

double ComposeReport::max_difference() const {
  return std::max({max_f, max_g, max_xi, max_eta});
}

ComposeReport compose_checks(const FStructure& S, const RotationMatrix& A,
                             const std::vector<OneForm>& theta,
                             const Type2Options& opts) {
  if (static_cast<int>(theta.size()) != S.s)
    throw DimensionError("compose_checks: need exactly s one-forms");
  const int s = S.s;

  // theta_tilde_i = (1/c_i) Σ_k a_ik θ_k
  std::vector<OneForm> theta_tilde;
  theta_tilde.reserve(s);
  for (int i = 0; i < s; ++i) {
    std::vector<double> coeffs(s);
    for (int k = 0; k < s; ++k) coeffs[k] = A.matrix()(i, k) / A.row_sums()[i];
    theta_tilde.push_back(lincomb(coeffs, theta));
  }

  const FStructure path1 = type2(rotate(S, A), theta, opts);
  const FStructure path2 = rotate(type2(S, theta_tilde, opts), A);

  const auto points = sample_points(S.chart, opts.samples.count, opts.samples.seed);
  ComposeReport rep;
  for (const auto& p : points) {
    rep.max_f = std::max(rep.max_f,
                         (path1.f.value(p) - path2.f.value(p)).cwiseAbs().maxCoeff());
    rep.max_g = std::max(rep.max_g,
                         (path1.g.value(p) - path2.g.value(p)).cwiseAbs().maxCoeff());
    for (int i = 0; i < s; ++i) {
      rep.max_xi = std::max(
          rep.max_xi,
          (path1.xi[i].value(p) - path2.xi[i].value(p)).cwiseAbs().maxCoeff());
      rep.max_eta = std::max(
          rep.max_eta,
          (path1.eta[i].value(p) - path2.eta[i].value(p)).cwiseAbs().maxCoeff());
    }
  }
  return rep;
}

}  // namespace fcontact
