#include "fcontact/structures.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace fcontact {

namespace {

constexpr double kEigenvalueFloor = 1e-10;
constexpr double kGramFloor = 1e-10;

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

std::string level_name(Level l) {
  switch (l) {
    case Level::None: return "none";
    case Level::MetricF: return "metric-f";
    case Level::FContact: return "f-contact";
    case Level::FKContact: return "f-k-contact";
    case Level::S: return "S";
  }
  return "none";
}

std::optional<Level> level_from_name(const std::string& name) {
  if (name == "none") return Level::None;
  if (name == "metric-f") return Level::MetricF;
  if (name == "f-contact") return Level::FContact;
  if (name == "f-k-contact" || name == "k") return Level::FKContact;
  if (name == "S" || name == "s") return Level::S;
  return std::nullopt;
}

FStructure::FStructure(Chart chart_in, int n_in, int s_in, Tensor11 f_in,
                       std::vector<VectorField> xi_in, std::vector<OneForm> eta_in,
                       Metric g_in)
    : chart(std::move(chart_in)),
      n(n_in),
      s(s_in),
      f(std::move(f_in)),
      xi(std::move(xi_in)),
      eta(std::move(eta_in)),
      g(std::move(g_in)) {
  if (n < 0) throw DimensionError("FStructure: n must be nonnegative");
  if (s < 1) throw DimensionError("FStructure: s must be positive");
  if (chart.dim() != 2 * n + s)
    throw DimensionError("FStructure: chart dimension must equal 2n + s");
  if (static_cast<int>(xi.size()) != s || static_cast<int>(eta.size()) != s)
    throw DimensionError("FStructure: need s characteristic fields and s one-forms");
  if (f.dim() != chart.dim() || g.dim() != chart.dim())
    throw DimensionError("FStructure: tensor dimensions must match the chart");
  for (const auto& x : xi)
    if (x.dim() != chart.dim())
      throw DimensionError("FStructure: vector field dimension mismatch");
  for (const auto& e : eta)
    if (e.dim() != chart.dim())
      throw DimensionError("FStructure: one-form dimension mismatch");
}

bool VerificationReport::passed() const {
  if (!errors.empty()) return false;
  return static_cast<int>(achieved) >= static_cast<int>(requested);
}

const AxiomResult* VerificationReport::find(const std::string& name) const {
  for (const auto& a : axioms)
    if (a.name == name) return &a;
  return nullptr;
}

double VerificationReport::max_residual() const {
  double m = 0.0;
  for (const auto& a : axioms) m = std::max(m, a.max_residual);
  return m;
}

namespace {

struct Accumulator {
  std::string name;
  Level level;
  bool threshold_style = false;  // pass iff residual == 0 (floor checks)
  double max_residual = 0.0;
  int points = 0;

  void update(double raw, double norm) {
    max_residual = std::max(max_residual, raw * norm);
    ++points;
  }
};

}  // namespace

VerificationReport verify(const FStructure& S, Level target, const VerifyOptions& opts) {
  const int N = S.dim();
  const int s = S.s;
  const auto points = sample_points(S.chart, opts.samples.count, opts.samples.seed);

  const bool want_contact = static_cast<int>(target) >= static_cast<int>(Level::FContact);
  const bool want_k = static_cast<int>(target) >= static_cast<int>(Level::FKContact);
  const bool want_s = static_cast<int>(target) >= static_cast<int>(Level::S);

  std::vector<Accumulator> acc;
  auto add = [&acc](std::string name, Level level, bool threshold = false) {
    acc.push_back(Accumulator{std::move(name), level, threshold});
    return acc.size() - 1;
  };

  const auto i_duality = add("eta_xi_duality", Level::MetricF);
  const auto i_fxi = add("f_kills_xi", Level::MetricF);
  const auto i_fsq = add("f_squared_identity", Level::MetricF);
  const auto i_compat = add("metric_compatibility", Level::MetricF);
  const auto i_annih = add("eta_annihilates_im_f", Level::MetricF);
  const auto i_gram = add("eta_linear_independence", Level::MetricF, true);
  const auto i_pd = add("metric_positive_definite", Level::MetricF, true);

  std::vector<std::size_t> i_deta(s);
  std::size_t i_commute = 0;
  if (want_contact) {
    for (int i = 0; i < s; ++i)
      i_deta[i] = add("deta_eq_omega[" + std::to_string(i + 1) + "]", Level::FContact);
    i_commute = add("xi_commute", Level::FContact);
  }

  std::vector<std::size_t> i_killing(s), i_lief(s);
  if (want_k) {
    for (int i = 0; i < s; ++i) {
      i_killing[i] = add("xi_killing[" + std::to_string(i + 1) + "]", Level::FKContact);
      i_lief[i] = add("lie_xi_f[" + std::to_string(i + 1) + "]", Level::FKContact);
    }
  }

  std::size_t i_normal = 0;
  if (want_s) i_normal = add("normality", Level::S);

  VerificationReport report;
  report.requested = target;
  report.samples = static_cast<int>(points.size());
  report.seed = opts.samples.seed;
  report.tolerance = opts.tol;

  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const Point& p = points[pi];
    try {
      const MatJet F = S.f.jet(p);
      const MatJet G = S.g.jet(p);
      std::vector<VecJet> E(s), X(s);
      for (int i = 0; i < s; ++i) {
        E[i] = S.eta[i].jet(p);
        X[i] = S.xi[i].jet(p);
      }

      double scale = std::max(max_abs(F.value), max_abs(G.value));
      for (int i = 0; i < s; ++i)
        scale = std::max({scale, max_abs(E[i].value), max_abs(X[i].value)});
      const double norm = 1.0 / (1.0 + scale);

      // metric f-structure axioms
      {
        double r = 0.0;
        for (int i = 0; i < s; ++i)
          for (int j = 0; j < s; ++j)
            r = std::max(r, std::abs(E[i].value.dot(X[j].value) - (i == j ? 1.0 : 0.0)));
        acc[i_duality].update(r, norm);
      }
      {
        double r = 0.0;
        for (int i = 0; i < s; ++i) r = std::max(r, max_abs(F.value * X[i].value));
        acc[i_fxi].update(r, norm);
      }
      {
        Eigen::MatrixXd rhs = -Eigen::MatrixXd::Identity(N, N);
        for (int i = 0; i < s; ++i) rhs += X[i].value * E[i].value.transpose();
        acc[i_fsq].update(max_abs(F.value * F.value - rhs), norm);
      }
      {
        Eigen::MatrixXd rhs = G.value;
        for (int i = 0; i < s; ++i) rhs -= E[i].value * E[i].value.transpose();
        acc[i_compat].update(
            max_abs(F.value.transpose() * G.value * F.value - rhs), norm);
      }
      {
        double r = 0.0;
        for (int i = 0; i < s; ++i)
          r = std::max(r, max_abs(Eigen::VectorXd(F.value.transpose() * E[i].value)));
        acc[i_annih].update(r, norm);
      }
      {
        Eigen::MatrixXd gram(s, s);
        for (int i = 0; i < s; ++i)
          for (int j = 0; j < s; ++j) gram(i, j) = E[i].value.dot(E[j].value);
        const double det = gram.determinant();
        acc[i_gram].update(std::max(0.0, kGramFloor - det), 1.0);
      }
      {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G.value);
        const double lmin = es.eigenvalues().minCoeff();
        acc[i_pd].update(std::max(0.0, kEigenvalueFloor - lmin), 1.0);
      }

      if (want_contact) {
        const Eigen::MatrixXd omega = G.value * F.value;
        for (int i = 0; i < s; ++i) {
          double r = 0.0;
          for (int a = 0; a < N; ++a)
            for (int b = a; b < N; ++b) {
              const double de = (a == b) ? 0.0 : d_oneform_frame(E[i], a, b);
              r = std::max(r, std::abs(de - omega(a, b)));
            }
          acc[i_deta[i]].update(r, norm);
        }
        double r = 0.0;
        for (int i = 0; i < s; ++i)
          for (int j = i + 1; j < s; ++j)
            r = std::max(r, max_abs(lie_bracket(X[i], X[j])));
        acc[i_commute].update(r, norm);
      }

      if (want_k) {
        for (int i = 0; i < s; ++i) {
          acc[i_killing[i]].update(max_abs(lie_derivative_metric(X[i], G)), norm);
          acc[i_lief[i]].update(max_abs(lie_derivative_t11(X[i], F)), norm);
        }
      }

      if (want_s) {
        double r = 0.0;
        for (int a = 0; a < N; ++a)
          for (int b = a + 1; b < N; ++b) {
            Eigen::VectorXd nij = nijenhuis_frame(F, a, b);
            for (int i = 0; i < s; ++i)
              nij += 2.0 * d_oneform_frame(E[i], a, b) * X[i].value;
            r = std::max(r, max_abs(nij));
          }
        acc[i_normal].update(r, norm);
      }
    } catch (const DomainError& e) {
      report.errors.push_back("domain error at sample " + std::to_string(pi) + ": " +
                              e.what());
    }
  }

  const int total = static_cast<int>(points.size());
  for (const auto& a : acc) {
    AxiomResult r;
    r.name = a.name;
    r.level = a.level;
    r.max_residual = a.max_residual;
    r.points_evaluated = a.points;
    const bool within = a.threshold_style ? a.max_residual == 0.0
                                          : a.max_residual <= opts.tol;
    r.pass = within && a.points == total;
    report.axioms.push_back(std::move(r));
  }

  if (opts.fd_check) {
    AxiomResult r;
    r.name = "ad_fd_consistency";
    r.level = Level::MetricF;
    try {
      r.max_residual = fd_cross_check(S, points, opts.fd_step);
      r.points_evaluated = total;
      r.pass = r.max_residual <= opts.fd_tol;
    } catch (const DomainError& e) {
      report.errors.push_back(std::string("domain error in fd check: ") + e.what());
      r.pass = false;
    }
    report.axioms.push_back(std::move(r));
  }

  // Highest level whose axioms (and those of every level below) all pass.
  Level achieved = Level::None;
  for (Level l : {Level::MetricF, Level::FContact, Level::FKContact, Level::S}) {
    if (static_cast<int>(l) > static_cast<int>(target)) break;
    bool ok = true;
    for (const auto& a : report.axioms)
      if (a.level == l && !a.pass) ok = false;
    if (!ok) break;
    achieved = l;
  }
  report.achieved = achieved;
  return report;
}

double fundamental_form(const FStructure& S, const Eigen::VectorXd& X,
                        const Eigen::VectorXd& Y, const Point& p) {
  if (X.size() != S.dim() || Y.size() != S.dim())
    throw DimensionError("fundamental_form: argument dimension mismatch");
  return X.dot(S.g.value(p) * (S.f.value(p) * Y));
}

Eigen::MatrixXd fundamental_form_frame(const FStructure& S, const Point& p) {
  return S.g.value(p) * S.f.value(p);
}

double structure_max_difference(const FStructure& A, const FStructure& B,
                                const std::vector<Point>& points) {
  if (A.dim() != B.dim() || A.s != B.s)
    throw DimensionError("structure_max_difference: incompatible structures");
  double r = 0.0;
  for (const auto& p : points) {
    r = std::max(r, max_abs(A.f.value(p) - B.f.value(p)));
    r = std::max(r, max_abs(A.g.value(p) - B.g.value(p)));
    for (int i = 0; i < A.s; ++i) {
      r = std::max(r, max_abs(Eigen::VectorXd(A.xi[i].value(p) - B.xi[i].value(p))));
      r = std::max(r, max_abs(Eigen::VectorXd(A.eta[i].value(p) - B.eta[i].value(p))));
    }
  }
  return r;
}

namespace {

double fd_component(const ComponentFn& c, const Point& p, double step, int dim) {
  const Dual d = c.dual(p);
  const auto grad = d.grad(dim);
  const double denom = 1.0 + std::abs(d.value());
  double worst = 0.0;
  for (int j = 0; j < dim; ++j) {
    Point hi = p, lo = p;
    hi[j] += step;
    lo[j] -= step;
    std::vector<double> xh(hi.data(), hi.data() + dim), xl(lo.data(), lo.data() + dim);
    const double fd = (c(xh) - c(xl)) / (2.0 * step);
    worst = std::max(worst, std::abs(grad[j] - fd) / denom);
  }
  return worst;
}

}  // namespace

double fd_cross_check(const FStructure& S, const std::vector<Point>& points,
                      double step) {
  const int N = S.dim();
  double worst = 0.0;
  for (const auto& p : points) {
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        worst = std::max(worst, fd_component(S.f.component(a, b), p, step, N));
    for (int a = 0; a < N; ++a)
      for (int b = a; b < N; ++b)
        worst = std::max(worst, fd_component(S.g.component(a, b), p, step, N));
    for (int i = 0; i < S.s; ++i)
      for (int k = 0; k < N; ++k) {
        worst = std::max(worst, fd_component(S.xi[i].component(k), p, step, N));
        worst = std::max(worst, fd_component(S.eta[i].component(k), p, step, N));
      }
  }
  return worst;
}

}  // namespace fcontact
