#include "fcontact/mapping_torus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fcontact {

namespace {

/// Calls a component of an N-dimensional field with the first N coordinates
/// of a longer coordinate vector.
ComponentFn with_head(const ComponentFn& c, int n) {
  return ComponentFn::wrap([c, n](const auto& x) {
    using V = std::decay_t<decltype(x)>;
    V head(x.begin(), x.begin() + n);
    return c(head);
  });
}

/// Calls a component of an (N+1)-dimensional field at (x, 0).
ComponentFn at_t0(const ComponentFn& c) {
  return ComponentFn::wrap([c](const auto& x) {
    using V = std::decay_t<decltype(x)>;
    using S = typename V::value_type;
    V ext(x);
    ext.push_back(S(0.0));
    return c(ext);
  });
}

}  // namespace

AutomorphismMap::AutomorphismMap(Chart chart, std::vector<Expr> components,
                                 std::optional<std::vector<Expr>> inverse,
                                 const SampleSpec& validation_samples)
    : chart_(std::move(chart)), comps_(std::move(components)), inverse_(std::move(inverse)) {
  if (static_cast<int>(comps_.size()) != chart_.dim())
    throw DimensionError("automorphism map needs one expression per coordinate");
  if (inverse_ && static_cast<int>(inverse_->size()) != chart_.dim())
    throw DimensionError("automorphism inverse needs one expression per coordinate");
  if (inverse_) {
    const auto points =
        sample_points(chart_, validation_samples.count, validation_samples.seed);
    double worst = 0.0;
    for (const auto& p : points) {
      const Point q = apply(p);
      Point back(chart_.dim());
      std::vector<double> qx(q.data(), q.data() + q.size());
      for (int k = 0; k < chart_.dim(); ++k) back[k] = (*inverse_)[k].eval(qx);
      worst = std::max(worst, (back - p).cwiseAbs().maxCoeff());
    }
    if (worst > 1e-9) {
      std::ostringstream os;
      os << "inverse expressions do not invert the map: max |phi^-1(phi(p)) - p| = "
         << worst;
      throw PreconditionError(os.str());
    }
  }
}

const std::vector<Expr>& AutomorphismMap::inverse_components() const {
  if (!inverse_) throw PreconditionError("automorphism map has no inverse expressions");
  return *inverse_;
}

Point AutomorphismMap::apply(const Point& p) const {
  if (p.size() != chart_.dim())
    throw DimensionError("automorphism apply: point dimension mismatch");
  std::vector<double> x(p.data(), p.data() + p.size());
  Point q(chart_.dim());
  for (int k = 0; k < chart_.dim(); ++k) q[k] = comps_[k].eval(x);
  return q;
}

Eigen::MatrixXd AutomorphismMap::differential(const Point& p) const {
  const int n = chart_.dim();
  const auto coords = dual_coords(p);
  Eigen::MatrixXd J(n, n);
  for (int k = 0; k < n; ++k) {
    const Dual d = comps_[k].eval(coords);
    J.row(k) = d.grad(n).transpose();
  }
  return J;
}

AutomorphismMap AutomorphismMap::inverse_map() const {
  if (!inverse_) throw PreconditionError("automorphism map has no inverse expressions");
  return AutomorphismMap(chart_, *inverse_, comps_);
}

double AutomorphismReport::max_residual() const {
  double r = 0.0;
  for (const auto& id : identities) r = std::max(r, id.max_residual);
  return r;
}

const IdentityResidual* AutomorphismReport::find(const std::string& name) const {
  for (const auto& id : identities)
    if (id.name == name) return &id;
  return nullptr;
}

namespace {

void accumulate_automorphism(const FStructure& S, const AutomorphismMap& phi,
                             const std::vector<Point>& points,
                             AutomorphismReport& rep) {
  auto& eta_id = rep.identities[0];
  auto& g_id = rep.identities[1];
  auto& f_id = rep.identities[2];
  auto& xi_id = rep.identities[3];

  for (const auto& p : points) {
    const Point q = phi.apply(p);
    const Eigen::MatrixXd J = phi.differential(p);
    const Eigen::MatrixXd Gp = S.g.value(p), Gq = S.g.value(q);
    const Eigen::MatrixXd Fp = S.f.value(p), Fq = S.f.value(q);

    g_id.max_residual = std::max(
        g_id.max_residual, (J.transpose() * Gq * J - Gp).cwiseAbs().maxCoeff());
    f_id.max_residual =
        std::max(f_id.max_residual, (J * Fp - Fq * J).cwiseAbs().maxCoeff());
    for (int i = 0; i < S.s; ++i) {
      eta_id.max_residual =
          std::max(eta_id.max_residual,
                   (J.transpose() * S.eta[i].value(q) - S.eta[i].value(p))
                       .cwiseAbs()
                       .maxCoeff());
      xi_id.max_residual = std::max(
          xi_id.max_residual,
          (J * S.xi[i].value(p) - S.xi[i].value(q)).cwiseAbs().maxCoeff());
    }
  }
}

}  // namespace

AutomorphismReport check_automorphism(const FStructure& S, const AutomorphismMap& phi,
                                      const SampleSpec& samples) {
  if (phi.chart().dim() != S.dim())
    throw DimensionError("check_automorphism: map chart dimension mismatch");
  const auto points = sample_points(S.chart, samples.count, samples.seed);
  AutomorphismReport rep;
  rep.identities = {{"pullback_eta", 0.0},
                    {"pullback_metric", 0.0},
                    {"intertwines_f", 0.0},
                    {"pushforward_xi", 0.0}};
  accumulate_automorphism(S, phi, points, rep);
  return rep;
}

FStructure lift(const FStructure& S) {
  const int N = S.dim();
  const int s = S.s;
  const Chart up = S.chart.extended(fresh_coord_name(S.chart, "t"), Interval{-1.0, 1.0});
  const int M = N + 1;

  // eta_bar_alpha = pullback of eta_alpha, vanishing on d/dt.
  std::vector<OneForm> eta_new;
  eta_new.reserve(s + 1);
  for (int a = 0; a < s; ++a) {
    std::vector<ComponentFn> comps;
    comps.reserve(M);
    for (int k = 0; k < N; ++k) comps.push_back(with_head(S.eta[a].component(k), N));
    comps.push_back(ComponentFn::constant(0.0));
    eta_new.emplace_back(M, std::move(comps));
  }
  // eta_bar_{s+1} = dt + (1/s) (eta_1 + ... + eta_s).
  {
    std::vector<ComponentFn> comps;
    comps.reserve(M);
    const auto eta0 = S.eta;
    for (int k = 0; k < N; ++k) {
      ComponentFn c = ComponentFn::wrap([eta0, k, s](const auto& x) {
        using S_ = typename std::decay_t<decltype(x)>::value_type;
        S_ acc(0.0);
        for (int a = 0; a < s; ++a) acc += eta0[a].component(k)(x);
        return S_(1.0 / s) * acc;
      });
      comps.push_back(with_head(c, N));
    }
    comps.push_back(ComponentFn::constant(1.0));
    eta_new.emplace_back(M, std::move(comps));
  }

  // xi_bar_alpha = xi_alpha - (1/s) d/dt, xi_bar_{s+1} = d/dt.
  std::vector<VectorField> xi_new;
  xi_new.reserve(s + 1);
  for (int a = 0; a < s; ++a) {
    std::vector<ComponentFn> comps;
    comps.reserve(M);
    for (int k = 0; k < N; ++k) comps.push_back(with_head(S.xi[a].component(k), N));
    comps.push_back(ComponentFn::constant(-1.0 / s));
    xi_new.emplace_back(M, std::move(comps));
  }
  {
    Eigen::VectorXd e_t = Eigen::VectorXd::Zero(M);
    e_t[N] = 1.0;
    xi_new.push_back(VectorField::constant(M, e_t));
  }

  // f_bar: f on the base block, zero on d/dt.
  std::vector<ComponentFn> f_comps;
  f_comps.reserve(static_cast<std::size_t>(M) * M);
  for (int k = 0; k < M; ++k)
    for (int j = 0; j < M; ++j) {
      if (k < N && j < N)
        f_comps.push_back(with_head(S.f.component(k, j), N));
      else
        f_comps.push_back(ComponentFn::constant(0.0));
    }
  Tensor11 f_new(M, std::move(f_comps));

  // g_bar = g(p., p.) + Σ eta_bar ⊗ eta_bar with p = id - Σ eta_bar ⊗ xi_bar.
  const Metric g0 = S.g;
  const auto etab = eta_new;
  const auto xib = xi_new;
  std::vector<ComponentFn> upper;
  upper.reserve(static_cast<std::size_t>(M) * (M + 1) / 2);
  for (int a = 0; a < M; ++a)
    for (int b = a; b < M; ++b) {
      upper.push_back(ComponentFn::wrap([g0, etab, xib, a, b, N, M, s](const auto& x) {
        using V = std::decay_t<decltype(x)>;
        using S_ = typename V::value_type;
        V head(x.begin(), x.begin() + N);
        const MatX<S_> G = g0.eval(head);
        VecX<S_> Pa = VecX<S_>::Zero(M), Pb = VecX<S_>::Zero(M);
        Pa[a] = S_(1.0);
        Pb[b] = S_(1.0);
        S_ squares(0.0);
        for (int al = 0; al <= s; ++al) {
          const S_ ea = etab[al].component(a)(x);
          const S_ eb = etab[al].component(b)(x);
          const VecX<S_> xv = xib[al].eval(x);
          Pa -= ea * xv;
          Pb -= eb * xv;
          squares += ea * eb;
        }
        const VecX<S_> gb = G * Pb.head(N);
        S_ m(0.0);
        for (int k = 0; k < N; ++k) m += Pa[k] * gb[k];
        return m + squares;
      }));
    }
  Metric g_new(M, std::move(upper));

  return FStructure(up, S.n, s + 1, std::move(f_new), std::move(xi_new),
                    std::move(eta_new), std::move(g_new));
}

OneForm leaf_form(const FStructure& S) {
  if (S.s < 2) throw PreconditionError("leaf_form needs at least two one-forms");
  const int N = S.dim();
  const int s = S.s - 1;
  const auto eta0 = S.eta;
  std::vector<ComponentFn> comps;
  comps.reserve(N);
  for (int k = 0; k < N; ++k) {
    comps.push_back(ComponentFn::wrap([eta0, k, s](const auto& x) {
      using S_ = typename std::decay_t<decltype(x)>::value_type;
      S_ acc(0.0);
      for (int a = 0; a < s; ++a) acc += eta0[a].component(k)(x);
      return eta0[s].component(k)(x) - S_(1.0 / s) * acc;
    }));
  }
  return OneForm(N, std::move(comps));
}

FStructure slice(const FStructure& S, const SliceOptions& opts) {
  if (S.s < 2)
    throw PreconditionError("slice needs a structure with at least two one-forms");
  const int M = S.dim();
  const int N = M - 1;
  const int s = S.s - 1;
  const Chart down = S.chart.sliced();

  // Precondition: ker(leaf form) is tangent to {t = const}, i.e. the non-t
  // components of eta_s+1 - (1/s) Σ eta_i vanish on the slice.
  {
    const OneForm eta = leaf_form(S);
    const auto points = sample_points(down, opts.samples.count, opts.samples.seed);
    double worst = 0.0;
    for (const auto& p : points) {
      Point ext(M);
      ext.head(N) = p;
      ext[N] = 0.0;
      const Eigen::VectorXd v = eta.value(ext);
      worst = std::max(worst, v.head(N).cwiseAbs().maxCoeff());
    }
    if (worst > opts.tol) {
      std::ostringstream os;
      os << "slice is not a leaf of ker eta: max non-t component " << worst;
      throw PreconditionError(os.str());
    }
  }

  // eta_bar_i: pullback of eta_i.
  std::vector<OneForm> eta_new;
  eta_new.reserve(s);
  for (int i = 0; i < s; ++i) {
    std::vector<ComponentFn> comps;
    comps.reserve(N);
    for (int k = 0; k < N; ++k) comps.push_back(at_t0(S.eta[i].component(k)));
    eta_new.emplace_back(N, std::move(comps));
  }

  // xi_bar_i: tangential part of xi_i + (1/s) xi_{s+1}.
  std::vector<VectorField> xi_new;
  xi_new.reserve(s);
  for (int i = 0; i < s; ++i) {
    std::vector<ComponentFn> comps;
    comps.reserve(N);
    for (int k = 0; k < N; ++k) {
      const auto ci = S.xi[i].component(k);
      const auto cs = S.xi[s].component(k);
      comps.push_back(at_t0(ComponentFn::wrap([ci, cs, s](const auto& x) {
        using S_ = typename std::decay_t<decltype(x)>::value_type;
        return ci(x) + S_(1.0 / s) * cs(x);
      })));
    }
    xi_new.emplace_back(N, std::move(comps));
  }

  const auto etab = eta_new;
  const auto xib = xi_new;
  const Tensor11 f0 = S.f;
  const Metric g0 = S.g;

  // Projector onto the slice frame: P = id - Σ xi_bar ⊗ eta_bar, built
  // columnwise inside each component closure.
  auto projected_column = [etab, xib, s, N](const auto& x, int j) {
    using S_ = typename std::decay_t<std::remove_cvref_t<decltype(x)>>::value_type;
    VecX<S_> Pj = VecX<S_>::Zero(N);
    Pj[j] = S_(1.0);
    for (int i = 0; i < s; ++i) {
      const S_ ej = etab[i].component(j)(x);
      Pj -= ej * xib[i].eval(x);
    }
    return Pj;
  };

  // f_bar = f ∘ P on the slice block.
  std::vector<ComponentFn> f_comps;
  f_comps.reserve(static_cast<std::size_t>(N) * N);
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j) {
      f_comps.push_back(ComponentFn::wrap([f0, projected_column, k, j, N](const auto& x) {
        using V = std::decay_t<decltype(x)>;
        using S_ = typename V::value_type;
        V ext(x);
        ext.push_back(S_(0.0));
        const auto Pj = projected_column(x, j);
        S_ acc(0.0);
        for (int m = 0; m < N; ++m) acc += f0.component(k, m)(ext) * Pj[m];
        return acc;
      }));
    }
  Tensor11 f_new(N, std::move(f_comps));

  // g_bar = g(P., P.) + Σ eta_bar ⊗ eta_bar.
  std::vector<ComponentFn> upper;
  upper.reserve(static_cast<std::size_t>(N) * (N + 1) / 2);
  for (int a = 0; a < N; ++a)
    for (int b = a; b < N; ++b) {
      upper.push_back(
          ComponentFn::wrap([g0, etab, projected_column, a, b, N, s](const auto& x) {
            using V = std::decay_t<decltype(x)>;
            using S_ = typename V::value_type;
            V ext(x);
            ext.push_back(S_(0.0));
            MatX<S_> G(N, N);
            for (int u = 0; u < N; ++u)
              for (int v = 0; v < N; ++v) G(u, v) = g0.component(u, v)(ext);
            const auto Pa = projected_column(x, a);
            const auto Pb = projected_column(x, b);
            const VecX<S_> gb = G * Pb;
            S_ m(0.0);
            for (int k = 0; k < N; ++k) m += Pa[k] * gb[k];
            for (int i = 0; i < s; ++i)
              m += etab[i].component(a)(x) * etab[i].component(b)(x);
            return m;
          }));
    }
  Metric g_new(N, std::move(upper));

  return FStructure(down, S.n, s, std::move(f_new), std::move(xi_new),
                    std::move(eta_new), std::move(g_new));
}

AutomorphismReport check_deck_invariance(const FStructure& lifted,
                                         const AutomorphismMap& phi_base, double t0,
                                         const SampleSpec& samples) {
  if (t0 == 0.0) throw PreconditionError("deck transformation needs t0 != 0");
  if (phi_base.chart().dim() != lifted.dim() - 1)
    throw DimensionError("check_deck_invariance: base map dimension mismatch");
  const int N = phi_base.chart().dim();

  auto extend = [&](const std::vector<Expr>& base, double shift) {
    std::vector<Expr> comps = base;
    comps.push_back(Expr::coordinate(lifted.chart, N) + Expr::constant(shift));
    return comps;
  };

  std::optional<std::vector<Expr>> inv;
  if (phi_base.has_inverse()) inv = extend(phi_base.inverse_components(), -t0);
  const AutomorphismMap deck(lifted.chart, extend(phi_base.components(), t0), inv,
                             samples);

  AutomorphismReport rep = check_automorphism(lifted, deck, samples);
  if (deck.has_inverse()) {
    const auto points = sample_points(lifted.chart, samples.count, samples.seed);
    accumulate_automorphism(lifted, deck.inverse_map(), points, rep);
    rep.inverse_checked = true;
  }
  return rep;
}

}  // namespace fcontact
