#include "fcontact/catalog.hpp"

#include <cmath>
#include <sstream>

namespace fcontact {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// The model constants. With the 1/2 exterior-derivative convention used by
// this library, d(eta^a) = omega forces eta^a = -1/2 (dz^a - sum_i y_i dx_i),
// xi_a = -2 d/dz^a and horizontal metric factor kappa = 1/4 for the frame
// map f: X_i -> Y_i -> -X_i.
constexpr double kEtaZ = -0.5;    // dz coefficient of eta
constexpr double kEtaX = 0.5;     // y_i dx_i coefficient of eta
constexpr double kXiZ = -2.0;     // xi = kXiZ * d/dz
constexpr double kKappa = 0.25;   // horizontal metric factor

StructureDescription model_description(int n, int s, bool plain_z_name) {
  StructureDescription d;
  d.n = n;
  d.s = s;
  const int N = 2 * n + s;
  for (int i = 1; i <= n; ++i) d.coords.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i) d.coords.push_back("y" + std::to_string(i));
  for (int a = 1; a <= s; ++a)
    d.coords.push_back(plain_z_name && s == 1 ? "z" : "z" + std::to_string(a));
  d.box.assign(N, Interval{-1.0, 1.0});

  auto y = [&](int i) { return "y" + std::to_string(i + 1); };
  const int xo = 0, yo = n, zo = 2 * n;

  d.eta.assign(s, std::vector<std::string>(N, "0"));
  d.xi.assign(s, std::vector<std::string>(N, "0"));
  for (int a = 0; a < s; ++a) {
    for (int i = 0; i < n; ++i) d.eta[a][xo + i] = num(kEtaX) + "*" + y(i);
    d.eta[a][zo + a] = num(kEtaZ);
    d.xi[a][zo + a] = num(kXiZ);
  }

  d.f.assign(N, std::vector<std::string>(N, "0"));
  for (int i = 0; i < n; ++i) {
    d.f[yo + i][xo + i] = "1";
    d.f[xo + i][yo + i] = "-1";
    for (int a = 0; a < s; ++a) d.f[zo + a][yo + i] = "-" + y(i);
  }

  d.g.assign(N, std::vector<std::string>(N, "0"));
  const double q = kEtaX * kEtaX * s;  // coefficient of y_i y_j in g_xx
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::string e = num(q) + "*" + y(i) + "*" + y(j);
      if (i == j) e += " + " + num(kKappa);
      d.g[xo + i][xo + j] = e;
    }
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < s; ++a)
      d.g[xo + i][zo + a] = num(kEtaX * kEtaZ) + "*" + y(i);
  for (int i = 0; i < n; ++i) d.g[yo + i][yo + i] = num(kKappa);
  for (int a = 0; a < s; ++a) d.g[zo + a][zo + a] = num(kEtaZ * kEtaZ);
  return d;
}

std::vector<OneForm> horizontal_basis(const Chart& chart, int n) {
  std::vector<OneForm> basis;
  basis.reserve(2 * n);
  for (int k = 0; k < 2 * n; ++k) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(chart.dim());
    c[k] = 1.0;
    basis.push_back(OneForm::constant(chart.dim(), c));
  }
  return basis;
}

AutomorphismMap z_translation(const Chart& chart, int n, int s, double amount) {
  std::vector<Expr> fwd, inv;
  for (int k = 0; k < chart.dim(); ++k) {
    const Expr c = Expr::coordinate(chart, k);
    if (k >= 2 * n && k < 2 * n + s) {
      fwd.push_back(c + Expr::constant(amount));
      inv.push_back(c - Expr::constant(amount));
    } else {
      fwd.push_back(c);
      inv.push_back(c);
    }
  }
  return AutomorphismMap(chart, std::move(fwd), std::move(inv));
}

// Rotation by `angle` in every (x_i, y_i) plane, with the z-correction that
// makes it preserve eta (the horizontal part y dx is not rotation-invariant
// on the nose, only up to the exact term d u).
AutomorphismMap plane_rotation(const Chart& chart, int n, int s, double angle) {
  const double c = std::cos(angle);
  const double si = std::sin(angle);

  auto build = [&](double sgn) {
    // u(x, y) = sum_i (sgn*si*c/2)(x_i^2 - y_i^2) + (c^2 - 1) x_i y_i
    std::vector<Expr> out;
    Expr u = Expr::constant(0.0);
    for (int i = 0; i < n; ++i) {
      const Expr xi_ = Expr::coordinate(chart, i);
      const Expr yi_ = Expr::coordinate(chart, n + i);
      u = u + Expr::constant(sgn * si * c / 2.0) *
                  (Expr::pow(xi_, 2) - Expr::pow(yi_, 2)) +
          Expr::constant(c * c - 1.0) * xi_ * yi_;
    }
    for (int i = 0; i < n; ++i) {
      const Expr xi_ = Expr::coordinate(chart, i);
      const Expr yi_ = Expr::coordinate(chart, n + i);
      out.push_back(Expr::constant(c) * xi_ - Expr::constant(sgn * si) * yi_);
    }
    for (int i = 0; i < n; ++i) {
      const Expr xi_ = Expr::coordinate(chart, i);
      const Expr yi_ = Expr::coordinate(chart, n + i);
      out.push_back(Expr::constant(sgn * si) * xi_ + Expr::constant(c) * yi_);
    }
    for (int a = 0; a < s; ++a)
      out.push_back(Expr::coordinate(chart, 2 * n + a) + u);
    return out;
  };

  return AutomorphismMap(chart, build(1.0), build(-1.0));
}

void require_range(const std::string& name, int value, int lo, int hi) {
  if (value < lo || value > hi) {
    std::ostringstream os;
    os << "catalog parameter " << name << " = " << value << " out of range ["
       << lo << ", " << hi << "]";
    throw ConfigError(os.str());
  }
}

}  // namespace

FStructure build_structure(const StructureDescription& desc) {
  Chart chart(desc.coords, desc.box);
  const int N = chart.dim();
  if (2 * desc.n + desc.s != N)
    throw ConfigError("structure description: dim must equal 2n + s");

  auto parse_grid = [&](const std::vector<std::vector<std::string>>& grid, int rows,
                        const char* what) {
    if (static_cast<int>(grid.size()) != rows)
      throw ConfigError(std::string(what) + ": expected " + std::to_string(rows) +
                        " rows");
    std::vector<std::vector<Expr>> out(rows);
    for (int r = 0; r < rows; ++r) {
      if (static_cast<int>(grid[r].size()) != N)
        throw ConfigError(std::string(what) + ": row " + std::to_string(r + 1) +
                          " needs " + std::to_string(N) + " entries");
      for (const auto& text : grid[r])
        out[r].push_back(Expr::parse(text, chart, desc.params));
    }
    return out;
  };

  const auto f_rows = parse_grid(desc.f, N, "tensor f");
  const auto xi_rows = parse_grid(desc.xi, desc.s, "fields xi");
  const auto eta_rows = parse_grid(desc.eta, desc.s, "forms eta");
  const auto g_rows = parse_grid(desc.g, N, "metric g");

  Tensor11 f = Tensor11::from_exprs(chart, f_rows);
  std::vector<VectorField> xi;
  std::vector<OneForm> eta;
  for (int i = 0; i < desc.s; ++i) {
    xi.push_back(VectorField::from_exprs(chart, xi_rows[i]));
    eta.push_back(OneForm::from_exprs(chart, eta_rows[i]));
  }
  Metric g = Metric::from_exprs(chart, g_rows);
  return FStructure(std::move(chart), desc.n, desc.s, std::move(f), std::move(xi),
                    std::move(eta), std::move(g));
}

std::vector<std::string> catalog_names() {
  return {"sasakian-model", "s-model", "lifted-k"};
}

CatalogEntry catalog_get(const std::string& name, int n, int s) {
  if (name == "sasakian-model") {
    require_range("n", n, 1, 4);
    if (s != 1) throw ConfigError("sasakian-model has s = 1");
    StructureDescription desc = model_description(n, 1, /*plain_z_name=*/true);
    FStructure S = build_structure(desc);
    const Chart chart = S.chart;
    std::vector<AutomorphismMap> autos;
    autos.push_back(z_translation(chart, n, 1, 1.0));
    autos.push_back(plane_rotation(chart, n, 1, M_PI / 6.0));
    return CatalogEntry{.name = name,
                        .n = n,
                        .s = 1,
                        .lifts = 0,
                        .declared_level = Level::S,
                        .description = std::move(desc),
                        .structure = std::move(S),
                        .theta_basis = horizontal_basis(chart, n),
                        .automorphisms = std::move(autos),
                        .automorphism_names = {"z-translation", "plane-rotation"}};
  }
  if (name == "s-model") {
    require_range("n", n, 0, 4);
    require_range("s", s, 1, 4);
    StructureDescription desc = model_description(n, s, /*plain_z_name=*/false);
    FStructure S = build_structure(desc);
    const Chart chart = S.chart;
    std::vector<AutomorphismMap> autos;
    std::vector<std::string> auto_names;
    autos.push_back(z_translation(chart, n, s, 1.0));
    auto_names.push_back("z-translation");
    if (n >= 1) {
      autos.push_back(plane_rotation(chart, n, s, M_PI / 6.0));
      auto_names.push_back("plane-rotation");
    }
    return CatalogEntry{.name = name,
                        .n = n,
                        .s = s,
                        .lifts = 0,
                        .declared_level = Level::S,
                        .description = std::move(desc),
                        .structure = std::move(S),
                        .theta_basis = horizontal_basis(chart, n),
                        .automorphisms = std::move(autos),
                        .automorphism_names = std::move(auto_names)};
  }
  if (name == "lifted-k") {
    require_range("n", n, 1, 4);
    require_range("s", s, 2, 4);
    StructureDescription desc = model_description(n, 1, /*plain_z_name=*/true);
    FStructure S = build_structure(desc);
    const int lifts = s - 1;
    for (int k = 0; k < lifts; ++k) S = lift(S);
    const Chart chart = S.chart;
    return CatalogEntry{.name = name,
                        .n = n,
                        .s = s,
                        .lifts = lifts,
                        .declared_level = Level::S,
                        .description = std::move(desc),
                        .structure = std::move(S),
                        .theta_basis = horizontal_basis(chart, n),
                        .automorphisms = {},
                        .automorphism_names = {}};
  }
  throw ConfigError("unknown catalog entry '" + name + "'");
}

OneForm make_theta(const CatalogEntry& entry, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != 2 * entry.n)
    throw DimensionError("make_theta: need 2n horizontal coefficients");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(entry.structure.dim());
  full.head(2 * entry.n) = coeffs;
  return OneForm::constant(entry.structure.dim(), full);
}

}  // namespace fcontact
