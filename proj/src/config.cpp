#include "fcontact/config.hpp"

#include <ostream>
#include <sstream>

namespace fcontact {

namespace {

const Json& require_key(const Json& doc, const std::string& key, const char* where) {
  auto it = doc.find(key);
  if (it == doc.end())
    throw ConfigError(std::string(where) + ": missing key '" + key + "'");
  return *it;
}

int require_int(const Json& doc, const std::string& key, const char* where) {
  const Json& v = require_key(doc, key, where);
  if (!v.is_number_integer())
    throw ConfigError(std::string(where) + ": '" + key + "' must be an integer");
  return v.get<int>();
}

std::vector<std::vector<std::string>> expr_grid(const Json& v, const char* what) {
  if (!v.is_array()) throw ConfigError(std::string(what) + " must be an array of rows");
  std::vector<std::vector<std::string>> out;
  for (const auto& row : v) {
    if (!row.is_array())
      throw ConfigError(std::string(what) + " rows must be arrays of strings");
    std::vector<std::string> r;
    for (const auto& cell : row) {
      if (!cell.is_string())
        throw ConfigError(std::string(what) + " entries must be expression strings");
      r.push_back(cell.get<std::string>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

Eigen::MatrixXd number_matrix(const Json& v, const char* what) {
  if (!v.is_array() || v.empty())
    throw ConfigError(std::string(what) + " must be a nonempty array of rows");
  const int rows = static_cast<int>(v.size());
  Eigen::MatrixXd m;
  for (int r = 0; r < rows; ++r) {
    const auto& row = v[r];
    if (!row.is_array())
      throw ConfigError(std::string(what) + " rows must be arrays of numbers");
    if (r == 0) m.resize(rows, static_cast<int>(row.size()));
    if (static_cast<int>(row.size()) != m.cols())
      throw ConfigError(std::string(what) + " rows have inconsistent lengths");
    for (int c = 0; c < m.cols(); ++c) {
      if (!row[c].is_number())
        throw ConfigError(std::string(what) + " entries must be numbers");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd number_vector(const Json& v, const char* what) {
  if (!v.is_array() || v.empty())
    throw ConfigError(std::string(what) + " must be a nonempty array of numbers");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw ConfigError(std::string(what) + " entries must be numbers");
    out[static_cast<int>(i)] = v[i].get<double>();
  }
  return out;
}

}  // namespace

StructureDescription parse_structure_config(const Json& doc) {
  StructureDescription desc;
  const Json& chart = require_key(doc, "chart", "structure config");
  const int dim = require_int(chart, "dim", "chart");
  const Json& coords = require_key(chart, "coords", "chart");
  if (!coords.is_array() || static_cast<int>(coords.size()) != dim)
    throw ConfigError("chart: 'coords' must list exactly 'dim' names");
  for (const auto& c : coords) {
    if (!c.is_string()) throw ConfigError("chart: coordinate names must be strings");
    desc.coords.push_back(c.get<std::string>());
  }
  if (chart.contains("box")) {
    const Json& box = chart["box"];
    if (!box.is_array() || static_cast<int>(box.size()) != dim)
      throw ConfigError("chart: 'box' must list exactly 'dim' intervals");
    for (const auto& iv : box) {
      if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
        throw ConfigError("chart: intervals must be [lo, hi] number pairs");
      desc.box.push_back(Interval{iv[0].get<double>(), iv[1].get<double>()});
    }
  } else {
    desc.box.assign(dim, Interval{-1.0, 1.0});
  }

  desc.n = require_int(doc, "n", "structure config");
  desc.s = require_int(doc, "s", "structure config");
  if (doc.contains("params")) {
    const Json& params = doc["params"];
    if (!params.is_object()) throw ConfigError("'params' must be an object");
    for (auto it = params.begin(); it != params.end(); ++it) {
      if (!it.value().is_number())
        throw ConfigError("parameter '" + it.key() + "' must be a number");
      desc.params[it.key()] = it.value().get<double>();
    }
  }

  const Json& tensors = require_key(doc, "tensors", "structure config");
  desc.f = expr_grid(require_key(tensors, "f", "tensors"), "tensors.f");
  desc.xi = expr_grid(require_key(tensors, "xi", "tensors"), "tensors.xi");
  desc.eta = expr_grid(require_key(tensors, "eta", "tensors"), "tensors.eta");
  desc.g = expr_grid(require_key(tensors, "g", "tensors"), "tensors.g");
  return desc;
}

namespace {

Json grid_json(const std::vector<std::vector<std::string>>& grid) {
  Json out = Json::array();
  for (const auto& row : grid) {
    Json r = Json::array();
    for (const auto& cell : row) r.push_back(cell);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Json structure_config_json(const StructureDescription& desc) {
  Json chart;
  chart["dim"] = static_cast<int>(desc.coords.size());
  chart["coords"] = desc.coords;
  Json box = Json::array();
  for (const auto& iv : desc.box) box.push_back(Json::array({iv.lo, iv.hi}));
  chart["box"] = std::move(box);

  Json doc;
  doc["chart"] = std::move(chart);
  doc["n"] = desc.n;
  doc["s"] = desc.s;
  if (!desc.params.empty()) {
    Json params;
    for (const auto& [k, v] : desc.params) params[k] = v;
    doc["params"] = std::move(params);
  }
  Json tensors;
  tensors["f"] = grid_json(desc.f);
  tensors["xi"] = grid_json(desc.xi);
  tensors["eta"] = grid_json(desc.eta);
  tensors["g"] = grid_json(desc.g);
  doc["tensors"] = std::move(tensors);
  return doc;
}

Json catalog_entry_json(const CatalogEntry& entry) {
  Json doc;
  doc["name"] = entry.name;
  doc["n"] = entry.n;
  doc["s"] = entry.s;
  doc["level"] = level_name(entry.declared_level);
  if (entry.lifts > 0) doc["lifts"] = entry.lifts;
  doc["base"] = structure_config_json(entry.description);
  doc["theta_generators"] = static_cast<int>(entry.theta_basis.size());
  doc["automorphisms"] = entry.automorphism_names;
  return doc;
}

Pipeline parse_pipeline_config(const Json& doc) {
  Pipeline p;
  bool have_source = false;
  if (doc.contains("catalog")) {
    const Json& cat = doc["catalog"];
    if (!cat.is_object() || !cat.contains("name") || !cat["name"].is_string())
      throw ConfigError("'catalog' must be {\"name\": ..., \"n\": ..., \"s\": ...}");
    p.catalog_name = cat["name"].get<std::string>();
    if (cat.contains("n")) p.catalog_n = require_int(cat, "n", "catalog");
    if (cat.contains("s")) p.catalog_s = require_int(cat, "s", "catalog");
    if (p.catalog_name == "sasakian-model") p.catalog_s = 1;
    have_source = true;
  }
  if (doc.contains("structure")) {
    if (have_source)
      throw ConfigError("give either 'structure' or 'catalog', not both");
    p.structure = parse_structure_config(doc["structure"]);
    have_source = true;
  }
  if (!have_source) throw ConfigError("pipeline needs a 'structure' or 'catalog' source");

  if (doc.contains("sampling")) {
    const Json& sampling = doc["sampling"];
    if (sampling.contains("count"))
      p.samples.count = require_int(sampling, "count", "sampling");
    if (sampling.contains("seed"))
      p.samples.seed = static_cast<std::uint64_t>(require_int(sampling, "seed", "sampling"));
    if (p.samples.count < 1) throw ConfigError("sampling.count must be positive");
  }
  if (doc.contains("tolerance")) {
    if (!doc["tolerance"].is_number()) throw ConfigError("'tolerance' must be a number");
    p.tol = doc["tolerance"].get<double>();
  }
  if (doc.contains("fd_check")) {
    if (!doc["fd_check"].is_boolean()) throw ConfigError("'fd_check' must be a boolean");
    p.fd_check = doc["fd_check"].get<bool>();
  }

  // Track (s, dim) through the steps so shapes fail fast.
  int s = p.catalog_name.empty() ? p.structure.s : p.catalog_s;
  int dim = p.catalog_name.empty() ? static_cast<int>(p.structure.coords.size())
                                   : 2 * p.catalog_n + p.catalog_s;
  const int input_s = s;
  const int input_dim = dim;

  const Json& steps = require_key(doc, "steps", "pipeline");
  if (!steps.is_array()) throw ConfigError("'steps' must be an array");
  int index = 0;
  for (const auto& step : steps) {
    ++index;
    const std::string where = "step " + std::to_string(index);
    if (!step.is_object() || !step.contains("op") || !step["op"].is_string())
      throw ConfigError(where + ": each step needs an 'op' string");
    const std::string op = step["op"].get<std::string>();

    if (op == "verify") {
      VerifyStep v;
      if (step.contains("level")) {
        const auto level = level_from_name(step["level"].get<std::string>());
        if (!level) throw ConfigError(where + ": unknown level");
        v.level = *level;
      }
      p.steps.emplace_back(v);
    } else if (op == "rotate" || op == "antirotate") {
      RotateStep r;
      r.anti = (op == "antirotate");
      r.matrix = number_matrix(require_key(step, "matrix", where.c_str()), "matrix");
      if (r.matrix.rows() != s || r.matrix.cols() != s)
        throw ConfigError(where + ": matrix must be " + std::to_string(s) + "x" +
                          std::to_string(s) + " at this point of the pipeline");
      p.steps.emplace_back(std::move(r));
    } else if (op == "type2") {
      Type2Step t;
      t.theta = expr_grid(require_key(step, "theta", where.c_str()), "theta");
      if (static_cast<int>(t.theta.size()) != s)
        throw ConfigError(where + ": theta needs " + std::to_string(s) + " forms");
      for (const auto& row : t.theta)
        if (static_cast<int>(row.size()) != dim)
          throw ConfigError(where + ": each theta form needs " + std::to_string(dim) +
                            " components");
      p.steps.emplace_back(std::move(t));
    } else if (op == "lift") {
      if (dim + 1 > kMaxChartDim)
        throw ConfigError(where + ": lift would exceed the chart dimension cap of " +
                          std::to_string(kMaxChartDim));
      p.steps.emplace_back(LiftStep{});
      ++s;
      ++dim;
    } else if (op == "slice") {
      if (s < 2) throw ConfigError(where + ": slice needs s >= 2");
      p.steps.emplace_back(SliceStep{});
      --s;
      --dim;
    } else if (op == "check-deck") {
      CheckDeckStep c;
      const Json& phi = require_key(step, "phi", where.c_str());
      if (!phi.is_array() || static_cast<int>(phi.size()) != dim - 1)
        throw ConfigError(where + ": phi needs " + std::to_string(dim - 1) +
                          " base-coordinate expressions");
      for (const auto& e : phi) c.phi.push_back(e.get<std::string>());
      if (step.contains("phi_inverse")) {
        std::vector<std::string> inv;
        for (const auto& e : step["phi_inverse"]) inv.push_back(e.get<std::string>());
        if (static_cast<int>(inv.size()) != dim - 1)
          throw ConfigError(where + ": phi_inverse needs " + std::to_string(dim - 1) +
                            " expressions");
        c.phi_inverse = std::move(inv);
      }
      if (step.contains("t0")) {
        if (!step["t0"].is_number()) throw ConfigError(where + ": t0 must be a number");
        c.t0 = step["t0"].get<double>();
      }
      if (c.t0 == 0.0) throw ConfigError(where + ": t0 must be nonzero");
      p.steps.emplace_back(std::move(c));
    } else if (op == "search-rotation") {
      SearchRotationStep sr;
      sr.target = number_vector(require_key(step, "target", where.c_str()), "target");
      if (sr.target.size() < 2)
        throw ConfigError(where + ": target needs at least two entries");
      if (std::abs(sr.target.sum()) > 1e-10)
        throw ConfigError(where + ": target entries must sum to zero");
      p.steps.emplace_back(std::move(sr));
    } else if (op == "compare-to-input") {
      if (s != input_s || dim != input_dim)
        throw ConfigError(where + ": compare-to-input needs the pipeline back at the "
                          "input shape (s = " + std::to_string(input_s) + ", dim = " +
                          std::to_string(input_dim) + ")");
      CompareToInputStep c;
      if (step.contains("tol")) {
        if (!step["tol"].is_number()) throw ConfigError(where + ": tol must be a number");
        c.tol = step["tol"].get<double>();
      }
      p.steps.emplace_back(c);
    } else {
      throw ConfigError(where + ": unknown op '" + op + "'");
    }
  }
  return p;
}

Json verification_report_json(const VerificationReport& report) {
  Json doc;
  doc["level_requested"] = level_name(report.requested);
  doc["level_achieved"] = level_name(report.achieved);
  doc["passed"] = report.passed();
  doc["samples"] = report.samples;
  doc["seed"] = report.seed;
  doc["tolerance"] = report.tolerance;
  Json axioms = Json::array();
  for (const auto& a : report.axioms) {
    Json ax;
    ax["name"] = a.name;
    ax["level"] = level_name(a.level);
    ax["max_residual"] = a.max_residual;
    ax["pass"] = a.pass;
    ax["points"] = a.points_evaluated;
    axioms.push_back(std::move(ax));
  }
  doc["axioms"] = std::move(axioms);
  doc["errors"] = report.errors;
  return doc;
}

Json automorphism_report_json(const AutomorphismReport& report, double tol) {
  Json doc;
  Json ids = Json::array();
  for (const auto& id : report.identities) {
    Json j;
    j["name"] = id.name;
    j["max_residual"] = id.max_residual;
    ids.push_back(std::move(j));
  }
  doc["identities"] = std::move(ids);
  doc["max_residual"] = report.max_residual();
  doc["inverse_checked"] = report.inverse_checked;
  doc["tolerance"] = tol;
  doc["passed"] = report.pass(tol);
  return doc;
}

namespace {

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

int run_pipeline(const Pipeline& pipeline, std::ostream& out) {
  FStructure current = pipeline.catalog_name.empty()
                           ? build_structure(pipeline.structure)
                           : catalog_get(pipeline.catalog_name, pipeline.catalog_n,
                                         pipeline.catalog_s)
                                 .structure;
  const FStructure input = current;

  VerifyOptions vopts;
  vopts.samples = pipeline.samples;
  vopts.tol = pipeline.tol;
  vopts.fd_check = pipeline.fd_check;

  bool all_passed = true;
  int index = 0;
  for (const auto& step : pipeline.steps) {
    ++index;
    Json report;
    report["step_index"] = index;
    try {
      if (const auto* v = std::get_if<VerifyStep>(&step)) {
        report["step"] = "verify";
        const auto r = verify(current, v->level, vopts);
        report["report"] = verification_report_json(r);
        if (!r.passed()) all_passed = false;
      } else if (const auto* r = std::get_if<RotateStep>(&step)) {
        report["step"] = r->anti ? "antirotate" : "rotate";
        const RotationMatrix A(r->matrix);
        FStructure next = r->anti ? antirotate(current, A) : rotate(current, A);
        // The fundamental 2-form is unchanged by construction; report it.
        const auto points =
            sample_points(current.chart, pipeline.samples.count, pipeline.samples.seed);
        double omega_diff = 0.0;
        for (const auto& p : points)
          omega_diff = std::max(omega_diff,
                                (fundamental_form_frame(current, p) -
                                 fundamental_form_frame(next, p))
                                    .cwiseAbs()
                                    .maxCoeff());
        report["row_sums"] = vector_json(A.row_sums());
        report["omega_max_difference"] = omega_diff;
        current = std::move(next);
      } else if (const auto* t = std::get_if<Type2Step>(&step)) {
        report["step"] = "type2";
        std::vector<OneForm> theta;
        for (const auto& row : t->theta) {
          std::vector<Expr> comps;
          for (const auto& text : row)
            comps.push_back(Expr::parse(text, current.chart, {}));
          theta.push_back(OneForm::from_exprs(current.chart, comps));
        }
        Type2Options topts;
        topts.samples = pipeline.samples;
        topts.tol = vopts.tol;
        const auto pre = type2_preconditions(current, theta, topts.samples);
        report["precondition_max_residual"] = pre.max_residual();
        current = type2(current, theta, topts);
      } else if (std::get_if<LiftStep>(&step)) {
        report["step"] = "lift";
        current = lift(current);
        report["dim"] = current.dim();
        report["s"] = current.s;
        report["t_coordinate"] = current.chart.coord_name(current.dim() - 1);
      } else if (std::get_if<SliceStep>(&step)) {
        report["step"] = "slice";
        SliceOptions sopts;
        sopts.samples = pipeline.samples;
        sopts.tol = vopts.tol;
        current = slice(current, sopts);
        report["dim"] = current.dim();
        report["s"] = current.s;
      } else if (const auto* c = std::get_if<CheckDeckStep>(&step)) {
        report["step"] = "check-deck";
        const Chart base = current.chart.sliced();
        std::vector<Expr> comps;
        for (const auto& text : c->phi) comps.push_back(Expr::parse(text, base, {}));
        std::optional<std::vector<Expr>> inv;
        if (c->phi_inverse) {
          std::vector<Expr> iv;
          for (const auto& text : *c->phi_inverse)
            iv.push_back(Expr::parse(text, base, {}));
          inv = std::move(iv);
        }
        const AutomorphismMap phi(base, std::move(comps), std::move(inv),
                                  pipeline.samples);
        const auto r = check_deck_invariance(current, phi, c->t0, pipeline.samples);
        report["t0"] = c->t0;
        report["report"] = automorphism_report_json(r, vopts.tol);
        if (!r.pass(vopts.tol)) all_passed = false;
      } else if (const auto* sr = std::get_if<SearchRotationStep>(&step)) {
        report["step"] = "search-rotation";
        const TargetVector target(sr->target);
        RotationSolveOptions ropts;
        ropts.seed = pipeline.samples.seed;
        const auto sol = solve_rotation(target, ropts);
        report["s"] = target.s();
        report["target"] = vector_json(target.coords());
        report["matrix"] = matrix_json(sol.A);
        report["skew"] = matrix_json(sol.skew);
        report["row_sums"] = vector_json(sol.row_sums);
        report["residual"] = sol.residual;
        report["iterations"] = sol.iterations;
        const double ortho =
            (sol.A.transpose() * sol.A -
             Eigen::MatrixXd::Identity(target.s(), target.s()))
                .cwiseAbs()
                .maxCoeff();
        report["orthogonality_defect"] = ortho;
      } else if (const auto* c = std::get_if<CompareToInputStep>(&step)) {
        report["step"] = "compare-to-input";
        const auto points =
            sample_points(input.chart, pipeline.samples.count, pipeline.samples.seed);
        const double diff = structure_max_difference(current, input, points);
        report["max_difference"] = diff;
        report["tolerance"] = c->tol;
        const bool ok = diff <= c->tol;
        report["passed"] = ok;
        if (!ok) all_passed = false;
      }
    } catch (const PreconditionError& e) {
      report["error"] = std::string("precondition: ") + e.what();
      out << report.dump() << "\n";
      return 1;
    } catch (const NoConvergenceError& e) {
      report["error"] = std::string("no convergence: ") + e.what();
      out << report.dump() << "\n";
      return 1;
    } catch (const DomainError& e) {
      report["error"] = std::string("domain error: ") + e.what();
      out << report.dump() << "\n";
      return 1;
    }
    out << report.dump() << "\n";
  }
  return all_passed ? 0 : 1;
}

}  // namespace fcontact
