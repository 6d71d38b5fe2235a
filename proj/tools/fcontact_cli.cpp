// Command-line front end: verification and deformation pipelines over
// structure definitions, with machine-readable JSON-lines reports.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fcontact/config.hpp"

namespace fc = fcontact;

namespace {

struct CommonOptions {
  int samples = 64;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  bool fd_check = false;

  fc::SampleSpec sampling() const { return fc::SampleSpec{samples, seed}; }

  fc::VerifyOptions verify_options() const {
    fc::VerifyOptions o;
    o.samples = sampling();
    o.tol = tol;
    o.fd_check = fd_check;
    return o;
  }
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--samples", opts.samples, "sample point count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opts.seed, "sampling seed");
  cmd->add_option("--tol", opts.tol, "residual tolerance");
  cmd->add_flag("--fd-check", opts.fd_check,
                "cross-validate derivatives against central differences");
}

struct SourceOptions {
  std::string config_path;
  std::string catalog_name;
  int n = 1;
  int s = 1;
};

void add_source(CLI::App* cmd, SourceOptions& src) {
  auto* config = cmd->add_option("--config", src.config_path,
                                 "structure definition JSON file");
  auto* catalog = cmd->add_option("--catalog", src.catalog_name,
                                  "catalog entry name");
  cmd->add_option("--n", src.n, "catalog parameter n");
  cmd->add_option("--s", src.s, "catalog parameter s");
  config->excludes(catalog);
}

fc::Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fc::ConfigError("cannot open '" + path + "'");
  fc::Json doc;
  try {
    doc = fc::Json::parse(in);
  } catch (const std::exception& e) {
    throw fc::ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
  return doc;
}

fc::FStructure load_source(const SourceOptions& src) {
  if (!src.catalog_name.empty()) {
    const int s = src.catalog_name == "sasakian-model" ? 1 : src.s;
    return fc::catalog_get(src.catalog_name, src.n, s).structure;
  }
  if (src.config_path.empty())
    throw fc::ConfigError("give a structure with --config or --catalog");
  return fc::build_structure(fc::parse_structure_config(read_json_file(src.config_path)));
}

fc::Json parse_inline_json(const std::string& text, const char* what) {
  try {
    return fc::Json::parse(text);
  } catch (const std::exception& e) {
    throw fc::ConfigError(std::string("invalid JSON for ") + what + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

int emit_verify(const fc::FStructure& S, fc::Level level, const CommonOptions& opts) {
  const auto report = fc::verify(S, level, opts.verify_options());
  fc::Json doc;
  doc["step"] = "verify";
  doc["report"] = fc::verification_report_json(report);
  std::cout << doc.dump() << "\n";
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metric f-contact structures: verification, deformation, "
               "mapping-torus lift/slice and rotation search"};
  app.require_subcommand(1);

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check the structure axioms");
  SourceOptions verify_src;
  CommonOptions verify_opts;
  std::string verify_level = "S";
  add_source(verify_cmd, verify_src);
  add_common(verify_cmd, verify_opts);
  verify_cmd->add_option("--level", verify_level,
                         "metric-f | f-contact | f-k-contact | S");

  // deform
  auto* deform_cmd = app.add_subcommand("deform", "apply a deformation, then verify");
  SourceOptions deform_src;
  CommonOptions deform_opts;
  std::string deform_op = "rotate";
  std::string deform_matrix;
  std::string deform_theta;
  std::string deform_level = "S";
  add_source(deform_cmd, deform_src);
  add_common(deform_cmd, deform_opts);
  deform_cmd->add_option("--op", deform_op, "rotate | antirotate | type2")
      ->check(CLI::IsMember({"rotate", "antirotate", "type2"}));
  deform_cmd->add_option("--matrix", deform_matrix,
                         "orthogonal matrix as JSON rows (rotate/antirotate)");
  deform_cmd->add_option("--theta", deform_theta,
                         "s x N expression strings as JSON rows (type2)");
  deform_cmd->add_option("--level", deform_level, "verification level for the result");

  // lift
  auto* lift_cmd = app.add_subcommand("lift", "mapping-torus lift, then verify");
  SourceOptions lift_src;
  CommonOptions lift_opts;
  std::string lift_level = "S";
  add_source(lift_cmd, lift_src);
  add_common(lift_cmd, lift_opts);
  lift_cmd->add_option("--level", lift_level, "verification level for the result");

  // slice
  auto* slice_cmd = app.add_subcommand("slice", "leaf restriction, then verify");
  SourceOptions slice_src;
  CommonOptions slice_opts;
  std::string slice_level = "S";
  bool slice_lift_first = false;
  add_source(slice_cmd, slice_src);
  add_common(slice_cmd, slice_opts);
  slice_cmd->add_option("--level", slice_level, "verification level for the result");
  slice_cmd->add_flag("--lift-first", slice_lift_first,
                      "lift the source before slicing (roundtrip check)");

  // check-deck
  auto* deck_cmd = app.add_subcommand(
      "check-deck", "lift the source and check deck-transformation invariance");
  SourceOptions deck_src;
  CommonOptions deck_opts;
  std::string deck_phi;
  std::string deck_phi_inverse;
  double deck_t0 = 1.0;
  add_source(deck_cmd, deck_src);
  add_common(deck_cmd, deck_opts);
  deck_cmd->add_option("--phi", deck_phi,
                       "base automorphism expressions as a JSON array")
      ->required();
  deck_cmd->add_option("--phi-inverse", deck_phi_inverse,
                       "inverse expressions as a JSON array");
  deck_cmd->add_option("--t0", deck_t0, "deck translation length (nonzero)");

  // search-rotation
  auto* search_cmd =
      app.add_subcommand("search-rotation", "find A in O(s) with h(A) = target");
  int search_s = 0;
  std::string search_target;
  std::uint64_t search_seed = 42;
  search_cmd->add_option("--s", search_s, "size of the orthogonal group")->required();
  search_cmd->add_option("--target", search_target,
                         "comma-separated target coordinates (sum 0)")
      ->required();
  search_cmd->add_option("--seed", search_seed, "restart seed");

  // catalog
  auto* catalog_cmd = app.add_subcommand("catalog", "list or show built-in entries");
  auto* catalog_list = catalog_cmd->add_subcommand("list", "list entry names");
  auto* catalog_show = catalog_cmd->add_subcommand("show", "print an entry as JSON");
  std::string catalog_show_name;
  int catalog_show_n = 1;
  int catalog_show_s = 1;
  catalog_show->add_option("name", catalog_show_name, "entry name")->required();
  catalog_show->add_option("--n", catalog_show_n, "parameter n");
  catalog_show->add_option("--s", catalog_show_s, "parameter s");
  catalog_cmd->require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run a pipeline JSON document");
  std::string run_path;
  run_cmd->add_option("pipeline", run_path, "pipeline JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify_cmd) {
      const auto level = fc::level_from_name(verify_level);
      if (!level) throw fc::ConfigError("unknown level '" + verify_level + "'");
      return emit_verify(load_source(verify_src), *level, verify_opts);
    }

    if (*deform_cmd) {
      const auto level = fc::level_from_name(deform_level);
      if (!level) throw fc::ConfigError("unknown level '" + deform_level + "'");
      fc::FStructure S = load_source(deform_src);
      fc::Json step;
      step["step"] = deform_op;
      if (deform_op == "type2") {
        if (deform_theta.empty()) throw fc::ConfigError("type2 needs --theta");
        const auto grid = parse_inline_json(deform_theta, "--theta");
        std::vector<fc::OneForm> theta;
        for (const auto& row : grid) {
          std::vector<fc::Expr> comps;
          for (const auto& cell : row)
            comps.push_back(fc::Expr::parse(cell.get<std::string>(), S.chart, {}));
          theta.push_back(fc::OneForm::from_exprs(S.chart, comps));
        }
        fc::Type2Options topts;
        topts.samples = deform_opts.sampling();
        topts.tol = deform_opts.tol;
        const auto pre = fc::type2_preconditions(S, theta, topts.samples);
        step["precondition_max_residual"] = pre.max_residual();
        S = fc::type2(S, theta, topts);
      } else {
        if (deform_matrix.empty())
          throw fc::ConfigError(deform_op + " needs --matrix");
        const auto rows = parse_inline_json(deform_matrix, "--matrix");
        Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (int r = 0; r < m.rows(); ++r)
          for (int c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c].get<double>();
        const fc::RotationMatrix A(m);
        S = deform_op == "rotate" ? fc::rotate(S, A) : fc::antirotate(S, A);
        step["row_sums"] = fc::Json::array();
        for (int i = 0; i < A.s(); ++i) step["row_sums"].push_back(A.row_sums()[i]);
      }
      std::cout << step.dump() << "\n";
      return emit_verify(S, *level, deform_opts);
    }

    if (*lift_cmd) {
      const auto level = fc::level_from_name(lift_level);
      if (!level) throw fc::ConfigError("unknown level '" + lift_level + "'");
      fc::FStructure S = fc::lift(load_source(lift_src));
      fc::Json step;
      step["step"] = "lift";
      step["dim"] = S.dim();
      step["s"] = S.s;
      step["t_coordinate"] = S.chart.coord_name(S.dim() - 1);
      std::cout << step.dump() << "\n";
      return emit_verify(S, *level, lift_opts);
    }

    if (*slice_cmd) {
      const auto level = fc::level_from_name(slice_level);
      if (!level) throw fc::ConfigError("unknown level '" + slice_level + "'");
      fc::FStructure S = load_source(slice_src);
      if (slice_lift_first) S = fc::lift(S);
      fc::SliceOptions sopts;
      sopts.samples = slice_opts.sampling();
      sopts.tol = slice_opts.tol;
      S = fc::slice(S, sopts);
      fc::Json step;
      step["step"] = "slice";
      step["dim"] = S.dim();
      step["s"] = S.s;
      std::cout << step.dump() << "\n";
      return emit_verify(S, *level, slice_opts);
    }

    if (*deck_cmd) {
      fc::FStructure base = load_source(deck_src);
      const auto phi_rows = parse_inline_json(deck_phi, "--phi");
      std::vector<fc::Expr> comps;
      for (const auto& cell : phi_rows)
        comps.push_back(fc::Expr::parse(cell.get<std::string>(), base.chart, {}));
      std::optional<std::vector<fc::Expr>> inv;
      if (!deck_phi_inverse.empty()) {
        std::vector<fc::Expr> iv;
        for (const auto& cell : parse_inline_json(deck_phi_inverse, "--phi-inverse"))
          iv.push_back(fc::Expr::parse(cell.get<std::string>(), base.chart, {}));
        inv = std::move(iv);
      }
      const fc::AutomorphismMap phi(base.chart, std::move(comps), std::move(inv),
                                    deck_opts.sampling());
      const fc::FStructure lifted = fc::lift(base);
      const auto report =
          fc::check_deck_invariance(lifted, phi, deck_t0, deck_opts.sampling());
      fc::Json doc;
      doc["step"] = "check-deck";
      doc["t0"] = deck_t0;
      doc["report"] = fc::automorphism_report_json(report, deck_opts.tol);
      std::cout << doc.dump() << "\n";
      return report.pass(deck_opts.tol) ? 0 : 1;
    }

    if (*search_cmd) {
      const auto parts = split_list(search_target);
      if (static_cast<int>(parts.size()) != search_s)
        throw fc::ConfigError("--target needs exactly s entries");
      Eigen::VectorXd u(search_s);
      for (int i = 0; i < search_s; ++i) {
        try {
          u[i] = std::stod(parts[i]);
        } catch (const std::exception&) {
          throw fc::ConfigError("--target entries must be numbers");
        }
      }
      const fc::TargetVector target = [&u] {
        try {
          return fc::TargetVector(u);
        } catch (const fc::PreconditionError& e) {
          throw fc::ConfigError(e.what());
        }
      }();
      fc::RotationSolveOptions ropts;
      ropts.seed = search_seed;
      const auto sol = fc::solve_rotation(target, ropts);
      fc::Json doc;
      doc["step"] = "search-rotation";
      doc["s"] = search_s;
      doc["residual"] = sol.residual;
      doc["iterations"] = sol.iterations;
      doc["matrix"] = fc::Json::array();
      for (int r = 0; r < search_s; ++r) {
        fc::Json row = fc::Json::array();
        for (int c = 0; c < search_s; ++c) row.push_back(sol.A(r, c));
        doc["matrix"].push_back(std::move(row));
      }
      doc["skew"] = fc::Json::array();
      for (int r = 0; r < search_s; ++r) {
        fc::Json row = fc::Json::array();
        for (int c = 0; c < search_s; ++c) row.push_back(sol.skew(r, c));
        doc["skew"].push_back(std::move(row));
      }
      doc["row_sums"] = fc::Json::array();
      for (int i = 0; i < search_s; ++i) doc["row_sums"].push_back(sol.row_sums[i]);
      std::cout << doc.dump() << "\n";
      return 0;
    }

    if (*catalog_cmd) {
      if (*catalog_list) {
        fc::Json doc;
        doc["entries"] = fc::catalog_names();
        std::cout << doc.dump() << "\n";
        return 0;
      }
      if (*catalog_show) {
        const int s = catalog_show_name == "sasakian-model" ? 1 : catalog_show_s;
        const auto entry = fc::catalog_get(catalog_show_name, catalog_show_n, s);
        std::cout << fc::catalog_entry_json(entry).dump() << "\n";
        return 0;
      }
    }

    if (*run_cmd) {
      const auto pipeline = fc::parse_pipeline_config(read_json_file(run_path));
      return fc::run_pipeline(pipeline, std::cout);
    }
  } catch (const fc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fc::ParseError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return 2;
  } catch (const fc::DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fc::NoConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return 1;
  } catch (const fc::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 1;
  } catch (const fc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
