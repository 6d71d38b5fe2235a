#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fcontact/catalog.hpp"
#include "fcontact/deformations.hpp"
#include "fcontact/rotation_search.hpp"

namespace fcontact {

using Json = nlohmann::ordered_json;

/// Parses a structure document:
/// { "chart": {"dim": N, "coords": [...], "box": [[lo,hi],...]},
///   "n": ..., "s": ..., "params": {...},
///   "tensors": {"f": NxN, "xi": sxN, "eta": sxN, "g": NxN (upper triangle)} }
/// Throws ConfigError on schema problems; expression errors carry line/column.
StructureDescription parse_structure_config(const Json& doc);

Json structure_config_json(const StructureDescription& desc);
Json catalog_entry_json(const CatalogEntry& entry);

// Pipeline steps. Parameters are type-checked before execution starts.
struct VerifyStep {
  Level level = Level::S;
};
struct RotateStep {
  Eigen::MatrixXd matrix;
  bool anti = false;
};
struct Type2Step {
  std::vector<std::vector<std::string>> theta;  // s x N expression strings
};
struct LiftStep {};
struct SliceStep {};
struct CheckDeckStep {
  std::vector<std::string> phi;
  std::optional<std::vector<std::string>> phi_inverse;
  double t0 = 1.0;
};
struct SearchRotationStep {
  Eigen::VectorXd target;
};
struct CompareToInputStep {
  double tol = 1e-10;
};

using PipelineStep = std::variant<VerifyStep, RotateStep, Type2Step, LiftStep,
                                  SliceStep, CheckDeckStep, SearchRotationStep,
                                  CompareToInputStep>;

struct Pipeline {
  StructureDescription structure;        // used when catalog_name is empty
  std::string catalog_name;              // "" = inline structure
  int catalog_n = 1;
  int catalog_s = 1;
  SampleSpec samples;
  double tol = 1e-9;
  bool fd_check = false;
  std::vector<PipelineStep> steps;
};

/// Parses and statically type-checks a pipeline document, tracking how lift,
/// slice and the deformations change s and the chart dimension so that each
/// step's parameter shapes are validated before anything runs.
Pipeline parse_pipeline_config(const Json& doc);

/// Runs the pipeline, writing one JSON report per step (one per line).
/// Returns the process exit code: 0 when all verifications and comparisons
/// pass, 1 on a verification/precondition failure.
int run_pipeline(const Pipeline& pipeline, std::ostream& out);

Json verification_report_json(const VerificationReport& report);
Json automorphism_report_json(const AutomorphismReport& report, double tol);

}  // namespace fcontact
