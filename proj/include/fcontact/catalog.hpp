#pragma once

#include <string>
#include <vector>

#include "fcontact/mapping_torus.hpp"
#include "fcontact/structures.hpp"

namespace fcontact {

/// A structure written out as expression strings: the exchange format between
/// the catalog, the JSON loader and the CLI.
struct StructureDescription {
  std::vector<std::string> coords;
  std::vector<Interval> box;
  int n = 0;
  int s = 1;
  Params params;
  std::vector<std::vector<std::string>> f;    // N x N
  std::vector<std::vector<std::string>> xi;   // s x N
  std::vector<std::vector<std::string>> eta;  // s x N
  std::vector<std::vector<std::string>> g;    // N x N, upper triangle used
};

/// Parses every expression and assembles the structure. The lower triangle
/// of g is ignored; entries are mirrored from the upper triangle.
FStructure build_structure(const StructureDescription& desc);

/// A named example structure with its companions.
struct CatalogEntry {
  std::string name;
  int n = 0;
  int s = 1;
  int lifts = 0;  // for "lifted-k": lift applied this many times
  Level declared_level = Level::S;
  StructureDescription description;  // of the expression-based base
  FStructure structure;
  std::vector<OneForm> theta_basis;  // constant horizontal generators (closed, basic)
  std::vector<AutomorphismMap> automorphisms;
  std::vector<std::string> automorphism_names;
};

std::vector<std::string> catalog_names();

/// Builds a catalog entry.
///   "sasakian-model"  n in [1,4], s must be 1     (R^{2n+1})
///   "s-model"         n in [0,4], s in [1,4]      (R^{2n+s})
///   "lifted-k"        n in [1,4], s in [2,4]: the (s-1)-fold lift of
///                     "sasakian-model" with n.
/// Throws ConfigError for unknown names or parameters out of range.
CatalogEntry catalog_get(const std::string& name, int n = 1, int s = 1);

/// Constant horizontal one-form Σ coeffs_i dx_i + coeffs_{n+i} dy_i on the
/// entry's chart (closed and basic for every catalog entry).
OneForm make_theta(const CatalogEntry& entry, const Eigen::VectorXd& coeffs);

}  // namespace fcontact
