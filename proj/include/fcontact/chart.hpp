#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "fcontact/errors.hpp"

namespace fcontact {

/// A point of a chart, as coordinates.
using Point = Eigen::VectorXd;

/// Closed interval used as a per-coordinate sampling range.
struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// An open coordinate box in R^N with named coordinates. All tensor fields
/// of this library live on a single chart; the box only bounds where sample
/// points are drawn, expressions stay evaluable outside it.
class Chart {
 public:
  /// Throws DimensionError / PreconditionError on an empty coordinate list,
  /// dimension above kMaxChartDim, duplicate or malformed names, reserved
  /// function names, or a (numerically) degenerate interval.
  Chart(std::vector<std::string> coord_names, std::vector<Interval> box);

  /// Convenience: the default box [-1,1]^N.
  explicit Chart(std::vector<std::string> coord_names);

  int dim() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& coord_names() const { return names_; }
  const std::string& coord_name(int i) const { return names_.at(i); }
  const std::vector<Interval>& box() const { return box_; }

  /// Index of a coordinate name, or -1 if absent.
  int index_of(const std::string& name) const;

  bool contains(const Point& p) const;

  /// Chart extended by one coordinate (used by the mapping-torus lift);
  /// the new name must be fresh.
  Chart extended(const std::string& name, Interval range) const;

  /// Chart with the last coordinate dropped (used by the leaf slice).
  Chart sliced() const;

 private:
  std::vector<std::string> names_;
  std::vector<Interval> box_;
};

/// Picks a coordinate name not yet used by the chart: `base`, then
/// `base2`, `base3`, ...
std::string fresh_coord_name(const Chart& chart, const std::string& base);

/// Deterministic sample points, uniform in the chart box. Fixed seed gives a
/// fixed list (bit-identical across platforms); exact duplicates are redrawn.
std::vector<Point> sample_points(const Chart& chart, int count, std::uint64_t seed);

/// Default sampling used throughout verification.
struct SampleSpec {
  int count = 64;
  std::uint64_t seed = 42;
};

}  // namespace fcontact
