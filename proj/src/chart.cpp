#include "fcontact/chart.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>

#include "fcontact/dual.hpp"

namespace fcontact {

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

bool reserved_name(const std::string& s) {
  return s == "sin" || s == "cos" || s == "exp";
}

constexpr double kMinBoxLength = 1e-9;

}  // namespace

Chart::Chart(std::vector<std::string> coord_names, std::vector<Interval> box)
    : names_(std::move(coord_names)), box_(std::move(box)) {
  if (names_.empty()) throw DimensionError("chart needs at least one coordinate");
  if (static_cast<int>(names_.size()) > kMaxChartDim)
    throw DimensionError("chart dimension exceeds the supported maximum of " +
                         std::to_string(kMaxChartDim));
  if (box_.size() != names_.size())
    throw DimensionError("chart box size does not match coordinate count");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!valid_identifier(n))
      throw PreconditionError("invalid coordinate name '" + n + "'");
    if (reserved_name(n))
      throw PreconditionError("coordinate name '" + n + "' is a reserved function name");
    if (!seen.insert(n).second)
      throw PreconditionError("duplicate coordinate name '" + n + "'");
  }
  for (std::size_t i = 0; i < box_.size(); ++i) {
    if (!(box_[i].length() >= kMinBoxLength))
      throw PreconditionError("degenerate interval for coordinate '" + names_[i] + "'");
  }
}

Chart::Chart(std::vector<std::string> coord_names)
    : Chart(coord_names, std::vector<Interval>(coord_names.size(), Interval{})) {}

int Chart::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

bool Chart::contains(const Point& p) const {
  if (p.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (!box_[i].contains(p[i])) return false;
  return true;
}

Chart Chart::extended(const std::string& name, Interval range) const {
  if (index_of(name) != -1)
    throw PreconditionError("coordinate '" + name + "' already exists");
  auto names = names_;
  names.push_back(name);
  auto box = box_;
  box.push_back(range);
  return Chart(std::move(names), std::move(box));
}

Chart Chart::sliced() const {
  if (dim() < 2) throw DimensionError("cannot slice a one-dimensional chart");
  return Chart(std::vector<std::string>(names_.begin(), names_.end() - 1),
               std::vector<Interval>(box_.begin(), box_.end() - 1));
}

std::string fresh_coord_name(const Chart& chart, const std::string& base) {
  if (chart.index_of(base) == -1) return base;
  for (int k = 2;; ++k) {
    std::string candidate = base + std::to_string(k);
    if (chart.index_of(candidate) == -1) return candidate;
  }
}

std::vector<Point> sample_points(const Chart& chart, int count, std::uint64_t seed) {
  if (count < 1) throw PreconditionError("sample count must be positive");
  std::mt19937_64 gen(seed);
  // Portable uniform double in [0,1): top 53 bits of the generator output.
  auto uniform01 = [&gen]() {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  std::vector<Point> points;
  points.reserve(count);
  while (static_cast<int>(points.size()) < count) {
    Point p(chart.dim());
    for (int i = 0; i < chart.dim(); ++i) {
      const Interval& iv = chart.box()[i];
      p[i] = iv.lo + uniform01() * iv.length();
    }
    bool duplicate = false;
    for (const auto& q : points)
      if (q == p) duplicate = true;
    if (!duplicate) points.push_back(std::move(p));
  }
  return points;
}

}  // namespace fcontact
