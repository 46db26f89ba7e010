#include "zeroset/coverage.hpp"

#include <limits>
#include <stdexcept>

namespace zeroset {

CoverageStats coverage(const std::vector<Point>& cloud, const std::vector<Point>& reference) {
  if (cloud.empty() || reference.empty()) {
    throw std::invalid_argument("coverage: both point lists must be non-empty");
  }
  CoverageStats stats;
  double sum = 0.0;
  for (const auto& r : reference) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cloud) {
      const double d = distance(r, c);
      if (d < best) best = d;
    }
    sum += best;
    if (best > stats.fill_distance) stats.fill_distance = best;
  }
  stats.mean_gap = sum / static_cast<double>(reference.size());

  if (cloud.size() >= 2) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < cloud.size(); ++j) {
        if (i == j) continue;
        const double d = distance(cloud[i], cloud[j]);
        if (d < best) best = d;
      }
      if (best > stats.solution_dispersion) stats.solution_dispersion = best;
    }
  }
  return stats;
}

}  // namespace zeroset
