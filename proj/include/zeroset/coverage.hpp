#pragma once

#include <vector>

#include "zeroset/geometry.hpp"

namespace zeroset {

// How well a point cloud covers a reference sample of the target set.
//   fill_distance: max over reference points of the distance to the nearest
//                  cloud point (the classical mesh norm).
//   mean_gap:      mean of those nearest distances.
//   dispersion:    max over cloud points of the nearest-neighbour distance
//                  within the cloud (0 when the cloud has fewer than 2 points).
struct CoverageStats {
  double fill_distance = 0.0;
  double mean_gap = 0.0;
  double solution_dispersion = 0.0;
};

// Plain O(|cloud| * |reference|) scan; both lists must be non-empty.
CoverageStats coverage(const std::vector<Point>& cloud, const std::vector<Point>& reference);

}  // namespace zeroset
