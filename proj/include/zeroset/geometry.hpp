#pragma once

#include <string>
#include <vector>

namespace zeroset {

using Point = std::vector<double>;

// Axis-aligned box, the search domain for every solver in this library.
// Bounds are validated on construction: dimension >= 1 and lower[i] < upper[i].
class BoxDomain {
 public:
  BoxDomain(std::vector<double> lower, std::vector<double> upper);

  int dimension() const { return static_cast<int>(lower_.size()); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  bool contains(const Point& p) const;

  // Euclidean length of the main diagonal.
  double diameter() const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// Euclidean distance; throws std::invalid_argument on dimension mismatch.
double distance(const Point& a, const Point& b);

}  // namespace zeroset
