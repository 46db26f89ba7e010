#include "zeroset/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace zeroset {

BoxDomain::BoxDomain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) {
    throw std::invalid_argument("BoxDomain: dimension must be at least 1");
  }
  if (lower_.size() != upper_.size()) {
    throw std::invalid_argument("BoxDomain: lower and upper bounds differ in dimension");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i])) {
      throw std::invalid_argument("BoxDomain: lower bound must be strictly below upper bound in every coordinate");
    }
  }
}

bool BoxDomain::contains(const Point& p) const {
  if (p.size() != lower_.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < lower_[i] || p[i] > upper_[i]) return false;
  }
  return true;
}

double BoxDomain::diameter() const {
  double s = 0.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    const double e = upper_[i] - lower_[i];
    s += e * e;
  }
  return std::sqrt(s);
}

double distance(const Point& a, const Point& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("distance: points differ in dimension");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a[i] - b[i];
    s += e * e;
  }
  return std::sqrt(s);
}

}  // namespace zeroset
