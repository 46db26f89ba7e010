#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeroset/geometry.hpp"
#include "zeroset/rng.hpp"

namespace zeroset {

// Thrown when a field produces a non-finite value; carries the offending point.
class FieldEvalError : public std::runtime_error {
 public:
  FieldEvalError(std::size_t field_index, Point point);
  std::size_t field_index() const { return field_index_; }
  const Point& point() const { return point_; }

 private:
  std::size_t field_index_;
  Point point_;
};

// One scalar component f_j of the system.  Every evaluation bumps a shared
// atomic counter, so the total work of a run can be read off the problem
// afterwards; the counter is relaxed because exact ordering does not matter,
// only the total at the synchronization points of the solver loop.
class ScalarField {
 public:
  ScalarField(int dimension, std::function<double(const Point&)> fn);

  int dimension() const { return dimension_; }
  std::int64_t evaluations() const { return count_->load(std::memory_order_relaxed); }

  // Counted, finiteness-checked evaluation (the solver path).
  double evaluate(const Point& z, std::size_t field_index = 0) const;

  const std::function<double(const Point&)>& raw() const { return fn_; }

 private:
  int dimension_;
  std::function<double(const Point&)> fn_;
  std::shared_ptr<std::atomic<std::int64_t>> count_;
};

// Per-point residual: |f_j(z)| for each field plus the max aggregation used
// by the acceptance test and the solution predicate.
struct ResidualValue {
  std::vector<double> per_field;
  double aggregated = 0.0;
};

class Problem {
 public:
  Problem(std::vector<ScalarField> fields, BoxDomain domain, double tol);

  const BoxDomain& domain() const { return domain_; }
  double tol() const { return tol_; }
  int dimension() const { return domain_.dimension(); }
  std::size_t field_count() const { return fields_.size(); }
  const std::vector<ScalarField>& fields() const { return fields_; }

  ResidualValue evaluate(const Point& z) const;
  bool is_solution(const ResidualValue& r) const { return r.aggregated <= tol_; }

  // Sum of the per-field evaluation counters.
  std::int64_t total_evaluations() const;

 private:
  std::vector<ScalarField> fields_;
  BoxDomain domain_;
  double tol_;
};

// Returns a problem whose field j is f_j / s_j, where s_j is the mean of
// |f_j| over `pilot` uniform points (s_j below 1e-12 is clamped to 1).  The
// pilot evaluations are counted on the input problem's fields; the returned
// problem starts with fresh counters.
Problem normalize(const Problem& problem, int pilot, RngStream& rng);

}  // namespace zeroset
