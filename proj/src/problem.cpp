#include "zeroset/problem.hpp"

#include <cmath>
#include <sstream>

namespace zeroset {

namespace {

std::string describe_point(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ", ";
    os << p[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

FieldEvalError::FieldEvalError(std::size_t field_index, Point point)
    : std::runtime_error("field " + std::to_string(field_index + 1) +
                         " produced a non-finite value at " + describe_point(point)),
      field_index_(field_index),
      point_(std::move(point)) {}

ScalarField::ScalarField(int dimension, std::function<double(const Point&)> fn)
    : dimension_(dimension),
      fn_(std::move(fn)),
      count_(std::make_shared<std::atomic<std::int64_t>>(0)) {
  if (dimension_ < 1) {
    throw std::invalid_argument("ScalarField: dimension must be at least 1");
  }
  if (!fn_) {
    throw std::invalid_argument("ScalarField: missing evaluator");
  }
}

double ScalarField::evaluate(const Point& z, std::size_t field_index) const {
  count_->fetch_add(1, std::memory_order_relaxed);
  const double v = fn_(z);
  if (!std::isfinite(v)) {
    throw FieldEvalError(field_index, z);
  }
  return v;
}

Problem::Problem(std::vector<ScalarField> fields, BoxDomain domain, double tol)
    : fields_(std::move(fields)), domain_(std::move(domain)), tol_(tol) {
  if (fields_.empty()) {
    throw std::invalid_argument("Problem: needs at least one field");
  }
  if (!(tol_ > 0.0)) {
    throw std::invalid_argument("Problem: tol must be positive");
  }
  for (const auto& f : fields_) {
    if (f.dimension() != domain_.dimension()) {
      throw std::invalid_argument("Problem: field dimension does not match the domain");
    }
  }
}

ResidualValue Problem::evaluate(const Point& z) const {
  if (static_cast<int>(z.size()) != domain_.dimension()) {
    throw std::invalid_argument("Problem::evaluate: point dimension mismatch");
  }
  ResidualValue r;
  r.per_field.resize(fields_.size());
  r.aggregated = 0.0;
  for (std::size_t j = 0; j < fields_.size(); ++j) {
    const double v = std::fabs(fields_[j].evaluate(z, j));
    r.per_field[j] = v;
    if (v > r.aggregated) r.aggregated = v;
  }
  return r;
}

std::int64_t Problem::total_evaluations() const {
  std::int64_t total = 0;
  for (const auto& f : fields_) total += f.evaluations();
  return total;
}

Problem normalize(const Problem& problem, int pilot, RngStream& rng) {
  if (pilot < 1) {
    throw std::invalid_argument("normalize: pilot size must be at least 1");
  }
  std::vector<Point> pts(static_cast<std::size_t>(pilot));
  for (auto& p : pts) p = sample_box(problem.domain(), rng);

  std::vector<ScalarField> scaled;
  scaled.reserve(problem.field_count());
  for (std::size_t j = 0; j < problem.field_count(); ++j) {
    const ScalarField& f = problem.fields()[j];
    double mean = 0.0;
    for (const auto& p : pts) mean += std::fabs(f.evaluate(p, j));
    mean /= static_cast<double>(pilot);
    const double s = mean < 1e-12 ? 1.0 : mean;
    scaled.emplace_back(f.dimension(),
                        [fn = f.raw(), s](const Point& z) { return fn(z) / s; });
  }
  return Problem(std::move(scaled), problem.domain(), problem.tol());
}

}  // namespace zeroset
