#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zeroset/expr.hpp"
#include "zeroset/problem.hpp"
#include "zeroset/solver.hpp"

namespace zeroset {

// How a case's reference points on the zero set are generated (for coverage
// metrics).  Cases whose zero set has no workable parametrization carry
// `none` and reference_points() refuses them.
enum class ReferenceKind {
  none,
  sphere,      // ||x|| = sqrt(0.5): random direction scaled to the radius
  cube_faces,  // max(x_i) = 0.5: one coordinate pinned, the rest below it
  two_points,  // the two analytic intersection points of the circle pair
};

struct BenchmarkCase {
  std::string name;
  std::vector<std::string> formulas;  // one expression per field
  BoxDomain domain;
  SolverConfig config;  // table-row defaults (tol lives here too)
  ReferenceKind reference = ReferenceKind::none;
};

// All built-in cases: ex1..ex6, sphere2/3/4/10, cube2/3/4/10, multi1/2/3.
const std::vector<BenchmarkCase>& registry();

// Lookup by CLI identifier; throws std::invalid_argument naming the unknown.
const BenchmarkCase& find_case(const std::string& name);

// Builds a fresh Problem (fresh evaluation counters) from the case formulas.
// tol defaults to the case's configured tolerance.
Problem make_problem(const BenchmarkCase& c, std::optional<double> tol = std::nullopt);

// `count` points lying on the zero set (aggregated residual <= 1e-9), drawn
// from `rng`.  Throws std::invalid_argument for cases without a reference.
std::vector<Point> reference_points(const BenchmarkCase& c, int count, RngStream& rng);

}  // namespace zeroset
