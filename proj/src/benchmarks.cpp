#include "zeroset/benchmarks.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zeroset {

namespace {

BoxDomain square(double half, int d) {
  return BoxDomain(Point(d, -half), Point(d, half));
}

std::string sphere_formula(int d) {
  std::ostringstream s;
  for (int i = 1; i <= d; ++i) s << (i > 1 ? " + " : "") << 'x' << i << "^2";
  s << " - 0.5";
  return s.str();
}

std::string cube_formula(int d) {
  // max is binary, so fold: max(x1, max(x2, ...)) - 0.5
  std::ostringstream s;
  for (int i = 1; i < d; ++i) s << "max(x" << i << ", ";
  s << 'x' << d;
  for (int i = 1; i < d; ++i) s << ')';
  s << " - 0.5";
  return s.str();
}

constexpr const char* kQuadratic = "x1^2 + x2^2 - 0.5";
constexpr const char* kTrig =
    "8*sin((7*(x1 - 0.9)^2)^2) + 6*sin((14*(x1 - 0.9)^2)^2) + (x1 - 0.9)^2"
    " + 8*sin((7*(x2 - 0.9)^2)^2) + 6*sin((14*(x2 - 0.9)^2)^2) + (x2 - 0.9)^2 - 15";
constexpr const char* kBanana = "(1 - x1)^2 + 100*(x2 - x1^2)^2 - 50";
constexpr const char* kRipple = "20 + x1^2 - 10*cos(2*pi*x1) + x2^2 - 10*cos(2*pi*x2) - 60";

SolverConfig base_config(int n, double tol, int target, double C, double k, int p) {
  SolverConfig cfg;
  cfg.initial_chains = n;
  cfg.tol = tol;
  cfg.target_solutions = target;
  cfg.decrease_factor = C;
  cfg.residual_gain = k;
  cfg.inject_per_round = p;
  return cfg;
}

BenchmarkCase level_case(std::string name, std::string formula, double half, SolverConfig cfg,
                         ReferenceKind ref = ReferenceKind::none) {
  BenchmarkCase c{std::move(name), {std::move(formula)}, square(half, 2), cfg, ref};
  return c;
}

int chains_for_dimension(int d) {
  switch (d) {
    case 2: return 5;
    case 3: return 25;
    case 4: return 75;
    default: return 1000;  // d = 10 row
  }
}

std::vector<BenchmarkCase> build_registry() {
  std::vector<BenchmarkCase> all;

  all.push_back(level_case("ex1", kQuadratic, 1.0, base_config(5, 0.01, 1000, 0.75, 1.0, 1),
                           ReferenceKind::sphere));
  all.push_back(level_case("ex2", "x1^4 + x2^3 - 0.5", 1.0,
                           base_config(10, 0.015, 1000, 0.55, 1.0, 1)));
  all.push_back(level_case("ex3", kBanana, 2.0, base_config(10, 3.0, 1000, 0.75, 0.005, 1)));
  all.push_back(level_case("ex4", "(x1 - 0.5)^2 + 3*x1*x2 - x2^3 - 2.25", 2.0,
                           base_config(10, 0.04, 1000, 0.75, 0.25, 1)));
  all.push_back(level_case("ex5", kTrig, 2.0, base_config(10, 0.15, 1000, 0.75, 0.25, 1)));
  {
    // The ripple field is bounded away from zero on this box (it peaks at
    // about -15.5), so no run can emit a solution; a default evaluation
    // budget makes runs finish as budget-stopped instead of spinning.
    SolverConfig cfg = base_config(10, 0.4, 1000, 0.75, 0.025, 1);
    cfg.eval_budget = 5'000'000;
    all.push_back(level_case("ex6", kRipple, 2.0, cfg));
  }

  for (int d : {2, 3, 4, 10}) {
    const SolverConfig cfg = base_config(chains_for_dimension(d), 0.1, 500, 0.75, 1.0, 1);
    all.push_back(BenchmarkCase{"sphere" + std::to_string(d), {sphere_formula(d)},
                                square(1.0, d), cfg, ReferenceKind::sphere});
    all.push_back(BenchmarkCase{"cube" + std::to_string(d), {cube_formula(d)},
                                square(1.0, d), cfg, ReferenceKind::cube_faces});
  }

  // Simultaneous systems aggregate by the max of per-field magnitudes; the
  // fields have very different scales, so mean-normalization is on by default.
  SolverConfig multi = base_config(20, 0.01, 10, 0.75, 1.0, 1);
  multi.normalize = true;
  all.push_back(BenchmarkCase{
      "multi1", {kQuadratic, "(x1 - 0.2)^2 + (x2 + 0.2)^2 - 0.5"}, square(1.0, 2), multi,
      ReferenceKind::two_points});
  multi.target_solutions = 100;
  {
    // One field of this pair is the never-zero ripple, so the system has no
    // solutions at the configured tolerance; budget-stop instead of spinning.
    SolverConfig cfg = multi;
    cfg.eval_budget = 5'000'000;
    all.push_back(BenchmarkCase{"multi2", {kBanana, kRipple}, square(2.0, 2), cfg,
                                ReferenceKind::none});
  }
  all.push_back(BenchmarkCase{"multi3", {kQuadratic, kTrig}, square(1.0, 2), multi,
                              ReferenceKind::none});
  return all;
}

}  // namespace

const std::vector<BenchmarkCase>& registry() {
  static const std::vector<BenchmarkCase> cases = build_registry();
  return cases;
}

const BenchmarkCase& find_case(const std::string& name) {
  for (const BenchmarkCase& c : registry()) {
    if (c.name == name) return c;
  }
  throw std::invalid_argument("unknown benchmark: " + name);
}

Problem make_problem(const BenchmarkCase& c, std::optional<double> tol) {
  std::vector<ScalarField> fields;
  fields.reserve(c.formulas.size());
  for (const std::string& text : c.formulas) {
    fields.push_back(make_field(text, c.domain.dimension()));
  }
  return Problem(std::move(fields), c.domain, tol.value_or(c.config.tol));
}

std::vector<Point> reference_points(const BenchmarkCase& c, int count, RngStream& rng) {
  if (count < 0) throw std::invalid_argument("reference_points: negative count");
  const int d = c.domain.dimension();
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const double radius = std::sqrt(0.5);
  switch (c.reference) {
    case ReferenceKind::none:
      throw std::invalid_argument("no reference set for benchmark: " + c.name);
    case ReferenceKind::sphere:
      for (int i = 0; i < count; ++i) {
        Point p(d);
        double norm = 0.0;
        do {
          norm = 0.0;
          for (int j = 0; j < d; ++j) {
            p[j] = rng.normal();
            norm += p[j] * p[j];
          }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        for (int j = 0; j < d; ++j) p[j] *= radius / norm;
        pts.push_back(std::move(p));
      }
      break;
    case ReferenceKind::cube_faces:
      // The level set of max(x) - 0.5 is the union of faces where one
      // coordinate is 0.5 and the others stay below it.
      for (int i = 0; i < count; ++i) {
        Point p(d);
        const int pinned = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(d));
        for (int j = 0; j < d; ++j) {
          p[j] = j == pinned ? 0.5 : rng.uniform(c.domain.lower()[j], 0.5);
        }
        pts.push_back(std::move(p));
      }
      break;
    case ReferenceKind::two_points: {
      const double r = std::sqrt(0.96);
      const Point a{(0.2 + r) / 2.0, (0.2 + r) / 2.0 - 0.2};
      const Point b{(0.2 - r) / 2.0, (0.2 - r) / 2.0 - 0.2};
      for (int i = 0; i < count; ++i) pts.push_back(i % 2 == 0 ? a : b);
      break;
    }
  }
  return pts;
}

}  // namespace zeroset
