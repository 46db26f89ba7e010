#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "zeroset/geometry.hpp"
#include "zeroset/problem.hpp"
#include "zeroset/rng.hpp"

using namespace zeroset;

static ScalarField quadratic_field() {
  return ScalarField(2, [](const Point& z) { return z[0] * z[0] + z[1] * z[1] - 0.5; });
}

TEST_CASE("scalar field counts every evaluation") {
  ScalarField f = quadratic_field();
  CHECK(f.evaluations() == 0);
  Point z{0.5, 0.5};
  for (int i = 0; i < 7; ++i) f.evaluate(z);
  CHECK(f.evaluations() == 7);

  // copies share the counter, so a problem built from this field keeps counting
  ScalarField g = f;
  g.evaluate(z);
  CHECK(f.evaluations() == 8);
}

TEST_CASE("scalar field rejects non-finite values with context") {
  ScalarField f(1, [](const Point& z) { return 1.0 / z[0]; });
  Point bad{0.0};
  try {
    f.evaluate(bad, 3);
    FAIL("expected FieldEvalError");
  } catch (const FieldEvalError& e) {
    CHECK(e.field_index() == 3);
    REQUIRE(e.point().size() == 1);
    CHECK(e.point()[0] == 0.0);
  }
  ScalarField g(1, [](const Point&) { return std::numeric_limits<double>::quiet_NaN(); });
  CHECK_THROWS_AS(g.evaluate(bad), FieldEvalError);
}

TEST_CASE("problem validates construction") {
  BoxDomain box({-1.0, -1.0}, {1.0, 1.0});
  CHECK_THROWS_AS(Problem({}, box, 0.1), std::invalid_argument);
  std::vector<ScalarField> wrong_dim;
  wrong_dim.push_back(ScalarField(3, [](const Point&) { return 0.0; }));
  CHECK_THROWS_AS(Problem(std::move(wrong_dim), box, 0.1), std::invalid_argument);
  std::vector<ScalarField> ok;
  ok.push_back(quadratic_field());
  CHECK_THROWS_AS(Problem(ok, box, -0.5), std::invalid_argument);
  CHECK_NOTHROW(Problem(ok, box, 0.1));
}

TEST_CASE("residuals take absolute values and aggregate by max") {
  BoxDomain box({-2.0, -2.0}, {2.0, 2.0});
  std::vector<ScalarField> fields;
  fields.push_back(ScalarField(2, [](const Point& z) { return z[0] - 1.0; }));
  fields.push_back(ScalarField(2, [](const Point& z) { return z[1] + 0.25; }));
  Problem prob(std::move(fields), box, 0.3);

  ResidualValue r = prob.evaluate({0.5, 0.0});
  REQUIRE(r.per_field.size() == 2);
  CHECK(r.per_field[0] == doctest::Approx(0.5));
  CHECK(r.per_field[1] == doctest::Approx(0.25));
  CHECK(r.aggregated == doctest::Approx(0.5));  // max of the two

  CHECK_FALSE(prob.is_solution(r));
  ResidualValue near = prob.evaluate({1.1, -0.2});
  CHECK(near.aggregated == doctest::Approx(0.1));
  CHECK(prob.is_solution(near));

  // one evaluate() call touches every field once
  CHECK(prob.total_evaluations() == 4);
  CHECK_THROWS_AS(prob.evaluate({0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("tolerance boundary counts as solved") {
  BoxDomain box({-1.0}, {1.0});
  std::vector<ScalarField> fields;
  fields.push_back(ScalarField(1, [](const Point& z) { return z[0]; }));
  Problem prob(std::move(fields), box, 0.25);
  CHECK(prob.is_solution(prob.evaluate({0.25})));
  CHECK_FALSE(prob.is_solution(prob.evaluate({0.2500001})));
}

TEST_CASE("normalization divides by the pilot mean of |f|") {
  BoxDomain box({-1.0, -1.0}, {1.0, 1.0});
  std::vector<ScalarField> fields;
  fields.push_back(ScalarField(2, [](const Point& z) { return 10.0 * z[0]; }));
  fields.push_back(ScalarField(2, [](const Point& z) { return z[1] - 0.5; }));
  Problem raw(std::move(fields), box, 0.05);

  const int kPilot = 100;
  RngStream rng(42, ~0ULL);
  Problem scaled = normalize(raw, kPilot, rng);

  // oracle: replay the identical stream and average |f_j| by hand
  RngStream replay(42, ~0ULL);
  double s0 = 0.0, s1 = 0.0;
  for (int i = 0; i < kPilot; ++i) {
    Point p = sample_box(box, replay);
    s0 += std::fabs(10.0 * p[0]);
    s1 += std::fabs(p[1] - 0.5);
  }
  s0 /= kPilot;
  s1 /= kPilot;

  Point probe{0.3, -0.7};
  ResidualValue r = scaled.evaluate(probe);
  CHECK(r.per_field[0] == doctest::Approx(std::fabs(10.0 * probe[0]) / s0).epsilon(1e-12));
  CHECK(r.per_field[1] == doctest::Approx(std::fabs(probe[1] - 0.5) / s1).epsilon(1e-12));

  // pilot work lands on the input problem's counters, one per field per point
  CHECK(raw.total_evaluations() == 2 * kPilot);
  // the scaled problem starts fresh: only the probe evaluation so far
  CHECK(scaled.total_evaluations() == 2);
  // tolerance and domain carry over unchanged
  CHECK(scaled.tol() == raw.tol());
  CHECK(scaled.domain().lower() == raw.domain().lower());
}

TEST_CASE("normalization clamps a vanishing scale to one") {
  BoxDomain box({-1.0}, {1.0});
  std::vector<ScalarField> fields;
  fields.push_back(ScalarField(1, [](const Point&) { return 0.0; }));
  Problem raw(std::move(fields), box, 0.1);
  RngStream rng(7, ~0ULL);
  Problem scaled = normalize(raw, 50, rng);
  // with s clamped to 1 the field is unchanged: residual of the zero field is 0
  ResidualValue r = scaled.evaluate({0.5});
  CHECK(r.per_field[0] == 0.0);
}

TEST_CASE("normalization rejects a non-positive pilot count") {
  BoxDomain box({-1.0}, {1.0});
  std::vector<ScalarField> fields;
  fields.push_back(ScalarField(1, [](const Point& z) { return z[0]; }));
  Problem raw(std::move(fields), box, 0.1);
  RngStream rng(7, ~0ULL);
  CHECK_THROWS_AS(normalize(raw, 0, rng), std::invalid_argument);
}

TEST_CASE("normalized residual ordering is comparable across fields") {
  // fields with wildly different scales end up with comparable pilot-mean
  // residuals: after scaling, the mean of |f_j| over fresh pilot points is
  // close to 1 for both fields.
  BoxDomain box({-1.0, -1.0}, {1.0, 1.0});
  std::vector<ScalarField> fields;
  fields.push_back(ScalarField(2, [](const Point& z) { return 1000.0 * (z[0] * z[0] + z[1] * z[1] - 0.5); }));
  fields.push_back(ScalarField(2, [](const Point& z) { return 0.001 * (z[0] - z[1]); }));
  Problem raw(std::move(fields), box, 0.05);
  RngStream rng(11, ~0ULL);
  Problem scaled = normalize(raw, 400, rng);

  RngStream fresh(999, 123);
  double m0 = 0.0, m1 = 0.0;
  const int kProbe = 2000;
  for (int i = 0; i < kProbe; ++i) {
    ResidualValue r = scaled.evaluate(sample_box(box, fresh));
    m0 += r.per_field[0];
    m1 += r.per_field[1];
  }
  m0 /= kProbe;
  m1 /= kProbe;
  CHECK(m0 == doctest::Approx(1.0).epsilon(0.15));
  CHECK(m1 == doctest::Approx(1.0).epsilon(0.15));
}
