#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "zeroset/geometry.hpp"
#include "zeroset/problem.hpp"
#include "zeroset/rng.hpp"
#include "zeroset/solver.hpp"

using namespace zeroset;

namespace {

Problem circle_problem(double tol = 0.01) {
  std::vector<ScalarField> fields;
  fields.push_back(ScalarField(2, [](const Point& z) { return z[0] * z[0] + z[1] * z[1] - 0.5; }));
  return Problem(std::move(fields), BoxDomain({-1.0, -1.0}, {1.0, 1.0}), tol);
}

Problem constant_problem(double value, double tol = 0.01) {
  std::vector<ScalarField> fields;
  fields.push_back(ScalarField(1, [value](const Point&) { return value; }));
  return Problem(std::move(fields), BoxDomain({-1.0}, {1.0}), tol);
}

}  // namespace

TEST_CASE("config validation names the offending field") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  auto expect_throw = [](SolverConfig c) { CHECK_THROWS_AS(c.validate(), std::invalid_argument); };
  { SolverConfig c; c.initial_chains = 0; expect_throw(c); }
  { SolverConfig c; c.inject_per_round = -1; expect_throw(c); }
  { SolverConfig c; c.decrease_factor = 0.49; expect_throw(c); }
  { SolverConfig c; c.decrease_factor = 1.01; expect_throw(c); }
  { SolverConfig c; c.decrease_factor = 0.5; CHECK_NOTHROW(c.validate()); }
  { SolverConfig c; c.decrease_factor = 1.0; CHECK_NOTHROW(c.validate()); }
  { SolverConfig c; c.residual_gain = 0.0; expect_throw(c); }
  { SolverConfig c; c.tol = 0.0; expect_throw(c); }
  { SolverConfig c; c.target_solutions = 0; expect_throw(c); }
  { SolverConfig c; c.max_candidate_retries = 0; expect_throw(c); }
  { SolverConfig c; c.max_domain_retries = 0; expect_throw(c); }
  { SolverConfig c; c.normalize_pilot = 0; expect_throw(c); }
  { SolverConfig c; c.threads = 0; expect_throw(c); }
  { SolverConfig c; c.branching = 0; expect_throw(c); }
}

TEST_CASE("derived defaults resolve as documented") {
  BoxDomain box({-1.0, -1.0}, {1.0, 1.0});
  SolverConfig cfg;
  CHECK(cfg.resolve_initial_radius(box) == doctest::Approx(box.diameter() / 10.0));
  cfg.initial_radius = 0.7;
  CHECK(cfg.resolve_initial_radius(box) == 0.7);

  SolverConfig pop;
  pop.initial_chains = 5;
  pop.branching = 2;
  CHECK(pop.resolve_max_population() == 10 * 5 * 2 + 100);
  pop.max_population = 17;
  CHECK(pop.resolve_max_population() == 17);
  pop.max_population = -1;
  CHECK(pop.resolve_max_population() == -1);
}

TEST_CASE("step-length bound: frozen value and guards") {
  CHECK(rn_bound(1.0, 1.0, 1.0, 0.75, 3) == doctest::Approx(1.3125).epsilon(1e-15));
  CHECK_THROWS_AS(rn_bound(1.0, 1.0, 1.0, 0.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(rn_bound(1.0, 1.0, 1.0, 1.01, 3), std::invalid_argument);
  CHECK_THROWS_AS(rn_bound(1.0, 1.0, 1.0, 0.75, 0), std::invalid_argument);
  CHECK_THROWS_AS(rn_bound(-1.0, 1.0, 1.0, 0.75, 3), std::invalid_argument);
  CHECK_THROWS_AS(rn_bound(1.0, -1.0, 1.0, 0.75, 3), std::invalid_argument);
  CHECK_THROWS_AS(rn_bound(1.0, 1.0, 0.0, 0.75, 3), std::invalid_argument);
}

TEST_CASE("step-length bound satisfies its own recurrence") {
  // the closed form must obey bound(n+1) = bound(n)/2 + k * a * c^n, the
  // worst case of R <- R/2 + k*res with res <= a*c^n
  for (double c : {0.55, 0.75, 1.0}) {
    for (double k : {0.1, 1.0, 3.0}) {
      double r0 = 2.0, a = 1.5;
      for (int n = 1; n < 12; ++n) {
        double lhs = rn_bound(r0, a, k, c, n + 1);
        double rhs = rn_bound(r0, a, k, c, n) / 2.0 + k * a * std::pow(c, n);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
    }
  }
  // contraction: with c < 1 the bound dies out
  CHECK(rn_bound(2.0, 1.5, 1.0, 0.75, 80) < 1e-8);
}

TEST_CASE("spawn draws two points from the chain's own stream") {
  Problem prob = circle_problem();
  SolverConfig cfg;
  cfg.record_traces = true;
  const std::int64_t before = prob.total_evaluations();
  Chain c = spawn_chain(prob, cfg, RngStream(42, 7), 7);

  // oracle: replay the identical stream
  RngStream replay(42, 7);
  Point want_prev = sample_box(prob.domain(), replay);
  Point want_curr = sample_box(prob.domain(), replay);
  CHECK(c.prev == want_prev);
  CHECK(c.curr == want_curr);
  CHECK(c.id == 7);
  CHECK(c.step == 1);
  CHECK(c.radius == doctest::Approx(distance(want_prev, want_curr)).epsilon(1e-15));
  CHECK(c.res_curr.aggregated ==
        doctest::Approx(std::fabs(want_curr[0] * want_curr[0] + want_curr[1] * want_curr[1] - 0.5))
            .epsilon(1e-15));
  CHECK(prob.total_evaluations() - before == 2);

  REQUIRE(c.trace.size() == 1);
  CHECK(c.trace[0].chain_id == 7);
  CHECK(c.trace[0].step == 1);
  CHECK(c.trace[0].point == want_curr);
  CHECK(c.trace[0].radius == c.radius);
}

TEST_CASE("a chain that spawns within tol is solved with one pending solution") {
  Problem prob = constant_problem(0.0, 0.01);  // residual is identically zero
  SolverConfig cfg;
  Chain c = spawn_chain(prob, cfg, RngStream(1, 0), 0);
  CHECK(c.status == ChainStatus::solved);
  REQUIRE(c.pending.size() == 1);
  CHECK(c.pending[0].chain_id == 0);
  CHECK(c.pending[0].steps == 1);
  CHECK(c.pending[0].residuals.aggregated == 0.0);
}

TEST_CASE("solved chains keep stepping and emit once per accepted step") {
  Problem prob = constant_problem(0.0, 0.01);
  SolverConfig cfg;
  Chain c = spawn_chain(prob, cfg, RngStream(3, 5), 5);
  REQUIRE(c.status == ChainStatus::solved);
  for (int i = 0; i < 3; ++i) step_chain(c, prob, cfg);
  CHECK(c.status == ChainStatus::solved);
  CHECK(c.step == 4);
  CHECK(c.pending.size() == 4);  // spawn plus three accepted steps
  // radius halves each step once the residual term vanishes
  CHECK(c.radius <= 1.0);
}

TEST_CASE("an accepted step obeys the contraction inequalities") {
  Problem prob = circle_problem(1e-9);  // tol tiny so nothing terminates early
  SolverConfig cfg;
  cfg.record_traces = true;
  for (std::uint64_t id = 0; id < 40; ++id) {
    Chain c = spawn_chain(prob, cfg, RngStream(11, id), static_cast<std::int64_t>(id));
    for (int s = 0; s < 30 && c.status != ChainStatus::dead; ++s) {
      const double res_before = c.res_curr.aggregated;
      const double rad_before = c.radius;
      const Point extremity = c.curr;
      step_chain(c, prob, cfg);
      if (c.status == ChainStatus::dead) break;
      CHECK(c.res_curr.aggregated <= cfg.decrease_factor * res_before + 1e-12);
      CHECK(c.radius <=
            0.5 * rad_before + cfg.residual_gain * res_before + 1e-12);
      CHECK(c.radius == doctest::Approx(distance(extremity, c.curr)).epsilon(1e-12));
      CHECK(prob.domain().contains(c.curr));
    }
  }
}

TEST_CASE("a chain that cannot improve dies") {
  Problem prob = constant_problem(1.0, 0.01);  // residual pinned at 1
  SolverConfig cfg;
  Chain c = spawn_chain(prob, cfg, RngStream(5, 2), 2);
  CHECK(c.status == ChainStatus::alive);
  step_chain(c, prob, cfg);
  CHECK(c.status == ChainStatus::dead);
  CHECK(c.step == 1);  // no accepted step
  CHECK(c.pending.empty());
}

TEST_CASE("strict policy spends exactly one evaluation per step attempt") {
  Problem prob = constant_problem(1.0, 0.01);
  SolverConfig cfg;
  cfg.policy = AcceptancePolicy::strict;
  Chain c = spawn_chain(prob, cfg, RngStream(5, 2), 2);
  const std::int64_t before = prob.total_evaluations();
  step_chain(c, prob, cfg);
  CHECK(c.status == ChainStatus::dead);
  CHECK(prob.total_evaluations() - before == 1);
}

TEST_CASE("retry policy spends up to max_candidate_retries evaluations") {
  Problem prob = constant_problem(1.0, 0.01);
  SolverConfig cfg;
  cfg.max_candidate_retries = 13;
  Chain c = spawn_chain(prob, cfg, RngStream(5, 2), 2);
  const std::int64_t before = prob.total_evaluations();
  step_chain(c, prob, cfg);
  CHECK(c.status == ChainStatus::dead);
  CHECK(prob.total_evaluations() - before == 13);
}

TEST_CASE("out-of-domain proposals are redrawn for free; exhaustion kills") {
  // an enormous residual gain makes nearly every proposal leave the box
  std::vector<ScalarField> fields;
  fields.push_back(ScalarField(1, [](const Point& z) { return 1.0 + std::fabs(z[0]); }));
  Problem prob(std::move(fields), BoxDomain({-1.0}, {1.0}), 0.01);
  SolverConfig cfg;
  cfg.residual_gain = 1e9;
  Chain c = spawn_chain(prob, cfg, RngStream(9, 4), 4);
  const std::int64_t before = prob.total_evaluations();
  step_chain(c, prob, cfg);
  CHECK(c.status == ChainStatus::dead);
  // every draw left the domain, so no field evaluation was spent
  CHECK(prob.total_evaluations() - before == 0);
}

TEST_CASE("solve returns exactly the requested number of in-tolerance solutions") {
  Problem prob = circle_problem();
  SolverConfig cfg;
  cfg.target_solutions = 50;
  cfg.seed = 3;
  const std::int64_t before = prob.total_evaluations();
  SolveReport rep = solve(prob, cfg);

  CHECK(rep.solutions.size() == 50);
  CHECK(rep.algorithm == "basic");
  CHECK(rep.dimension == 2);
  CHECK(rep.field_count == 1);
  CHECK_FALSE(rep.budget_stopped);
  CHECK(rep.config.target_solutions == 50);
  CHECK(rep.rounds >= 1);
  CHECK(rep.chains_started >= cfg.initial_chains);
  CHECK(rep.total_evals == prob.total_evaluations() - before);
  CHECK(rep.ec == doctest::Approx(static_cast<double>(rep.total_evals) / 50.0));

  for (const Solution& s : rep.solutions) {
    REQUIRE(s.point.size() == 2);
    CHECK(prob.domain().contains(s.point));
    // oracle residual, recomputed outside the counted path
    const double res = std::fabs(s.point[0] * s.point[0] + s.point[1] * s.point[1] - 0.5);
    CHECK(res <= prob.tol() + 1e-15);
    CHECK(res == doctest::Approx(s.residuals.aggregated).epsilon(1e-12));
    CHECK(s.chain_id >= 0);
    CHECK(s.steps >= 1);
  }

  // canonical order: by chain id, then by walk index
  for (size_t i = 1; i < rep.solutions.size(); ++i) {
    const Solution& a = rep.solutions[i - 1];
    const Solution& b = rep.solutions[i];
    CHECK((a.chain_id < b.chain_id || (a.chain_id == b.chain_id && a.steps <= b.steps)));
  }
}

TEST_CASE("repeat runs are bitwise identical, across thread counts too") {
  SolverConfig cfg;
  cfg.target_solutions = 40;
  cfg.seed = 12;

  auto run = [&](int threads) {
    Problem prob = circle_problem();
    SolverConfig c = cfg;
    c.threads = threads;
    return solve(prob, c);
  };
  SolveReport a = run(1);
  SolveReport b = run(1);
  SolveReport c4 = run(4);

  auto same = [](const SolveReport& x, const SolveReport& y) {
    REQUIRE(x.solutions.size() == y.solutions.size());
    for (size_t i = 0; i < x.solutions.size(); ++i) {
      CHECK(x.solutions[i].point == y.solutions[i].point);  // bitwise
      CHECK(x.solutions[i].chain_id == y.solutions[i].chain_id);
      CHECK(x.solutions[i].steps == y.solutions[i].steps);
    }
    CHECK(x.total_evals == y.total_evals);
    CHECK(x.rounds == y.rounds);
    CHECK(x.chains_started == y.chains_started);
    CHECK(x.chains_died == y.chains_died);
  };
  same(a, b);
  same(a, c4);

  SolverConfig other = cfg;
  other.seed = 13;
  Problem prob = circle_problem();
  SolveReport d = solve(prob, other);
  REQUIRE(d.solutions.size() == a.solutions.size());
  bool differs = false;
  for (size_t i = 0; i < d.solutions.size() && !differs; ++i) {
    differs = d.solutions[i].point != a.solutions[i].point;
  }
  CHECK(differs);
}

TEST_CASE("the evaluation budget stops an infeasible run") {
  Problem prob = constant_problem(1.0, 0.01);  // no zero set at all
  SolverConfig cfg;
  cfg.target_solutions = 10;
  cfg.eval_budget = 2000;
  SolveReport rep = solve(prob, cfg);
  CHECK(rep.budget_stopped);
  CHECK(rep.solutions.empty());
  CHECK(rep.total_evals >= cfg.eval_budget);
  // overshoot is bounded by one round of work
  CHECK(rep.total_evals < cfg.eval_budget + 100000);
  CHECK(rep.ec == doctest::Approx(static_cast<double>(rep.total_evals)));  // / max(1, 0)
}

TEST_CASE("normalization work is charged to the run") {
  Problem plain = circle_problem();
  SolverConfig cfg;
  cfg.target_solutions = 10;
  SolveReport base = solve(plain, cfg);

  Problem scaled_in = circle_problem();
  SolverConfig with_norm = cfg;
  with_norm.normalize = true;
  with_norm.normalize_pilot = 100;
  SolveReport norm = solve(scaled_in, with_norm);
  // the pilot's 100 evaluations are part of the reported total
  CHECK(norm.total_evals >= 100);
  CHECK(norm.solutions.size() == 10);
  (void)base;
}

TEST_CASE("traces cover every accepted step, anchored at the spawn step") {
  Problem prob = circle_problem();
  SolverConfig cfg;
  cfg.target_solutions = 60;
  cfg.record_traces = true;
  cfg.seed = 21;
  SolveReport rep = solve(prob, cfg);
  REQUIRE_FALSE(rep.traces.empty());

  // canonical trace order, contiguous steps starting at 1 per chain
  std::map<std::int64_t, std::vector<const TraceRecord*>> by_chain;
  for (size_t i = 0; i < rep.traces.size(); ++i) {
    const TraceRecord& r = rep.traces[i];
    if (i > 0) {
      const TraceRecord& p = rep.traces[i - 1];
      CHECK((p.chain_id < r.chain_id || (p.chain_id == r.chain_id && p.step < r.step)));
    }
    by_chain[r.chain_id].push_back(&r);
  }
  int chains_with_walks = 0;
  for (const auto& [id, recs] : by_chain) {
    CHECK(recs.front()->step == 1);
    for (size_t i = 0; i < recs.size(); ++i) {
      CHECK(recs[i]->step == static_cast<int>(i) + 1);
      if (i > 0) {
        // the recorded radius is the distance walked in that step
        CHECK(recs[i]->radius ==
              doctest::Approx(distance(recs[i - 1]->point, recs[i]->point)).epsilon(1e-12));
        // acceptance inequality holds along the recorded walk
        CHECK(recs[i]->aggregated <= cfg.decrease_factor * recs[i - 1]->aggregated + 1e-12);
        // radius recurrence holds along the recorded walk
        CHECK(recs[i]->radius <=
              0.5 * recs[i - 1]->radius + cfg.residual_gain * recs[i - 1]->aggregated + 1e-12);
      }
    }
    if (recs.size() > 1) ++chains_with_walks;
  }
  CHECK(chains_with_walks > 0);

  // every emitted solution appears in the trace at its (chain, step)
  for (const Solution& s : rep.solutions) {
    const auto& recs = by_chain.at(s.chain_id);
    REQUIRE(s.steps >= 1);
    REQUIRE(s.steps <= static_cast<int>(recs.size()));
    CHECK(recs[static_cast<size_t>(s.steps - 1)]->point == s.point);
  }

  // multi-emission: at least one chain deposits several solutions
  std::map<std::int64_t, int> emitted;
  for (const Solution& s : rep.solutions) ++emitted[s.chain_id];
  bool some_chain_many = false;
  for (const auto& [id, cnt] : emitted) some_chain_many = some_chain_many || cnt > 1;
  CHECK(some_chain_many);

  // non-terminal convergence: some in-tolerance trace point has a successor
  bool refined_past_tol = false;
  for (const auto& [id, recs] : by_chain) {
    for (size_t i = 0; i + 1 < recs.size() && !refined_past_tol; ++i) {
      refined_past_tol = recs[i]->aggregated <= prob.tol();
    }
  }
  CHECK(refined_past_tol);
}

TEST_CASE("strict policy still reaches the target on an easy problem") {
  Problem prob = circle_problem();
  SolverConfig cfg;
  cfg.policy = AcceptancePolicy::strict;
  cfg.target_solutions = 20;
  cfg.seed = 8;
  SolveReport rep = solve(prob, cfg);
  CHECK(rep.solutions.size() == 20);
  CHECK(rep.chains_died > 0);  // single-proposal rejection kills chains often
  for (const Solution& s : rep.solutions) {
    const double res = std::fabs(s.point[0] * s.point[0] + s.point[1] * s.point[1] - 0.5);
    CHECK(res <= prob.tol() + 1e-15);
  }
}

TEST_CASE("two-field systems accept on the max residual") {
  std::vector<ScalarField> fields;
  fields.push_back(ScalarField(2, [](const Point& z) { return z[0] * z[0] + z[1] * z[1] - 0.5; }));
  fields.push_back(ScalarField(2, [](const Point& z) { return (z[0] - 0.2) * (z[0] - 0.2) +
                                                              (z[1] + 0.2) * (z[1] + 0.2) - 0.5; }));
  Problem prob(std::move(fields), BoxDomain({-1.0, -1.0}, {1.0, 1.0}), 0.02);
  SolverConfig cfg;
  cfg.initial_chains = 20;
  cfg.target_solutions = 10;
  cfg.seed = 2;
  SolveReport rep = solve(prob, cfg);
  REQUIRE(rep.solutions.size() == 10);
  CHECK(rep.field_count == 2);
  for (const Solution& s : rep.solutions) {
    const double r1 = std::fabs(s.point[0] * s.point[0] + s.point[1] * s.point[1] - 0.5);
    const double r2 = std::fabs((s.point[0] - 0.2) * (s.point[0] - 0.2) +
                                (s.point[1] + 0.2) * (s.point[1] + 0.2) - 0.5);
    CHECK(std::max(r1, r2) <= prob.tol() + 1e-15);
    REQUIRE(s.residuals.per_field.size() == 2);
    CHECK(s.residuals.aggregated == doctest::Approx(std::max(r1, r2)).epsilon(1e-12));
  }
}
