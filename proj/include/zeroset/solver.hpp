#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zeroset/coverage.hpp"
#include "zeroset/geometry.hpp"
#include "zeroset/problem.hpp"
#include "zeroset/rng.hpp"

namespace zeroset {

// Streaming chain search for the set where every field of a problem vanishes.
//
// A chain is a short random walk inside the domain.  Each round proposes a
// point uniformly in the ball around the current extremity whose radius is
// half the previous step length plus residual_gain times the current
// residual, and keeps it only if the aggregated residual shrinks by at least
// the decrease factor.  Chains that cannot improve die and their slot is
// respawned from a fresh uniform pair; on top of that, inject_per_round new
// chains join every round, so exploration continues while survivors converge.
//
// Every accepted extremity whose residual is within tol is recorded as a
// solution.  A converged chain keeps walking and typically deposits a few
// tightly clustered solutions before it dies, which is what makes small
// populations cheap per solution but poorly spread, and large ones costlier
// but well spread.  The run stops once target_solutions solutions exist or
// the evaluation budget is exhausted.

enum class AcceptancePolicy {
  retry,   // try up to max_candidate_retries proposals per step
  strict,  // a single proposal; rejection kills the chain
};

enum class ChainStatus { alive, solved, dead };

struct SolverConfig {
  int initial_chains = 5;           // chains started up front
  int inject_per_round = 1;         // fresh chains appended each round
  double decrease_factor = 0.75;    // required residual shrink per step, in [1/2, 1]
  double residual_gain = 1.0;       // residual weight in the proposal radius, > 0
  double tol = 0.01;                // solution threshold on the aggregated residual
  int target_solutions = 1000;      // stop after this many solutions
  double initial_radius = 0.0;      // tree-root seed radius; <= 0 means diameter/10
  int max_candidate_retries = 50;
  int max_domain_retries = 50;      // free redraws for out-of-domain proposals
  std::int64_t eval_budget = 0;     // field evaluations; <= 0 means unbounded
  std::uint64_t seed = 1;
  AcceptancePolicy policy = AcceptancePolicy::retry;
  bool normalize = false;           // rescale fields by their mean |f_j| first
  int normalize_pilot = 100;
  int threads = 1;
  bool record_traces = false;
  int branching = 1;                // tree solver: children attempted per node per round
  std::int64_t max_population = 0;  // tree solver cap; 0 = 10*n*branching+100, < 0 = unbounded

  void validate() const;  // throws std::invalid_argument naming the offending field
  double resolve_initial_radius(const BoxDomain& domain) const;
  std::int64_t resolve_max_population() const;
};

struct Solution {
  Point point;
  ResidualValue residuals;
  std::int64_t chain_id = 0;
  int steps = 0;  // walk index of the emitting extremity (tree solver: depth)
};

struct TraceRecord {
  std::int64_t chain_id = 0;
  int step = 0;
  Point point;
  double aggregated = 0.0;
  double radius = 0.0;  // distance to the predecessor
};

struct Chain {
  std::int64_t id = 0;
  Point prev;
  Point curr;
  ResidualValue res_prev;
  ResidualValue res_curr;
  double radius = 0.0;  // ||curr - prev||
  int step = 1;
  ChainStatus status = ChainStatus::alive;
  RngStream rng;
  bool tracing = false;
  std::vector<TraceRecord> trace;
  std::vector<Solution> pending;  // solutions emitted but not yet collected
  Point scratch;                  // proposal buffer
};

struct SolveReport {
  std::vector<Solution> solutions;
  std::int64_t total_evals = 0;
  double ec = 0.0;  // total_evals / max(1, |solutions|)
  double elapsed_seconds = 0.0;
  std::int64_t chains_started = 0;
  std::int64_t chains_died = 0;
  std::int64_t rounds = 0;
  bool budget_stopped = false;
  SolverConfig config;
  std::string algorithm = "basic";
  int dimension = 0;
  std::size_t field_count = 1;
  std::optional<CoverageStats> coverage_stats;
  std::vector<TraceRecord> traces;  // per accepted step, when record_traces is set
};

// Fresh chain: two independent uniform points (two evaluations).  The second
// point is the extremity; if it is already within tol the chain starts in the
// solved state and has its first solution pending.
Chain spawn_chain(const Problem& problem, const SolverConfig& cfg, RngStream rng, std::int64_t id);

// One round of the walk.  Draws proposals as described above; out-of-domain
// proposals are redrawn without an evaluation (max_domain_retries, exhaustion
// kills the chain).  An accepted step advances the extremity, appends to the
// trace, and emits a pending solution when within tol; rejection of every
// proposal kills the chain.
void step_chain(Chain& chain, const Problem& problem, const SolverConfig& cfg);

SolveReport solve(const Problem& problem, const SolverConfig& cfg);

// Worst-case step length after n accepted steps for a walk whose first step
// had length r0, first residual a, gain k, and decrease factor c > 1/2:
//   r0 / 2^n  +  a * k * c^(n-1) * sum_{j=0}^{n-1} (1 / (2c))^j
double rn_bound(double r0, double a, double k, double c, int n);

}  // namespace zeroset
