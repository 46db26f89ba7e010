#include "zeroset/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "zeroset/internal/parallel.hpp"

namespace zeroset {

namespace {

// Stream id reserved for utility draws (normalization pilot); chain ids count
// up from zero and never reach it.
constexpr std::uint64_t kUtilityStream = ~std::uint64_t{0};

void sort_canonical(std::vector<Solution>& v) {
  std::sort(v.begin(), v.end(), [](const Solution& a, const Solution& b) {
    if (a.chain_id != b.chain_id) return a.chain_id < b.chain_id;
    return a.steps < b.steps;
  });
}

void sort_canonical(std::vector<TraceRecord>& v) {
  std::sort(v.begin(), v.end(), [](const TraceRecord& a, const TraceRecord& b) {
    if (a.chain_id != b.chain_id) return a.chain_id < b.chain_id;
    return a.step < b.step;
  });
}

}  // namespace

void SolverConfig::validate() const {
  if (initial_chains < 1) throw std::invalid_argument("SolverConfig: initial_chains must be at least 1");
  if (inject_per_round < 0) throw std::invalid_argument("SolverConfig: inject_per_round must be non-negative");
  if (!(decrease_factor >= 0.5 && decrease_factor <= 1.0))
    throw std::invalid_argument("SolverConfig: decrease_factor must lie in [0.5, 1]");
  if (!(residual_gain > 0.0)) throw std::invalid_argument("SolverConfig: residual_gain must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
  if (target_solutions < 1) throw std::invalid_argument("SolverConfig: target_solutions must be at least 1");
  if (max_candidate_retries < 1) throw std::invalid_argument("SolverConfig: max_candidate_retries must be at least 1");
  if (max_domain_retries < 1) throw std::invalid_argument("SolverConfig: max_domain_retries must be at least 1");
  if (normalize_pilot < 1) throw std::invalid_argument("SolverConfig: normalize_pilot must be at least 1");
  if (threads < 1) throw std::invalid_argument("SolverConfig: threads must be at least 1");
  if (branching < 1) throw std::invalid_argument("SolverConfig: branching must be at least 1");
}

double SolverConfig::resolve_initial_radius(const BoxDomain& domain) const {
  return initial_radius > 0.0 ? initial_radius : domain.diameter() / 10.0;
}

std::int64_t SolverConfig::resolve_max_population() const {
  if (max_population > 0) return max_population;
  if (max_population < 0) return -1;  // unbounded
  return static_cast<std::int64_t>(10) * initial_chains * branching + 100;
}

double rn_bound(double r0, double a, double k, double c, int n) {
  if (!(c > 0.5 && c <= 1.0))
    throw std::invalid_argument("rn_bound: decrease factor must lie in (1/2, 1]");
  if (n < 1) throw std::invalid_argument("rn_bound: n must be at least 1");
  if (!(r0 >= 0.0)) throw std::invalid_argument("rn_bound: r0 must be non-negative");
  if (!(a >= 0.0)) throw std::invalid_argument("rn_bound: a must be non-negative");
  if (!(k > 0.0)) throw std::invalid_argument("rn_bound: k must be positive");
  double sum = 0.0;
  double term = 1.0;
  for (int j = 0; j < n; ++j) {
    sum += term;
    term /= 2.0 * c;
  }
  return r0 / std::pow(2.0, n) + a * k * std::pow(c, n - 1) * sum;
}

Chain spawn_chain(const Problem& problem, const SolverConfig& cfg, RngStream rng, std::int64_t id) {
  Chain c;
  c.id = id;
  c.rng = rng;
  c.tracing = cfg.record_traces;
  c.prev = sample_box(problem.domain(), c.rng);
  c.curr = sample_box(problem.domain(), c.rng);
  c.res_prev = problem.evaluate(c.prev);
  c.res_curr = problem.evaluate(c.curr);
  c.radius = distance(c.prev, c.curr);
  c.step = 1;
  if (problem.is_solution(c.res_curr)) {
    c.status = ChainStatus::solved;
    c.pending.push_back(Solution{c.curr, c.res_curr, c.id, c.step});
  }
  if (c.tracing) {
    c.trace.push_back(TraceRecord{c.id, c.step, c.curr, c.res_curr.aggregated, c.radius});
  }
  return c;
}

void step_chain(Chain& c, const Problem& problem, const SolverConfig& cfg) {
  const double radius = 0.5 * c.radius + cfg.residual_gain * c.res_curr.aggregated;
  const int proposals = cfg.policy == AcceptancePolicy::strict ? 1 : cfg.max_candidate_retries;
  for (int attempt = 0; attempt < proposals; ++attempt) {
    bool placed = false;
    for (int t = 0; t < cfg.max_domain_retries; ++t) {
      sample_ball_into(c.scratch, c.curr, radius, c.rng);
      if (problem.domain().contains(c.scratch)) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      c.status = ChainStatus::dead;
      return;
    }
    ResidualValue rv = problem.evaluate(c.scratch);
    if (rv.aggregated <= cfg.decrease_factor * c.res_curr.aggregated) {
      std::swap(c.prev, c.curr);
      std::swap(c.curr, c.scratch);
      c.res_prev = std::move(c.res_curr);
      c.res_curr = std::move(rv);
      c.radius = distance(c.prev, c.curr);
      ++c.step;
      if (problem.is_solution(c.res_curr)) {
        c.status = ChainStatus::solved;
        c.pending.push_back(Solution{c.curr, c.res_curr, c.id, c.step});
      }
      if (c.tracing) {
        c.trace.push_back(TraceRecord{c.id, c.step, c.curr, c.res_curr.aggregated, c.radius});
      }
      return;
    }
  }
  c.status = ChainStatus::dead;
}

SolveReport solve(const Problem& problem_in, const SolverConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  SolveReport rep;
  rep.config = cfg;
  rep.algorithm = "basic";
  rep.dimension = problem_in.dimension();
  rep.field_count = problem_in.field_count();

  // Baseline so that reused problem objects report only this run's work; the
  // normalization pilot is spent on the input problem and therefore included.
  const std::int64_t base_evals = problem_in.total_evaluations();
  std::optional<Problem> normalized;
  if (cfg.normalize) {
    RngStream pilot_rng(cfg.seed, kUtilityStream);
    normalized.emplace(normalize(problem_in, cfg.normalize_pilot, pilot_rng));
  }
  const Problem& problem = normalized ? *normalized : problem_in;

  const auto evals_so_far = [&] {
    std::int64_t total = problem_in.total_evaluations() - base_evals;
    if (normalized) total += normalized->total_evaluations();
    return total;
  };

  std::vector<Chain> chains;
  chains.reserve(static_cast<std::size_t>(cfg.initial_chains) + 256);
  std::int64_t next_id = 0;
  const auto spawn_fresh = [&] {
    Chain c = spawn_chain(problem, cfg, RngStream(cfg.seed, static_cast<std::uint64_t>(next_id)), next_id);
    ++next_id;
    ++rep.chains_started;
    return c;
  };
  for (int i = 0; i < cfg.initial_chains; ++i) chains.push_back(spawn_fresh());

  const std::size_t want = static_cast<std::size_t>(cfg.target_solutions);
  while (true) {
    // Collect the previous round's emissions in slot order; the cut at
    // `want` makes the kept set independent of threading.
    for (auto& c : chains) {
      if (c.pending.empty()) continue;
      for (auto& s : c.pending) {
        if (rep.solutions.size() < want) rep.solutions.push_back(std::move(s));
      }
      c.pending.clear();
    }
    if (rep.solutions.size() >= want) break;
    if (cfg.eval_budget > 0 && evals_so_far() >= cfg.eval_budget) {
      rep.budget_stopped = true;
      break;
    }

    ++rep.rounds;
    internal::parallel_for(cfg.threads, chains.size(), [&](std::size_t i) {
      if (chains[i].status != ChainStatus::dead) step_chain(chains[i], problem, cfg);
    });

    // Dead slots respawn immediately; their traces are kept.  A dead chain
    // has no pending solutions: emissions happen only on accepted steps and
    // were collected at the top of this round.
    for (auto& c : chains) {
      if (c.status != ChainStatus::dead) continue;
      ++rep.chains_died;
      if (c.tracing) {
        rep.traces.insert(rep.traces.end(), std::make_move_iterator(c.trace.begin()),
                          std::make_move_iterator(c.trace.end()));
      }
      c = spawn_fresh();
    }
    for (int i = 0; i < cfg.inject_per_round; ++i) chains.push_back(spawn_fresh());
  }

  if (cfg.record_traces) {
    for (auto& c : chains) {
      rep.traces.insert(rep.traces.end(), std::make_move_iterator(c.trace.begin()),
                        std::make_move_iterator(c.trace.end()));
    }
    sort_canonical(rep.traces);
  }
  sort_canonical(rep.solutions);

  rep.total_evals = evals_so_far();
  rep.ec = static_cast<double>(rep.total_evals) /
           static_cast<double>(std::max<std::size_t>(1, rep.solutions.size()));
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace zeroset
