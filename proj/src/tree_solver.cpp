#include "zeroset/tree_solver.hpp"

#include <algorithm>
#include <chrono>

#include "zeroset/internal/parallel.hpp"

namespace zeroset {

namespace {

constexpr std::uint64_t kUtilityStream = ~std::uint64_t{0};

struct PendingEmission {
  Solution solution;
  std::shared_ptr<const PathCell> path;
};

}  // namespace

std::vector<TreeNode> offspring(TreeNode& node, const Problem& problem, const SolverConfig& cfg) {
  std::vector<TreeNode> children;
  const double radius = 0.5 * node.radius_to_parent + cfg.residual_gain * node.residual.aggregated;
  Point proposal;
  for (int b = 0; b < cfg.branching; ++b) {
    for (int attempt = 0; attempt < cfg.max_candidate_retries; ++attempt) {
      bool placed = false;
      for (int t = 0; t < cfg.max_domain_retries; ++t) {
        sample_ball_into(proposal, node.point, radius, node.rng);
        if (problem.domain().contains(proposal)) {
          placed = true;
          break;
        }
      }
      if (!placed) break;  // ball barely overlaps the box; give up on this slot
      ResidualValue rv = problem.evaluate(proposal);
      if (rv.aggregated <= cfg.decrease_factor * node.residual.aggregated) {
        TreeNode child;
        child.parent_id = node.id;
        child.point = proposal;
        child.residual = std::move(rv);
        child.radius_to_parent = distance(proposal, node.point);
        child.generation = node.generation + 1;
        children.push_back(std::move(child));
        ++node.offspring_count;
        break;
      }
    }
  }
  return children;
}

TreeReport solve_enhanced_full(const Problem& problem_in, const SolverConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  TreeReport out;
  SolveReport& rep = out.report;
  rep.config = cfg;
  rep.algorithm = "tree";
  rep.dimension = problem_in.dimension();
  rep.field_count = problem_in.field_count();

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

  const double seed_radius = cfg.resolve_initial_radius(problem.domain());
  const std::int64_t cap = cfg.resolve_max_population();

  std::vector<TreeNode> population;
  std::vector<PendingEmission> pending;
  std::int64_t next_id = 0;

  // Barrier-phase bookkeeping (single-threaded): assign the id and stream,
  // chain the ancestry cell, harvest the node if it already meets tol.
  const auto adopt = [&](TreeNode node, const std::shared_ptr<const PathCell>& parent_path) {
    node.id = next_id++;
    ++rep.chains_started;
    auto cell = std::make_shared<PathCell>();
    cell->point = node.point;
    cell->aggregated = node.residual.aggregated;
    cell->radius = node.radius_to_parent;
    cell->depth = node.generation;
    cell->parent = parent_path;
    node.path = std::move(cell);
    if (problem.is_solution(node.residual)) {
      node.eligible = false;
      pending.push_back(PendingEmission{
          Solution{node.point, node.residual, node.id, node.generation}, node.path});
    }
    population.push_back(std::move(node));
  };

  const auto add_root = [&] {
    TreeNode root;
    // The root's position comes from the stream of the id it is about to
    // receive, so placement is reproducible under any thread count.
    root.rng = RngStream(cfg.seed, static_cast<std::uint64_t>(next_id));
    root.point = sample_box(problem.domain(), root.rng);
    root.residual = problem.evaluate(root.point);
    root.radius_to_parent = seed_radius;
    root.generation = 0;
    adopt(std::move(root), nullptr);
  };

  for (int i = 0; i < cfg.initial_chains; ++i) add_root();

  const std::size_t want = static_cast<std::size_t>(cfg.target_solutions);
  std::vector<Solution> kept;
  std::vector<std::shared_ptr<const PathCell>> kept_paths;

  while (true) {
    for (auto& e : pending) {
      if (kept.size() < want) {
        kept.push_back(std::move(e.solution));
        kept_paths.push_back(std::move(e.path));
      }
    }
    pending.clear();
    if (kept.size() >= want) break;
    if (cfg.eval_budget > 0 && evals_so_far() >= cfg.eval_budget) {
      rep.budget_stopped = true;
      break;
    }

    ++rep.rounds;
    std::vector<std::size_t> fertile;
    fertile.reserve(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
      if (population[i].eligible) fertile.push_back(i);
    }
    std::vector<std::vector<TreeNode>> broods(fertile.size());
    internal::parallel_for(cfg.threads, fertile.size(), [&](std::size_t i) {
      broods[i] = offspring(population[fertile[i]], problem, cfg);
    });
    for (std::size_t i = 0; i < fertile.size(); ++i) {
      const auto parent_path = population[fertile[i]].path;
      for (auto& child : broods[i]) adopt(std::move(child), parent_path);
    }
    for (int i = 0; i < cfg.inject_per_round; ++i) add_root();

    if (cap >= 0 && static_cast<std::int64_t>(population.size()) > cap) {
      // Keep every root plus the lowest-residual still-fertile non-roots.
      // Dropped nodes lose nothing that matters: harvested solutions and the
      // ancestry cells of survivors are held elsewhere.
      std::vector<char> keep(population.size(), 0);
      std::vector<std::size_t> candidates;
      std::int64_t roots = 0;
      for (std::size_t i = 0; i < population.size(); ++i) {
        if (!population[i].parent_id.has_value()) {
          keep[i] = 1;
          ++roots;
        } else if (population[i].eligible) {
          candidates.push_back(i);
        }
      }
      const std::int64_t budget = std::max<std::int64_t>(0, cap - roots);
      if (static_cast<std::int64_t>(candidates.size()) > budget) {
        std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
          if (population[a].residual.aggregated != population[b].residual.aggregated) {
            return population[a].residual.aggregated < population[b].residual.aggregated;
          }
          return population[a].id < population[b].id;
        });
        candidates.resize(static_cast<std::size_t>(budget));
      }
      for (std::size_t i : candidates) keep[i] = 1;
      std::vector<TreeNode> survivors;
      survivors.reserve(population.size());
      for (std::size_t i = 0; i < population.size(); ++i) {
        if (keep[i]) {
          survivors.push_back(std::move(population[i]));
        } else {
          ++rep.chains_died;
        }
      }
      population = std::move(survivors);
    }
  }

  if (cfg.record_traces) {
    for (std::size_t s = 0; s < kept_paths.size(); ++s) {
      std::vector<TraceRecord> lineage;
      for (const PathCell* cell = kept_paths[s].get(); cell != nullptr;
           cell = cell->parent.get()) {
        lineage.push_back(
            TraceRecord{kept[s].chain_id, cell->depth, cell->point, cell->aggregated, cell->radius});
      }
      std::reverse(lineage.begin(), lineage.end());
      rep.traces.insert(rep.traces.end(), lineage.begin(), lineage.end());
    }
    std::sort(rep.traces.begin(), rep.traces.end(),
              [](const TraceRecord& a, const TraceRecord& b) {
                if (a.chain_id != b.chain_id) return a.chain_id < b.chain_id;
                return a.step < b.step;
              });
    out.genealogy.reserve(population.size());
    for (const auto& n : population) {
      out.genealogy.push_back(GenealogyRow{n.id, n.parent_id, n.generation, n.residual.aggregated});
    }
  }

  rep.solutions = std::move(kept);
  std::sort(rep.solutions.begin(), rep.solutions.end(), [](const Solution& a, const Solution& b) {
    if (a.chain_id != b.chain_id) return a.chain_id < b.chain_id;
    return a.steps < b.steps;
  });

  rep.total_evals = evals_so_far();
  rep.ec = static_cast<double>(rep.total_evals) /
           static_cast<double>(std::max<std::size_t>(std::size_t{1}, rep.solutions.size()));
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

SolveReport solve_enhanced(const Problem& problem, const SolverConfig& cfg) {
  return solve_enhanced_full(problem, cfg).report;
}

}  // namespace zeroset
