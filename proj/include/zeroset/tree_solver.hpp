#pragma once

#include <memory>

#include "zeroset/solver.hpp"

namespace zeroset {

// Genealogy-tree variant of the chain search.  Instead of replacing a walk
// when it advances, every accepted point stays fertile: each round, all
// eligible nodes try to produce up to `branching` children by the same
// ball-proposal / residual-decrease acceptance as the basic stepper, then
// inject_per_round fresh roots join.  A node that fails to reproduce stays
// eligible and simply tries again next round; nodes within tol are harvested
// as solutions and retire from reproduction.  When the population exceeds
// the configured cap it is pruned back to the lowest-residual nodes (roots
// are exempt, they anchor exploration).

// Immutable ancestry cell shared by all descendants of a node; solutions keep
// their whole root path alive through these even after pruning.
struct PathCell {
  Point point;
  double aggregated = 0.0;
  double radius = 0.0;  // distance to the parent (roots carry the seed radius)
  int depth = 0;
  std::shared_ptr<const PathCell> parent;
};

struct TreeNode {
  std::int64_t id = -1;
  std::optional<std::int64_t> parent_id;
  Point point;
  ResidualValue residual;
  double radius_to_parent = 0.0;
  int generation = 0;
  bool eligible = true;
  int offspring_count = 0;
  RngStream rng;
  std::shared_ptr<const PathCell> path;
};

struct GenealogyRow {
  std::int64_t id = 0;
  std::optional<std::int64_t> parent_id;
  int generation = 0;
  double residual = 0.0;
};

// Up to cfg.branching accepted children for one node, drawn from the node's
// own stream.  Children come back without ids (the caller assigns them at the
// round barrier); reproduction failures never make the node ineligible.
std::vector<TreeNode> offspring(TreeNode& node, const Problem& problem, const SolverConfig& cfg);

// Runs the tree search; the report's genealogy (final population snapshot)
// and per-solution root-path traces are filled when record_traces is set.
struct TreeReport {
  SolveReport report;
  std::vector<GenealogyRow> genealogy;
};

TreeReport solve_enhanced_full(const Problem& problem, const SolverConfig& cfg);
SolveReport solve_enhanced(const Problem& problem, const SolverConfig& cfg);

}  // namespace zeroset
