#pragma once

#include <optional>
#include <vector>

#include "omdist/cluster_tree.hpp"
#include "omdist/constraints.hpp"

namespace omdist {

struct SolveStats {
  // Times the main loop body ran (a failing check counts its iteration).
  int iterations = 0;
};

struct SolveResult {
  std::optional<ClusterTree> tree;  // nullopt means the system is inconsistent
  SolveStats stats;

  bool consistent() const { return tree.has_value(); }
};

// Decides a system of strict constraints od(a,b) << od(c,d) and, when
// consistent, returns a cluster tree every instantiation of which satisfies
// the system. Labels count down from the number of symbols; children are
// ordered by least symbol, so the output is deterministic. The empty system
// yields the trivial tree (single leaf, or a label-1 root over the declared
// symbols). Throws std::invalid_argument if the set has weak or order
// constraints.
SolveResult solve(const ConstraintSet& system);

// Same contract and same output tree as solve, implemented with disjoint-set
// forests, per-edge constraint lists and constant-time constraint unlinking.
SolveResult solve_fast(const ConstraintSet& system);

// Strict plus weak (<=) constraints. Weak constraints with a degenerate long
// od(a,b) <= od(c,c) force a = b and are handled by aliasing symbols to a
// fixpoint; degenerate weak shorts are tautologies and are dropped. Throws
// if order constraints are present.
SolveResult solve_weak(const ConstraintSet& system);

// Strict plus order (a < b) constraints; returns an ordered tree whose arcs
// realize every order constraint. Throws if weak constraints are present.
SolveResult solve_ordered(const ConstraintSet& system);

// The general engine: strict, weak and order together.
SolveResult solve_mixed(const ConstraintSet& system);

// One round of the label-counting recursion: H is the connected components
// of the shorts; fails (nullopt) when H covers every edge of a non-empty
// system; otherwise keeps exactly the constraints whose long lies in H.
std::optional<std::vector<StrictConstraint>> reduce_constraints(
    const std::vector<StrictConstraint>& system);

// Number of distinct non-zero labels solve would use: 0 for the empty
// system, nullopt when inconsistent. This is also the minimum number of
// distinct non-zero od values over all solutions.
std::optional<int> num_labels(const ConstraintSet& system);

// An undirected graph over symbols, for the order-incorporation step.
struct SymbolGraph {
  std::vector<std::string> symbols;
  std::vector<std::pair<int, int>> edges;  // indices into symbols
};

// Adds to H every edge between connected components that the order
// constraints force together: components sharing a strongly connected
// component of the component-level order digraph are merged. Order
// constraints over symbols absent from the graph are ignored.
SymbolGraph incorporate_order(const SymbolGraph& h,
                              const std::vector<OrderConstraint>& order);

}  // namespace omdist
