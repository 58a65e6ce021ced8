#pragma once

#include <vector>

#include "omdist/cluster_tree.hpp"
#include "omdist/constraints.hpp"

namespace omdist {

// Brute-force ground truth at desk scale. Everything here is independent of
// the solver: trees are enumerated outright and constraints are evaluated
// per tree, so solver verdicts can be diffed against exhaustive search.

// All cluster trees over the given symbols, distinct up to an order- and
// zero-preserving relabeling: every nested partition shape, every ranking
// of its internal nodes, with the bottom rank either coincident (label 0)
// or not. Throws std::invalid_argument beyond 6 symbols.
std::vector<ClusterTree> enum_trees(const std::vector<std::string>& symbols);

// Is some enumerated tree (with some order-arc assignment, when order
// constraints are present) a witness for the whole system? At most 6
// symbols.
bool oracle_consistent(const ConstraintSet& system);

// Minimum over satisfying trees of the number of distinct non-zero lca
// labels realized between symbol pairs of the system. Strict-only, at most
// 6 symbols; throws std::invalid_argument when the system is inconsistent.
int oracle_min_labels(const ConstraintSet& system);

// Exact finite-ratio check: B^2 * dist^2(short) < dist^2(long) for every
// strict constraint, all in rational arithmetic (squares avoid roots).
bool euclid_check(const EuclideanValuation& valuation,
                  const std::vector<StrictConstraint>& constraints,
                  const Rat& B);

}  // namespace omdist
