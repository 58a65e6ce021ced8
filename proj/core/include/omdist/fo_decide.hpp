#pragma once

#include <string>
#include <vector>

#include "omdist/cluster_tree.hpp"
#include "omdist/formula.hpp"

namespace omdist {

// Decides first-order sentences over much_closer and equality against a
// cluster tree, for om-spaces whose magnitude order is dense and unbounded
// above. In such spaces every instantiation of a tree satisfies the same
// formulas, so quantifiers reduce to a finite search over one-symbol tree
// extensions. The procedure is unsound for bounded spaces (a new point may
// need a scale above every existing one).

// The label values usable when inserting a new node: the existing distinct
// labels l_0 = 0 < l_1 < ... < l_k, the midpoints of consecutive ones, and
// l_k + 1. Exactly 2k + 2 values, ascending.
std::vector<Rat> extending_labels(const ClusterTree& tree);

// Every cluster tree over the symbols of `tree` plus `x` obtainable by one
// insertion step: seed a null tree; pair with a lone symbol at label 0 or 1;
// join an internal node as an extra child; pair with a leaf below its
// father; wrap an internal node at an in-between label; or become a sibling
// of the root under a new top label. Results are canonical, deduplicated,
// valid, and fewer than 4n² of them for n >= 1 symbols. Throws on symbol
// collision or on ordered trees.
std::vector<ClusterTree> extensions(const ClusterTree& tree,
                                    const std::string& x);

struct DecideStats {
  long trees_generated = 0;  // extension trees built, pre-memoization
};

// True iff every instantiation of the tree satisfies phi. Free variables of
// phi must name symbols of the tree. Atoms compare lca labels; exists
// branches over extensions, short-circuiting on the first witness, with
// results memoized per (canonical tree, subformula).
bool decide(const ClusterTree& tree, const FormulaPtr& phi,
            DecideStats* stats = nullptr);

// Validity of a closed formula over dense, unbounded-above spaces: decide
// from the null tree. Throws std::invalid_argument on free variables.
bool decide_sentence(const FormulaPtr& phi, DecideStats* stats = nullptr);

}  // namespace omdist
