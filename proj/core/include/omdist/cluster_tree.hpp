#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omdist/constraints.hpp"
#include "omdist/omspace.hpp"
#include "omdist/rational.hpp"

namespace omdist {

// The witness structure for systems of order-of-magnitude distance
// comparisons: a tree whose leaves are symbols and whose internal labels
// encode the relative diameter scale of each cluster of symbols. Rules:
//   - every leaf holds a distinct symbol and is labelled 0;
//   - every internal node has at least two children;
//   - labels are non-negative rationals, and every internal node's label is
//     strictly below its parent's;
//   - an internal node labelled 0 denotes coincident points, so it can only
//     have leaf children.
// Order arcs (index pairs into `children`) make the tree ordered: an arc
// i -> j asserts every leaf under child i precedes every leaf under child j
// on the point line.

using Label = Rat;

struct TreeNode {
  Label label{0};
  std::string symbol;                            // leaves only
  std::vector<TreeNode> children;                // empty iff leaf
  std::vector<std::pair<int, int>> order_arcs;   // internal nodes only

  TreeNode() = default;
  TreeNode(Label l, std::string sym, std::vector<TreeNode> ch,
           std::vector<std::pair<int, int>> arcs)
      : label(std::move(l)),
        symbol(std::move(sym)),
        children(std::move(ch)),
        order_arcs(std::move(arcs)) {}
  TreeNode(const TreeNode&) = default;
  TreeNode& operator=(const TreeNode&) = default;
  // mpq_class moves are not noexcept, which would make vector growth fall
  // back to deep recursive copies; swap-based moves avoid that.
  TreeNode(TreeNode&& other) noexcept { swap(other); }
  TreeNode& operator=(TreeNode&& other) noexcept {
    swap(other);
    return *this;
  }
  // Trees can be as deep as the symbol count (a nested chain of clusters),
  // so destruction drains descendants iteratively instead of recursing.
  ~TreeNode() {
    if (children.empty()) return;
    std::vector<TreeNode> pending(
        std::make_move_iterator(children.begin()),
        std::make_move_iterator(children.end()));
    children.clear();
    while (!pending.empty()) {
      TreeNode doomed = std::move(pending.back());
      pending.pop_back();
      for (TreeNode& child : doomed.children)
        pending.push_back(std::move(child));
      doomed.children.clear();
    }
  }
  void swap(TreeNode& other) noexcept {
    label.swap(other.label);
    symbol.swap(other.symbol);
    children.swap(other.children);
    order_arcs.swap(other.order_arcs);
  }

  bool is_leaf() const { return children.empty(); }
};

struct ClusterTree {
  std::optional<TreeNode> root;  // nullopt is the null tree (no symbols)

  bool is_null() const { return !root.has_value(); }

  static ClusterTree leaf(const std::string& symbol) {
    ClusterTree t;
    t.root = TreeNode{Label(0), symbol, {}, {}};
    return t;
  }
  static ClusterTree null() { return ClusterTree{}; }
};

// Symbol -> point assignments.
using Valuation = std::map<std::string, OmPoint>;
using EuclideanValuation = std::map<std::string, std::vector<Rat>>;

// Sorted, distinct leaf symbols.
std::vector<std::string> symbols_of(const ClusterTree& tree);
int node_count(const ClusterTree& tree);

// Every structural violation, each with the path of child indices to the
// offending node (e.g. "root/2/0: internal node has fewer than two
// children"). An empty result means the tree is well formed.
std::vector<std::string> validate(const ClusterTree& tree);

// Label of the least common ancestor; 0 when x = y. Throws
// std::invalid_argument on unknown symbols.
Label lca_label(const ClusterTree& tree, const std::string& x,
                const std::string& y);

// Strict: lca(short) < lca(long). Weak: <=. Order: the arcs force every
// leaf on the `before` side ahead of the `after` side at their least common
// ancestor (never true across a label-0 ancestor, whose points coincide).
bool tree_satisfies(const ClusterTree& tree, const StrictConstraint& c);
bool tree_satisfies(const ClusterTree& tree, const WeakConstraint& c);
bool tree_satisfies(const ClusterTree& tree, const OrderConstraint& c);

// All symbol sets whose image is a cluster of the valuation's point set:
// a set C such that any two members are much closer to each other than to
// anything outside. Includes the full set, and every coincidence class.
// Exhaustive over point subsets; throws std::invalid_argument beyond 16
// distinct points.
std::vector<std::vector<std::string>> clusters_of(const Valuation& valuation);

// Does the valuation instantiate the tree: node images are clusters, every
// cluster is a node image, label order matches diameter order, label-0
// nodes collapse to one point. The every-cluster-is-an-image direction is
// exhaustive and only checked up to 12 distinct points; beyond that the
// remaining conditions are still checked.
bool check_instantiation(const Valuation& valuation, const ClusterTree& tree);

// Deterministic symbolic witness: the k distinct non-zero labels get scales
// d^k << ... << d^1 from smallest label to largest, the root sits at the
// zero point, and children of a node spread at the node's scale. Label-0
// nodes place all children on one point. Precondition: validate(tree) empty.
Valuation instantiate(const ClusterTree& tree);

// As instantiate, but children are placed at strictly increasing points in
// a topological order of the node's arcs, so every order arc is realized.
Valuation instantiate_ordered(const ClusterTree& tree);

// Exact Euclidean witness in `dim` dimensions for the finite-scale reading
// of "much closer" with ratio B: if lca(a,b) has a smaller label than
// lca(c,d) then B * dist(a,b) < dist(c,d). Scale i is (alpha+1)^(i-1) with
// alpha = 2 + 2n + Bn for n = node_count(tree); children sit on a collinear
// lattice so all distances stay rational. Precondition: B > 1, dim >= 1.
EuclideanValuation instantiate_euclidean(const ClusterTree& tree, const Rat& B,
                                         int dim);

// The cluster tree a valuation induces: coincidence classes at label 0,
// then one merge per distinct od level, labels 1..k by level order.
// check_instantiation(valuation, result) always holds.
ClusterTree tree_from_valuation(const Valuation& valuation);

// Canonical form: children sorted by least leaf symbol at every node (arcs
// remapped), distinct labels renumbered order-preserving onto consecutive
// integers, keeping 0 iff present. Two trees are isomorphic in the
// label-renaming sense iff their canonical forms are equal.
ClusterTree canonicalize(const ClusterTree& tree);
bool tree_equal(const ClusterTree& a, const ClusterTree& b);
bool isomorphic(const ClusterTree& a, const ClusterTree& b);

// Serialization. JSON: a leaf is {"symbol": s}, an internal node is
// {"label": "p/q", "children": [...]} with an optional "order" list of
// child-index pairs. DOT renders one graph node per tree node with order
// arcs dashed. Text is an indented listing.
std::string tree_to_json(const ClusterTree& tree, bool pretty = true);
ClusterTree tree_from_json(const std::string& text);  // throws std::invalid_argument
std::string tree_to_dot(const ClusterTree& tree);
std::string tree_to_text(const ClusterTree& tree);

}  // namespace omdist
