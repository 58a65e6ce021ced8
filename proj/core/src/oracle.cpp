#include "omdist/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include "solver_internal.hpp"

namespace omdist {

namespace {

constexpr int kMaxSymbols = 6;

// Unlabeled nested-partition shape over symbol ids.
struct Shape {
  int leaf_id = -1;  // >= 0 iff leaf
  std::vector<Shape> children;
};

// All set partitions of ids into >= 2 blocks.
void partitions_into_blocks(const std::vector<int>& ids,
                            std::vector<std::vector<std::vector<int>>>& out) {
  std::vector<std::vector<int>> blocks;
  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (i == ids.size()) {
      if (blocks.size() >= 2) out.push_back(blocks);
      return;
    }
    const std::size_t count = blocks.size();  // deeper calls grow the vector
    for (std::size_t b = 0; b < count; ++b) {
      blocks[b].push_back(ids[i]);
      place(i + 1);
      blocks[b].pop_back();
    }
    blocks.push_back({ids[i]});
    place(i + 1);
    blocks.pop_back();
  };
  place(0);
}

void shapes_over(const std::vector<int>& ids, std::vector<Shape>& out) {
  if (ids.size() == 1) {
    Shape s;
    s.leaf_id = ids[0];
    out.push_back(std::move(s));
    return;
  }
  std::vector<std::vector<std::vector<int>>> parts;
  partitions_into_blocks(ids, parts);
  for (const auto& blocks : parts) {
    // Cartesian product of the sub-shapes of every block.
    std::vector<std::vector<Shape>> options(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
      shapes_over(blocks[b], options[b]);
    std::vector<std::size_t> pick(blocks.size(), 0);
    while (true) {
      Shape s;
      for (std::size_t b = 0; b < blocks.size(); ++b)
        s.children.push_back(options[b][pick[b]]);
      out.push_back(std::move(s));
      std::size_t b = 0;
      while (b < pick.size() && ++pick[b] == options[b].size()) {
        pick[b] = 0;
        ++b;
      }
      if (b == pick.size()) break;
    }
  }
}

// Internal nodes of a shape in a fixed order, with child links, for rank
// enumeration.
struct ShapePoset {
  const Shape* root;
  std::vector<const Shape*> internal;
  std::map<const Shape*, std::vector<int>> internal_children;
};

void index_shape(const Shape& s, ShapePoset& poset) {
  if (s.leaf_id >= 0) return;
  std::vector<int> kids;
  for (const Shape& child : s.children) {
    index_shape(child, poset);
    if (child.leaf_id < 0) {
      // child was appended by the recursive call chain; find its index
      for (std::size_t i = 0; i < poset.internal.size(); ++i)
        if (poset.internal[i] == &child) kids.push_back(static_cast<int>(i));
    }
  }
  poset.internal.push_back(&s);
  poset.internal_children[&s] = std::move(kids);
}

// Every assignment of ranks 1..j (all j) to the internal nodes with
// child < parent: levels are chosen bottom-up, each level a non-empty
// subset of the nodes whose internal children are all ranked.
void enumerate_ranks(const ShapePoset& poset,
                     const std::function<void(const std::vector<int>&)>& emit) {
  const int n = static_cast<int>(poset.internal.size());
  std::vector<int> rank(n, 0);
  std::vector<int> pending_children(n, 0);
  for (int i = 0; i < n; ++i)
    pending_children[i] =
        static_cast<int>(poset.internal_children.at(poset.internal[i]).size());
  // parent index of each internal node
  std::vector<int> parent(n, -1);
  for (int i = 0; i < n; ++i)
    for (int child : poset.internal_children.at(poset.internal[i]))
      parent[child] = i;

  std::function<void(int, int)> assign = [&](int level, int unranked) {
    if (unranked == 0) {
      emit(rank);
      return;
    }
    std::vector<int> available;
    for (int i = 0; i < n; ++i)
      if (rank[i] == 0 && pending_children[i] == 0) available.push_back(i);
    const int a = static_cast<int>(available.size());
    for (std::uint32_t mask = 1; mask < (1u << a); ++mask) {
      std::vector<int> chosen;
      for (int i = 0; i < a; ++i)
        if (mask >> i & 1) chosen.push_back(available[i]);
      for (int i : chosen) {
        rank[i] = level;
        if (parent[i] != -1) --pending_children[parent[i]];
      }
      assign(level + 1, unranked - static_cast<int>(chosen.size()));
      for (int i : chosen) {
        rank[i] = 0;
        if (parent[i] != -1) ++pending_children[parent[i]];
      }
    }
  };
  assign(1, n);
}

TreeNode shape_to_node(const Shape& s, const ShapePoset& poset,
                       const std::vector<int>& rank, long shift,
                       const std::vector<std::string>& names) {
  if (s.leaf_id >= 0) return TreeNode{Label(0), names[s.leaf_id], {}, {}};
  TreeNode node;
  for (std::size_t i = 0; i < poset.internal.size(); ++i)
    if (poset.internal[i] == &s) node.label = Label(rank[i] - shift);
  for (const Shape& child : s.children)
    node.children.push_back(shape_to_node(child, poset, rank, shift, names));
  std::sort(node.children.begin(), node.children.end(),
            [](const TreeNode& a, const TreeNode& b) {
              auto min_leaf = [](const TreeNode& n) {
                const TreeNode* cur = &n;
                std::string best;
                std::function<void(const TreeNode&)> walk = [&](const TreeNode& t) {
                  if (t.is_leaf()) {
                    if (best.empty() || t.symbol < best) best = t.symbol;
                    return;
                  }
                  for (const TreeNode& c : t.children) walk(c);
                };
                walk(*cur);
                return best;
              };
              return min_leaf(a) < min_leaf(b);
            });
  return node;
}

}  // namespace

std::vector<ClusterTree> enum_trees(const std::vector<std::string>& symbols) {
  std::vector<std::string> names = symbols;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  if (names.size() > kMaxSymbols)
    throw std::invalid_argument("enum_trees: too many symbols (max 6)");
  std::vector<ClusterTree> out;
  if (names.empty()) return out;
  if (names.size() == 1) {
    out.push_back(ClusterTree::leaf(names[0]));
    return out;
  }

  std::vector<int> ids(names.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  std::vector<Shape> shapes;
  shapes_over(ids, shapes);

  for (const Shape& shape : shapes) {
    ShapePoset poset;
    poset.root = &shape;
    index_shape(shape, poset);
    enumerate_ranks(poset, [&](const std::vector<int>& rank) {
      // all labels positive, and the bottom level collapsed to 0
      for (long shift : {0L, 1L}) {
        ClusterTree tree;
        tree.root = shape_to_node(shape, poset, rank, shift, names);
        out.push_back(std::move(tree));
      }
    });
  }
  return out;
}

namespace {

// Per-tree lca cache over symbol ids (sorted name order).
struct TreeFacts {
  ClusterTree tree;
  int n = 0;
  int node_count = 0;
  std::vector<long> lca_rank;    // n*n, label as integer
  std::vector<int> lca_node;     // n*n, node id in DFS order
  std::vector<int> lca_child_a;  // child index holding the first symbol
  std::vector<int> lca_child_b;
};

TreeFacts build_facts(ClusterTree tree, const std::vector<std::string>& names) {
  TreeFacts f;
  f.n = static_cast<int>(names.size());
  std::map<std::string, int> id;
  for (int i = 0; i < f.n; ++i) id[names[i]] = i;

  struct LeafPath {
    std::vector<std::pair<int, int>> steps;  // (node id, child index)
  };
  std::vector<LeafPath> paths(f.n);
  std::vector<long> labels;  // per node id
  int counter = 0;
  std::vector<std::pair<int, int>> trail;
  std::function<void(const TreeNode&)> walk = [&](const TreeNode& node) {
    int node_id = counter++;
    labels.push_back(node.label.get_num().get_si());
    if (node.is_leaf()) {
      paths[id.at(node.symbol)].steps = trail;
      paths[id.at(node.symbol)].steps.emplace_back(node_id, -1);
      return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      trail.emplace_back(node_id, static_cast<int>(i));
      walk(node.children[i]);
      trail.pop_back();
    }
  };
  walk(*tree.root);
  f.node_count = counter;

  f.lca_rank.assign(f.n * f.n, 0);
  f.lca_node.assign(f.n * f.n, 0);
  f.lca_child_a.assign(f.n * f.n, -1);
  f.lca_child_b.assign(f.n * f.n, -1);
  for (int a = 0; a < f.n; ++a) {
    for (int b = 0; b < f.n; ++b) {
      if (a == b) continue;
      const auto& pa = paths[a].steps;
      const auto& pb = paths[b].steps;
      std::size_t d = 0;
      while (d < pa.size() && d < pb.size() && pa[d] == pb[d]) ++d;
      int node = pa[d].first;  // first divergence: same node, different child
      f.lca_rank[a * f.n + b] = labels[node];
      f.lca_node[a * f.n + b] = node;
      f.lca_child_a[a * f.n + b] = pa[d].second;
      f.lca_child_b[a * f.n + b] = pb[d].second;
    }
  }
  f.tree = std::move(tree);
  return f;
}

const std::vector<TreeFacts>& facts_for(const std::vector<std::string>& names) {
  static std::mutex mutex;
  static std::map<std::vector<std::string>, std::vector<TreeFacts>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(names);
  if (it != cache.end()) return it->second;
  std::vector<TreeFacts> facts;
  for (ClusterTree& tree : enum_trees(names))
    facts.push_back(build_facts(std::move(tree), names));
  return cache.emplace(names, std::move(facts)).first->second;
}

struct IdSystem {
  std::vector<std::string> names;
  std::vector<internal::IdConstraint> strict, weak;
  std::vector<std::pair<int, int>> order;
};

IdSystem compile_system(const ConstraintSet& system) {
  internal::Compiled c = internal::compile(system);
  return IdSystem{std::move(c.names), std::move(c.strict), std::move(c.weak),
                  std::move(c.order)};
}

bool tree_admits(const TreeFacts& f, const IdSystem& sys) {
  const int n = f.n;
  auto rank = [&](int a, int b) { return a == b ? 0L : f.lca_rank[a * n + b]; };
  for (const auto& c : sys.strict)
    if (!(rank(c.sa, c.sb) < rank(c.la, c.lb))) return false;
  for (const auto& c : sys.weak)
    if (!(rank(c.sa, c.sb) <= rank(c.la, c.lb))) return false;
  if (sys.order.empty()) return true;
  // Required child precedences per lca node must admit a linear order.
  std::map<int, std::vector<std::pair<int, int>>> per_node;
  for (const auto& [a, b] : sys.order) {
    if (a == b) return false;
    if (rank(a, b) == 0) return false;  // coincident points cannot be ordered
    per_node[f.lca_node[a * n + b]].emplace_back(f.lca_child_a[a * n + b],
                                                 f.lca_child_b[a * n + b]);
  }
  for (const auto& [node, arcs] : per_node) {
    int max_child = 0;
    for (const auto& [u, v] : arcs) max_child = std::max({max_child, u, v});
    if (internal::digraph_has_cycle(max_child + 1, arcs)) return false;
  }
  return true;
}

}  // namespace

bool oracle_consistent(const ConstraintSet& system) {
  IdSystem sys = compile_system(system);
  if (sys.names.size() > kMaxSymbols)
    throw std::invalid_argument("oracle_consistent: too many symbols (max 6)");
  if (sys.names.empty()) return true;
  for (const TreeFacts& f : facts_for(sys.names))
    if (tree_admits(f, sys)) return true;
  return false;
}

int oracle_min_labels(const ConstraintSet& system) {
  if (system.weak_count() || system.order_count())
    throw std::invalid_argument("oracle_min_labels: strict constraints only");
  IdSystem sys = compile_system(system);
  if (sys.names.size() > kMaxSymbols)
    throw std::invalid_argument("oracle_min_labels: too many symbols (max 6)");
  if (sys.names.empty()) return 0;
  const int n = static_cast<int>(sys.names.size());
  int best = -1;
  for (const TreeFacts& f : facts_for(sys.names)) {
    if (!tree_admits(f, sys)) continue;
    std::set<long> distinct;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (f.lca_rank[a * n + b] != 0) distinct.insert(f.lca_rank[a * n + b]);
    int count = static_cast<int>(distinct.size());
    if (best == -1 || count < best) best = count;
  }
  if (best == -1)
    throw std::invalid_argument("oracle_min_labels: inconsistent input");
  return best;
}

bool euclid_check(const EuclideanValuation& valuation,
                  const std::vector<StrictConstraint>& constraints,
                  const Rat& B) {
  auto dist2 = [&](const std::string& x, const std::string& y) {
    auto ix = valuation.find(x);
    auto iy = valuation.find(y);
    if (ix == valuation.end() || iy == valuation.end())
      throw std::invalid_argument("euclid_check: symbol missing from valuation");
    const auto& px = ix->second;
    const auto& py = iy->second;
    if (px.size() != py.size())
      throw std::invalid_argument("euclid_check: dimension mismatch");
    Rat sum(0);
    for (std::size_t i = 0; i < px.size(); ++i) {
      Rat d = px[i] - py[i];
      sum += d * d;
    }
    return sum;
  };
  for (const StrictConstraint& c : constraints) {
    Rat s2 = dist2(c.short_edge.a, c.short_edge.b);
    Rat l2 = dist2(c.long_edge.a, c.long_edge.b);
    if (!(B * B * s2 < l2)) return false;
  }
  return true;
}

}  // namespace omdist
