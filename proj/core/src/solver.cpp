#include "omdist/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "solver_internal.hpp"

namespace omdist {

namespace internal {

std::vector<int> scc_components(const std::vector<std::vector<int>>& adj,
                                int* count_out) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), lowlink(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int next_index = 0, comp_count = 0;

  struct Frame {
    int v;
    std::size_t child;
  };
  for (int start = 0; start < n; ++start) {
    if (index[start] != -1) continue;
    std::vector<Frame> frames{{start, 0}};
    index[start] = lowlink[start] = next_index++;
    stack.push_back(start);
    on_stack[start] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        int w = adj[f.v][f.child++];
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        if (lowlink[f.v] == index[f.v]) {
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = comp_count;
          } while (w != f.v);
          ++comp_count;
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          lowlink[frames.back().v] =
              std::min(lowlink[frames.back().v], lowlink[v]);
      }
    }
  }
  if (count_out) *count_out = comp_count;
  return comp;
}

bool digraph_has_cycle(int n, const std::vector<std::pair<int, int>>& arcs) {
  for (const auto& [a, b] : arcs)
    if (a == b) return true;
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : arcs) {
    adj[a].push_back(b);
    ++indeg[b];
  }
  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  int removed = 0;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    ++removed;
    for (int w : adj[v])
      if (--indeg[w] == 0) queue.push_back(w);
  }
  return removed != n;
}

Compiled compile(const ConstraintSet& system) {
  Compiled c;
  c.names = system.symbols();
  std::sort(c.names.begin(), c.names.end());
  c.names.erase(std::unique(c.names.begin(), c.names.end()), c.names.end());
  std::unordered_map<std::string, int> id;
  for (std::size_t i = 0; i < c.names.size(); ++i)
    id[c.names[i]] = static_cast<int>(i);
  auto edge = [&](const Edge& e) {
    int a = id.at(e.a), b = id.at(e.b);
    return std::pair<int, int>(std::min(a, b), std::max(a, b));
  };
  for (const StrictConstraint& sc : system.strict()) {
    auto s = edge(sc.short_edge);
    auto l = edge(sc.long_edge);
    c.strict.push_back({s.first, s.second, l.first, l.second});
  }
  for (const WeakConstraint& wc : system.weak()) {
    auto s = edge(wc.short_edge);
    auto l = edge(wc.long_edge);
    c.weak.push_back({s.first, s.second, l.first, l.second});
  }
  for (const OrderConstraint& oc : system.order())
    c.order.emplace_back(id.at(oc.before), id.at(oc.after));
  return c;
}

}  // namespace internal

namespace {

using internal::Compiled;
using internal::IdConstraint;

struct UnionFind {
  std::vector<int> parent, size;
  explicit UnionFind(int n) : parent(n), size(n, 1) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return true;
  }
  bool same(int a, int b) { return find(a) == find(b); }
};

// Merge the components that the order constraints force together: build the
// component-level digraph, compute its strongly connected components, and
// union everything sharing one. Returns whether any union happened.
bool merge_order_sccs(UnionFind& uf,
                      const std::vector<std::pair<int, int>>& order) {
  if (order.empty()) return false;
  std::map<int, int> vertex_of;  // component root -> digraph vertex
  std::vector<int> root_of;
  auto vertex = [&](int root) {
    auto [it, inserted] =
        vertex_of.try_emplace(root, static_cast<int>(root_of.size()));
    if (inserted) root_of.push_back(root);
    return it->second;
  };
  std::vector<std::pair<int, int>> arcs;
  for (const auto& [a, b] : order) {
    int ra = uf.find(a), rb = uf.find(b);
    if (ra != rb) arcs.emplace_back(vertex(ra), vertex(rb));
  }
  if (arcs.empty()) return false;
  std::vector<std::vector<int>> adj(root_of.size());
  for (const auto& [u, v] : arcs) adj[u].push_back(v);
  int comp_count = 0;
  std::vector<int> comp = internal::scc_components(adj, &comp_count);
  std::vector<int> representative(comp_count, -1);
  bool changed = false;
  for (std::size_t v = 0; v < root_of.size(); ++v) {
    int& rep = representative[comp[v]];
    if (rep == -1)
      rep = root_of[v];
    else
      changed |= uf.unite(rep, root_of[v]);
  }
  return changed;
}

// Closure of the iteration graph H: components of the shorts, then weak
// additions and order merges to a joint fixpoint.
void close_iteration_graph(UnionFind& uf,
                           const std::vector<IdConstraint>& live_strict,
                           const std::vector<IdConstraint>& weak,
                           const std::vector<std::pair<int, int>>& order) {
  for (const IdConstraint& c : live_strict)
    if (c.sa != c.sb) uf.unite(c.sa, c.sb);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const IdConstraint& c : weak)
      if (uf.same(c.la, c.lb) && !uf.same(c.sa, c.sb)) {
        uf.unite(c.sa, c.sb);
        changed = true;
      }
    changed |= merge_order_sccs(uf, order);
  }
}

struct WorkNode {
  Rat label{0};
  std::vector<int> children;              // ids into the node pool
  std::vector<int> symbols;               // working leaves only, sorted
  std::vector<std::pair<int, int>> arcs;  // child-index order arcs
};

// Aliasing of symbols forced equal by weak constraints with a degenerate
// long: od(a,b) <= od(c,c) means a = b. Iterated to a fixpoint because an
// aliased pair can make further longs degenerate.
UnionFind compute_aliases(int n, const std::vector<IdConstraint>& weak) {
  UnionFind uf(n);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const IdConstraint& c : weak)
      if (uf.same(c.la, c.lb) && !uf.same(c.sa, c.sb)) {
        uf.unite(c.sa, c.sb);
        changed = true;
      }
  }
  return uf;
}

struct RepSpace {
  int rep_count = 0;
  std::vector<int> rep_of;                // original id -> rep id
  std::vector<std::vector<int>> members;  // rep id -> original ids, sorted
};

// Representatives compacted in order of least member, so rep id order is
// still the lexicographic order of symbols.
RepSpace build_rep_space(int n, UnionFind& alias) {
  RepSpace rs;
  rs.rep_of.resize(n);
  std::map<int, int> rep_index;
  for (int i = 0; i < n; ++i) {
    int root = alias.find(i);
    auto [it, inserted] = rep_index.try_emplace(root, rs.rep_count);
    if (inserted) {
      ++rs.rep_count;
      rs.members.emplace_back();
    }
    rs.rep_of[i] = it->second;
    rs.members[it->second].push_back(i);
  }
  return rs;
}

enum class Mode { StrictOnly, Weak, Ordered, Mixed };

SolveResult run_engine(const ConstraintSet& system, Mode mode) {
  if (mode == Mode::StrictOnly &&
      (system.weak_count() || system.order_count()))
    throw std::invalid_argument("solve: strict constraints only");
  if (mode == Mode::Weak && system.order_count())
    throw std::invalid_argument("solve_weak: no order constraints");
  if (mode == Mode::Ordered && system.weak_count())
    throw std::invalid_argument("solve_ordered: no weak constraints");

  SolveResult result;
  Compiled c = internal::compile(system);
  const int n_orig = static_cast<int>(c.names.size());
  if (n_orig == 0) {
    result.tree = ClusterTree::null();
    return result;
  }

  UnionFind alias = compute_aliases(n_orig, c.weak);
  RepSpace rs = build_rep_space(n_orig, alias);
  const int n = rs.rep_count;

  std::vector<IdConstraint> strict;
  for (const IdConstraint& sc : c.strict) {
    IdConstraint r{rs.rep_of[sc.sa], rs.rep_of[sc.sb], rs.rep_of[sc.la],
                   rs.rep_of[sc.lb]};
    if (r.la == r.lb) return result;  // od(a,b) << od(c,c) is unsatisfiable
    strict.push_back(r);
  }
  std::vector<IdConstraint> weak;
  for (const IdConstraint& wc : c.weak) {
    IdConstraint r{rs.rep_of[wc.sa], rs.rep_of[wc.sb], rs.rep_of[wc.la],
                   rs.rep_of[wc.lb]};
    if (r.sa == r.sb || r.la == r.lb) continue;
    weak.push_back(r);
  }
  std::vector<std::pair<int, int>> order;
  for (const auto& [a, b] : c.order)
    order.emplace_back(rs.rep_of[a], rs.rep_of[b]);
  if (internal::digraph_has_cycle(n, order)) return result;

  std::vector<WorkNode> nodes(1);
  nodes[0].symbols.resize(n);
  for (int i = 0; i < n; ++i) nodes[0].symbols[i] = i;
  std::vector<int> leaves{0};

  std::vector<std::set<int>> order_mates(n);
  for (const auto& [a, b] : order) {
    order_mates[a].insert(b);
    order_mates[b].insert(a);
  }

  int m = n;
  std::vector<IdConstraint> live = strict;
  std::vector<int> prev_root;  // small-n monotonicity assertion

  while (!live.empty()) {
    ++result.stats.iterations;
    UnionFind uf(n);
    close_iteration_graph(uf, live, weak, order);

    if (n <= 64) {
      if (!prev_root.empty()) {
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (uf.same(i, j) && prev_root[i] != prev_root[j])
              throw std::logic_error("solver: iteration graph grew");
      }
      prev_root.resize(n);
      for (int i = 0; i < n; ++i) prev_root[i] = uf.find(i);
    }

    bool all_in = true;
    for (const IdConstraint& cns : live) {
      if (!uf.same(cns.sa, cns.sb) || !uf.same(cns.la, cns.lb)) {
        all_in = false;
        break;
      }
    }
    if (all_in) return result;  // every edge came out short: inconsistent

    bool any_split = false;
    std::vector<int> next_leaves;
    for (int leaf_id : leaves) {
      std::map<int, std::vector<int>> groups;  // component root -> symbols
      for (int sym : nodes[leaf_id].symbols) groups[uf.find(sym)].push_back(sym);
      if (groups.size() <= 1) {
        next_leaves.push_back(leaf_id);
        continue;
      }
      any_split = true;
      std::vector<std::vector<int>> parts;
      parts.reserve(groups.size());
      for (auto& [root, syms] : groups) parts.push_back(std::move(syms));
      std::sort(parts.begin(), parts.end(),
                [](const auto& a, const auto& b) { return a.front() < b.front(); });

      nodes[leaf_id].label = Rat(m);
      nodes[leaf_id].symbols.clear();
      std::map<int, int> child_of;  // symbol -> child index
      for (std::size_t idx = 0; idx < parts.size(); ++idx) {
        WorkNode child;
        child.symbols = std::move(parts[idx]);
        int child_id = static_cast<int>(nodes.size());
        for (int sym : child.symbols) child_of[sym] = static_cast<int>(idx);
        nodes.push_back(std::move(child));
        nodes[leaf_id].children.push_back(child_id);
        next_leaves.push_back(child_id);
      }
      std::set<std::pair<int, int>> arcs;
      for (const auto& [a, b] : order) {
        auto ia = child_of.find(a);
        auto ib = child_of.find(b);
        if (ia != child_of.end() && ib != child_of.end() &&
            ia->second != ib->second)
          arcs.emplace(ia->second, ib->second);
      }
      nodes[leaf_id].arcs.assign(arcs.begin(), arcs.end());
    }
    leaves = std::move(next_leaves);

    std::vector<IdConstraint> survivors;
    for (const IdConstraint& cns : live)
      if (uf.same(cns.la, cns.lb)) survivors.push_back(cns);
    if (!any_split && survivors.size() == live.size())
      throw std::logic_error("solver: no progress");
    live = std::move(survivors);
    --m;
  }

  // Alias classes expand to coincident groups.
  auto expand_rep = [&](int rep) -> TreeNode {
    const std::vector<int>& members = rs.members[rep];
    if (members.size() == 1)
      return TreeNode{Label(0), c.names[members[0]], {}, {}};
    TreeNode group;
    group.label = Label(0);
    for (int sym : members)
      group.children.push_back(TreeNode{Label(0), c.names[sym], {}, {}});
    return group;
  };

  // Cleanup for never-split multi-symbol leaves. Plain case: a coincident
  // label-0 group. Order constraints inside a leaf rule coincidence out, so
  // such a leaf becomes a cluster at label 1/2, strictly below every label
  // the loop assigned; and a weak constraint whose short edge sits in a
  // positive leaf forces the leaf holding its long edge positive as well,
  // propagated to a fixpoint.
  std::vector<int> final_leaf_of(n, -1);
  for (int leaf_id : leaves)
    for (int sym : nodes[leaf_id].symbols) final_leaf_of[sym] = leaf_id;
  std::map<int, bool> leaf_positive;
  for (int leaf_id : leaves) {
    const auto& syms = nodes[leaf_id].symbols;
    bool ordered_inside = false;
    for (int sym : syms) {
      for (int mate : order_mates[sym]) {
        if (mate != sym &&
            std::binary_search(syms.begin(), syms.end(), mate)) {
          ordered_inside = true;
          break;
        }
      }
      if (ordered_inside) break;
    }
    leaf_positive[leaf_id] = ordered_inside;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const IdConstraint& wc : weak) {
      int long_leaf = final_leaf_of[wc.la];
      if (long_leaf == -1 || final_leaf_of[wc.lb] != long_leaf) continue;
      int short_leaf = final_leaf_of[wc.sa];
      if (short_leaf == -1 || final_leaf_of[wc.sb] != short_leaf)
        throw std::logic_error("solver: weak short strays across leaves");
      if (leaf_positive[short_leaf] && !leaf_positive[long_leaf]) {
        leaf_positive[long_leaf] = true;
        changed = true;
      }
    }
  }

  auto expand_leaf = [&](const WorkNode& wn, bool positive) -> TreeNode {
    if (wn.symbols.size() == 1) return expand_rep(wn.symbols[0]);
    TreeNode node;
    if (positive) {
      node.label = Rat(1, 2);
      std::map<int, int> child_of;
      for (int sym : wn.symbols) {
        child_of[sym] = static_cast<int>(node.children.size());
        node.children.push_back(expand_rep(sym));
      }
      std::set<std::pair<int, int>> arcs;
      for (const auto& [a, b] : order) {
        auto ia = child_of.find(a);
        auto ib = child_of.find(b);
        if (ia != child_of.end() && ib != child_of.end() &&
            ia->second != ib->second)
          arcs.emplace(ia->second, ib->second);
      }
      node.order_arcs.assign(arcs.begin(), arcs.end());
      return node;
    }
    node.label = Label(0);
    std::vector<int> all;
    for (int rep : wn.symbols)
      all.insert(all.end(), rs.members[rep].begin(), rs.members[rep].end());
    std::sort(all.begin(), all.end());
    for (int sym : all)
      node.children.push_back(TreeNode{Label(0), c.names[sym], {}, {}});
    return node;
  };

  // Children ids always exceed their parent's, so one descending sweep
  // builds every subtree before the node that adopts it (trees can be as
  // deep as the symbol count, which rules recursion out).
  auto emit = [&](int root_id) -> TreeNode {
    std::vector<TreeNode> built(nodes.size());
    for (int id = static_cast<int>(nodes.size()) - 1; id >= root_id; --id) {
      const WorkNode& wn = nodes[id];
      if (wn.children.empty()) {
        built[id] = expand_leaf(wn, leaf_positive[id]);
        continue;
      }
      TreeNode node;
      node.label = wn.label;
      node.order_arcs = wn.arcs;
      node.children.reserve(wn.children.size());
      for (int child : wn.children)
        node.children.push_back(std::move(built[child]));
      built[id] = std::move(node);
    }
    return std::move(built[root_id]);
  };

  ClusterTree tree;
  if (strict.empty()) {
    // Trivial witness for the empty system: any valuation satisfies it.
    if (n == 1) {
      tree.root = expand_rep(0);
    } else {
      TreeNode root;
      root.label = Rat(1);
      for (int rep = 0; rep < n; ++rep) root.children.push_back(expand_rep(rep));
      std::set<std::pair<int, int>> arcs;
      for (const auto& [a, b] : order)
        if (a != b) arcs.emplace(a, b);
      root.order_arcs.assign(arcs.begin(), arcs.end());
      tree.root = std::move(root);
    }
  } else {
    tree.root = emit(0);
  }

  // A degenerate short od(a,a) << od(c,d) means exactly c != d.
  for (const IdConstraint& sc : strict) {
    if (sc.sa != sc.sb) continue;
    Label l = lca_label(tree, c.names[rs.members[sc.la][0]],
                        c.names[rs.members[sc.lb][0]]);
    if (l == 0) return result;
  }

  result.tree = std::move(tree);
  return result;
}

}  // namespace

SolveResult solve(const ConstraintSet& system) {
  return run_engine(system, Mode::StrictOnly);
}
SolveResult solve_weak(const ConstraintSet& system) {
  return run_engine(system, Mode::Weak);
}
SolveResult solve_ordered(const ConstraintSet& system) {
  return run_engine(system, Mode::Ordered);
}
SolveResult solve_mixed(const ConstraintSet& system) {
  return run_engine(system, Mode::Mixed);
}

std::optional<std::vector<StrictConstraint>> reduce_constraints(
    const std::vector<StrictConstraint>& system) {
  if (system.empty()) return std::vector<StrictConstraint>{};
  std::map<std::string, int> id;
  for (const StrictConstraint& sc : system) {
    id.try_emplace(sc.short_edge.a, 0);
    id.try_emplace(sc.short_edge.b, 0);
    id.try_emplace(sc.long_edge.a, 0);
    id.try_emplace(sc.long_edge.b, 0);
  }
  int next = 0;
  for (auto& [_, v] : id) v = next++;
  UnionFind uf(next);
  for (const StrictConstraint& sc : system)
    uf.unite(id.at(sc.short_edge.a), id.at(sc.short_edge.b));
  bool all_in = true;
  for (const StrictConstraint& sc : system) {
    if (!uf.same(id.at(sc.long_edge.a), id.at(sc.long_edge.b))) {
      all_in = false;
      break;
    }
  }
  if (all_in) return std::nullopt;
  std::vector<StrictConstraint> kept;
  for (const StrictConstraint& sc : system)
    if (uf.same(id.at(sc.long_edge.a), id.at(sc.long_edge.b)))
      kept.push_back(sc);
  return kept;
}

std::optional<int> num_labels(const ConstraintSet& system) {
  if (system.weak_count() || system.order_count())
    throw std::invalid_argument("num_labels: strict constraints only");
  for (const StrictConstraint& sc : system.strict())
    if (sc.long_edge.degenerate()) return std::nullopt;
  std::vector<StrictConstraint> current = system.strict();
  int count = 0;
  while (!current.empty()) {
    auto reduced = reduce_constraints(current);
    if (!reduced) return std::nullopt;
    current = std::move(*reduced);
    ++count;
  }
  return count;
}

SymbolGraph incorporate_order(const SymbolGraph& h,
                              const std::vector<OrderConstraint>& order) {
  const int n = static_cast<int>(h.symbols.size());
  std::map<std::string, int> id;
  for (int i = 0; i < n; ++i) id[h.symbols[i]] = i;
  UnionFind uf(n);
  for (const auto& [a, b] : h.edges) uf.unite(a, b);
  std::vector<std::pair<int, int>> arcs;
  for (const OrderConstraint& oc : order) {
    auto ia = id.find(oc.before);
    auto ib = id.find(oc.after);
    if (ia == id.end() || ib == id.end()) continue;
    arcs.emplace_back(ia->second, ib->second);
  }
  merge_order_sccs(uf, arcs);

  SymbolGraph out;
  out.symbols = h.symbols;
  std::set<std::pair<int, int>> edges;
  for (const auto& [a, b] : h.edges)
    edges.emplace(std::min(a, b), std::max(a, b));
  UnionFind before(n);
  for (const auto& [a, b] : h.edges) before.unite(a, b);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (uf.same(i, j) && !before.same(i, j)) edges.emplace(i, j);
  out.edges.assign(edges.begin(), edges.end());
  return out;
}

}  // namespace omdist
