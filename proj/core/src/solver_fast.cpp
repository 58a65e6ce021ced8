#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "omdist/solver.hpp"
#include "solver_internal.hpp"

namespace omdist {

namespace {

using internal::Compiled;
using internal::IdConstraint;

// Disjoint-set forest over symbols with by-size merging and path
// compression, plus the bookkeeping that makes each main-loop iteration
// cheap: every set root knows its member list (spliced in constant time on
// merge), its least symbol (for deterministic child ordering) and the
// working leaf it belongs to; every working leaf keeps a doubly-linked list
// of its set roots so a merge can drop the absorbed root in constant time.
// One record per symbol: the per-iteration re-initialization walks a lot of
// symbols, so keeping a symbol's fields on one cache line matters.
struct SymbolRec {
  int parent;       // -1 at roots
  int set_size;
  int min_sym;
  int head, tail, next_member;
  int prev_root, next_root;  // leaf mfset list links
  int leaf_of;               // symbol -> work node id
};

struct Forest {
  std::vector<SymbolRec> rec;

  explicit Forest(int n) : rec(n) {}

  int find(int v) {
    int root = v;
    while (rec[root].parent != -1) root = rec[root].parent;
    while (rec[v].parent != -1) {
      int up = rec[v].parent;
      rec[v].parent = root;
      v = up;
    }
    return root;
  }
};

struct WorkNode {
  Rat label{0};
  std::vector<int> children;
  std::vector<int> symbols;  // leaves only
  // mfset list head and count, rebuilt each iteration
  int mfset_head = -1;
  int mfset_count = 0;
};

struct EdgeRec {
  int a, b;
  std::vector<int> shorts, longs;  // live constraint ids
};

struct ConstraintRec {
  int short_edge, long_edge;
  int pos_in_shorts = -1, pos_in_longs = -1;
  bool alive = true;
};

SolveResult trivial_tree(const Compiled& c) {
  SolveResult result;
  const int n = static_cast<int>(c.names.size());
  ClusterTree tree;
  if (n == 1) {
    tree.root = TreeNode{Label(0), c.names[0], {}, {}};
  } else {
    TreeNode root;
    root.label = Rat(1);
    for (int i = 0; i < n; ++i)
      root.children.push_back(TreeNode{Label(0), c.names[i], {}, {}});
    tree.root = std::move(root);
  }
  result.tree = std::move(tree);
  return result;
}

}  // namespace

SolveResult solve_fast(const ConstraintSet& system) {
  if (system.weak_count() || system.order_count())
    throw std::invalid_argument("solve_fast: strict constraints only");

  SolveResult result;
  Compiled c = internal::compile(system);
  const int n = static_cast<int>(c.names.size());
  if (n == 0) {
    result.tree = ClusterTree::null();
    return result;
  }
  for (const IdConstraint& sc : c.strict)
    if (sc.la == sc.lb) return result;  // od(a,b) << od(c,c)
  if (c.strict.empty()) return trivial_tree(c);

  // Distinct edges; constraints carry positions in the per-edge lists so an
  // edge separation unlinks its constraints in constant time.
  std::unordered_map<std::uint64_t, int> edge_index;
  std::vector<EdgeRec> edges;
  auto edge_of = [&](int a, int b) {
    std::uint64_t key =
        (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(edges.size()));
    if (inserted) edges.push_back({a, b, {}, {}});
    return it->second;
  };
  std::vector<ConstraintRec> constraints;
  constraints.reserve(c.strict.size());
  for (const IdConstraint& sc : c.strict) {
    int se = edge_of(sc.sa, sc.sb);
    int le = edge_of(sc.la, sc.lb);
    int cid = static_cast<int>(constraints.size());
    ConstraintRec rec{se, le};
    rec.pos_in_shorts = static_cast<int>(edges[se].shorts.size());
    edges[se].shorts.push_back(cid);
    rec.pos_in_longs = static_cast<int>(edges[le].longs.size());
    edges[le].longs.push_back(cid);
    constraints.push_back(rec);
  }

  auto unlink_from_shorts = [&](int cid) {
    ConstraintRec& rec = constraints[cid];
    std::vector<int>& list = edges[rec.short_edge].shorts;
    int pos = rec.pos_in_shorts;
    int moved = list.back();
    list[pos] = moved;
    constraints[moved].pos_in_shorts = pos;
    list.pop_back();
  };

  std::vector<int> live_edges;
  std::vector<int> edge_pos(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edge_pos[i] = static_cast<int>(i);
    live_edges.push_back(static_cast<int>(i));
  }
  auto remove_edge = [&](int eid) {
    int pos = edge_pos[eid];
    int moved = live_edges.back();
    live_edges[pos] = moved;
    edge_pos[moved] = pos;
    live_edges.pop_back();
  };

  std::vector<WorkNode> nodes(1);
  nodes[0].symbols.resize(n);
  for (int i = 0; i < n; ++i) nodes[0].symbols[i] = i;
  std::vector<int> active{0};  // leaves with more than one symbol

  Forest forest(n);
  std::size_t s_live = constraints.size();
  int m = n;

  while (s_live > 0) {
    ++result.stats.iterations;

    for (int leaf_id : active) {
      WorkNode& leaf = nodes[leaf_id];
      leaf.mfset_head = -1;
      leaf.mfset_count = 0;
      for (int sym : leaf.symbols) {
        SymbolRec& r = forest.rec[sym];
        r.parent = -1;
        r.set_size = 1;
        r.min_sym = sym;
        r.head = r.tail = sym;
        r.next_member = -1;
        r.leaf_of = leaf_id;
        r.prev_root = -1;
        r.next_root = leaf.mfset_head;
        if (leaf.mfset_head != -1) forest.rec[leaf.mfset_head].prev_root = sym;
        leaf.mfset_head = sym;
        ++leaf.mfset_count;
      }
    }

    for (int eid : live_edges) {
      EdgeRec& e = edges[eid];
      if (e.a == e.b || e.shorts.empty()) continue;
      int ra = forest.find(e.a);
      int rb = forest.find(e.b);
      if (ra == rb) continue;
      if (forest.rec[ra].set_size > forest.rec[rb].set_size) std::swap(ra, rb);
      // splice ra's members into rb, drop ra from its leaf's root list
      SymbolRec& a_rec = forest.rec[ra];
      SymbolRec& b_rec = forest.rec[rb];
      a_rec.parent = rb;
      b_rec.set_size += a_rec.set_size;
      b_rec.min_sym = std::min(b_rec.min_sym, a_rec.min_sym);
      forest.rec[b_rec.tail].next_member = a_rec.head;
      b_rec.tail = a_rec.tail;
      WorkNode& leaf = nodes[a_rec.leaf_of];
      int prev = a_rec.prev_root, next = a_rec.next_root;
      if (prev != -1) forest.rec[prev].next_root = next;
      if (next != -1) forest.rec[next].prev_root = prev;
      if (leaf.mfset_head == ra) leaf.mfset_head = next;
      --leaf.mfset_count;
    }

    bool all_connected = true;
    for (int eid : live_edges) {
      EdgeRec& e = edges[eid];
      if (forest.find(e.a) != forest.find(e.b)) {
        all_connected = false;
        break;
      }
    }
    if (all_connected) return result;

    std::vector<int> next_active;
    for (int leaf_id : active) {
      if (nodes[leaf_id].mfset_count <= 1) {
        next_active.push_back(leaf_id);
        continue;
      }
      std::vector<int> roots;
      for (int r = nodes[leaf_id].mfset_head; r != -1; r = forest.rec[r].next_root)
        roots.push_back(r);
      std::sort(roots.begin(), roots.end(), [&](int x, int y) {
        return forest.rec[x].min_sym < forest.rec[y].min_sym;
      });
      nodes[leaf_id].label = Rat(m);
      nodes[leaf_id].symbols.clear();
      for (int r : roots) {
        WorkNode child;
        child.symbols.reserve(forest.rec[r].set_size);
        for (int sym = forest.rec[r].head; sym != -1;
             sym = forest.rec[sym].next_member)
          child.symbols.push_back(sym);
        int child_id = static_cast<int>(nodes.size());
        nodes.push_back(std::move(child));
        nodes[leaf_id].children.push_back(child_id);
        if (nodes[child_id].symbols.size() > 1) next_active.push_back(child_id);
      }
    }
    active = std::move(next_active);

    for (std::size_t i = 0; i < live_edges.size();) {
      int eid = live_edges[i];
      EdgeRec& e = edges[eid];
      if (forest.find(e.a) == forest.find(e.b)) {
        ++i;
        continue;
      }
      for (int cid : e.longs) {
        constraints[cid].alive = false;
        unlink_from_shorts(cid);
        --s_live;
      }
      e.longs.clear();
      remove_edge(eid);  // swaps another edge into slot i
    }
    --m;
  }

  // Children ids exceed their parent's, so a descending sweep assembles
  // every subtree before its parent without recursing (the tree can be as
  // deep as the symbol count).
  std::vector<TreeNode> built(nodes.size());
  for (int id = static_cast<int>(nodes.size()) - 1; id >= 0; --id) {
    const WorkNode& wn = nodes[id];
    TreeNode node;
    node.label = wn.label;
    if (!wn.children.empty()) {
      node.children.reserve(wn.children.size());
      for (int child : wn.children)
        node.children.push_back(std::move(built[child]));
      built[id] = std::move(node);
      continue;
    }
    if (wn.symbols.size() == 1) {
      built[id] = TreeNode{Label(0), c.names[wn.symbols[0]], {}, {}};
      continue;
    }
    std::vector<int> sorted = wn.symbols;
    std::sort(sorted.begin(), sorted.end());
    node.label = Label(0);
    node.children.reserve(sorted.size());
    for (int sym : sorted)
      node.children.push_back(TreeNode{Label(0), c.names[sym], {}, {}});
    built[id] = std::move(node);
  }

  ClusterTree tree;
  tree.root = std::move(built[0]);
  built.clear();

  for (const IdConstraint& sc : c.strict) {
    if (sc.sa != sc.sb) continue;
    if (lca_label(tree, c.names[sc.la], c.names[sc.lb]) == 0) return result;
  }

  result.tree = std::move(tree);
  return result;
}

}  // namespace omdist
