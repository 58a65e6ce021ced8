#include "omdist/cluster_tree.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>

namespace omdist {

namespace {

void collect_symbols(const TreeNode& node, std::vector<std::string>& out) {
  if (node.is_leaf()) {
    out.push_back(node.symbol);
    return;
  }
  for (const TreeNode& child : node.children) collect_symbols(child, out);
}

int count_nodes(const TreeNode& node) {
  int n = 1;
  for (const TreeNode& child : node.children) n += count_nodes(child);
  return n;
}

// Child-index path from the root to each leaf symbol. Iterative: query
// trees can be as deep as their symbol count.
std::map<std::string, std::vector<int>> leaf_paths(const ClusterTree& tree) {
  std::map<std::string, std::vector<int>> paths;
  if (tree.is_null()) return paths;
  if (tree.root->is_leaf()) {
    paths[tree.root->symbol] = {};
    return paths;
  }
  struct Frame {
    const TreeNode* node;
    std::size_t next = 0;
  };
  std::vector<Frame> stack{{&*tree.root, 0}};
  std::vector<int> path;
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == top.node->children.size()) {
      stack.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    const TreeNode& child = top.node->children[top.next];
    path.push_back(static_cast<int>(top.next));
    ++top.next;
    if (child.is_leaf()) {
      paths[child.symbol] = path;
      path.pop_back();
    } else {
      stack.push_back({&child, 0});
    }
  }
  return paths;
}

const TreeNode& node_at(const ClusterTree& tree, const std::vector<int>& path,
                        std::size_t depth) {
  const TreeNode* node = &*tree.root;
  for (std::size_t i = 0; i < depth; ++i) node = &node->children[path[i]];
  return *node;
}

struct LcaQuery {
  const TreeNode* node;
  int child_x = -1;  // child of the lca containing x (-1 when x == y)
  int child_y = -1;
};

LcaQuery lca_of(const ClusterTree& tree,
                const std::map<std::string, std::vector<int>>& paths,
                const std::string& x, const std::string& y) {
  auto ix = paths.find(x);
  auto iy = paths.find(y);
  if (ix == paths.end()) throw std::invalid_argument("unknown symbol '" + x + "'");
  if (iy == paths.end()) throw std::invalid_argument("unknown symbol '" + y + "'");
  const auto& px = ix->second;
  const auto& py = iy->second;
  std::size_t d = 0;
  while (d < px.size() && d < py.size() && px[d] == py[d]) ++d;
  LcaQuery q{&node_at(tree, px, d)};
  if (d < px.size() && d < py.size()) {
    q.child_x = px[d];
    q.child_y = py[d];
  }
  return q;
}

bool arc_reaches(const TreeNode& node, int from, int to) {
  std::vector<std::vector<int>> adj(node.children.size());
  for (const auto& [i, j] : node.order_arcs) adj[i].push_back(j);
  std::vector<char> seen(node.children.size(), 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace

std::vector<std::string> symbols_of(const ClusterTree& tree) {
  std::vector<std::string> out;
  if (!tree.is_null()) collect_symbols(*tree.root, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int node_count(const ClusterTree& tree) {
  return tree.is_null() ? 0 : count_nodes(*tree.root);
}

std::vector<std::string> validate(const ClusterTree& tree) {
  std::vector<std::string> violations;
  if (tree.is_null()) return violations;
  std::set<std::string> seen;
  std::string path = "root";

  std::function<void(const TreeNode&, std::string)> walk =
      [&](const TreeNode& node, std::string where) {
        if (sign(node.label) < 0)
          violations.push_back(where + ": negative label");
        if (node.is_leaf()) {
          if (node.symbol.empty())
            violations.push_back(where + ": leaf without a symbol");
          else if (!seen.insert(node.symbol).second)
            violations.push_back(where + ": duplicate leaf symbol '" +
                                 node.symbol + "'");
          if (node.label != 0)
            violations.push_back(where + ": leaf with non-zero label");
          if (!node.order_arcs.empty())
            violations.push_back(where + ": order arcs on a leaf");
          return;
        }
        if (!node.symbol.empty())
          violations.push_back(where + ": internal node carries a symbol");
        if (node.children.size() < 2)
          violations.push_back(where + ": internal node has fewer than two children");
        const int n = static_cast<int>(node.children.size());
        bool arcs_ok = true;
        for (const auto& [i, j] : node.order_arcs) {
          if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
            violations.push_back(where + ": order arc with bad child index");
            arcs_ok = false;
          }
        }
        if (arcs_ok && !node.order_arcs.empty()) {
          // Cycle check: repeatedly remove arc-free vertices.
          std::vector<int> indeg(n, 0);
          std::vector<std::vector<int>> adj(n);
          for (const auto& [i, j] : node.order_arcs) {
            adj[i].push_back(j);
            ++indeg[j];
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
          if (removed != n)
            violations.push_back(where + ": order arcs form a cycle");
          if (node.label == 0)
            violations.push_back(where + ": order arcs on a label-0 node");
        }
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          const TreeNode& child = node.children[i];
          if (!child.is_leaf() && !(child.label < node.label))
            violations.push_back(where + "/" + std::to_string(i) +
                                 ": internal label not below parent label");
          walk(child, where + "/" + std::to_string(i));
        }
      };
  walk(*tree.root, path);
  return violations;
}

Label lca_label(const ClusterTree& tree, const std::string& x,
                const std::string& y) {
  auto paths = leaf_paths(tree);
  return lca_of(tree, paths, x, y).node->label;
}

bool tree_satisfies(const ClusterTree& tree, const StrictConstraint& c) {
  auto paths = leaf_paths(tree);
  Label s = lca_of(tree, paths, c.short_edge.a, c.short_edge.b).node->label;
  Label l = lca_of(tree, paths, c.long_edge.a, c.long_edge.b).node->label;
  return s < l;
}

bool tree_satisfies(const ClusterTree& tree, const WeakConstraint& c) {
  auto paths = leaf_paths(tree);
  Label s = lca_of(tree, paths, c.short_edge.a, c.short_edge.b).node->label;
  Label l = lca_of(tree, paths, c.long_edge.a, c.long_edge.b).node->label;
  return s <= l;
}

bool tree_satisfies(const ClusterTree& tree, const OrderConstraint& c) {
  if (c.before == c.after) return false;
  auto paths = leaf_paths(tree);
  LcaQuery q = lca_of(tree, paths, c.before, c.after);
  if (q.node->label == 0) return false;  // coincident points cannot be ordered
  return arc_reaches(*q.node, q.child_x, q.child_y);
}

namespace {

struct PointCmpLess {
  bool operator()(const OmPoint& a, const OmPoint& b) const {
    return point_cmp(a, b) < 0;
  }
};

struct DistinctPoints {
  std::vector<OmPoint> points;
  std::vector<std::vector<std::string>> symbols;  // per point, sorted
  std::map<std::string, int> point_of;
};

DistinctPoints split_points(const Valuation& valuation) {
  DistinctPoints d;
  std::map<OmPoint, int, PointCmpLess> index;
  for (const auto& [sym, pt] : valuation) {
    auto [it, inserted] = index.try_emplace(pt, static_cast<int>(d.points.size()));
    if (inserted) {
      d.points.push_back(pt);
      d.symbols.emplace_back();
    }
    d.symbols[it->second].push_back(sym);
    d.point_of[sym] = it->second;
  }
  return d;
}

std::vector<std::vector<Om>> od_matrix(const std::vector<OmPoint>& pts) {
  std::size_t n = pts.size();
  std::vector<std::vector<Om>> m(n, std::vector<Om>(n, Om::zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = od(pts[i], pts[j]);
  return m;
}

bool mask_is_cluster(std::uint32_t mask, std::size_t n,
                     const std::vector<std::vector<Om>>& od_m) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(mask >> i & 1)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask >> j & 1) || i == j) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (mask >> k & 1) continue;
        if (!much_less(od_m[i][j], od_m[i][k])) return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<std::vector<std::string>> clusters_of(const Valuation& valuation) {
  DistinctPoints d = split_points(valuation);
  std::size_t n = d.points.size();
  if (n > 16)
    throw std::invalid_argument("clusters_of: too many distinct points (max 16)");
  std::vector<std::vector<std::string>> out;
  if (n == 0) return out;
  auto od_m = od_matrix(d.points);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (!mask_is_cluster(mask, n, od_m)) continue;
    std::vector<std::string> cluster;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1)
        cluster.insert(cluster.end(), d.symbols[i].begin(), d.symbols[i].end());
    std::sort(cluster.begin(), cluster.end());
    out.push_back(std::move(cluster));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

bool check_instantiation(const Valuation& valuation, const ClusterTree& tree) {
  std::vector<std::string> syms = symbols_of(tree);
  for (const std::string& s : syms)
    if (!valuation.count(s))
      throw std::invalid_argument("check_instantiation: valuation missing '" + s + "'");
  if (tree.is_null()) return true;

  DistinctPoints d = split_points(valuation);
  std::size_t n = d.points.size();
  auto od_m = od_matrix(d.points);

  struct NodeInfo {
    const TreeNode* node;
    std::uint32_t image = 0;
    Om odiam = Om::zero();
  };
  std::vector<NodeInfo> nodes;
  std::function<std::uint32_t(const TreeNode&)> walk = [&](const TreeNode& node) {
    NodeInfo info{&node};
    if (node.is_leaf()) {
      info.image = 1u << d.point_of.at(node.symbol);
    } else {
      for (const TreeNode& child : node.children) info.image |= walk(child);
    }
    // recompute image before moving into the list
    std::uint32_t image = info.image;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(image >> i & 1)) continue;
      for (std::size_t j = i + 1; j < n; ++j)
        if ((image >> j & 1) && much_less(info.odiam, od_m[i][j]))
          info.odiam = od_m[i][j];
    }
    nodes.push_back(std::move(info));
    return image;
  };
  if (n > 32) throw std::invalid_argument("check_instantiation: too many points");
  walk(*tree.root);

  // (i) internal node images are clusters
  for (const NodeInfo& info : nodes) {
    if (info.node->is_leaf()) continue;
    if (!mask_is_cluster(info.image, n, od_m)) return false;
  }
  // (iii) label order matches diameter order, over all node pairs
  for (const NodeInfo& a : nodes)
    for (const NodeInfo& b : nodes)
      if (a.node->label < b.node->label && !much_less(a.odiam, b.odiam))
        return false;
  // (iv) label-0 nodes collapse to one point
  for (const NodeInfo& info : nodes)
    if (info.node->label == 0 && !info.odiam.is_zero()) return false;
  // (ii) every cluster is some node's image (exhaustive at small scale)
  if (n <= 12) {
    std::set<std::uint32_t> images;
    for (const NodeInfo& info : nodes) images.insert(info.image);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
      if (mask_is_cluster(mask, n, od_m) && !images.count(mask)) return false;
  }
  return true;
}

namespace {

// Distinct non-zero labels, ascending -> scale exponents k, k-1, ..., 1.
std::map<Label, Rat> scale_exponents(const TreeNode& root) {
  std::set<Label> labels;
  std::function<void(const TreeNode&)> walk = [&](const TreeNode& node) {
    if (node.label != 0) labels.insert(node.label);
    for (const TreeNode& child : node.children) walk(child);
  };
  walk(root);
  std::map<Label, Rat> exponents;
  long k = static_cast<long>(labels.size());
  long i = 1;
  for (const Label& l : labels) {
    exponents[l] = Rat(k + 1 - i);
    ++i;
  }
  return exponents;
}

std::vector<int> topo_children(const TreeNode& node) {
  const int n = static_cast<int>(node.children.size());
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> adj(n);
  for (const auto& [i, j] : node.order_arcs) {
    adj[i].push_back(j);
    ++indeg[j];
  }
  // Stable: among ready vertices always pick the smallest child index.
  std::set<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.insert(v);
  std::vector<int> order;
  while (!ready.empty()) {
    int v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (int w : adj[v])
      if (--indeg[w] == 0) ready.insert(w);
  }
  if (static_cast<int>(order.size()) != n)
    throw std::invalid_argument("instantiate_ordered: order arcs form a cycle");
  return order;
}

}  // namespace

Valuation instantiate(const ClusterTree& tree) {
  Valuation val;
  if (tree.is_null()) return val;
  auto exponents = scale_exponents(*tree.root);
  std::function<void(const TreeNode&, const OmPoint&)> place =
      [&](const TreeNode& node, const OmPoint& at) {
        if (node.is_leaf()) {
          val[node.symbol] = at;
          return;
        }
        if (node.label == 0) {
          for (const TreeNode& child : node.children) place(child, at);
          return;
        }
        Om scale = Om::delta_power(exponents.at(node.label));
        auto pts = points_at_scale(at, scale, static_cast<int>(node.children.size()));
        for (std::size_t i = 0; i < node.children.size(); ++i)
          place(node.children[i], pts[i]);
      };
  place(*tree.root, OmPoint{});
  return val;
}

Valuation instantiate_ordered(const ClusterTree& tree) {
  Valuation val;
  if (tree.is_null()) return val;
  auto exponents = scale_exponents(*tree.root);
  std::function<void(const TreeNode&, const OmPoint&)> place =
      [&](const TreeNode& node, const OmPoint& at) {
        if (node.is_leaf()) {
          val[node.symbol] = at;
          return;
        }
        if (node.label == 0) {
          for (const TreeNode& child : node.children) place(child, at);
          return;
        }
        Om scale = Om::delta_power(exponents.at(node.label));
        // One extra point: children take the strictly increasing tail, in
        // topological order, so arc sources land strictly left of targets.
        auto pts =
            points_at_scale(at, scale, static_cast<int>(node.children.size()) + 1);
        std::vector<int> order = topo_children(node);
        for (std::size_t slot = 0; slot < order.size(); ++slot)
          place(node.children[order[slot]], pts[slot + 1]);
      };
  place(*tree.root, OmPoint{});
  return val;
}

EuclideanValuation instantiate_euclidean(const ClusterTree& tree, const Rat& B,
                                         int dim) {
  if (!(B > 1)) throw std::invalid_argument("instantiate_euclidean: B must be > 1");
  if (dim < 1) throw std::invalid_argument("instantiate_euclidean: dim must be >= 1");
  EuclideanValuation val;
  if (tree.is_null()) return val;

  const int n = node_count(tree);
  const Rat alpha = Rat(2) + Rat(2 * n) + B * Rat(n);

  // Distinct non-zero labels ascending -> scales 1, (alpha+1), (alpha+1)^2, ...
  std::set<Label> labels;
  std::function<void(const TreeNode&)> collect = [&](const TreeNode& node) {
    if (node.label != 0) labels.insert(node.label);
    for (const TreeNode& child : node.children) collect(child);
  };
  collect(*tree.root);
  std::map<Label, Rat> scale;
  Rat s(1);
  for (const Label& l : labels) {
    scale[l] = s;
    s *= alpha + 1;
  }

  std::function<void(const TreeNode&, const std::vector<Rat>&)> place =
      [&](const TreeNode& node, const std::vector<Rat>& at) {
        if (node.is_leaf()) {
          val[node.symbol] = at;
          return;
        }
        if (node.label == 0) {
          for (const TreeNode& child : node.children) place(child, at);
          return;
        }
        const Rat& step = scale.at(node.label);
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          std::vector<Rat> pos = at;
          pos[0] += step * Rat(static_cast<long>(i));
          place(node.children[i], pos);
        }
      };
  place(*tree.root, std::vector<Rat>(dim, Rat(0)));
  return val;
}

namespace {

const std::string& min_leaf(const TreeNode& node) {
  if (node.is_leaf()) return node.symbol;
  const std::string* best = &min_leaf(node.children.front());
  for (std::size_t i = 1; i < node.children.size(); ++i) {
    const std::string& m = min_leaf(node.children[i]);
    if (m < *best) best = &m;
  }
  return *best;
}

void sort_children(TreeNode& node) {
  if (node.is_leaf()) return;
  for (TreeNode& child : node.children) sort_children(child);
  const int n = static_cast<int>(node.children.size());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    return min_leaf(node.children[a]) < min_leaf(node.children[b]);
  });
  std::vector<int> inverse(n);
  for (int i = 0; i < n; ++i) inverse[perm[i]] = i;
  std::vector<TreeNode> sorted;
  sorted.reserve(n);
  for (int i = 0; i < n; ++i) sorted.push_back(std::move(node.children[perm[i]]));
  node.children = std::move(sorted);
  for (auto& [i, j] : node.order_arcs) {
    i = inverse[i];
    j = inverse[j];
  }
  std::sort(node.order_arcs.begin(), node.order_arcs.end());
  node.order_arcs.erase(
      std::unique(node.order_arcs.begin(), node.order_arcs.end()),
      node.order_arcs.end());
}

}  // namespace

ClusterTree canonicalize(const ClusterTree& tree) {
  if (tree.is_null()) return tree;
  ClusterTree out = tree;
  sort_children(*out.root);
  std::set<Label> labels;
  std::function<void(const TreeNode&)> collect = [&](const TreeNode& node) {
    labels.insert(node.label);
    for (const TreeNode& child : node.children) collect(child);
  };
  collect(*out.root);
  std::map<Label, Label> remap;
  long next = (*labels.begin() == 0) ? 0 : 1;
  for (const Label& l : labels) remap[l] = Label(next++);
  std::function<void(TreeNode&)> apply = [&](TreeNode& node) {
    node.label = remap.at(node.label);
    for (TreeNode& child : node.children) apply(child);
  };
  apply(*out.root);
  return out;
}

bool tree_equal(const ClusterTree& a, const ClusterTree& b) {
  std::function<bool(const TreeNode&, const TreeNode&)> eq =
      [&](const TreeNode& x, const TreeNode& y) {
        if (x.label != y.label || x.symbol != y.symbol) return false;
        if (x.children.size() != y.children.size()) return false;
        auto ax = x.order_arcs;
        auto ay = y.order_arcs;
        std::sort(ax.begin(), ax.end());
        std::sort(ay.begin(), ay.end());
        if (ax != ay) return false;
        for (std::size_t i = 0; i < x.children.size(); ++i)
          if (!eq(x.children[i], y.children[i])) return false;
        return true;
      };
  if (a.is_null() || b.is_null()) return a.is_null() == b.is_null();
  return eq(*a.root, *b.root);
}

bool isomorphic(const ClusterTree& a, const ClusterTree& b) {
  return tree_equal(canonicalize(a), canonicalize(b));
}

ClusterTree tree_from_valuation(const Valuation& valuation) {
  if (valuation.empty()) return ClusterTree::null();
  DistinctPoints d = split_points(valuation);
  std::size_t n = d.points.size();

  struct Group {
    TreeNode node;
    int point;  // representative
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < n; ++i) {
    TreeNode node;
    if (d.symbols[i].size() == 1) {
      node = TreeNode{Label(0), d.symbols[i][0], {}, {}};
    } else {
      node.label = Label(0);
      for (const std::string& s : d.symbols[i])
        node.children.push_back(TreeNode{Label(0), s, {}, {}});
    }
    groups.push_back({std::move(node), static_cast<int>(i)});
  }

  // Distinct od levels between distinct points, ascending magnitude
  // (descending exponent).
  std::set<Rat, std::greater<Rat>> levels;
  auto od_m = od_matrix(d.points);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) levels.insert(od_m[i][j].exponent());

  long rank = 1;
  for (const Rat& level : levels) {
    // Merge groups connected at exactly this level.
    std::vector<int> uf(groups.size());
    for (std::size_t i = 0; i < uf.size(); ++i) uf[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int v) {
      while (uf[v] != v) v = uf[v] = uf[uf[v]];
      return v;
    };
    for (std::size_t i = 0; i < groups.size(); ++i)
      for (std::size_t j = i + 1; j < groups.size(); ++j)
        if (od_m[groups[i].point][groups[j].point] == Om::delta_power(level))
          uf[find(static_cast<int>(j))] = find(static_cast<int>(i));

    std::map<int, std::vector<int>> members;
    for (std::size_t i = 0; i < groups.size(); ++i)
      members[find(static_cast<int>(i))].push_back(static_cast<int>(i));
    std::vector<Group> next;
    for (auto& [root, ids] : members) {
      if (ids.size() == 1) {
        next.push_back(std::move(groups[ids[0]]));
        continue;
      }
      TreeNode node;
      node.label = Label(rank);
      for (int id : ids) node.children.push_back(std::move(groups[id].node));
      std::sort(node.children.begin(), node.children.end(),
                [](const TreeNode& a, const TreeNode& b) {
                  return min_leaf(a) < min_leaf(b);
                });
      next.push_back({std::move(node), groups[ids[0]].point});
    }
    groups = std::move(next);
    ++rank;
  }

  if (groups.size() != 1)
    throw std::logic_error("tree_from_valuation: merge did not converge");
  ClusterTree tree;
  tree.root = std::move(groups[0].node);
  return tree;
}

}  // namespace omdist
