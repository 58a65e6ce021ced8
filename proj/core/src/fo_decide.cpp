#include "omdist/fo_decide.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace omdist {

std::vector<Rat> extending_labels(const ClusterTree& tree) {
  std::set<Rat> labels{Rat(0)};
  std::function<void(const TreeNode&)> collect = [&](const TreeNode& node) {
    labels.insert(node.label);
    for (const TreeNode& child : node.children) collect(child);
  };
  if (!tree.is_null()) collect(*tree.root);

  std::vector<Rat> sorted(labels.begin(), labels.end());
  std::vector<Rat> out = sorted;
  out.push_back(sorted.back() + 1);
  for (std::size_t i = 1; i < sorted.size(); ++i)
    out.push_back((sorted[i - 1] + sorted[i]) / 2);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool has_order_arcs(const TreeNode& node) {
  if (!node.order_arcs.empty()) return true;
  for (const TreeNode& child : node.children)
    if (has_order_arcs(child)) return true;
  return false;
}

TreeNode* at_path(TreeNode& root, const std::vector<int>& path) {
  TreeNode* node = &root;
  for (int step : path) node = &node->children[step];
  return node;
}

}  // namespace

std::vector<ClusterTree> extensions(const ClusterTree& tree,
                                    const std::string& x) {
  std::vector<std::string> syms = symbols_of(tree);
  if (std::binary_search(syms.begin(), syms.end(), x))
    throw std::invalid_argument("extensions: symbol '" + x + "' already in tree");
  if (!tree.is_null() && has_order_arcs(*tree.root))
    throw std::invalid_argument("extensions: ordered trees not supported");

  std::vector<ClusterTree> raw;
  TreeNode x_leaf{Label(0), x, {}, {}};

  if (tree.is_null()) {
    raw.push_back(ClusterTree::leaf(x));
  } else if (tree.root->is_leaf()) {
    // pair the two lone symbols, coincident or apart
    for (long label : {0L, 1L}) {
      TreeNode m;
      m.label = Label(label);
      m.children = {x_leaf, *tree.root};
      ClusterTree t;
      t.root = std::move(m);
      raw.push_back(std::move(t));
    }
  } else {
    std::vector<Rat> ext_labels = extending_labels(tree);
    std::vector<std::vector<int>> internal_paths, leaf_paths;
    std::vector<int> path;
    std::function<void(const TreeNode&)> walk = [&](const TreeNode& node) {
      if (node.is_leaf()) {
        leaf_paths.push_back(path);
        return;
      }
      internal_paths.push_back(path);
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        walk(node.children[i]);
        path.pop_back();
      }
    };
    walk(*tree.root);

    // extra child of an internal node
    for (const auto& p : internal_paths) {
      ClusterTree copy = tree;
      at_path(*copy.root, p)->children.push_back(x_leaf);
      raw.push_back(std::move(copy));
    }
    // sibling of a leaf, under a new node below the leaf's father
    for (const auto& p : leaf_paths) {
      std::vector<int> father_path(p.begin(), p.end() - 1);
      const TreeNode* father = at_path(*const_cast<TreeNode*>(&*tree.root),
                                       father_path);
      if (father->label == 0) continue;
      for (const Rat& label : ext_labels) {
        if (!(label < father->label)) continue;
        ClusterTree copy = tree;
        TreeNode* slot = at_path(*copy.root, p);
        TreeNode m;
        m.label = label;
        m.children = {x_leaf, std::move(*slot)};
        *slot = std::move(m);
        raw.push_back(std::move(copy));
      }
    }
    // wrap a non-root internal node at a strictly in-between label
    for (const auto& p : internal_paths) {
      if (p.empty()) continue;  // root
      std::vector<int> father_path(p.begin(), p.end() - 1);
      const TreeNode* father =
          at_path(*const_cast<TreeNode*>(&*tree.root), father_path);
      const TreeNode* target = at_path(*const_cast<TreeNode*>(&*tree.root), p);
      for (const Rat& label : ext_labels) {
        if (!(target->label < label && label < father->label)) continue;
        ClusterTree copy = tree;
        TreeNode* slot = at_path(*copy.root, p);
        TreeNode m;
        m.label = label;
        m.children = {x_leaf, std::move(*slot)};
        *slot = std::move(m);
        raw.push_back(std::move(copy));
      }
    }
    // new root above everything
    {
      ClusterTree copy = tree;
      TreeNode m;
      m.label = copy.root->label + 1;
      m.children = {x_leaf, std::move(*copy.root)};
      copy.root = std::move(m);
      raw.push_back(std::move(copy));
    }
  }

  std::vector<ClusterTree> out;
  std::set<std::string> seen;
  for (ClusterTree& t : raw) {
    ClusterTree canon = canonicalize(t);
    std::string key = tree_to_json(canon, false);
    if (seen.insert(std::move(key)).second) out.push_back(std::move(canon));
  }
  const long n = static_cast<long>(syms.size());
  if (n >= 1 && static_cast<long>(out.size()) >= 4 * n * n)
    throw std::logic_error("extensions: count bound exceeded");
  return out;
}

namespace {

struct DecideContext {
  DecideStats* stats;
  std::map<std::pair<std::string, const Formula*>, bool> memo;
};

bool decide_rec(const ClusterTree& tree, const FormulaPtr& phi,
                DecideContext& ctx) {
  switch (phi->kind) {
    case Formula::Kind::Eq:
      return lca_label(tree, phi->atoms[0], phi->atoms[1]) == 0;
    case Formula::Kind::MuchCloser:
      return lca_label(tree, phi->atoms[0], phi->atoms[1]) <
             lca_label(tree, phi->atoms[2], phi->atoms[3]);
    case Formula::Kind::Not:
      return !decide_rec(tree, phi->left, ctx);
    case Formula::Kind::And:
      return decide_rec(tree, phi->left, ctx) &&
             decide_rec(tree, phi->right, ctx);
    case Formula::Kind::Exists: {
      std::pair<std::string, const Formula*> key{tree_to_json(tree, false),
                                                 phi.get()};
      auto it = ctx.memo.find(key);
      if (it != ctx.memo.end()) return it->second;
      bool found = false;
      std::vector<ClusterTree> ext = extensions(tree, phi->var);
      if (ctx.stats)
        ctx.stats->trees_generated += static_cast<long>(ext.size());
      for (const ClusterTree& t : ext) {
        if (decide_rec(t, phi->left, ctx)) {
          found = true;
          break;
        }
      }
      ctx.memo.emplace(std::move(key), found);
      return found;
    }
    default:
      throw std::logic_error("decide: formula not normalized");
  }
}

}  // namespace

bool decide(const ClusterTree& tree, const FormulaPtr& phi, DecideStats* stats) {
  std::vector<std::string> violations = validate(tree);
  if (!violations.empty())
    throw std::invalid_argument("decide: invalid tree: " + violations.front());
  if (!tree.is_null() && has_order_arcs(*tree.root))
    throw std::invalid_argument("decide: ordered trees not supported");
  std::vector<std::string> syms = symbols_of(tree);
  for (const std::string& v : free_variables(phi))
    if (!std::binary_search(syms.begin(), syms.end(), v))
      throw std::invalid_argument("decide: free variable '" + v +
                                  "' is not a tree symbol");
  FormulaPtr normal = normalize(phi);
  DecideContext ctx{stats, {}};
  // Memo keys canonicalize labels away, so relabelings share entries.
  return decide_rec(canonicalize(tree), normal, ctx);
}

bool decide_sentence(const FormulaPtr& phi, DecideStats* stats) {
  if (!free_variables(phi).empty())
    throw std::invalid_argument("decide_sentence: formula has free variables");
  return decide(ClusterTree::null(), phi, stats);
}

}  // namespace omdist
