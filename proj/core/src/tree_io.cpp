#include <json.hpp>

#include <functional>
#include <sstream>
#include <stdexcept>

#include "omdist/cluster_tree.hpp"

namespace omdist {

namespace {

using nlohmann::json;

json node_to_json(const TreeNode& node) {
  if (node.is_leaf()) return json{{"symbol", node.symbol}};
  json j;
  j["label"] = rat_to_string(node.label);
  json children = json::array();
  for (const TreeNode& child : node.children) children.push_back(node_to_json(child));
  j["children"] = std::move(children);
  if (!node.order_arcs.empty()) {
    json arcs = json::array();
    for (const auto& [a, b] : node.order_arcs) arcs.push_back(json::array({a, b}));
    j["order"] = std::move(arcs);
  }
  return j;
}

TreeNode node_from_json(const json& j, int depth = 0) {
  if (depth > 20000)
    throw std::invalid_argument("tree json: tree too deep");
  if (!j.is_object()) throw std::invalid_argument("tree json: node must be an object");
  TreeNode node;
  if (j.contains("symbol")) {
    for (const auto& [key, _] : j.items())
      if (key != "symbol")
        throw std::invalid_argument("tree json: unexpected key '" + key + "' on a leaf");
    if (!j["symbol"].is_string())
      throw std::invalid_argument("tree json: symbol must be a string");
    node.symbol = j["symbol"].get<std::string>();
    return node;
  }
  if (!j.contains("label") || !j.contains("children"))
    throw std::invalid_argument("tree json: internal node needs label and children");
  for (const auto& [key, _] : j.items())
    if (key != "label" && key != "children" && key != "order")
      throw std::invalid_argument("tree json: unexpected key '" + key + "'");
  const json& label = j["label"];
  if (label.is_string()) {
    auto q = rat_from_string(label.get<std::string>());
    if (!q) throw std::invalid_argument("tree json: malformed label");
    node.label = *q;
  } else if (label.is_number_integer()) {
    node.label = Label(static_cast<long>(label.get<long long>()));
  } else {
    throw std::invalid_argument("tree json: label must be a rational string");
  }
  if (!j["children"].is_array())
    throw std::invalid_argument("tree json: children must be an array");
  for (const json& child : j["children"])
    node.children.push_back(node_from_json(child, depth + 1));
  if (j.contains("order")) {
    if (!j["order"].is_array())
      throw std::invalid_argument("tree json: order must be an array of pairs");
    for (const json& arc : j["order"]) {
      if (!arc.is_array() || arc.size() != 2 || !arc[0].is_number_integer() ||
          !arc[1].is_number_integer())
        throw std::invalid_argument("tree json: order entry must be [i, j]");
      node.order_arcs.emplace_back(arc[0].get<int>(), arc[1].get<int>());
    }
  }
  return node;
}

}  // namespace

std::string tree_to_json(const ClusterTree& tree, bool pretty) {
  if (tree.is_null()) return "null";
  json j = node_to_json(*tree.root);
  return pretty ? j.dump(2) : j.dump();
}

ClusterTree tree_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("tree json: ") + e.what());
  }
  if (j.is_null()) return ClusterTree::null();
  ClusterTree tree;
  tree.root = node_from_json(j);
  return tree;
}

std::string tree_to_dot(const ClusterTree& tree) {
  std::ostringstream os;
  os << "digraph cluster_tree {\n";
  os << "  node [shape=ellipse];\n";
  if (!tree.is_null()) {
    int counter = 0;
    std::function<int(const TreeNode&)> emit = [&](const TreeNode& node) {
      int id = counter++;
      if (node.is_leaf()) {
        os << "  n" << id << " [label=\"" << node.symbol << "\" shape=box];\n";
        return id;
      }
      os << "  n" << id << " [label=\"⟨" << rat_to_string(node.label)
         << "⟩\"];\n";
      std::vector<int> child_ids;
      for (const TreeNode& child : node.children) child_ids.push_back(emit(child));
      for (int cid : child_ids) os << "  n" << id << " -> n" << cid << ";\n";
      for (const auto& [a, b] : node.order_arcs)
        os << "  n" << child_ids[a] << " -> n" << child_ids[b]
           << " [style=dashed constraint=false];\n";
      return id;
    };
    emit(*tree.root);
  }
  os << "}\n";
  return os.str();
}

std::string tree_to_text(const ClusterTree& tree) {
  std::ostringstream os;
  if (tree.is_null()) {
    os << "(null tree)\n";
    return os.str();
  }
  std::function<void(const TreeNode&, int)> emit = [&](const TreeNode& node,
                                                       int depth) {
    for (int i = 0; i < depth; ++i) os << "  ";
    if (node.is_leaf()) {
      os << node.symbol << "\n";
      return;
    }
    os << "[" << rat_to_string(node.label) << "]";
    if (!node.order_arcs.empty()) {
      os << " order:";
      for (const auto& [a, b] : node.order_arcs) os << " " << a << "<" << b;
    }
    os << "\n";
    for (const TreeNode& child : node.children) emit(child, depth + 1);
  };
  emit(*tree.root, 0);
  return os.str();
}

}  // namespace omdist
