#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "omdist/cluster_tree.hpp"
#include "omdist/oracle.hpp"
#include "test_support.hpp"

using namespace omdist;
using test::leaf;
using test::node;
using test::tree;

TEST_SUITE_BEGIN("cluster_tree");

TEST_CASE("validate accepts well-formed trees") {
  CHECK(validate(test::fixture_consistent5_tree()).empty());
  CHECK(validate(ClusterTree::leaf("x")).empty());
  CHECK(validate(ClusterTree::null()).empty());
  CHECK(validate(tree(node(Label(0), {leaf("a"), leaf("b")}))).empty());
}

TEST_CASE("validate reports each violation with its node path") {
  SUBCASE("single child") {
    auto t = tree(node(Label(2), {node(Label(1), {leaf("a"), leaf("b")})}));
    auto v = validate(t);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("fewer than two children") != std::string::npos);
    CHECK(v[0].find("root") != std::string::npos);
  }
  SUBCASE("duplicate symbols") {
    auto v = validate(tree(node(Label(1), {leaf("a"), leaf("a")})));
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("duplicate leaf symbol") != std::string::npos);
  }
  SUBCASE("label not below parent") {
    auto t = tree(node(Label(1), {node(Label(1), {leaf("a"), leaf("b")}),
                                  leaf("c")}));
    auto v = validate(t);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("not below parent") != std::string::npos);
  }
  SUBCASE("cyclic order arcs") {
    auto t = tree(node(Label(1), {leaf("a"), leaf("b")}, {{0, 1}, {1, 0}}));
    auto v = validate(t);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("cycle") != std::string::npos);
  }
  SUBCASE("arcs on a label-0 node") {
    auto t = tree(node(Label(0), {leaf("a"), leaf("b")}, {{0, 1}}));
    auto v = validate(t);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("label-0") != std::string::npos);
  }
}

TEST_CASE("lca_label") {
  auto t = test::fixture_consistent5_tree();
  CHECK(lca_label(t, "w", "v") == Label(5));
  CHECK(lca_label(t, "w", "x") == Label(4));
  CHECK(lca_label(t, "v", "z") == Label(0));
  CHECK(lca_label(t, "x", "x") == Label(0));
  CHECK_THROWS_AS(lca_label(t, "w", "nope"), std::invalid_argument);

  // the documented two-cluster shape: {a,d} at 3 inside a root at 5
  auto fig = tree(node(Label(5), {node(Label(3), {leaf("a"), leaf("d")}),
                                  leaf("b"), leaf("c"), leaf("e"), leaf("f"),
                                  leaf("g")}));
  CHECK(validate(fig).empty());
  CHECK(lca_label(fig, "a", "d") == Label(3));
  CHECK(lca_label(fig, "a", "b") == Label(5));
}

TEST_CASE("tree_satisfies on strict, weak and order constraints") {
  auto t = test::fixture_consistent5_tree();
  CHECK(tree_satisfies(t, StrictConstraint{Edge("w", "x"), Edge("x", "v")}));
  CHECK_FALSE(
      tree_satisfies(t, StrictConstraint{Edge("x", "v"), Edge("w", "x")}));
  CHECK(tree_satisfies(t, StrictConstraint{Edge("v", "z"), Edge("w", "y")}));
  CHECK(tree_satisfies(t, WeakConstraint{Edge("w", "x"), Edge("x", "y")}));
  CHECK_FALSE(tree_satisfies(t, WeakConstraint{Edge("w", "v"), Edge("w", "x")}));

  auto ordered = tree(node(Label(1), {leaf("a"), leaf("b"), leaf("c")},
                           {{0, 1}, {1, 2}}));
  CHECK(tree_satisfies(ordered, OrderConstraint{"a", "b"}));
  CHECK(tree_satisfies(ordered, OrderConstraint{"a", "c"}));  // transitive
  CHECK_FALSE(tree_satisfies(ordered, OrderConstraint{"b", "a"}));
  CHECK_FALSE(tree_satisfies(ordered, OrderConstraint{"a", "a"}));

  // coincident points can never be strictly ordered
  auto coincident = tree(node(Label(0), {leaf("a"), leaf("b")}));
  CHECK_FALSE(tree_satisfies(coincident, OrderConstraint{"a", "b"}));
}

TEST_CASE("clusters_of enumerates exactly the mutually-close subsets") {
  SUBCASE("three points at two scales") {
    Valuation v{{"p", parse_om_point("0")},
                {"q", parse_om_point("d")},
                {"r", parse_om_point("1")}};
    auto clusters = clusters_of(v);
    std::vector<std::vector<std::string>> expected = {
        {"p"}, {"q"}, {"r"}, {"p", "q"}, {"p", "q", "r"}};
    CHECK(clusters == expected);
  }
  SUBCASE("singleton") {
    Valuation v{{"p", parse_om_point("0")}};
    CHECK(clusters_of(v) == std::vector<std::vector<std::string>>{{"p"}});
  }
  SUBCASE("two separated points") {
    Valuation v{{"p", parse_om_point("0")}, {"q", parse_om_point("1")}};
    std::vector<std::vector<std::string>> expected = {{"p"}, {"q"}, {"p", "q"}};
    CHECK(clusters_of(v) == expected);
  }
  SUBCASE("coincident symbols stay together") {
    Valuation v{{"p", parse_om_point("0")},
                {"q", parse_om_point("0")},
                {"r", parse_om_point("1")}};
    std::vector<std::vector<std::string>> expected = {
        {"r"}, {"p", "q"}, {"p", "q", "r"}};
    CHECK(clusters_of(v) == expected);
  }
}

TEST_CASE("instantiate produces a checked instantiation") {
  SUBCASE("single leaf") {
    auto v = instantiate(ClusterTree::leaf("x"));
    REQUIRE(v.size() == 1);
    CHECK(v.at("x") == OmPoint{});
  }
  SUBCASE("label-0 root maps everything to one point") {
    auto v = instantiate(tree(node(Label(0), {leaf("a"), leaf("b")})));
    CHECK(v.at("a") == v.at("b"));
  }
  SUBCASE("golden five-symbol witness") {
    auto t = test::fixture_consistent5_tree();
    auto v = instantiate(t);
    CHECK(check_instantiation(v, t));
    Om wx = od(v.at("w"), v.at("x"));
    CHECK(wx == od(v.at("x"), v.at("y")));
    CHECK(wx == od(v.at("w"), v.at("y")));
    CHECK(much_less(wx, od(v.at("w"), v.at("v"))));
    CHECK(od(v.at("v"), v.at("z")) == Om::zero());
  }
  SUBCASE("every enumerated small tree instantiates") {
    for (int n = 1; n <= 4; ++n) {
      std::vector<std::string> syms;
      for (int i = 0; i < n; ++i) syms.push_back(std::string(1, char('a' + i)));
      for (const ClusterTree& t : enum_trees(syms)) {
        CAPTURE(tree_to_json(t, false));
        CHECK(check_instantiation(instantiate(t), t));
      }
    }
  }
}

TEST_CASE("check_instantiation rejects wrong valuations") {
  auto t = test::fixture_consistent5_tree();
  SUBCASE("everything on one point") {
    Valuation v;
    for (const auto& s : symbols_of(t)) v[s] = OmPoint{};
    CHECK_FALSE(check_instantiation(v, t));
  }
  SUBCASE("scales swapped between the two labels") {
    // {w,x,y} spread at d^1 but separated from {v,z} at d^2: inverted order
    Valuation v;
    v["v"] = parse_om_point("d^2");
    v["z"] = parse_om_point("d^2");
    v["w"] = parse_om_point("0");
    v["x"] = parse_om_point("d");
    v["y"] = parse_om_point("2*d");
    CHECK_FALSE(check_instantiation(v, t));
  }
}

TEST_CASE("lca scale law: od of a pair equals the scale of its lca label") {
  std::vector<std::string> syms{"a", "b", "c", "d", "e"};
  int trees_checked = 0;
  for (const ClusterTree& t : enum_trees(syms)) {
    if (++trees_checked > 400) break;  // a representative prefix is plenty
    Valuation v = instantiate(t);
    auto names = symbols_of(t);
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = i + 1; j < names.size(); ++j)
        for (std::size_t k = 0; k < names.size(); ++k)
          for (std::size_t l = k + 1; l < names.size(); ++l) {
            Label lij = lca_label(t, names[i], names[j]);
            Label lkl = lca_label(t, names[k], names[l]);
            Om dij = od(v.at(names[i]), v.at(names[j]));
            Om dkl = od(v.at(names[k]), v.at(names[l]));
            if (lij == lkl) CHECK(dij == dkl);
            if (lij < lkl) CHECK(much_less(dij, dkl));
          }
  }
}

TEST_CASE("tree verdicts agree with direct evaluation of the witness") {
  std::mt19937 rng(7101);
  std::vector<std::string> syms{"a", "b", "c", "d"};
  auto trees = enum_trees(syms);
  std::uniform_int_distribution<int> pick_tree(0, static_cast<int>(trees.size()) - 1);
  std::uniform_int_distribution<int> pick_sym(0, 3);
  for (int i = 0; i < 2000; ++i) {
    const ClusterTree& t = trees[pick_tree(rng)];
    Valuation v = instantiate(t);
    Edge e1(syms[pick_sym(rng)], syms[pick_sym(rng)]);
    Edge e2(syms[pick_sym(rng)], syms[pick_sym(rng)]);
    bool tree_strict = tree_satisfies(t, StrictConstraint{e1, e2});
    bool direct_strict = much_less(od(v.at(e1.a), v.at(e1.b)),
                                   od(v.at(e2.a), v.at(e2.b)));
    CHECK(tree_strict == direct_strict);
    bool tree_weak = tree_satisfies(t, WeakConstraint{e1, e2});
    bool direct_weak = much_less_eq(od(v.at(e1.a), v.at(e1.b)),
                                    od(v.at(e2.a), v.at(e2.b)));
    CHECK(tree_weak == direct_weak);
  }
}

TEST_CASE("cluster images of the witness are exactly the node images") {
  std::vector<std::string> syms{"a", "b", "c", "d"};
  for (const ClusterTree& t : enum_trees(syms)) {
    Valuation v = instantiate(t);
    auto clusters = clusters_of(v);
    // gather node images as symbol sets (point-level: merge coincident)
    std::vector<std::vector<std::string>> images;
    std::function<std::vector<std::string>(const TreeNode&)> walk =
        [&](const TreeNode& nd) {
          std::vector<std::string> mine;
          if (nd.is_leaf()) {
            mine.push_back(nd.symbol);
          } else {
            for (const TreeNode& ch : nd.children) {
              auto sub = walk(ch);
              mine.insert(mine.end(), sub.begin(), sub.end());
            }
          }
          std::sort(mine.begin(), mine.end());
          images.push_back(mine);
          return mine;
        };
    walk(*t.root);
    // expand each image to its coincidence closure under the valuation
    auto closure = [&](std::vector<std::string> set) {
      std::vector<std::string> out;
      for (const auto& [sym, p] : v)
        for (const auto& member : set)
          if (p == v.at(member)) {
            out.push_back(sym);
            break;
          }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    };
    std::set<std::vector<std::string>> image_set;
    for (auto& img : images) image_set.insert(closure(img));
    std::set<std::vector<std::string>> cluster_set(clusters.begin(),
                                                   clusters.end());
    CHECK(image_set == cluster_set);
  }
}

TEST_CASE("witness round-trip recovers the tree up to relabeling") {
  for (int n = 2; n <= 5; ++n) {
    std::vector<std::string> syms;
    for (int i = 0; i < n; ++i) syms.push_back(std::string(1, char('a' + i)));
    int checked = 0;
    for (const ClusterTree& t : enum_trees(syms)) {
      if (++checked > 300) break;
      ClusterTree rebuilt = tree_from_valuation(instantiate(t));
      CAPTURE(tree_to_json(t, false));
      CAPTURE(tree_to_json(rebuilt, false));
      CHECK(isomorphic(rebuilt, t));
    }
  }
}

TEST_CASE("instantiate_ordered realizes every order arc") {
  SUBCASE("two ordered leaves") {
    auto t = tree(node(Label(1), {leaf("a"), leaf("b")}, {{0, 1}}));
    auto v = instantiate_ordered(t);
    CHECK(point_cmp(v.at("a"), v.at("b")) < 0);
    CHECK(check_instantiation(v, t));
  }
  SUBCASE("chain of three") {
    auto t = tree(node(Label(1), {leaf("a"), leaf("b"), leaf("c")},
                       {{0, 1}, {1, 2}}));
    auto v = instantiate_ordered(t);
    CHECK(point_cmp(v.at("a"), v.at("b")) < 0);
    CHECK(point_cmp(v.at("b"), v.at("c")) < 0);
  }
  SUBCASE("arcs across subtrees order every pair of their leaves") {
    auto t = tree(node(Label(2),
                       {node(Label(1), {leaf("a"), leaf("b")}),
                        node(Label(1), {leaf("c"), leaf("d")})},
                       {{1, 0}}));
    auto v = instantiate_ordered(t);
    for (const char* lo : {"c", "d"})
      for (const char* hi : {"a", "b"})
        CHECK(point_cmp(v.at(lo), v.at(hi)) < 0);
    CHECK(check_instantiation(v, t));
  }
  SUBCASE("no arcs keeps the plain contract") {
    auto t = test::fixture_consistent5_tree();
    CHECK(check_instantiation(instantiate_ordered(t), t));
  }
}

TEST_CASE("instantiate_euclidean separates scales by the requested ratio") {
  SUBCASE("single leaf at the origin") {
    auto v = instantiate_euclidean(ClusterTree::leaf("x"), Rat(5), 2);
    REQUIRE(v.size() == 1);
    CHECK(v.at("x") == std::vector<Rat>{Rat(0), Rat(0)});
  }
  SUBCASE("two-level tree, every cross-level ratio above B") {
    auto t = tree(node(Label(2), {node(Label(1), {leaf("a"), leaf("b")}),
                                  leaf("c")}));
    auto v = instantiate_euclidean(t, Rat(5), 2);
    std::vector<StrictConstraint> cs{{Edge("a", "b"), Edge("a", "c")},
                                     {Edge("a", "b"), Edge("b", "c")}};
    CHECK(euclid_check(v, cs, Rat(5)));
  }
  SUBCASE("golden five-symbol tree at B = 6 in one dimension") {
    auto t = test::fixture_consistent5_tree();
    auto v = instantiate_euclidean(t, Rat(6), 1);
    CHECK(euclid_check(v, test::fixture_consistent5().strict(), Rat(6)));
  }
}

TEST_CASE("canonicalize: label order and zero are preserved, values forgotten") {
  auto a = tree(node(Label(7), {node(Label(3), {leaf("a"), leaf("b")}),
                                leaf("c")}));
  auto b = tree(node(Label(9), {leaf("c"),
                                node(Label(1, 2), {leaf("b"), leaf("a")})}));
  CHECK(isomorphic(a, b));
  auto zero_bottom = tree(node(Label(7), {node(Label(0), {leaf("a"), leaf("b")}),
                                          leaf("c")}));
  CHECK_FALSE(isomorphic(a, zero_bottom));
}

TEST_CASE("json serialization round-trips") {
  auto t = tree(node(Label(5), {node(Label(1, 2), {leaf("a"), leaf("b")}),
                                node(Label(4), {leaf("c"), leaf("d")}, {}),
                                leaf("e")},
                     {{0, 2}, {1, 2}}));
  ClusterTree back = tree_from_json(tree_to_json(t));
  CHECK(tree_equal(t, back));
  CHECK(tree_equal(tree_from_json(tree_to_json(ClusterTree::null())),
                   ClusterTree::null()));
  // labels serialize as rational strings
  CHECK(tree_to_json(t).find("\"1/2\"") != std::string::npos);
}

TEST_CASE("json rejects malformed trees") {
  CHECK_THROWS_AS(tree_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(tree_from_json("{\"label\": \"1\"}"), std::invalid_argument);
  CHECK_THROWS_AS(tree_from_json("{\"symbol\": 3}"), std::invalid_argument);
  CHECK_THROWS_AS(tree_from_json("{\"symbol\": \"x\", \"extra\": 1}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      tree_from_json("{\"label\": \"x\", \"children\": [{\"symbol\": \"a\"}]}"),
      std::invalid_argument);
}

TEST_CASE("dot output shows labels in angle brackets and dashed order arcs") {
  auto t = tree(node(Label(1), {leaf("a"), leaf("b")}, {{0, 1}}));
  std::string dot = tree_to_dot(t);
  CHECK(dot.find("⟨1⟩") != std::string::npos);
  CHECK(dot.find("style=dashed") != std::string::npos);
  CHECK(dot.find("digraph") != std::string::npos);
}

TEST_SUITE_END();
