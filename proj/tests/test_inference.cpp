#include <doctest.h>

#include <random>

#include "omdist/inference.hpp"
#include "omdist/oracle.hpp"
#include "test_support.hpp"

using namespace omdist;

TEST_SUITE_BEGIN("inference");

TEST_CASE("negation swaps strictness and edge roles") {
  StrictConstraint c{Edge("a", "b"), Edge("c", "d")};
  WeakConstraint n = negate(c);
  CHECK(n.short_edge == Edge("c", "d"));
  CHECK(n.long_edge == Edge("a", "b"));
  CHECK(negate(n) == c);  // involution
  WeakConstraint w{Edge("a", "b"), Edge("c", "d")};
  StrictConstraint m = negate(w);
  CHECK(m.short_edge == Edge("c", "d"));
  CHECK(m.long_edge == Edge("a", "b"));
}

TEST_CASE("landmark chain: the much-closer relation composes") {
  // E: first tower, W: second, V: far-off cathedral, S: statue, C: hall.
  ConstraintSet s;
  s.add_strict("E", "W", "E", "V");
  s.add_strict("S", "E", "S", "W");
  s.add_strict("S", "C", "S", "W");
  CHECK(entails(s, Query(StrictConstraint{Edge("C", "E"), Edge("C", "V")})));
  // and the conclusion is not reversible
  CHECK_FALSE(entails(s, Query(StrictConstraint{Edge("C", "V"), Edge("C", "E")})));
}

TEST_CASE("saturated shorts refute the long") {
  // First three constraints of the golden inconsistent system entail that
  // the final edge cannot dominate: od(v,z) <= od(z,y) is a consequence.
  ConstraintSet s;
  s.add_strict("v", "w", "z", "y");
  s.add_strict("w", "x", "z", "y");
  s.add_strict("x", "y", "z", "y");
  CHECK(entails(s, Query(WeakConstraint{Edge("v", "z"), Edge("z", "y")})));
}

TEST_CASE("a system entails its own members") {
  ConstraintSet s = test::fixture_consistent5();
  for (const StrictConstraint& c : s.strict()) CHECK(entails(s, Query(c)));
}

TEST_CASE("queries may mention fresh symbols; they are unconstrained") {
  ConstraintSet s;
  s.add_strict("a", "b", "c", "d");
  CHECK_FALSE(entails(s, Query(StrictConstraint{Edge("a", "b"), Edge("p", "q")})));
  CHECK(entails(s, Query(WeakConstraint{Edge("p", "p"), Edge("a", "b")})));
}

TEST_CASE("entailment matches the oracle's every-witness check") {
  std::mt19937 rng(7401);
  std::uniform_int_distribution<int> sym(0, 3);
  std::vector<std::string> pool{"a", "b", "c", "d"};
  int consistent_seen = 0;
  for (int i = 0; i < 600; ++i) {
    ConstraintSet s = test::random_system(rng, 4, 3, 2, 0);
    Edge e1(pool[sym(rng)], pool[sym(rng)]);
    Edge e2(pool[sym(rng)], pool[sym(rng)]);
    for (const std::string& p : pool) s.add_symbol(p);
    if (!oracle_consistent(s)) continue;
    ++consistent_seen;

    // ground truth: every enumerated witness of s satisfies the query
    auto holds_everywhere = [&](auto query_constraint) {
      for (const ClusterTree& t : enum_trees(pool)) {
        bool admits = true;
        for (const StrictConstraint& c : s.strict())
          if (!tree_satisfies(t, c)) admits = false;
        for (const WeakConstraint& c : s.weak())
          if (admits && !tree_satisfies(t, c)) admits = false;
        if (admits && !tree_satisfies(t, query_constraint)) return false;
      }
      return true;
    };
    StrictConstraint qs{e1, e2};
    WeakConstraint qw{e1, e2};
    CHECK(entails(s, Query(qs)) == holds_everywhere(qs));
    CHECK(entails(s, Query(qw)) == holds_everywhere(qw));
  }
  CHECK(consistent_seen > 150);
}

TEST_CASE("a consistent system never entails both a claim and its negation") {
  std::mt19937 rng(7402);
  std::uniform_int_distribution<int> sym(0, 4);
  std::vector<std::string> pool{"a", "b", "c", "d", "e"};
  for (int i = 0; i < 400; ++i) {
    ConstraintSet s = test::random_system(rng, 5, 3, 2, 0);
    if (!solve_weak(s).consistent()) continue;
    StrictConstraint q{Edge(pool[sym(rng)], pool[sym(rng)]),
                       Edge(pool[sym(rng)], pool[sym(rng)])};
    bool forward = entails(s, Query(q));
    bool backward = entails(s, Query(negate(q)));
    bool both = forward && backward;
    CHECK_FALSE(both);
  }
}

TEST_CASE("entailment is monotone under consistent extension") {
  std::mt19937 rng(7403);
  std::uniform_int_distribution<int> sym(0, 3);
  std::vector<std::string> pool{"a", "b", "c", "d"};
  int verified = 0;
  for (int i = 0; i < 4000 && verified < 200; ++i) {
    ConstraintSet small = test::random_system(rng, 4, 2, 1, 0);
    ConstraintSet big = small;
    ConstraintSet extra = test::random_system(rng, 4, 2, 1, 0);
    for (const StrictConstraint& c : extra.strict())
      big.add_strict(c.short_edge.a, c.short_edge.b, c.long_edge.a,
                     c.long_edge.b);
    for (const WeakConstraint& c : extra.weak())
      big.add_weak(c.short_edge.a, c.short_edge.b, c.long_edge.a, c.long_edge.b);
    if (!solve_weak(big).consistent()) continue;
    // half the queries come straight from the smaller system, so entailed
    // premises are plentiful
    StrictConstraint q{Edge(pool[sym(rng)], pool[sym(rng)]),
                       Edge(pool[sym(rng)], pool[sym(rng)])};
    if (sym(rng) % 2 == 0 && small.strict_count() > 0)
      q = small.strict()[static_cast<std::size_t>(sym(rng)) %
                         small.strict_count()];
    if (!entails(small, Query(q))) continue;
    ++verified;
    CHECK(entails(big, Query(q)));
  }
  CHECK(verified >= 60);
}

TEST_CASE("equivalence") {
  ConstraintSet s = test::fixture_consistent5();
  CHECK(equivalent(s, s));

  // adding an entailed constraint changes nothing
  ConstraintSet bigger = s;
  bigger.add_strict("w", "x", "w", "v");  // lca(w,x)=4 < lca(w,v)=5 everywhere
  REQUIRE(entails(s, Query(StrictConstraint{Edge("w", "x"), Edge("w", "v")})));
  CHECK(equivalent(s, bigger));

  ConstraintSet empty;
  for (const std::string& sym : s.symbols()) empty.add_symbol(sym);
  CHECK_FALSE(equivalent(s, empty));

  ConstraintSet ordered;
  ordered.add_order("a", "b");
  CHECK_THROWS_AS(equivalent(ordered, ordered), std::invalid_argument);
}

TEST_CASE("strict-order entailment via reversal") {
  ConstraintSet s;
  s.add_order("a", "b");
  s.add_order("b", "c");
  CHECK(entails_order(s, OrderConstraint{"a", "c"}));
  CHECK_FALSE(entails_order(s, OrderConstraint{"c", "a"}));
  ConstraintSet free;
  free.add_symbol("a");
  free.add_symbol("b");
  CHECK_FALSE(entails_order(free, OrderConstraint{"a", "b"}));
}

TEST_SUITE_END();
