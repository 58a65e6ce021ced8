#pragma once

// Shared between the reference engine (solver.cpp) and the union-find
// engine (solver_fast.cpp). Not installed.

#include <string>
#include <utility>
#include <vector>

#include "omdist/constraints.hpp"

namespace omdist::internal {

// A constraint over symbol ids; edges normalized so sa <= sb, la <= lb.
struct IdConstraint {
  int sa, sb, la, lb;
};

struct Compiled {
  std::vector<std::string> names;  // sorted, so id order = name order
  std::vector<IdConstraint> strict, weak;
  std::vector<std::pair<int, int>> order;
};

Compiled compile(const ConstraintSet& system);

// Tarjan, iterative. Fills *count_out and returns the component id of each
// vertex.
std::vector<int> scc_components(const std::vector<std::vector<int>>& adj,
                                int* count_out);

// True when the arc list (over vertices 0..n-1) has a cycle; self-loops
// count as cycles.
bool digraph_has_cycle(int n, const std::vector<std::pair<int, int>>& arcs);

}  // namespace omdist::internal
