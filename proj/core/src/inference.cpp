#include "omdist/inference.hpp"

#include <stdexcept>

namespace omdist {

WeakConstraint negate(const StrictConstraint& c) {
  return WeakConstraint{c.long_edge, c.short_edge};
}

StrictConstraint negate(const WeakConstraint& c) {
  return StrictConstraint{c.long_edge, c.short_edge};
}

namespace {

ConstraintSet with_negated_query(const ConstraintSet& system, const Query& query) {
  ConstraintSet augmented = system;
  if (const auto* strict = std::get_if<StrictConstraint>(&query)) {
    WeakConstraint neg = negate(*strict);
    augmented.add_weak(neg.short_edge.a, neg.short_edge.b, neg.long_edge.a,
                       neg.long_edge.b);
  } else {
    StrictConstraint neg = negate(std::get<WeakConstraint>(query));
    augmented.add_strict(neg.short_edge.a, neg.short_edge.b, neg.long_edge.a,
                         neg.long_edge.b);
  }
  return augmented;
}

}  // namespace

bool entails(const ConstraintSet& system, const Query& query) {
  return !solve_mixed(with_negated_query(system, query)).consistent();
}

bool entails_order(const ConstraintSet& system, const OrderConstraint& query) {
  ConstraintSet augmented = system;
  augmented.add_order(query.after, query.before);
  return !solve_mixed(augmented).consistent();
}

bool equivalent(const ConstraintSet& a, const ConstraintSet& b) {
  if (a.order_count() || b.order_count())
    throw std::invalid_argument("equivalent: order-free systems only");
  auto covers = [](const ConstraintSet& stronger, const ConstraintSet& weaker) {
    for (const StrictConstraint& c : weaker.strict())
      if (!entails(stronger, Query(c))) return false;
    for (const WeakConstraint& c : weaker.weak())
      if (!entails(stronger, Query(c))) return false;
    return true;
  };
  return covers(a, b) && covers(b, a);
}

}  // namespace omdist
