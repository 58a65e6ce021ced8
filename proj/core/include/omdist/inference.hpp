#pragma once

#include <variant>

#include "omdist/constraints.hpp"
#include "omdist/solver.hpp"

namespace omdist {

// The negation of od(a,b) << od(c,d) is od(c,d) <= od(a,b): the strictness
// flips and the two edges swap roles. An involution.
WeakConstraint negate(const StrictConstraint& c);
StrictConstraint negate(const WeakConstraint& c);

using Query = std::variant<StrictConstraint, WeakConstraint>;

// system |= query, decided by refutation: add the negated query and test
// consistency. Symbols mentioned only by the query join the universe as
// unconstrained points. Order constraints in `system` stay in force.
bool entails(const ConstraintSet& system, const Query& query);

// Strict-order entailment only: true when system plus the reversed order
// constraint is inconsistent. The constraint language cannot express
// "after <= before", so entailment of a < b that holds merely weakly (a may
// equal b) is reported false.
bool entails_order(const ConstraintSet& system, const OrderConstraint& query);

// Mutual entailment of every strict and weak constraint. Both systems must
// be order-free.
bool equivalent(const ConstraintSet& a, const ConstraintSet& b);

}  // namespace omdist
