#pragma once

#include <array>
#include <memory>
#include <set>
#include <string>

namespace omdist {

// First-order formulas over point variables with equality and the single
// four-place predicate much_closer(w,x,y,z), read "w and x are much closer
// together than y and z". Formulas are immutable and shared.
class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
 public:
  enum class Kind { MuchCloser, Eq, Not, And, Or, Exists, Forall };

  Kind kind;
  std::array<std::string, 4> atoms;  // MuchCloser: all four; Eq: first two
  std::string var;                   // quantifiers
  FormulaPtr left, right;            // Not and quantifiers use left only

  static FormulaPtr much_closer(std::string w, std::string x, std::string y,
                                std::string z);
  static FormulaPtr eq(std::string x, std::string y);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr conjunction(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disjunction(FormulaPtr a, FormulaPtr b);
  static FormulaPtr exists(std::string var, FormulaPtr body);
  static FormulaPtr forall(std::string var, FormulaPtr body);
};

std::set<std::string> free_variables(const FormulaPtr& f);
int quantifier_count(const FormulaPtr& f);

// Logically equivalent form whose only connectives are Not, And and Exists,
// with every bound variable renamed apart from the free variables and from
// every other binder.
FormulaPtr normalize(const FormulaPtr& f);

std::string to_string(const FormulaPtr& f);

}  // namespace omdist
