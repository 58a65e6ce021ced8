#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "omdist/constraints.hpp"
#include "omdist/formula.hpp"

namespace omdist {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line, column;
};

// One parsed statement of the constraint language.
struct Statement {
  enum class Kind { Symbols, Closer, Leq, Before };
  Kind kind;
  std::vector<std::string> args;
  int line = 0, column = 0;

  friend bool operator==(const Statement& a, const Statement& b) {
    return a.kind == b.kind && a.args == b.args;
  }
};

// A constraint file. Line-oriented; '#' starts a comment; symbols match
// [A-Za-z_][A-Za-z0-9_]*. Statements:
//   symbols(a, b, c)      declare symbols (constraints auto-declare theirs)
//   closer(a,b ; c,d)     od(a,b) strictly below od(c,d)
//   leq(a,b ; c,d)        od(a,b) at most od(c,d)
//   before(a, b)          a precedes b on the point line
struct ConstraintDocument {
  std::vector<Statement> statements;
  std::vector<std::string> warnings;  // e.g. dropped duplicate statements

  ConstraintSet to_constraint_set() const;
  std::string print() const;  // parse(print(doc)) == doc

  friend bool operator==(const ConstraintDocument& a,
                         const ConstraintDocument& b) {
    return a.statements == b.statements;
  }
};

// Throws ParseError with position on malformed input. Duplicate statements
// are dropped with a warning.
ConstraintDocument parse_constraints(const std::string& text);

// Formula grammar: much_closer(W,X,Y,Z) | X = Y | !p | p & q | p | q |
// exists X . p | forall X . p | (p). Precedence ! > & > |; a quantifier's
// scope extends maximally to the right.
FormulaPtr parse_formula(const std::string& text);

}  // namespace omdist
