#include "omdist/parse.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace omdist {

namespace {

bool is_symbol_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Cursor over a single statement line.
struct LineScanner {
  const std::string& text;
  int line;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_space();
    return pos >= text.size();
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(line, static_cast<int>(pos) + 1, what);
  }
  void expect(char c) {
    skip_space();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool peek(char c) {
    skip_space();
    return pos < text.size() && text[pos] == c;
  }
  std::string symbol() {
    skip_space();
    if (pos >= text.size() || !is_symbol_start(text[pos])) fail("expected a symbol");
    std::size_t start = pos;
    while (pos < text.size() && is_symbol_char(text[pos])) ++pos;
    return text.substr(start, pos - start);
  }
};

Statement parse_statement(const std::string& body, int line, int column) {
  LineScanner s{body, line};
  std::string head = s.symbol();
  Statement st;
  st.line = line;
  st.column = column;
  if (head == "symbols") {
    st.kind = Statement::Kind::Symbols;
    s.expect('(');
    st.args.push_back(s.symbol());
    while (s.peek(',')) {
      s.expect(',');
      st.args.push_back(s.symbol());
    }
    s.expect(')');
  } else if (head == "closer" || head == "leq") {
    st.kind = head == "closer" ? Statement::Kind::Closer : Statement::Kind::Leq;
    s.expect('(');
    st.args.push_back(s.symbol());
    s.expect(',');
    st.args.push_back(s.symbol());
    s.expect(';');
    st.args.push_back(s.symbol());
    s.expect(',');
    st.args.push_back(s.symbol());
    s.expect(')');
  } else if (head == "before") {
    st.kind = Statement::Kind::Before;
    s.expect('(');
    st.args.push_back(s.symbol());
    s.expect(',');
    st.args.push_back(s.symbol());
    s.expect(')');
  } else {
    throw ParseError(line, column, "unknown statement '" + head + "'");
  }
  if (!s.done()) s.fail("trailing input after statement");
  return st;
}

}  // namespace

ConstraintDocument parse_constraints(const std::string& text) {
  ConstraintDocument doc;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string body = raw;
    if (auto hash = body.find('#'); hash != std::string::npos)
      body.resize(hash);
    std::size_t first = body.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::size_t last = body.find_last_not_of(" \t\r");
    Statement st = parse_statement(body.substr(0, last + 1), line_no,
                                   static_cast<int>(first) + 1);
    if (std::find(doc.statements.begin(), doc.statements.end(), st) !=
        doc.statements.end()) {
      doc.warnings.push_back("line " + std::to_string(line_no) +
                             ": duplicate statement dropped");
      continue;
    }
    doc.statements.push_back(std::move(st));
  }
  return doc;
}

ConstraintSet ConstraintDocument::to_constraint_set() const {
  ConstraintSet set;
  for (const Statement& st : statements) {
    switch (st.kind) {
      case Statement::Kind::Symbols:
        for (const std::string& s : st.args) set.add_symbol(s);
        break;
      case Statement::Kind::Closer:
        set.add_strict(st.args[0], st.args[1], st.args[2], st.args[3]);
        break;
      case Statement::Kind::Leq:
        set.add_weak(st.args[0], st.args[1], st.args[2], st.args[3]);
        break;
      case Statement::Kind::Before:
        set.add_order(st.args[0], st.args[1]);
        break;
    }
  }
  return set;
}

std::string ConstraintDocument::print() const {
  std::ostringstream os;
  for (const Statement& st : statements) {
    switch (st.kind) {
      case Statement::Kind::Symbols: {
        os << "symbols(";
        for (std::size_t i = 0; i < st.args.size(); ++i)
          os << (i ? ", " : "") << st.args[i];
        os << ")";
        break;
      }
      case Statement::Kind::Closer:
      case Statement::Kind::Leq:
        os << (st.kind == Statement::Kind::Closer ? "closer(" : "leq(")
           << st.args[0] << "," << st.args[1] << " ; " << st.args[2] << ","
           << st.args[3] << ")";
        break;
      case Statement::Kind::Before:
        os << "before(" << st.args[0] << ", " << st.args[1] << ")";
        break;
    }
    os << "\n";
  }
  return os.str();
}

namespace {

// Recursive descent over the formula grammar. Quantifiers grab everything
// to their right, so they parse at the top expression level.
struct FormulaScanner {
  const std::string& text;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(1, static_cast<int>(pos) + 1, what);
  }
  bool eat(char c) {
    skip_space();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  std::string peek_word() {
    skip_space();
    std::size_t p = pos;
    if (p >= text.size() || !is_symbol_start(text[p])) return "";
    std::size_t start = p;
    while (p < text.size() && is_symbol_char(text[p])) ++p;
    return text.substr(start, p - start);
  }
  std::string word() {
    std::string w = peek_word();
    if (w.empty()) fail("expected a name");
    pos += w.size();
    return w;
  }

  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (true) {
      skip_space();
      if (pos < text.size() && text[pos] == '|') {
        ++pos;
        lhs = Formula::disjunction(std::move(lhs), parse_and());
      } else {
        return lhs;
      }
    }
  }

  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_unary();
    while (eat('&')) lhs = Formula::conjunction(std::move(lhs), parse_unary());
    return lhs;
  }

  FormulaPtr parse_quantifier(bool existential) {
    std::string var = word();
    expect('.');
    FormulaPtr body = parse_or();  // maximal scope
    return existential ? Formula::exists(std::move(var), std::move(body))
                       : Formula::forall(std::move(var), std::move(body));
  }

  FormulaPtr parse_unary() {
    skip_space();
    if (eat('!')) return Formula::negation(parse_unary());
    if (eat('(')) {
      FormulaPtr inner = parse_or();
      expect(')');
      return inner;
    }
    std::string w = peek_word();
    if (w == "exists" || w == "forall") {
      pos += w.size();
      return parse_quantifier(w == "exists");
    }
    if (w == "much_closer") {
      pos += w.size();
      expect('(');
      std::string a = word();
      expect(',');
      std::string b = word();
      expect(',');
      std::string c = word();
      expect(',');
      std::string d = word();
      expect(')');
      return Formula::much_closer(std::move(a), std::move(b), std::move(c),
                                  std::move(d));
    }
    if (w.empty()) fail("expected a formula");
    pos += w.size();
    expect('=');
    std::string rhs = word();
    return Formula::eq(std::move(w), std::move(rhs));
  }

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    skip_space();
    if (pos != text.size()) fail("trailing input after formula");
    return f;
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  FormulaScanner s{text};
  return s.parse();
}

}  // namespace omdist
