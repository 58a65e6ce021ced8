#include "omdist/formula.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace omdist {

namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

FormulaPtr Formula::much_closer(std::string w, std::string x, std::string y,
                                std::string z) {
  Formula f;
  f.kind = Kind::MuchCloser;
  f.atoms = {std::move(w), std::move(x), std::move(y), std::move(z)};
  return make(std::move(f));
}

FormulaPtr Formula::eq(std::string x, std::string y) {
  Formula f;
  f.kind = Kind::Eq;
  f.atoms = {std::move(x), std::move(y), "", ""};
  return make(std::move(f));
}

FormulaPtr Formula::negation(FormulaPtr a) {
  Formula f;
  f.kind = Kind::Not;
  f.left = std::move(a);
  return make(std::move(f));
}

FormulaPtr Formula::conjunction(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = Kind::And;
  f.left = std::move(a);
  f.right = std::move(b);
  return make(std::move(f));
}

FormulaPtr Formula::disjunction(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = Kind::Or;
  f.left = std::move(a);
  f.right = std::move(b);
  return make(std::move(f));
}

FormulaPtr Formula::exists(std::string var, FormulaPtr body) {
  Formula f;
  f.kind = Kind::Exists;
  f.var = std::move(var);
  f.left = std::move(body);
  return make(std::move(f));
}

FormulaPtr Formula::forall(std::string var, FormulaPtr body) {
  Formula f;
  f.kind = Kind::Forall;
  f.var = std::move(var);
  f.left = std::move(body);
  return make(std::move(f));
}

namespace {

void collect_free(const FormulaPtr& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::MuchCloser:
      for (int i = 0; i < 4; ++i)
        if (!bound.count(f->atoms[i])) out.insert(f->atoms[i]);
      return;
    case Formula::Kind::Eq:
      for (int i = 0; i < 2; ++i)
        if (!bound.count(f->atoms[i])) out.insert(f->atoms[i]);
      return;
    case Formula::Kind::Not:
      collect_free(f->left, bound, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_free(f->left, bound, out);
      collect_free(f->right, bound, out);
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool inserted = bound.insert(f->var).second;
      collect_free(f->left, bound, out);
      if (inserted) bound.erase(f->var);
      return;
    }
  }
}

}  // namespace

std::set<std::string> free_variables(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

int quantifier_count(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::MuchCloser:
    case Formula::Kind::Eq:
      return 0;
    case Formula::Kind::Not:
      return quantifier_count(f->left);
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return quantifier_count(f->left) + quantifier_count(f->right);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return 1 + quantifier_count(f->left);
  }
  return 0;
}

FormulaPtr normalize(const FormulaPtr& f) {
  std::set<std::string> used = free_variables(f);
  auto fresh = [&used](const std::string& base) {
    if (used.insert(base).second) return base;
    for (int i = 1;; ++i) {
      std::string candidate = base + "_" + std::to_string(i);
      if (used.insert(candidate).second) return candidate;
    }
  };

  std::function<FormulaPtr(const FormulaPtr&, std::map<std::string, std::string>&)>
      walk = [&](const FormulaPtr& node,
                 std::map<std::string, std::string>& env) -> FormulaPtr {
    auto rename = [&](const std::string& v) {
      auto it = env.find(v);
      return it == env.end() ? v : it->second;
    };
    switch (node->kind) {
      case Formula::Kind::MuchCloser:
        return Formula::much_closer(rename(node->atoms[0]), rename(node->atoms[1]),
                                    rename(node->atoms[2]), rename(node->atoms[3]));
      case Formula::Kind::Eq:
        return Formula::eq(rename(node->atoms[0]), rename(node->atoms[1]));
      case Formula::Kind::Not:
        return Formula::negation(walk(node->left, env));
      case Formula::Kind::And:
        return Formula::conjunction(walk(node->left, env), walk(node->right, env));
      case Formula::Kind::Or:
        // a | b  ==  !(!a & !b)
        return Formula::negation(
            Formula::conjunction(Formula::negation(walk(node->left, env)),
                                 Formula::negation(walk(node->right, env))));
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        std::string name = fresh(node->var);
        auto saved = env.find(node->var);
        std::string old;
        bool had = saved != env.end();
        if (had) old = saved->second;
        env[node->var] = name;
        FormulaPtr body = walk(node->left, env);
        if (had)
          env[node->var] = old;
        else
          env.erase(node->var);
        if (node->kind == Formula::Kind::Exists)
          return Formula::exists(name, std::move(body));
        // forall X.p  ==  !exists X.!p
        return Formula::negation(
            Formula::exists(name, Formula::negation(std::move(body))));
      }
    }
    throw std::logic_error("normalize: unknown formula kind");
  };
  std::map<std::string, std::string> env;
  return walk(f, env);
}

std::string to_string(const FormulaPtr& f) {
  std::ostringstream os;
  std::function<void(const FormulaPtr&, int)> emit = [&](const FormulaPtr& node,
                                                         int parent_level) {
    // levels: | = 0, & = 1, ! = 2, atoms/quantifier keyword = 3
    switch (node->kind) {
      case Formula::Kind::MuchCloser:
        os << "much_closer(" << node->atoms[0] << "," << node->atoms[1] << ","
           << node->atoms[2] << "," << node->atoms[3] << ")";
        return;
      case Formula::Kind::Eq:
        os << node->atoms[0] << " = " << node->atoms[1];
        return;
      case Formula::Kind::Not:
        os << "!";
        if (node->left->kind == Formula::Kind::And ||
            node->left->kind == Formula::Kind::Or ||
            node->left->kind == Formula::Kind::Eq) {
          os << "(";
          emit(node->left, 0);
          os << ")";
        } else {
          emit(node->left, 2);
        }
        return;
      case Formula::Kind::And: {
        bool paren = parent_level > 1;
        if (paren) os << "(";
        emit(node->left, 1);
        os << " & ";
        emit(node->right, 1);
        if (paren) os << ")";
        return;
      }
      case Formula::Kind::Or: {
        bool paren = parent_level > 0;
        if (paren) os << "(";
        emit(node->left, 0);
        os << " | ";
        emit(node->right, 0);
        if (paren) os << ")";
        return;
      }
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        bool paren = parent_level > 0;
        if (paren) os << "(";
        os << (node->kind == Formula::Kind::Exists ? "exists " : "forall ")
           << node->var << " . ";
        emit(node->left, 0);
        if (paren) os << ")";
        return;
      }
    }
  };
  emit(f, 0);
  return os.str();
}

}  // namespace omdist
