#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "omdist/cluster_tree.hpp"
#include "omdist/fo_decide.hpp"
#include "omdist/inference.hpp"
#include "omdist/oracle.hpp"
#include "omdist/parse.hpp"
#include "omdist/solver.hpp"

namespace omdist::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ConstraintSet load_system(const std::string& path, std::ostream& err) {
  ConstraintDocument doc = parse_constraints(read_file(path));
  for (const std::string& w : doc.warnings) err << path << ": " << w << "\n";
  return doc.to_constraint_set();
}

// Fast engine for plain strict systems, reference engine otherwise (or on
// request).
SolveResult dispatch_solve(const ConstraintSet& s, bool naive) {
  if (s.weak_count() == 0 && s.order_count() == 0)
    return naive ? solve(s) : solve_fast(s);
  return solve_mixed(s);
}

void print_tree(const ClusterTree& tree, const std::string& format,
                std::ostream& out) {
  if (format == "json") {
    // indentation grows with depth, so pretty output is quadratic on deep
    // trees; stay compact beyond everyday sizes
    out << tree_to_json(tree, node_count(tree) <= 512) << "\n";
  } else if (format == "dot") {
    out << tree_to_dot(tree);
  } else {
    out << tree_to_text(tree);
  }
}

std::string approx12(const Rat& q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", mpq_get_d(q.get_mpq_t()));
  return buf;
}

int cmd_solve(const std::string& file, const std::string& format, bool naive,
              const std::string& finite_b, bool oracle, std::ostream& out,
              std::ostream& err) {
  ConstraintSet s = load_system(file, err);
  Rat b;
  if (!finite_b.empty()) {
    auto parsed = rat_from_string(finite_b);
    if (!parsed) throw UsageError("--finite-B: malformed rational");
    b = *parsed;
    if (!(b > Rat(static_cast<long>(s.symbol_count()))))
      throw UsageError("--finite-B: B must exceed the symbol count (" +
                       std::to_string(s.symbol_count()) + ")");
    if (s.weak_count() || s.order_count())
      throw UsageError("--finite-B: strict constraints only");
  }
  SolveResult r = dispatch_solve(s, naive);
  if (oracle) {
    bool oracle_verdict = oracle_consistent(s);
    if (oracle_verdict != r.consistent()) {
      err << "oracle disagrees with the solver\n";
      return kUsage;
    }
    err << "oracle agrees\n";
  }
  if (!r.consistent()) {
    out << "inconsistent\n";
    return kNegative;
  }
  print_tree(*r.tree, format, out);
  if (!finite_b.empty()) {
    EuclideanValuation v = instantiate_euclidean(*r.tree, b, 2);
    if (!euclid_check(v, s.strict(), b)) {
      err << "internal error: witness fails the ratio check\n";
      return kUsage;
    }
    out << "witness (ratio " << rat_to_string(b) << ", 2 dimensions):\n";
    for (const auto& [sym, coords] : v) {
      out << "  " << sym << " = (";
      for (std::size_t i = 0; i < coords.size(); ++i)
        out << (i ? ", " : "") << rat_to_string(coords[i]);
      out << ")\n";
    }
  }
  return kOk;
}

int cmd_labels(const std::string& file, int max_scales, std::ostream& out,
               std::ostream& err) {
  ConstraintSet s = load_system(file, err);
  if (s.weak_count() || s.order_count())
    throw UsageError("labels: strict constraints only");
  auto n = num_labels(s);
  if (!n) {
    out << "inconsistent\n";
    return kNegative;
  }
  out << *n << "\n";
  if (max_scales >= 0 && *n > max_scales) {
    out << "not satisfiable with " << max_scales << " scale(s)\n";
    return kNegative;
  }
  if (max_scales >= 0)
    out << "satisfiable with " << max_scales << " scale(s)\n";
  return kOk;
}

int cmd_entail(const std::string& file, const std::string& query,
               std::ostream& out, std::ostream& err) {
  ConstraintSet s = load_system(file, err);
  ConstraintDocument qdoc = parse_constraints(query);
  if (qdoc.statements.size() != 1)
    throw UsageError("--query: exactly one statement expected");
  const Statement& st = qdoc.statements[0];
  bool verdict;
  switch (st.kind) {
    case Statement::Kind::Closer:
      verdict = entails(
          s, Query(StrictConstraint{Edge(st.args[0], st.args[1]),
                                    Edge(st.args[2], st.args[3])}));
      break;
    case Statement::Kind::Leq:
      verdict = entails(s, Query(WeakConstraint{Edge(st.args[0], st.args[1]),
                                                Edge(st.args[2], st.args[3])}));
      break;
    case Statement::Kind::Before:
      err << "note: strict-order entailment only (a < b entailed weakly is "
             "reported false)\n";
      verdict = entails_order(s, OrderConstraint{st.args[0], st.args[1]});
      break;
    default:
      throw UsageError("--query: expected closer, leq or before");
  }
  out << (verdict ? "entailed" : "not entailed") << "\n";
  return verdict ? kOk : kNegative;
}

int cmd_equiv(const std::string& file1, const std::string& file2,
              std::ostream& out, std::ostream& err) {
  ConstraintSet a = load_system(file1, err);
  ConstraintSet b = load_system(file2, err);
  bool verdict = equivalent(a, b);
  out << (verdict ? "equivalent" : "not equivalent") << "\n";
  return verdict ? kOk : kNegative;
}

int cmd_decide(const std::string& formula_text, const std::string& tree_file,
               int max_depth, std::ostream& out, std::ostream& err) {
  FormulaPtr phi = parse_formula(formula_text);
  int depth = quantifier_count(phi);
  if (depth > max_depth)
    throw UsageError("formula has " + std::to_string(depth) +
                     " quantifiers; the search is factorial, pass --max-depth " +
                     std::to_string(depth) + " to run it anyway");
  DecideStats stats;
  bool verdict;
  if (tree_file.empty()) {
    verdict = decide_sentence(phi, &stats);
  } else {
    ClusterTree tree = tree_from_json(read_file(tree_file));
    auto violations = validate(tree);
    if (!violations.empty())
      throw UsageError(tree_file + ": " + violations.front());
    verdict = decide(tree, phi, &stats);
  }
  err << "trees generated: " << stats.trees_generated << "\n";
  out << (verdict ? "true" : "false") << "\n";
  return verdict ? kOk : kNegative;
}

int cmd_instantiate(const std::string& file, bool symbolic,
                    const std::vector<std::string>& euclidean, bool approx,
                    bool naive, std::ostream& out, std::ostream& err) {
  ConstraintSet s = load_system(file, err);
  SolveResult r = dispatch_solve(s, naive);
  if (!r.consistent()) {
    out << "inconsistent\n";
    return kNegative;
  }
  if (symbolic && !euclidean.empty())
    throw UsageError("--symbolic and --euclidean are mutually exclusive");
  if (!euclidean.empty()) {
    auto b = rat_from_string(euclidean[0]);
    if (!b || !(*b > 1)) throw UsageError("--euclidean: B must be > 1");
    int dim = 0;
    try {
      dim = std::stoi(euclidean[1]);
    } catch (...) {
      throw UsageError("--euclidean: malformed dimension");
    }
    if (dim < 1) throw UsageError("--euclidean: dimension must be >= 1");
    EuclideanValuation v = instantiate_euclidean(*r.tree, *b, dim);
    for (const auto& [sym, coords] : v) {
      out << sym << " = (";
      for (std::size_t i = 0; i < coords.size(); ++i)
        out << (i ? ", " : "") << rat_to_string(coords[i]);
      out << ")";
      if (approx) {
        out << "  # approx (";
        for (std::size_t i = 0; i < coords.size(); ++i)
          out << (i ? ", " : "") << approx12(coords[i]);
        out << "), not authoritative";
      }
      out << "\n";
    }
    return kOk;
  }
  bool ordered = s.order_count() > 0;
  Valuation v = ordered ? instantiate_ordered(*r.tree) : instantiate(*r.tree);
  for (const auto& [sym, point] : v) out << sym << " = " << to_string(point) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"order-of-magnitude distance constraint solver"};
  app.require_subcommand(1);

  std::string file, file2, format = "text", finite_b, query, formula, tree_file;
  bool naive = false, oracle = false, approx = false;
  int max_scales = -1, max_depth = 6;
  std::vector<std::string> euclidean;
  bool symbolic = false;

  CLI::App* solve_cmd =
      app.add_subcommand("solve", "decide a constraint file; print a witness tree");
  solve_cmd->add_option("file", file)->required();
  solve_cmd->add_option("--format", format)
      ->check(CLI::IsMember({"text", "json", "dot"}));
  solve_cmd->add_flag("--naive", naive, "use the reference engine");
  solve_cmd->add_option("--finite-B", finite_b,
                        "also emit a Euclidean witness for ratio B (needs B > n)");
  solve_cmd->add_flag("--oracle", oracle, "cross-check against brute force");

  CLI::App* labels_cmd =
      app.add_subcommand("labels", "count the distinct non-zero scales needed");
  labels_cmd->add_option("file", file)->required();
  labels_cmd->add_option("--max-scales", max_scales,
                         "check satisfiability with this many scales");

  CLI::App* entail_cmd = app.add_subcommand("entail", "does the file entail the query");
  entail_cmd->add_option("file", file)->required();
  entail_cmd->add_option("--query", query)->required();

  CLI::App* equiv_cmd =
      app.add_subcommand("equiv", "are two constraint files equivalent");
  equiv_cmd->add_option("file1", file)->required();
  equiv_cmd->add_option("file2", file2)->required();

  CLI::App* decide_cmd =
      app.add_subcommand("decide", "decide a first-order formula");
  decide_cmd->add_option("formula", formula)->required();
  decide_cmd->add_option("--tree", tree_file, "tree JSON file for the free variables");
  decide_cmd->add_option("--max-depth", max_depth, "quantifier depth guard");

  CLI::App* inst_cmd =
      app.add_subcommand("instantiate", "print a concrete point assignment");
  inst_cmd->add_option("file", file)->required();
  inst_cmd->add_flag("--symbolic", symbolic, "polynomial points (default)");
  inst_cmd->add_option("--euclidean", euclidean, "ratio B and dimension")
      ->expected(2);
  inst_cmd->add_flag("--approx", approx, "add a decimal rendering");
  inst_cmd->add_flag("--naive", naive, "use the reference engine");

  std::vector<const char*> argv{"omdist"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (solve_cmd->parsed())
      return cmd_solve(file, format, naive, finite_b, oracle, out, err);
    if (labels_cmd->parsed()) return cmd_labels(file, max_scales, out, err);
    if (entail_cmd->parsed()) return cmd_entail(file, query, out, err);
    if (equiv_cmd->parsed()) return cmd_equiv(file, file2, out, err);
    if (decide_cmd->parsed())
      return cmd_decide(formula, tree_file, max_depth, out, err);
    if (inst_cmd->parsed())
      return cmd_instantiate(file, symbolic, euclidean, approx, naive, out, err);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kUsage;
  }
  err << "no subcommand\n";
  return kUsage;
}

}  // namespace omdist::cli
