// Batch command-line front end. Exit codes: 0 proved/feasible/valid,
// 1 disproved/infeasible/invalid, 2 budget exhausted or otherwise unknown,
// 64 usage errors, 65 input errors. Results go to stdout, diagnostics to
// stderr, and identical invocations produce byte-identical output.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fop/eval.hpp"
#include "fop/ground.hpp"
#include "fop/lifted.hpp"
#include "fop/milp.hpp"
#include "fop/normal.hpp"
#include "fop/parser.hpp"

using namespace fop;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

ProblemFile load_problem(const std::string& path) {
  return parse_problem(read_file(path), path);
}

FormulaPtr require_sentence(const ProblemFile& p, const std::string& path) {
  if (!p.sentence) throw std::runtime_error("'" + path + "' declares no sentence");
  return p.sentence;
}

// Shared search budgets; negative means "use the engine default".
struct Budgets {
  int depth = -1;
  int cut_budget = -1;
  long long max_subproblems = -1;
  long long pool_cap = -1;
};

void add_budget_flags(CLI::App* cmd, Budgets& b) {
  cmd->add_option("--depth", b.depth, "Herbrand instantiation depth limit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cut-budget", b.cut_budget, "maximum number of cutting planes")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--pool-cap", b.pool_cap, "maximum ground instances per clause")
      ->check(CLI::PositiveNumber);
}

RefuteOptions refute_options(const Budgets& b) {
  RefuteOptions o;
  if (b.depth >= 0) o.max_depth = b.depth;
  if (b.cut_budget >= 0) o.cut_budget = b.cut_budget;
  if (b.pool_cap >= 0) o.pool_cap = static_cast<unsigned long long>(b.pool_cap);
  return o;
}

void emit_trace(const std::string& path, const ProofTrace& t) {
  if (!path.empty()) write_file(path, trace_to_json(t));
}

// PROVED when the refutation closed, DISPROVED on an explicit countermodel,
// UNKNOWN when a budget ran out first.
int report_proof(const EntailResult& r, const std::string& trace_out) {
  switch (r.status) {
    case MilpStatus::Infeasible:
      emit_trace(trace_out, r.trace);
      std::cout << "PROVED\n";
      return 0;
    case MilpStatus::Feasible:
      if (!trace_out.empty()) std::cerr << "no trace emitted: not proved\n";
      std::cout << "DISPROVED\n";
      return 1;
    default:
      if (!trace_out.empty()) std::cerr << "no trace emitted: not proved\n";
      std::cout << "UNKNOWN\n";
      return 2;
  }
}

int cmd_parse(const std::string& file) {
  std::cout << print_problem(load_problem(file));
  return 0;
}

int cmd_normalize(const std::string& file, bool want_min, bool want_reduced) {
  auto p = load_problem(file);
  auto s = require_sentence(p, file);
  auto mn = to_min_normal(s, p.symbols);

  ProblemFile decls = p;  // keeps objects and function tables printable
  decls.sentence = nullptr;
  decls.query = nullptr;
  decls.threshold.reset();

  std::ostringstream os;
  if (want_min) {
    decls.symbols = mn.symbols;
    os << print_problem(decls);
    os << "sentence\n";
    for (size_t i = 0; i < mn.superclauses.size(); ++i) {
      os << "  # superclause " << i + 1 << " of " << mn.superclauses.size() << "\n";
      os << (i ? "^ " : "  ") << "(" << superclause_str(mn.superclauses[i]) << ")\n";
    }
    os << ";\n";
  } else {
    (void)want_reduced;
    auto rs = to_reduced_normal(mn);
    decls.symbols = rs.symbols;
    os << print_problem(decls);
    os << "sentence\n";
    for (size_t i = 0; i < rs.clauses.size(); ++i) {
      auto o = rs.origins[i];
      os << "  # superclause " << o.i + 1;
      if (o.j >= 0)
        os << ", disjunct " << o.j + 1;
      else
        os << ", indicator selector";
      os << "\n";
      os << (i ? "^ " : "  ") << "(" << clause_str(rs.clauses[i]) << ")\n";
    }
    os << ";\n";
  }
  std::cout << os.str();
  return 0;
}

int cmd_value(const std::string& file, const std::string& model_path,
              bool concrete, bool witness, const Budgets& b) {
  auto p = load_problem(file);
  auto s = require_sentence(p, file);
  if (!model_path.empty()) {
    Model m = parse_model(read_file(model_path), p.symbols, model_path);
    std::cout << rat_str(evaluate(s, m, p.symbols)) << "\n";
    return 0;
  }
  if (concrete) {
    if (p.objects.empty())
      throw std::runtime_error("'" + file + "' declares no objects; --concrete needs a closed domain");
    ConcreteResult r = concrete_value(p, b.cut_budget >= 0 ? b.cut_budget : 200);
    if (r.status == MilpStatus::BudgetExhausted) {
      std::cout << "UNKNOWN\n";
      return 2;
    }
    std::cout << rat_str(r.value) << "\n";
    if (witness)
      for (const auto& [atom, v] : r.assignment)
        std::cout << atom << " = " << rat_str(v) << "\n";
    return 0;
  }
  ValueBounds vb = infer_value(s, p.symbols, refute_options(b));
  if (vb.exact) {
    std::cout << rat_str(vb.upper) << "\n";
    return 0;
  }
  std::cout << "value in [" << (vb.lower ? rat_str(*vb.lower) : "-inf") << ", "
            << rat_str(vb.upper) << "]\n";
  return 2;
}

int cmd_ground(const std::string& file, const std::string& lp_out, const Budgets& b) {
  auto p = load_problem(file);
  require_sentence(p, file);
  try {
    MilpProblem milp;
    if (!p.objects.empty()) {
      milp = concrete_ground(p).milp;
    } else {
      auto mn = to_min_normal(p.sentence, p.symbols);
      auto rs = to_reduced_normal(mn);
      auto insts = full_grounding(rs, b.depth >= 0 ? b.depth : 1,
                                  b.pool_cap >= 0 ? static_cast<unsigned long long>(b.pool_cap)
                                                  : 100000);
      milp = ground_subproblem(rs, insts).milp;
    }
    write_file(lp_out, lp_export(milp));
    return 0;
  } catch (const MilpError& e) {
    std::cerr << "grounding aborted: " << e.what() << "\n";
    return 2;
  }
}

int cmd_feasible(const std::string& file, bool naive, const Budgets& b) {
  auto p = load_problem(file);
  auto s = require_sentence(p, file);
  if (naive) {
    auto mn = to_min_normal(s, p.symbols);
    auto rs = to_reduced_normal(mn);
    NaiveOptions o;
    if (b.depth >= 0) o.max_depth = b.depth;
    if (b.cut_budget >= 0) o.cut_budget = b.cut_budget;
    if (b.max_subproblems >= 0) o.max_subproblems = static_cast<int>(b.max_subproblems);
    NaiveResult r = naive_infer(rs, o);
    if (r.status == MilpStatus::Infeasible) {
      std::cout << "INFEASIBLE\n";
      return 1;
    }
    std::cout << "UNKNOWN\n";  // feasible subproblems prove nothing
    return 2;
  }
  EntailResult r = refute_sentence(s, p.symbols, refute_options(b));
  switch (r.status) {
    case MilpStatus::Feasible:
      std::cout << "FEASIBLE\n";
      return 0;
    case MilpStatus::Infeasible:
      std::cout << "INFEASIBLE\n";
      return 1;
    default:
      break;
  }
  // refutation ran out of budget; a small model of nonnegative value still
  // decides the question in the other direction
  for (int n = 1; n <= 2; ++n) {
    try {
      if (brute_force_value(s, p.symbols, n) >= 0) {
        std::cerr << "witness: a model with " << n << " object(s)\n";
        std::cout << "FEASIBLE\n";
        return 0;
      }
    } catch (const EvalError&) {
      break;
    }
  }
  std::cout << "UNKNOWN\n";
  return 2;
}

FormulaPtr load_query(const ProblemFile& p, const std::string& query_path) {
  if (!query_path.empty()) return parse_formula(read_file(query_path), p.symbols);
  if (p.query) return p.query;
  throw std::runtime_error("no query: pass --query or add a query directive");
}

std::optional<Rat> pick_eps(const ProblemFile& p, const std::string& eps_text) {
  if (!eps_text.empty()) return rat_parse(eps_text);
  return p.threshold;
}

int cmd_entail(const std::string& file, const std::string& query_path,
               const std::string& eps_text, const std::string& trace_out,
               const Budgets& b) {
  auto p = load_problem(file);
  auto s = require_sentence(p, file);
  auto q = load_query(p, query_path);
  auto eps = pick_eps(p, eps_text);
  auto opts = refute_options(b);
  EntailResult r = eps ? epsilon_entails(s, q, *eps, p.symbols, opts)
                       : entails(s, q, p.symbols, opts);
  return report_proof(r, trace_out);
}

int cmd_prove(const std::string& file, const std::string& trace_out, const Budgets& b) {
  auto p = load_problem(file);
  auto s = require_sentence(p, file);
  return report_proof(refute_sentence(s, p.symbols, refute_options(b)), trace_out);
}

// Rebuilds the refuted formula exactly as entail would so the digest and the
// clause indices line up, then replays the trace against it.
int cmd_verify(const std::string& file, const std::string& trace_path,
               const std::string& query_path, const std::string& eps_text) {
  auto p = load_problem(file);
  auto s = require_sentence(p, file);
  FormulaPtr target = s;
  if (!query_path.empty() || p.query) {
    auto q = load_query(p, query_path);
    auto eps = pick_eps(p, eps_text);
    Rat margin = eps ? *eps : Rat(-epsilon_of(q, p.symbols) / 2);
    target = f_min(s, f_sub(f_scalar(margin), q));
  }
  auto mn = to_min_normal(target, p.symbols);
  auto rs = to_reduced_normal(mn);  // its symbols cover skolems and indicators
  ProofTrace t = trace_from_json(read_file(trace_path), rs.symbols);
  VerifyResult vr = verify_trace(target, p.symbols, t);
  if (vr.valid) {
    std::cout << "VALID\n";
    return 0;
  }
  std::cerr << "step " << vr.failed_step << ": " << vr.message << "\n";
  std::cout << "INVALID\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-order programming toolkit"};
  app.require_subcommand(1);

  std::string file, model_path, query_path, eps_text, trace_path;
  std::string lp_out, trace_out;
  bool want_min = false, want_reduced = false, concrete = false, witness = false;
  bool naive = false, lifted = false;
  Budgets b;

  auto* parse_cmd = app.add_subcommand("parse", "check a problem file and pretty-print it");
  parse_cmd->add_option("file", file, "problem file")->required();

  auto* norm_cmd = app.add_subcommand("normalize", "print the sentence in a normal form");
  norm_cmd->add_option("file", file, "problem file")->required();
  auto* omin = norm_cmd->add_flag("--min", want_min, "min-normal form");
  norm_cmd->add_flag("--reduced", want_reduced, "reduced normal form")->excludes(omin);

  auto* value_cmd = app.add_subcommand("value", "evaluate or bound the sentence value");
  value_cmd->add_option("file", file, "problem file")->required();
  auto* omodel = value_cmd->add_option("--model", model_path, "explicit finite model");
  value_cmd->add_flag("--concrete", concrete, "expand over the declared objects")
      ->excludes(omodel);
  value_cmd->add_flag("--witness", witness, "with --concrete: print the maximizing assignment");
  add_budget_flags(value_cmd, b);

  auto* ground_cmd = app.add_subcommand("ground", "write the grounding as an LP file");
  ground_cmd->add_option("file", file, "problem file")->required();
  ground_cmd->add_option("--lp", lp_out, "output path ('-' for stdout)")->required();
  add_budget_flags(ground_cmd, b);

  auto* feas_cmd = app.add_subcommand("feasible", "decide whether the sentence has value >= 0");
  feas_cmd->add_option("file", file, "problem file")->required();
  auto* onaive = feas_cmd->add_flag("--naive", naive, "dovetailed ground subproblems");
  feas_cmd->add_flag("--lifted", lifted, "lifted cutting-plane refutation (default)")
      ->excludes(onaive);
  feas_cmd->add_option("--max-subproblems", b.max_subproblems,
                       "naive mode: subproblem budget")
      ->check(CLI::PositiveNumber);
  add_budget_flags(feas_cmd, b);

  auto* entail_cmd = app.add_subcommand("entail", "prove that the sentence entails a query");
  entail_cmd->add_option("file", file, "problem file")->required();
  entail_cmd->add_option("--query", query_path, "query formula file");
  entail_cmd->add_option("--eps", eps_text, "explicit entailment margin (rational)");
  entail_cmd->add_option("--emit-trace", trace_out, "write the proof trace as JSON");
  add_budget_flags(entail_cmd, b);

  auto* prove_cmd = app.add_subcommand("prove", "refute the sentence and emit the trace");
  prove_cmd->add_option("file", file, "problem file")->required();
  prove_cmd->add_option("--emit-trace", trace_out, "write the proof trace as JSON");
  add_budget_flags(prove_cmd, b);

  auto* verify_cmd = app.add_subcommand("verify", "replay a proof trace and check it");
  verify_cmd->add_option("file", file, "problem file")->required();
  verify_cmd->add_option("--trace", trace_path, "trace JSON file")->required();
  verify_cmd->add_option("--query", query_path, "query formula file (entailment traces)");
  verify_cmd->add_option("--eps", eps_text, "margin used when the trace was made");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (*parse_cmd) return cmd_parse(file);
    if (*norm_cmd) {
      if (!want_min && !want_reduced) {
        std::cerr << "normalize: pass exactly one of --min / --reduced\n";
        return 64;
      }
      return cmd_normalize(file, want_min, want_reduced);
    }
    if (*value_cmd) return cmd_value(file, model_path, concrete, witness, b);
    if (*ground_cmd) return cmd_ground(file, lp_out, b);
    if (*feas_cmd) return cmd_feasible(file, naive, b);
    if (*entail_cmd) return cmd_entail(file, query_path, eps_text, trace_out, b);
    if (*prove_cmd) return cmd_prove(file, trace_out, b);
    if (*verify_cmd) return cmd_verify(file, trace_path, query_path, eps_text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  }
  return 64;
}
