#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fop/rational.hpp"

namespace fop {

// ---------------------------------------------------------------- terms

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  bool var;                    // true: variable occurrence, args empty
  std::string name;            // variable name or function symbol
  std::vector<TermPtr> args;   // empty for variables and constants
};

TermPtr mk_var(std::string name);
TermPtr mk_app(std::string fn, std::vector<TermPtr> args = {});

int term_cmp(const TermPtr& a, const TermPtr& b);
inline bool term_eq(const TermPtr& a, const TermPtr& b) { return term_cmp(a, b) == 0; }
std::string term_str(const TermPtr& t);
// Ground term depth: constants 0, f(t...) = 1 + max arg depth.
int term_depth(const TermPtr& t);
void collect_term_vars(const TermPtr& t, std::vector<std::string>& order,
                       std::set<std::string>& seen);

// --------------------------------------------------------- substitutions

class Substitution {
 public:
  Substitution() = default;
  // Throws std::invalid_argument if a variable on any right-hand side is
  // also a key (the validity condition on variable substitutions).
  explicit Substitution(std::map<std::string, TermPtr> pairs);

  const std::map<std::string, TermPtr>& pairs() const { return pairs_; }
  bool contains(const std::string& v) const { return pairs_.count(v) > 0; }
  TermPtr lookup(const std::string& v) const;
  bool empty() const { return pairs_.empty(); }

  // Composition: s/(v.compose(w)) == (s/v)/w.
  Substitution compose(const Substitution& w) const;

 private:
  std::map<std::string, TermPtr> pairs_;
};

TermPtr term_subst(const TermPtr& t, const Substitution& s);

// ------------------------------------------------------------- formulas

enum class FK {
  Scalar,  // rational constant
  Pred,    // predicate application (an atom)
  Neg,     // -a
  Mul,     // c * a, c rational
  Add,     // a + b
  Sub,     // a - b
  Min,     // a ^ b
  Max,     // a v b
  Inf,     // !x. a   (min over objects)
  Sup,     // ?x. a   (max over objects)
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FK kind;
  Rat num;                    // Scalar value or Mul coefficient
  std::string name;           // Pred symbol or quantified variable
  std::vector<TermPtr> args;  // Pred arguments
  FormulaPtr a, b;            // children (b null for unary/quantifier)
};

FormulaPtr f_scalar(Rat v);
FormulaPtr f_pred(std::string name, std::vector<TermPtr> args = {});
FormulaPtr f_neg(FormulaPtr x);
FormulaPtr f_mul(Rat c, FormulaPtr x);
FormulaPtr f_add(FormulaPtr x, FormulaPtr y);
FormulaPtr f_sub(FormulaPtr x, FormulaPtr y);
FormulaPtr f_min(FormulaPtr x, FormulaPtr y);
FormulaPtr f_max(FormulaPtr x, FormulaPtr y);
FormulaPtr f_inf(std::string var, FormulaPtr body);
FormulaPtr f_sup(std::string var, FormulaPtr body);

bool formula_eq(const FormulaPtr& a, const FormulaPtr& b);
// Canonical surface syntax; parses back to a structurally equal formula.
std::string formula_str(const FormulaPtr& f);

// Free variables in first-occurrence order.
std::vector<std::string> free_variables(const FormulaPtr& f);
// Applies s to free occurrences only. Throws if a right-hand-side variable
// would be captured by a quantifier in scope.
FormulaPtr formula_subst(const FormulaPtr& f, const Substitution& s);

// ----------------------------------------------------------- fresh names

struct NameGen {
  std::set<std::string> used;
  std::string fresh(const std::string& base);
  // keeps base itself when still unused
  std::string claim(const std::string& base);
  void reserve(const std::string& name) { used.insert(name); }
};

// Gives every quantifier binding site a distinct name (standardizing apart);
// a binder keeps its name unless it is already taken. Free variables are
// untouched.
FormulaPtr standardize_quantifiers(const FormulaPtr& f, NameGen& gen);

// ------------------------------------------------------------- clauses

struct PredAtom {
  std::string pred;
  std::vector<TermPtr> args;
};

int atom_cmp(const PredAtom& a, const PredAtom& b);
inline bool atom_eq(const PredAtom& a, const PredAtom& b) { return atom_cmp(a, b) == 0; }
std::string atom_str(const PredAtom& a);

// One summand of a sum-clause: coeff * atom, or a bare scalar when atom
// is absent (then coeff holds the value).
struct Literal {
  Rat coeff;
  std::optional<PredAtom> atom;
};

struct SumClause {
  std::vector<Literal> lits;
};

// Merges duplicate atoms, drops zero coefficients, folds scalars into a
// single trailing constant. First-occurrence order is preserved.
SumClause clause_canon(const SumClause& c);
std::vector<std::string> clause_free_vars(const SumClause& c);
SumClause clause_subst(const SumClause& c, const Substitution& s);
FormulaPtr clause_formula(const SumClause& c);
std::string clause_str(const SumClause& c);
bool clause_eq(const SumClause& a, const SumClause& b);
// Constant part of a canonical clause (0 if none).
Rat clause_constant(const SumClause& c);

// Renames the clause's free variables to fresh ones; returns the renaming.
SumClause clause_rename_apart(const SumClause& c, NameGen& gen,
                              std::map<std::string, std::string>* renaming = nullptr);

struct Superclause {
  std::vector<SumClause> disjuncts;
};

std::string superclause_str(const Superclause& c);
std::vector<std::string> superclause_free_vars(const Superclause& c);

// ------------------------------------------------------------- symbols

struct PredDecl {
  int arity;
  Rat lo, hi;
  bool integral;
};

struct FunDecl {
  int arity;
};

struct SymbolTable {
  std::map<std::string, PredDecl> preds;
  std::map<std::string, FunDecl> funs;  // constants have arity 0

  bool has_pred(const std::string& n) const { return preds.count(n) > 0; }
  bool has_fun(const std::string& n) const { return funs.count(n) > 0; }
  bool has(const std::string& n) const { return has_pred(n) || has_fun(n); }
};

}  // namespace fop
