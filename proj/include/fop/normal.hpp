#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fop/ast.hpp"

namespace fop {

struct FragmentError : std::runtime_error {
  explicit FragmentError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SkolemEntry {
  std::string fun;                     // new function symbol
  std::string from_var;                // the sup-bound variable it replaced
  std::vector<std::string> enclosing;  // min-quantified variables in scope
};

// Conjunction of superclauses; free variables are implicitly min-quantified.
struct MinNormalSentence {
  std::vector<Superclause> superclauses;
  std::vector<std::string> free_vars;
  std::vector<SkolemEntry> skolems;
  SymbolTable symbols;  // input table extended with the skolem functions
};

MinNormalSentence to_min_normal(const FormulaPtr& s, const SymbolTable& symbols);
std::string min_normal_str(const MinNormalSentence& m);
FormulaPtr min_normal_formula(const MinNormalSentence& m);

struct IntervalBound {
  Rat lo, hi;
};

IntervalBound interval_of(const Literal& l, const SymbolTable& symbols);
IntervalBound interval_of(const SumClause& c, const SymbolTable& symbols);
IntervalBound interval_of(const FormulaPtr& f, const SymbolTable& symbols);

struct IndicatorInfo {
  std::string z;  // fresh {0,1} predicate
  Rat B;          // big-M shift applied to the disjunct
};

struct ReducedSentence {
  // i = source superclause, j = disjunct (-1 for the R_i indicator clause)
  struct Origin {
    int i, j;
  };
  std::vector<SumClause> clauses;
  std::vector<Origin> origins;
  std::map<std::pair<int, int>, IndicatorInfo> indicators;
  std::vector<std::string> free_vars;
  SymbolTable symbols;  // extended with the indicator predicates
};

ReducedSentence to_reduced_normal(const MinNormalSentence& m);
std::string reduced_str(const ReducedSentence& r);
FormulaPtr reduced_formula(const ReducedSentence& r);

// 1/lcm of the denominators of every scalar coefficient and constant;
// requires every predicate integer-sorted.
Rat epsilon_of(const FormulaPtr& s, const SymbolTable& symbols);

}  // namespace fop
