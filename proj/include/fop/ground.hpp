#pragma once

#include <string>
#include <vector>

#include "fop/milp.hpp"
#include "fop/normal.hpp"
#include "fop/parser.hpp"

namespace fop {

// All ground terms of depth <= d over the table's constants and functions;
// nil stands in when there are no constants. Ordered by (depth, name, args).
std::vector<TermPtr> herbrand_terms(const SymbolTable& symbols, int depth);

struct GroundInstance {
  int clause;
  Substitution subst;  // grounds every free variable of the clause
};

struct GroundProblem {
  std::vector<GroundInstance> instances;
  std::vector<PredAtom> atoms;  // first-appearance dictionary = MILP variables
  MilpProblem milp;
};

GroundProblem ground_subproblem(const ReducedSentence& s,
                                const std::vector<GroundInstance>& instances);

// Copy of s.symbols keeping only the functions that occur in the clauses;
// the Herbrand universe is built from the sentence, not from every
// declaration in scope.
SymbolTable grounding_symbols(const ReducedSentence& s);

// Every instance of every clause over terms of depth <= d: clauses in order,
// substitutions in odometer order (first variable most significant). Throws
// MilpError when a clause alone would exceed pool_cap instances.
std::vector<GroundInstance> full_grounding(const ReducedSentence& s, int depth,
                                           unsigned long long pool_cap = 100000);

struct NaiveOptions {
  int max_depth = 3;
  int max_subproblems = 2000;
  int cut_budget = 50;
};

struct NaiveResult {
  MilpStatus status = MilpStatus::BudgetExhausted;
  GroundProblem problem;  // the certifying subproblem when Infeasible
  MilpResult milp;
  long long subproblems_tried = 0;
};

// Fair dovetailing over (Herbrand depth, instance subsets); stops at the
// first infeasible subproblem. Feasible subproblems prove nothing about the
// whole sentence, so the only outcomes are Infeasible and BudgetExhausted.
NaiveResult naive_infer(const ReducedSentence& s, const NaiveOptions& opts = {});

// Domain closure: quantifiers expand over the declared objects and known
// function tables rewrite applications to objects. The result is ground.
FormulaPtr concrete_expand(const ProblemFile& p);

struct ConcreteGround {
  std::vector<SumClause> clauses;
  std::vector<PredAtom> atoms;
  MilpProblem milp;
  SymbolTable symbols;  // may gain indicator predicates
};

ConcreteGround concrete_ground(const ProblemFile& p);

struct ConcreteResult {
  MilpStatus status = MilpStatus::BudgetExhausted;
  Rat value;
  std::vector<std::pair<std::string, Rat>> assignment;  // atom -> value
};

// Maximizes the sentence value over the closed domain via an epigraph
// variable; exact on the integer fragment.
ConcreteResult concrete_value(const ProblemFile& p, int cut_budget = 200);

}  // namespace fop
