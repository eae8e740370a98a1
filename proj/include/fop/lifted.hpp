#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fop/ground.hpp"

namespace fop {

enum class BoundSide { Lower, Upper };

// Range clause of a predicate: p(vars...) - l, or u - p(vars...), with fresh
// argument variables drawn from gen. Integer ranges are tightened first.
SumClause implicit_clause(const SymbolTable& symbols, const std::string& pred,
                          BoundSide side, NameGen& gen);

// One clause copy entering a cut. Clause and PriorCut picks carry a mapping
// keyed by the picked clause's own free variables; the copy is standardized
// apart first and the mapping lands on the renamed variables, so reusing a
// name on the right-hand side is fine ({i -> S(i)} is a legal pick) and
// unlisted variables simply stay fresh. Bound picks name the predicate atom
// directly.
struct CutPick {
  enum Kind { Clause, PriorCut, Bound } kind = Clause;
  int index = 0;                           // clause index or earlier-step index
  std::map<std::string, TermPtr> subst;    // Clause / PriorCut
  std::string pred;                        // Bound
  BoundSide side = BoundSide::Upper;       // Bound
  std::vector<TermPtr> args;               // Bound
};

struct CutRequest {
  std::vector<CutPick> picks;
  std::vector<Rat> lambda;     // one multiplier per pick
  std::vector<Rat> weakening;  // per pick row; empty means zero
};

struct LiftedCut {
  SumClause clause;  // variables standardized apart from the host sentence
  CutRequest request;
};

// The cut rule: instantiate the picks, set up the linear relaxation over
// their textually distinct atoms, combine rows by lambda, apply the Gomory
// rounding, eliminate slacks, round the constant, and read the result back
// as a sum-clause. nullopt when the combined row is already integral.
std::optional<LiftedCut> lifted_cut(const ReducedSentence& s,
                                    const CutRequest& req,
                                    const std::vector<SumClause>& prior = {});

struct TraceStep {
  CutRequest request;
  std::string clause;  // canonical print of the derived clause (informational;
                       // verification re-derives and compares)
};

// Linear-algebra contradiction: nonnegative multipliers over the listed
// ground instances, then one upper-bound row per atom, then one lower-bound
// row per atom, summing to 0 . x + negative constant.
struct TraceTerminal {
  std::vector<GroundInstance> grounding;  // host clauses, then cut clauses
  std::vector<Rat> farkas;
};

struct ProofTrace {
  int version = 1;
  std::string digest;  // sentence_digest of the refuted sentence
  std::vector<TraceStep> steps;
  TraceTerminal terminal;
};

// fnv1a-64 of the canonical print, in hex; binds traces to their sentence
std::string sentence_digest(const FormulaPtr& f);

struct RefuteOptions {
  int max_depth = 4;
  int cut_budget = 200;
  unsigned long long pool_cap = 100000;
};

struct RefuteResult {
  // Infeasible: refuted, trace filled in. Feasible: only when the Herbrand
  // universe is finite and a complete grounding admitted an integral point.
  MilpStatus status = MilpStatus::BudgetExhausted;
  ProofTrace trace;
  long long cuts_used = 0;
};

RefuteResult refute(const ReducedSentence& s, const RefuteOptions& opts = {});

struct EntailResult {
  MilpStatus status = MilpStatus::BudgetExhausted;  // Infeasible = proved
  ProofTrace trace;
  FormulaPtr refutand;
  long long cuts_used = 0;
};

// Normalize a sentence and run the refutation loop on it; the digest of the
// trace is bound to s. Building block for entails and the prover surface.
EntailResult refute_sentence(const FormulaPtr& s, const SymbolTable& symbols,
                             const RefuteOptions& opts = {});

// s entails s2 iff s ^ (-eps/2 - s2) has no model of value >= 0, where
// eps = epsilon_of(s2). Integer fragment only; FragmentError otherwise.
EntailResult entails(const FormulaPtr& s, const FormulaPtr& s2,
                     const SymbolTable& symbols, const RefuteOptions& opts = {});

// Margin entailment: refutes s ^ (eps - s2). Mixed sorts allowed. Proved
// means every model of s-value >= 0 gives s2 a value strictly above eps.
EntailResult epsilon_entails(const FormulaPtr& s, const FormulaPtr& s2,
                             const Rat& eps, const SymbolTable& symbols,
                             const RefuteOptions& opts = {});

struct ValueBounds {
  std::optional<Rat> lower;  // best model value found (sound lower bound)
  Rat upper;                 // best grounding bound (range bound at worst)
  bool exact = false;        // finite universe decided the value outright
};

// Bounds value(s) via the epigraph variable z and grounding LP optima;
// exact when the Herbrand universe is finite.
ValueBounds infer_value(const FormulaPtr& s, const SymbolTable& symbols,
                        const RefuteOptions& opts = {});

struct VerifyResult {
  bool valid = false;
  int failed_step = 0;  // step index; -1 terminal, -2 digest
  std::string message;
};

// Replays every step from its request alone and re-checks the terminal
// contradiction; stored clauses are compared against, never trusted.
VerifyResult verify_trace(const FormulaPtr& s, const SymbolTable& symbols,
                          const ProofTrace& t);

// Rebuilds a ground refutation (an Infeasible milp_decide run over a
// grounding of s) as a lifted trace of the same length: each recorded
// multiplier vector maps to ground picks and is re-derived through
// lifted_cut. The caller still owns the digest field.
ProofTrace lift_ground_proof(const ReducedSentence& s, const GroundProblem& gp,
                             const MilpResult& mr);

// JSON surface (schema version 1)
std::string trace_to_json(const ProofTrace& t);
ProofTrace trace_from_json(const std::string& text, const SymbolTable& symbols);

// Ground-term/variable parser for trace substitutions ("S(S(nil))").
TermPtr parse_term_text(const std::string& text, const SymbolTable& symbols);

}  // namespace fop
