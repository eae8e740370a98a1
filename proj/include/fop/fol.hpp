#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fop/ast.hpp"

namespace fop {

enum class FolK { True, False, Atom, Not, And, Or, Implies, Forall, Exists };

struct FolFormula;
using FolPtr = std::shared_ptr<const FolFormula>;

struct FolFormula {
  FolK kind;
  std::string name;           // Atom predicate or bound variable
  std::vector<TermPtr> args;  // Atom arguments
  FolPtr a, b;
};

FolPtr fol_true();
FolPtr fol_false();
FolPtr fol_atom(std::string pred, std::vector<TermPtr> args = {});
FolPtr fol_not(FolPtr x);
FolPtr fol_and(FolPtr x, FolPtr y);
FolPtr fol_or(FolPtr x, FolPtr y);
FolPtr fol_implies(FolPtr x, FolPtr y);
FolPtr fol_forall(std::string var, FolPtr body);
FolPtr fol_exists(std::string var, FolPtr body);

std::string fol_str(const FolPtr& f);

struct FolFile {
  FolPtr formula;
  // Inferred signature: predicates get range {0,1}, integer sort.
  SymbolTable symbols;
};

// Surface: ~  &  |  ->  forall x.  exists x.  T  F. Unquantified
// identifiers in term position are constants (closed-formula reading).
FolFile parse_fol(const std::string& text, const std::string& filename = "<fol>");

enum class FolMode { A, B };

// Table-driven translation into an arithmetic sentence. Mode A produces
// values in {-1, +1} (truth threshold: value >= 0); mode B produces values
// in {0, 1} (threshold: value >= 1/2). With simplify set, mode B output is
// additionally normalized to the threshold-0 convention (shift by -1 and
// apply sign-preserving rewrites); mode A output just gets folding.
FormulaPtr translate_fol(const FolPtr& f, FolMode mode, bool simplify = false);

Rat fol_threshold(FolMode mode, bool simplified = false);

}  // namespace fop
