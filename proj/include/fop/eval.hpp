#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fop/ast.hpp"

namespace fop {

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Finite explicit model: a nonempty object list plus total tables for every
// declared function and predicate. Tables are flattened with the first
// argument as the least significant digit (base |objects|).
struct Model {
  std::vector<std::string> objects;
  std::map<std::string, std::vector<int>> funs;   // values are object indices
  std::map<std::string, std::vector<Rat>> preds;

  int index_of(const std::string& object) const;  // -1 if absent
};

Model parse_model(const std::string& text, const SymbolTable& symbols,
                  const std::string& filename = "<model>");
std::string print_model(const Model& m, const SymbolTable& symbols);

// variable name -> object index
using Valuation = std::map<std::string, int>;

int evaluate_term(const TermPtr& t, const Model& m, const Valuation& v);

// Unbound free variables are treated as implicitly min-quantified, so for a
// closed sentence an empty valuation yields value(S, M).
Rat evaluate(const FormulaPtr& f, const Model& m, const SymbolTable& symbols,
             const Valuation& v = {});

// Exhaustive sup over a finite family: all models with n objects, every total
// function table, and predicate entries drawn from a per-symbol grid (integer
// sorts: every integer in range; real sorts: lo, midpoint, hi). Exact for the
// integer fragment under domain closure, a lower bound on value(S) otherwise.
struct BruteForceOptions {
  unsigned long long cap = 4'000'000;  // max number of models to visit
  int jobs = 1;
};

Rat brute_force_value(const FormulaPtr& f, const SymbolTable& symbols, int n,
                      const BruteForceOptions& opts = {});

// Visit every model in the same family (single-threaded); used by test
// oracles that need per-model access rather than the max.
void for_each_model(const SymbolTable& symbols, int n,
                    unsigned long long cap,
                    const std::function<void(const Model&)>& visit);

}  // namespace fop
