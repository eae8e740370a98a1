// Seeded random sentence generators shared by the unit and acceptance
// suites. Sizes are kept small enough for the exhaustive model oracles.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "fop/ast.hpp"
#include "fop/fol.hpp"

namespace fop_test {

// Closed FOL sentences over <= 2 unary predicates and <= 2 constants.
struct FolGen {
  std::mt19937 rng;
  int n_preds;
  int n_consts;

  FolGen(unsigned seed, int preds, int consts)
      : rng(seed), n_preds(preds), n_consts(consts) {}

  fop::SymbolTable symbols() const {
    fop::SymbolTable s;
    for (int i = 0; i < n_preds; ++i)
      s.preds["p" + std::to_string(i + 1)] =
          fop::PredDecl{1, fop::Rat(0), fop::Rat(1), true};
    for (int i = 0; i < n_consts; ++i)
      s.funs["c" + std::to_string(i + 1)] = fop::FunDecl{0};
    return s;
  }

  fop::TermPtr term(const std::vector<std::string>& scope) {
    size_t k = rng() % (scope.size() + static_cast<size_t>(n_consts));
    if (k < scope.size()) return fop::mk_var(scope[k]);
    return fop::mk_app("c" + std::to_string(k - scope.size() + 1));
  }

  fop::FolPtr atom(const std::vector<std::string>& scope) {
    return fop::fol_atom("p" + std::to_string(rng() % n_preds + 1),
                         {term(scope)});
  }

  fop::FolPtr gen(int depth, std::vector<std::string>& scope, int& binders) {
    if (depth == 0) {
      unsigned k = rng() % 8;
      if (k == 6) return fop::fol_true();
      if (k == 7) return fop::fol_false();
      return atom(scope);
    }
    switch (rng() % 6) {
      case 0:
        return fop::fol_not(gen(depth - 1, scope, binders));
      case 1:
        return fop::fol_and(gen(depth - 1, scope, binders),
                            gen(depth - 1, scope, binders));
      case 2:
        return fop::fol_or(gen(depth - 1, scope, binders),
                           gen(depth - 1, scope, binders));
      case 3:
        return fop::fol_implies(gen(depth - 1, scope, binders),
                                gen(depth - 1, scope, binders));
      default: {
        std::string v = "y" + std::to_string(++binders);
        scope.push_back(v);
        auto body = gen(depth - 1, scope, binders);
        scope.pop_back();
        return rng() % 2 ? fop::fol_forall(v, body) : fop::fol_exists(v, body);
      }
    }
  }

  fop::FolPtr sentence(int depth) {
    std::vector<std::string> scope;
    int binders = 0;
    return gen(depth, scope, binders);
  }
};

// Arithmetic sentences over a tiny integer signature: p/1 in [0,2],
// q/0 in [0,1], constant a, function f/1. Disjunction and quantifier
// counts are budgeted so the downstream model enumerations stay exhaustive.
struct FopGen {
  std::mt19937 rng;
  bool with_fun;

  explicit FopGen(unsigned seed, bool fun = true) : rng(seed), with_fun(fun) {}

  fop::SymbolTable symbols() const {
    fop::SymbolTable s;
    s.preds["p"] = fop::PredDecl{1, fop::Rat(0), fop::Rat(2), true};
    s.preds["q"] = fop::PredDecl{0, fop::Rat(0), fop::Rat(1), true};
    s.funs["a"] = fop::FunDecl{0};
    if (with_fun) s.funs["f"] = fop::FunDecl{1};
    return s;
  }

  fop::Rat scalar() {
    long num = static_cast<long>(rng() % 9) - 4;
    long den = 1 + static_cast<long>(rng() % 3);
    return fop::rat_make(num, den);
  }

  fop::TermPtr term(const std::vector<std::string>& scope, int depth) {
    if (depth > 0 && with_fun && rng() % 3 == 0)
      return fop::mk_app("f", {term(scope, depth - 1)});
    if (!scope.empty() && rng() % 2) return fop::mk_var(scope[rng() % scope.size()]);
    return fop::mk_app("a");
  }

  fop::FormulaPtr gen(int depth, std::vector<std::string>& scope, int& maxes,
                      int& binders) {
    if (depth == 0) {
      switch (rng() % 3) {
        case 0:
          return fop::f_scalar(scalar());
        case 1:
          return fop::f_pred("q");
        default:
          return fop::f_pred("p", {term(scope, 1)});
      }
    }
    switch (rng() % 8) {
      case 0:
        return fop::f_neg(gen(depth - 1, scope, maxes, binders));
      case 1:
        return fop::f_mul(scalar(), gen(depth - 1, scope, maxes, binders));
      case 2:
        return fop::f_add(gen(depth - 1, scope, maxes, binders),
                          gen(depth - 1, scope, maxes, binders));
      case 3:
        return fop::f_sub(gen(depth - 1, scope, maxes, binders),
                          gen(depth - 1, scope, maxes, binders));
      case 4:
        return fop::f_min(gen(depth - 1, scope, maxes, binders),
                          gen(depth - 1, scope, maxes, binders));
      case 5:
        if (maxes > 0) {
          --maxes;
          return fop::f_max(gen(depth - 1, scope, maxes, binders),
                            gen(depth - 1, scope, maxes, binders));
        }
        return gen(depth - 1, scope, maxes, binders);
      default: {
        std::string v = "w" + std::to_string(++binders);
        scope.push_back(v);
        auto body = gen(depth - 1, scope, maxes, binders);
        scope.pop_back();
        return rng() % 2 ? fop::f_inf(v, body) : fop::f_sup(v, body);
      }
    }
  }

  // max_maxes caps disjunction splitting; free_var leaves one variable open
  // to exercise the implicit outer quantifier.
  fop::FormulaPtr sentence(int depth, int max_maxes, bool free_var) {
    std::vector<std::string> scope;
    if (free_var) scope.push_back("u");
    int binders = 0;
    return gen(depth, scope, max_maxes, binders);
  }
};

}  // namespace fop_test
