// Independent FOL truth oracle used to judge the arithmetic translations:
// classical satisfaction over an explicit finite model, nothing shared with
// the translation code beyond the AST and model types.
#pragma once

#include "fop/eval.hpp"
#include "fop/fol.hpp"

namespace fop_test {

inline bool fol_holds(const fop::FolPtr& f, const fop::Model& m,
                      fop::Valuation& v) {
  using fop::FolK;
  switch (f->kind) {
    case FolK::True:
      return true;
    case FolK::False:
      return false;
    case FolK::Atom: {
      size_t slot = 0, mult = 1;
      for (const auto& t : f->args) {
        slot += mult * static_cast<size_t>(fop::evaluate_term(t, m, v));
        mult *= m.objects.size();
      }
      return m.preds.at(f->name).at(slot) != fop::Rat(0);
    }
    case FolK::Not:
      return !fol_holds(f->a, m, v);
    case FolK::And:
      return fol_holds(f->a, m, v) && fol_holds(f->b, m, v);
    case FolK::Or:
      return fol_holds(f->a, m, v) || fol_holds(f->b, m, v);
    case FolK::Implies:
      return !fol_holds(f->a, m, v) || fol_holds(f->b, m, v);
    case FolK::Forall:
    case FolK::Exists: {
      bool forall = f->kind == FolK::Forall;
      auto it = v.find(f->name);
      bool had = it != v.end();
      int saved = had ? it->second : 0;
      bool result = forall;
      for (int i = 0; i < static_cast<int>(m.objects.size()); ++i) {
        v[f->name] = i;
        bool inner = fol_holds(f->a, m, v);
        if (inner != forall) {
          result = !forall;
          break;
        }
      }
      if (had)
        v[f->name] = saved;
      else
        v.erase(f->name);
      return result;
    }
  }
  return false;
}

inline bool fol_holds(const fop::FolPtr& f, const fop::Model& m) {
  fop::Valuation v;
  return fol_holds(f, m, v);
}

}  // namespace fop_test
