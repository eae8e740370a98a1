#include "fop/normal.hpp"

#include <algorithm>
#include <sstream>

namespace fop {

namespace {

// step 1: fold negation and scalar multiplication into the leaves, flipping
// lattice operators and quantifiers under negative factors
FormulaPtr push_scalars(const FormulaPtr& f, const Rat& c) {
  if (c == 0) return f_scalar(0);
  switch (f->kind) {
    case FK::Scalar:
      return f_scalar(Rat(c * f->num));
    case FK::Pred:
      return c == 1 ? f : f_mul(c, f);
    case FK::Neg:
      return push_scalars(f->a, Rat(-c));
    case FK::Mul:
      return push_scalars(f->a, Rat(c * f->num));
    case FK::Add:
      return f_add(push_scalars(f->a, c), push_scalars(f->b, c));
    case FK::Sub:
      return f_add(push_scalars(f->a, c), push_scalars(f->b, Rat(-c)));
    case FK::Min:
      return c > 0 ? f_min(push_scalars(f->a, c), push_scalars(f->b, c))
                   : f_max(push_scalars(f->a, c), push_scalars(f->b, c));
    case FK::Max:
      return c > 0 ? f_max(push_scalars(f->a, c), push_scalars(f->b, c))
                   : f_min(push_scalars(f->a, c), push_scalars(f->b, c));
    case FK::Inf:
      return c > 0 ? f_inf(f->name, push_scalars(f->a, c))
                   : f_sup(f->name, push_scalars(f->a, c));
    case FK::Sup:
      return c > 0 ? f_sup(f->name, push_scalars(f->a, c))
                   : f_inf(f->name, push_scalars(f->a, c));
  }
  return f;
}

// step 3: replace each sup variable by a fresh function of the enclosing
// min-quantified variables (outermost implicit frees included)
FormulaPtr skolemize(const FormulaPtr& f, std::vector<std::string>& enclosing,
                     NameGen& gen, std::vector<SkolemEntry>& out) {
  switch (f->kind) {
    case FK::Scalar:
    case FK::Pred:
      return f;
    case FK::Mul:
      return f_mul(f->num, skolemize(f->a, enclosing, gen, out));
    case FK::Add:
      return f_add(skolemize(f->a, enclosing, gen, out),
                   skolemize(f->b, enclosing, gen, out));
    case FK::Min:
      return f_min(skolemize(f->a, enclosing, gen, out),
                   skolemize(f->b, enclosing, gen, out));
    case FK::Max:
      return f_max(skolemize(f->a, enclosing, gen, out),
                   skolemize(f->b, enclosing, gen, out));
    case FK::Inf: {
      enclosing.push_back(f->name);
      auto body = skolemize(f->a, enclosing, gen, out);
      enclosing.pop_back();
      return f_inf(f->name, body);
    }
    case FK::Sup: {
      std::string fn = gen.claim(f->name);
      out.push_back({fn, f->name, enclosing});
      std::vector<TermPtr> args;
      args.reserve(enclosing.size());
      for (const auto& v : enclosing) args.push_back(mk_var(v));
      Substitution s({{f->name, mk_app(fn, std::move(args))}});
      return skolemize(formula_subst(f->a, s), enclosing, gen, out);
    }
    default:
      throw std::logic_error("negation survived step 1");
  }
}

// steps 4 and 5: drop the min quantifiers and distribute into
// and-of-or-of-sums
std::vector<Superclause> distribute(const FormulaPtr& f) {
  switch (f->kind) {
    case FK::Scalar: {
      SumClause c;
      c.lits.push_back(Literal{f->num, std::nullopt});
      return {Superclause{{c}}};
    }
    case FK::Pred: {
      SumClause c;
      c.lits.push_back(Literal{Rat(1), PredAtom{f->name, f->args}});
      return {Superclause{{c}}};
    }
    case FK::Mul: {
      SumClause c;
      c.lits.push_back(Literal{f->num, PredAtom{f->a->name, f->a->args}});
      return {Superclause{{c}}};
    }
    case FK::Inf:
      return distribute(f->a);
    case FK::Min: {
      auto a = distribute(f->a);
      auto b = distribute(f->b);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case FK::Max: {
      auto a = distribute(f->a);
      auto b = distribute(f->b);
      std::vector<Superclause> out;
      out.reserve(a.size() * b.size());
      for (const auto& sa : a)
        for (const auto& sb : b) {
          Superclause s = sa;
          s.disjuncts.insert(s.disjuncts.end(), sb.disjuncts.begin(),
                             sb.disjuncts.end());
          out.push_back(std::move(s));
        }
      return out;
    }
    case FK::Add: {
      auto a = distribute(f->a);
      auto b = distribute(f->b);
      std::vector<Superclause> out;
      out.reserve(a.size() * b.size());
      for (const auto& sa : a)
        for (const auto& sb : b) {
          Superclause s;
          s.disjuncts.reserve(sa.disjuncts.size() * sb.disjuncts.size());
          for (const auto& da : sa.disjuncts)
            for (const auto& db : sb.disjuncts) {
              SumClause c = da;
              c.lits.insert(c.lits.end(), db.lits.begin(), db.lits.end());
              s.disjuncts.push_back(std::move(c));
            }
          out.push_back(std::move(s));
        }
      return out;
    }
    default:
      throw std::logic_error("unnormalized node reached distribution");
  }
}

}  // namespace

MinNormalSentence to_min_normal(const FormulaPtr& s, const SymbolTable& symbols) {
  MinNormalSentence out;
  out.symbols = symbols;
  out.free_vars = free_variables(s);

  NameGen gen;
  for (const auto& [n, d] : symbols.preds) gen.reserve(n);
  for (const auto& [n, d] : symbols.funs) gen.reserve(n);
  for (const auto& v : out.free_vars) gen.reserve(v);

  auto f = push_scalars(s, Rat(1));
  f = standardize_quantifiers(f, gen);
  std::vector<std::string> enclosing = out.free_vars;
  f = skolemize(f, enclosing, gen, out.skolems);
  for (const auto& sk : out.skolems)
    out.symbols.funs[sk.fun] = FunDecl{static_cast<int>(sk.enclosing.size())};

  out.superclauses = distribute(f);
  for (auto& sc : out.superclauses)
    for (auto& c : sc.disjuncts) c = clause_canon(c);
  return out;
}

std::string min_normal_str(const MinNormalSentence& m) {
  std::string out;
  bool wrap = m.superclauses.size() > 1;
  for (size_t i = 0; i < m.superclauses.size(); ++i) {
    if (i) out += " ^ ";
    bool multi = m.superclauses[i].disjuncts.size() > 1;
    if (wrap && !multi) out += "(";
    out += superclause_str(m.superclauses[i]);
    if (wrap && !multi) out += ")";
  }
  return out;
}

FormulaPtr min_normal_formula(const MinNormalSentence& m) {
  FormulaPtr acc;
  for (const auto& sc : m.superclauses) {
    FormulaPtr d;
    for (const auto& c : sc.disjuncts) {
      auto cf = clause_formula(c);
      d = d ? f_max(d, cf) : cf;
    }
    acc = acc ? f_min(acc, d) : d;
  }
  return acc ? acc : f_scalar(0);
}

// ------------------------------------------------------------- intervals

IntervalBound interval_of(const Literal& l, const SymbolTable& symbols) {
  if (!l.atom) return {l.coeff, l.coeff};
  auto it = symbols.preds.find(l.atom->pred);
  if (it == symbols.preds.end())
    throw std::invalid_argument("undeclared predicate '" + l.atom->pred + "'");
  Rat a = l.coeff * it->second.lo;
  Rat b = l.coeff * it->second.hi;
  return a <= b ? IntervalBound{a, b} : IntervalBound{b, a};
}

IntervalBound interval_of(const SumClause& c, const SymbolTable& symbols) {
  IntervalBound out{Rat(0), Rat(0)};
  for (const auto& l : c.lits) {
    auto i = interval_of(l, symbols);
    out.lo += i.lo;
    out.hi += i.hi;
  }
  return out;
}

IntervalBound interval_of(const FormulaPtr& f, const SymbolTable& symbols) {
  switch (f->kind) {
    case FK::Scalar:
      return {f->num, f->num};
    case FK::Pred: {
      auto it = symbols.preds.find(f->name);
      if (it == symbols.preds.end())
        throw std::invalid_argument("undeclared predicate '" + f->name + "'");
      return {it->second.lo, it->second.hi};
    }
    case FK::Neg: {
      auto i = interval_of(f->a, symbols);
      return {Rat(-i.hi), Rat(-i.lo)};
    }
    case FK::Mul: {
      auto i = interval_of(f->a, symbols);
      Rat a = f->num * i.lo, b = f->num * i.hi;
      return a <= b ? IntervalBound{a, b} : IntervalBound{b, a};
    }
    case FK::Add: {
      auto i = interval_of(f->a, symbols), j = interval_of(f->b, symbols);
      return {Rat(i.lo + j.lo), Rat(i.hi + j.hi)};
    }
    case FK::Sub: {
      auto i = interval_of(f->a, symbols), j = interval_of(f->b, symbols);
      return {Rat(i.lo - j.hi), Rat(i.hi - j.lo)};
    }
    case FK::Min: {
      auto i = interval_of(f->a, symbols), j = interval_of(f->b, symbols);
      return {std::min(i.lo, j.lo), std::min(i.hi, j.hi)};
    }
    case FK::Max: {
      auto i = interval_of(f->a, symbols), j = interval_of(f->b, symbols);
      return {std::max(i.lo, j.lo), std::max(i.hi, j.hi)};
    }
    case FK::Inf:
    case FK::Sup:
      return interval_of(f->a, symbols);
  }
  throw std::logic_error("malformed formula");
}

// ---------------------------------------------------------- reduced form

ReducedSentence to_reduced_normal(const MinNormalSentence& m) {
  ReducedSentence out;
  out.symbols = m.symbols;
  out.free_vars = m.free_vars;

  NameGen gen;
  for (const auto& [n, d] : out.symbols.preds) gen.reserve(n);
  for (const auto& [n, d] : out.symbols.funs) gen.reserve(n);

  for (size_t i = 0; i < m.superclauses.size(); ++i) {
    const auto& sc = m.superclauses[i];
    if (sc.disjuncts.size() == 1) {
      out.clauses.push_back(sc.disjuncts[0]);
      out.origins.push_back({static_cast<int>(i), 0});
      continue;
    }
    auto vars = superclause_free_vars(sc);
    std::vector<TermPtr> var_terms;
    var_terms.reserve(vars.size());
    for (const auto& v : vars) var_terms.push_back(mk_var(v));

    SumClause r;
    for (size_t j = 0; j < sc.disjuncts.size(); ++j) {
      const auto& d = sc.disjuncts[j];
      std::string z = gen.fresh("z");
      out.symbols.preds[z] =
          PredDecl{static_cast<int>(vars.size()), Rat(0), Rat(1), true};
      Rat B = std::max(Rat(0), Rat(-interval_of(d, m.symbols).lo));
      out.indicators[{static_cast<int>(i), static_cast<int>(j)}] =
          IndicatorInfo{z, B};

      // L'_ij = L_ij + B(1 - z_ij(vars))
      SumClause lp = d;
      if (B != 0) {
        lp.lits.push_back(Literal{B, std::nullopt});
        lp.lits.push_back(Literal{Rat(-B), PredAtom{z, var_terms}});
      }
      out.clauses.push_back(clause_canon(lp));
      out.origins.push_back({static_cast<int>(i), static_cast<int>(j)});

      r.lits.push_back(Literal{Rat(1), PredAtom{z, var_terms}});
    }
    r.lits.push_back(Literal{rat_make(-1, 2), std::nullopt});
    out.clauses.push_back(clause_canon(r));
    out.origins.push_back({static_cast<int>(i), -1});
  }
  return out;
}

std::string reduced_str(const ReducedSentence& r) {
  std::string out;
  for (size_t i = 0; i < r.clauses.size(); ++i) {
    if (i) out += " ^ ";
    bool wrap = r.clauses.size() > 1;
    if (wrap) out += "(";
    out += clause_str(r.clauses[i]);
    if (wrap) out += ")";
  }
  return out;
}

FormulaPtr reduced_formula(const ReducedSentence& r) {
  FormulaPtr acc;
  for (const auto& c : r.clauses) {
    auto cf = clause_formula(c);
    acc = acc ? f_min(acc, cf) : cf;
  }
  return acc ? acc : f_scalar(0);
}

// --------------------------------------------------------------- epsilon

namespace {
void epsilon_walk(const FormulaPtr& f, const SymbolTable& symbols, Int& denom) {
  switch (f->kind) {
    case FK::Scalar: {
      Int d = f->num.get_den();
      denom = lcm(denom, d);
      return;
    }
    case FK::Pred: {
      auto it = symbols.preds.find(f->name);
      if (it == symbols.preds.end())
        throw std::invalid_argument("undeclared predicate '" + f->name + "'");
      if (!it->second.integral)
        throw FragmentError("predicate '" + f->name +
                            "' is real-sorted; epsilon needs the integer fragment");
      return;
    }
    case FK::Mul: {
      Int d = f->num.get_den();
      denom = lcm(denom, d);
      epsilon_walk(f->a, symbols, denom);
      return;
    }
    case FK::Neg:
    case FK::Inf:
    case FK::Sup:
      epsilon_walk(f->a, symbols, denom);
      return;
    default:
      epsilon_walk(f->a, symbols, denom);
      epsilon_walk(f->b, symbols, denom);
      return;
  }
}
}  // namespace

Rat epsilon_of(const FormulaPtr& s, const SymbolTable& symbols) {
  Int denom = 1;
  epsilon_walk(s, symbols, denom);
  Rat eps(1);
  eps /= Rat(denom);
  return eps;
}

}  // namespace fop
