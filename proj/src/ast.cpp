#include "fop/ast.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fop {

// ---------------------------------------------------------------- terms

TermPtr mk_var(std::string name) {
  auto t = std::make_shared<Term>();
  t->var = true;
  t->name = std::move(name);
  return t;
}

TermPtr mk_app(std::string fn, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->var = false;
  t->name = std::move(fn);
  t->args = std::move(args);
  return t;
}

int term_cmp(const TermPtr& a, const TermPtr& b) {
  if (a->var != b->var) return a->var ? -1 : 1;
  if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
  if (a->args.size() != b->args.size())
    return a->args.size() < b->args.size() ? -1 : 1;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (int c = term_cmp(a->args[i], b->args[i])) return c;
  return 0;
}

std::string term_str(const TermPtr& t) {
  if (t->var || t->args.empty()) return t->name;
  std::string s = t->name + "(";
  for (size_t i = 0; i < t->args.size(); ++i) {
    if (i) s += ",";
    s += term_str(t->args[i]);
  }
  return s + ")";
}

int term_depth(const TermPtr& t) {
  int d = 0;
  for (const auto& a : t->args) d = std::max(d, 1 + term_depth(a));
  return d;
}

void collect_term_vars(const TermPtr& t, std::vector<std::string>& order,
                       std::set<std::string>& seen) {
  if (t->var) {
    if (seen.insert(t->name).second) order.push_back(t->name);
    return;
  }
  for (const auto& a : t->args) collect_term_vars(a, order, seen);
}

// --------------------------------------------------------- substitutions

Substitution::Substitution(std::map<std::string, TermPtr> pairs)
    : pairs_(std::move(pairs)) {
  std::vector<std::string> order;
  std::set<std::string> rhs_vars;
  for (const auto& [v, t] : pairs_) {
    (void)v;
    collect_term_vars(t, order, rhs_vars);
  }
  for (const auto& [v, t] : pairs_) {
    (void)t;
    if (rhs_vars.count(v))
      throw std::invalid_argument(
          "substitution is not valid: variable '" + v +
          "' appears both as a key and inside a replacement term");
  }
}

TermPtr Substitution::lookup(const std::string& v) const {
  auto it = pairs_.find(v);
  return it == pairs_.end() ? nullptr : it->second;
}

Substitution Substitution::compose(const Substitution& w) const {
  std::map<std::string, TermPtr> out;
  for (const auto& [v, t] : pairs_) out[v] = term_subst(t, w);
  for (const auto& [v, t] : w.pairs_)
    if (!out.count(v)) out[v] = t;
  return Substitution(std::move(out));
}

TermPtr term_subst(const TermPtr& t, const Substitution& s) {
  if (t->var) {
    if (auto r = s.lookup(t->name)) return r;
    return t;
  }
  if (t->args.empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(term_subst(a, s));
  return mk_app(t->name, std::move(args));
}

// ------------------------------------------------------------- formulas

static std::shared_ptr<Formula> node(FK k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

FormulaPtr f_scalar(Rat v) {
  auto f = node(FK::Scalar);
  f->num = std::move(v);
  return f;
}

FormulaPtr f_pred(std::string name, std::vector<TermPtr> args) {
  auto f = node(FK::Pred);
  f->name = std::move(name);
  f->args = std::move(args);
  return f;
}

FormulaPtr f_neg(FormulaPtr x) {
  // fold into scalars and scalar multiples so "-3" and "-1*p(x)" read back
  // as the same tree they printed from
  if (x->kind == FK::Scalar) return f_scalar(Rat(-x->num));
  if (x->kind == FK::Mul) return f_mul(Rat(-x->num), x->a);
  auto f = node(FK::Neg);
  f->a = std::move(x);
  return f;
}

FormulaPtr f_mul(Rat c, FormulaPtr x) {
  auto f = node(FK::Mul);
  f->num = std::move(c);
  f->a = std::move(x);
  return f;
}

static FormulaPtr binary(FK k, FormulaPtr x, FormulaPtr y) {
  auto f = node(k);
  f->a = std::move(x);
  f->b = std::move(y);
  return f;
}

FormulaPtr f_add(FormulaPtr x, FormulaPtr y) { return binary(FK::Add, std::move(x), std::move(y)); }
FormulaPtr f_sub(FormulaPtr x, FormulaPtr y) { return binary(FK::Sub, std::move(x), std::move(y)); }
FormulaPtr f_min(FormulaPtr x, FormulaPtr y) { return binary(FK::Min, std::move(x), std::move(y)); }
FormulaPtr f_max(FormulaPtr x, FormulaPtr y) { return binary(FK::Max, std::move(x), std::move(y)); }

FormulaPtr f_inf(std::string var, FormulaPtr body) {
  auto f = node(FK::Inf);
  f->name = std::move(var);
  f->a = std::move(body);
  return f;
}

FormulaPtr f_sup(std::string var, FormulaPtr body) {
  auto f = node(FK::Sup);
  f->name = std::move(var);
  f->a = std::move(body);
  return f;
}

bool formula_eq(const FormulaPtr& x, const FormulaPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind || x->num != y->num || x->name != y->name) return false;
  if (x->args.size() != y->args.size()) return false;
  for (size_t i = 0; i < x->args.size(); ++i)
    if (!term_eq(x->args[i], y->args[i])) return false;
  return formula_eq(x->a, y->a) && formula_eq(x->b, y->b);
}

// Precedence levels, loosest to tightest. The surface grammar binds
// v (max) tighter than ^ (min), and quantifier bodies extend maximally,
// so a min-normal sentence prints without parentheses.
namespace {
constexpr int kQuant = 0, kMin = 1, kMax = 2, kSum = 3, kUnary = 4, kAtom = 5;

int level_of(const Formula& f) {
  switch (f.kind) {
    case FK::Inf:
    case FK::Sup: return kQuant;
    case FK::Min: return kMin;
    case FK::Max: return kMax;
    case FK::Add:
    case FK::Sub: return kSum;
    case FK::Neg: return kSum;  // keep "-x" parenthesized inside sums
    case FK::Mul: return f.num < 0 ? kSum : kUnary;
    case FK::Scalar: return f.num < 0 ? kSum : kAtom;
    case FK::Pred: return kAtom;
  }
  return kAtom;
}

void print(const FormulaPtr& f, int ctx, std::string& out) {
  int lev = level_of(*f);
  bool paren = lev < ctx;
  if (paren) out += "(";
  switch (f->kind) {
    case FK::Scalar:
      out += rat_str(f->num);
      break;
    case FK::Pred: {
      out += f->name;
      if (!f->args.empty()) {
        out += "(";
        for (size_t i = 0; i < f->args.size(); ++i) {
          if (i) out += ",";
          out += term_str(f->args[i]);
        }
        out += ")";
      }
      break;
    }
    case FK::Neg:
      out += "-";
      print(f->a, kAtom, out);
      break;
    case FK::Mul:
      out += rat_str(f->num);
      out += "*";
      print(f->a, kAtom, out);
      break;
    case FK::Add:
    case FK::Sub:
      print(f->a, kSum, out);
      out += f->kind == FK::Add ? " + " : " - ";
      print(f->b, kSum + 1, out);
      break;
    case FK::Min:
      print(f->a, kMin, out);
      out += " ^ ";
      print(f->b, kMin + 1, out);
      break;
    case FK::Max:
      print(f->a, kMax, out);
      out += " v ";
      print(f->b, kMax + 1, out);
      break;
    case FK::Inf:
    case FK::Sup:
      out += f->kind == FK::Inf ? "!" : "?";
      out += f->name;
      out += ". ";
      print(f->a, kQuant, out);
      break;
  }
  if (paren) out += ")";
}
}  // namespace

std::string formula_str(const FormulaPtr& f) {
  std::string out;
  print(f, kQuant, out);
  return out;
}

namespace {
void free_vars_walk(const FormulaPtr& f, std::set<std::string>& bound,
                    std::vector<std::string>& order, std::set<std::string>& seen) {
  if (!f) return;
  switch (f->kind) {
    case FK::Pred: {
      for (const auto& t : f->args) {
        std::vector<std::string> vs;
        std::set<std::string> vseen;
        collect_term_vars(t, vs, vseen);
        for (const auto& v : vs)
          if (!bound.count(v) && seen.insert(v).second) order.push_back(v);
      }
      return;
    }
    case FK::Inf:
    case FK::Sup: {
      bool fresh = bound.insert(f->name).second;
      free_vars_walk(f->a, bound, order, seen);
      if (fresh) bound.erase(f->name);
      return;
    }
    default:
      free_vars_walk(f->a, bound, order, seen);
      free_vars_walk(f->b, bound, order, seen);
      return;
  }
}
}  // namespace

std::vector<std::string> free_variables(const FormulaPtr& f) {
  std::set<std::string> bound, seen;
  std::vector<std::string> order;
  free_vars_walk(f, bound, order, seen);
  return order;
}

namespace {
TermPtr term_subst_checked(const TermPtr& t, const Substitution& s,
                           const std::set<std::string>& bound) {
  if (t->var) {
    if (bound.count(t->name)) return t;
    if (auto r = s.lookup(t->name)) {
      std::vector<std::string> vs;
      std::set<std::string> vseen;
      collect_term_vars(r, vs, vseen);
      for (const auto& v : vs)
        if (bound.count(v))
          throw std::invalid_argument("substitution would capture variable '" +
                                      v + "'");
      return r;
    }
    return t;
  }
  if (t->args.empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(term_subst_checked(a, s, bound));
  return mk_app(t->name, std::move(args));
}

FormulaPtr subst_walk(const FormulaPtr& f, const Substitution& s,
                      std::set<std::string>& bound) {
  if (!f) return f;
  switch (f->kind) {
    case FK::Scalar:
      return f;
    case FK::Pred: {
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      for (const auto& t : f->args) args.push_back(term_subst_checked(t, s, bound));
      return f_pred(f->name, std::move(args));
    }
    case FK::Inf:
    case FK::Sup: {
      bool fresh = bound.insert(f->name).second;
      auto body = subst_walk(f->a, s, bound);
      if (fresh) bound.erase(f->name);
      return f->kind == FK::Inf ? f_inf(f->name, body) : f_sup(f->name, body);
    }
    case FK::Neg:
      return f_neg(subst_walk(f->a, s, bound));
    case FK::Mul:
      return f_mul(f->num, subst_walk(f->a, s, bound));
    default: {
      auto a = subst_walk(f->a, s, bound);
      auto b = subst_walk(f->b, s, bound);
      return binary(f->kind, a, b);
    }
  }
}
}  // namespace

FormulaPtr formula_subst(const FormulaPtr& f, const Substitution& s) {
  std::set<std::string> bound;
  return subst_walk(f, s, bound);
}

// ----------------------------------------------------------- fresh names

std::string NameGen::fresh(const std::string& base) {
  for (uint64_t n = 1;; ++n) {
    std::string cand = base + std::to_string(n);
    if (used.insert(cand).second) return cand;
  }
}

std::string NameGen::claim(const std::string& base) {
  if (used.insert(base).second) return base;
  return fresh(base);
}

namespace {
// simultaneous variable renaming; unlike substitutions there is no validity
// condition, so identity entries and chains are harmless
TermPtr term_rename(const TermPtr& t,
                    const std::map<std::string, std::string>& rename) {
  if (t->var) {
    auto it = rename.find(t->name);
    return it == rename.end() ? t : mk_var(it->second);
  }
  if (t->args.empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(term_rename(a, rename));
  return mk_app(t->name, std::move(args));
}

FormulaPtr std_quant_walk(const FormulaPtr& f, NameGen& gen,
                          std::map<std::string, std::string>& rename) {
  if (!f) return f;
  switch (f->kind) {
    case FK::Scalar:
      return f;
    case FK::Pred: {
      if (rename.empty()) return f;
      std::vector<TermPtr> args;
      for (const auto& t : f->args) args.push_back(term_rename(t, rename));
      return f_pred(f->name, std::move(args));
    }
    case FK::Inf:
    case FK::Sup: {
      std::string nv = gen.claim(f->name);
      auto saved = rename;
      rename[f->name] = nv;
      auto body = std_quant_walk(f->a, gen, rename);
      rename = saved;
      return f->kind == FK::Inf ? f_inf(nv, body) : f_sup(nv, body);
    }
    case FK::Neg:
      return f_neg(std_quant_walk(f->a, gen, rename));
    case FK::Mul:
      return f_mul(f->num, std_quant_walk(f->a, gen, rename));
    default: {
      auto a = std_quant_walk(f->a, gen, rename);
      auto b = std_quant_walk(f->b, gen, rename);
      return binary(f->kind, a, b);
    }
  }
}
}  // namespace

FormulaPtr standardize_quantifiers(const FormulaPtr& f, NameGen& gen) {
  std::map<std::string, std::string> rename;
  return std_quant_walk(f, gen, rename);
}

// ------------------------------------------------------------- clauses

int atom_cmp(const PredAtom& a, const PredAtom& b) {
  if (int c = a.pred.compare(b.pred)) return c < 0 ? -1 : 1;
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (int c = term_cmp(a.args[i], b.args[i])) return c;
  return 0;
}

std::string atom_str(const PredAtom& a) {
  if (a.args.empty()) return a.pred + "()";
  std::string s = a.pred + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    s += term_str(a.args[i]);
  }
  return s + ")";
}

SumClause clause_canon(const SumClause& c) {
  SumClause out;
  Rat constant = 0;
  for (const auto& l : c.lits) {
    if (!l.atom) {
      constant += l.coeff;
      continue;
    }
    bool merged = false;
    for (auto& o : out.lits) {
      if (o.atom && atom_eq(*o.atom, *l.atom)) {
        o.coeff += l.coeff;
        merged = true;
        break;
      }
    }
    if (!merged) out.lits.push_back(l);
  }
  std::erase_if(out.lits, [](const Literal& l) { return l.atom && l.coeff == 0; });
  if (constant != 0 || out.lits.empty())
    out.lits.push_back(Literal{constant, std::nullopt});
  return out;
}

std::vector<std::string> clause_free_vars(const SumClause& c) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& l : c.lits)
    if (l.atom)
      for (const auto& t : l.atom->args) collect_term_vars(t, order, seen);
  return order;
}

SumClause clause_subst(const SumClause& c, const Substitution& s) {
  SumClause out;
  for (const auto& l : c.lits) {
    if (!l.atom) {
      out.lits.push_back(l);
      continue;
    }
    PredAtom a;
    a.pred = l.atom->pred;
    for (const auto& t : l.atom->args) a.args.push_back(term_subst(t, s));
    out.lits.push_back(Literal{l.coeff, std::move(a)});
  }
  return out;
}

FormulaPtr clause_formula(const SumClause& c) {
  FormulaPtr acc;
  for (const auto& l : c.lits) {
    FormulaPtr piece;
    if (!l.atom) {
      piece = f_scalar(l.coeff);
    } else {
      piece = f_pred(l.atom->pred, l.atom->args);
      if (l.coeff == -1 && acc) {
        acc = f_sub(acc, piece);
        continue;
      }
      if (l.coeff != 1) piece = f_mul(l.coeff, piece);
    }
    if (!acc) {
      acc = piece;
    } else if (!l.atom && l.coeff < 0) {
      acc = f_sub(acc, f_scalar(-l.coeff));
    } else {
      acc = f_add(acc, piece);
    }
  }
  return acc ? acc : f_scalar(0);
}

std::string clause_str(const SumClause& c) { return formula_str(clause_formula(c)); }

bool clause_eq(const SumClause& a, const SumClause& b) {
  auto ca = clause_canon(a), cb = clause_canon(b);
  auto key = [](const SumClause& c) {
    std::vector<std::pair<std::string, Rat>> items;
    for (const auto& l : c.lits)
      items.emplace_back(l.atom ? atom_str(*l.atom) : "", l.coeff);
    std::sort(items.begin(), items.end());
    return items;
  };
  return key(ca) == key(cb);
}

Rat clause_constant(const SumClause& c) {
  Rat k = 0;
  for (const auto& l : c.lits)
    if (!l.atom) k += l.coeff;
  return k;
}

SumClause clause_rename_apart(const SumClause& c, NameGen& gen,
                              std::map<std::string, std::string>* renaming) {
  std::map<std::string, TermPtr> m;
  for (const auto& v : clause_free_vars(c)) {
    std::string nv = gen.fresh(v);
    m[v] = mk_var(nv);
    if (renaming) (*renaming)[v] = nv;
  }
  return clause_subst(c, Substitution(std::move(m)));
}

std::string superclause_str(const Superclause& c) {
  std::string s;
  for (size_t i = 0; i < c.disjuncts.size(); ++i) {
    if (i) s += " v ";
    bool paren = c.disjuncts.size() > 1;
    if (paren) s += "(";
    s += clause_str(c.disjuncts[i]);
    if (paren) s += ")";
  }
  return s;
}

std::vector<std::string> superclause_free_vars(const Superclause& c) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& d : c.disjuncts)
    for (const auto& v : clause_free_vars(d))
      if (seen.insert(v).second) order.push_back(v);
  return order;
}

}  // namespace fop
