#include "fop/ground.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace fop {

std::vector<TermPtr> herbrand_terms(const SymbolTable& symbols, int depth) {
  std::vector<std::pair<std::string, int>> funs;  // arity >= 1
  std::vector<TermPtr> consts;
  for (const auto& [name, decl] : symbols.funs) {
    if (decl.arity == 0)
      consts.push_back(mk_app(name));
    else
      funs.emplace_back(name, decl.arity);
  }
  if (consts.empty()) consts.push_back(mk_app("nil"));

  std::vector<TermPtr> all = consts;
  std::set<std::string> seen;
  for (const auto& t : all) seen.insert(term_str(t));
  for (int d = 1; d <= depth; ++d) {
    std::vector<TermPtr> next;
    for (const auto& [name, arity] : funs) {
      // argument tuples over depth <= d-1, at least one argument of depth d-1
      std::vector<size_t> idx(arity, 0);
      while (true) {
        int maxd = 0;
        std::vector<TermPtr> args;
        args.reserve(arity);
        for (int i = 0; i < arity; ++i) {
          args.push_back(all[idx[i]]);
          maxd = std::max(maxd, term_depth(all[idx[i]]));
        }
        if (maxd == d - 1) {
          auto t = mk_app(name, std::move(args));
          if (seen.insert(term_str(t)).second) next.push_back(t);
        }
        int i = arity - 1;
        while (i >= 0 && ++idx[i] == all.size()) idx[i--] = 0;
        if (i < 0) break;
      }
    }
    all.insert(all.end(), next.begin(), next.end());
  }
  std::stable_sort(all.begin(), all.end(), [](const TermPtr& a, const TermPtr& b) {
    int da = term_depth(a), db = term_depth(b);
    if (da != db) return da < db;
    return term_cmp(a, b) < 0;
  });
  return all;
}

GroundProblem ground_subproblem(const ReducedSentence& s,
                                const std::vector<GroundInstance>& instances) {
  GroundProblem out;
  out.instances = instances;
  std::map<std::string, size_t> atom_index;

  auto var_of = [&](const PredAtom& a) -> size_t {
    std::string key = atom_str(a);
    auto it = atom_index.find(key);
    if (it != atom_index.end()) return it->second;
    size_t idx = out.atoms.size();
    atom_index[key] = idx;
    out.atoms.push_back(a);
    auto pd = s.symbols.preds.find(a.pred);
    if (pd == s.symbols.preds.end())
      throw std::invalid_argument("undeclared predicate '" + a.pred + "'");
    out.milp.vars.push_back(
        MilpVar{key, pd->second.integral, pd->second.lo, pd->second.hi});
    return idx;
  };

  for (const auto& inst : instances) {
    if (inst.clause < 0 || inst.clause >= static_cast<int>(s.clauses.size()))
      throw std::invalid_argument("instance references a missing clause");
    SumClause g = clause_subst(s.clauses[inst.clause], inst.subst);
    if (!clause_free_vars(g).empty())
      throw std::invalid_argument("instance substitution does not ground the clause");
    g = clause_canon(g);
    LinearIneq row;
    row.constant = 0;
    for (const auto& lit : g.lits) {
      if (!lit.atom) {
        row.constant += lit.coeff;
        continue;
      }
      size_t idx = var_of(*lit.atom);
      if (row.coeffs.size() <= idx) row.coeffs.resize(idx + 1, Rat(0));
      row.coeffs[idx] += lit.coeff;
    }
    out.milp.rows.push_back(std::move(row));
  }
  for (auto& r : out.milp.rows) r.coeffs.resize(out.milp.vars.size(), Rat(0));
  return out;
}

// ------------------------------------------------------------- naive loop

namespace {

// big-endian odometer: the first variable is the most significant digit
Substitution decode_subst(const std::vector<std::string>& vars,
                          const std::vector<TermPtr>& terms,
                          unsigned long long idx) {
  std::map<std::string, TermPtr> m;
  unsigned long long rest = idx;
  for (size_t i = vars.size(); i-- > 0;) {
    m[vars[i]] = terms[rest % terms.size()];
    rest /= terms.size();
  }
  return Substitution(std::move(m));
}

int subst_depth(const Substitution& s) {
  int d = 0;
  for (const auto& [v, t] : s.pairs()) d = std::max(d, term_depth(t));
  return d;
}

}  // namespace

SymbolTable grounding_symbols(const ReducedSentence& s) {
  std::set<std::string> used;
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
    if (t->var) return;
    used.insert(t->name);
    for (const auto& a : t->args) walk(a);
  };
  for (const auto& c : s.clauses)
    for (const auto& l : c.lits)
      if (l.atom)
        for (const auto& a : l.atom->args) walk(a);
  SymbolTable out = s.symbols;
  out.funs.clear();
  for (const auto& name : used) {
    auto it = s.symbols.funs.find(name);
    if (it != s.symbols.funs.end()) out.funs.insert(*it);
    // "nil" shows up in derived clauses when the universe had no constants;
    // herbrand_terms regenerates it, so an undeclared occurrence is fine
  }
  return out;
}

std::vector<GroundInstance> full_grounding(const ReducedSentence& s, int depth,
                                           unsigned long long pool_cap) {
  auto terms = herbrand_terms(grounding_symbols(s), depth);
  std::vector<GroundInstance> pool;
  for (size_t c = 0; c < s.clauses.size(); ++c) {
    auto vars = clause_free_vars(s.clauses[c]);
    unsigned long long total = 1;
    bool too_many = false;
    for (size_t i = 0; i < vars.size() && !too_many; ++i) {
      total *= terms.size();
      if (total > pool_cap) too_many = true;
    }
    if (too_many)
      throw MilpError("instance pool too large at depth " + std::to_string(depth));
    for (unsigned long long idx = 0; idx < total; ++idx)
      pool.push_back(GroundInstance{static_cast<int>(c),
                                    decode_subst(vars, terms, idx)});
  }
  return pool;
}

NaiveResult naive_infer(const ReducedSentence& s, const NaiveOptions& opts) {
  NaiveResult out;
  if (s.clauses.empty()) return out;

  // dovetail over (depth d, subset size k) along diagonals t = d + k
  for (int t = 1;; ++t) {
    bool visited_any_cell = false;
    for (int d = 0; d <= std::min(t - 1, opts.max_depth); ++d) {
      int k = t - d;
      std::vector<GroundInstance> pool = full_grounding(s, d);
      if (k > static_cast<int>(pool.size())) continue;
      visited_any_cell = true;

      std::vector<size_t> comb(k);
      for (int i = 0; i < k; ++i) comb[i] = i;
      while (true) {
        int maxd = 0;
        for (size_t i : comb) maxd = std::max(maxd, subst_depth(pool[i].subst));
        // subsets without a depth-d term already ran in an earlier cell
        if (maxd == d) {
          std::vector<GroundInstance> chosen;
          chosen.reserve(k);
          for (size_t i : comb) chosen.push_back(pool[i]);
          GroundProblem gp = ground_subproblem(s, chosen);
          ++out.subproblems_tried;
          MilpResult mr = milp_decide(gp.milp, MilpOptions{opts.cut_budget, nullptr});
          if (mr.status == MilpStatus::Infeasible) {
            out.status = MilpStatus::Infeasible;
            out.problem = std::move(gp);
            out.milp = std::move(mr);
            return out;
          }
          if (out.subproblems_tried >= opts.max_subproblems) return out;
        }
        int i = k - 1;
        while (i >= 0 && comb[i] == pool.size() - k + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      }
    }
    if (!visited_any_cell && t > opts.max_depth) return out;
  }
}

// ----------------------------------------------------------- concrete mode

namespace {

// folds every function application down to an object constant
TermPtr rewrite_known(const TermPtr& t, const ProblemFile& p) {
  if (t->var) throw std::invalid_argument("free variable survived expansion");
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(rewrite_known(a, p));
  if (args.empty() &&
      std::find(p.objects.begin(), p.objects.end(), t->name) != p.objects.end())
    return mk_app(t->name);
  std::vector<std::string> key;
  key.reserve(args.size());
  for (const auto& a : args) key.push_back(a->name);
  auto it = p.fun_table.find({t->name, key});
  if (it == p.fun_table.end())
    throw std::invalid_argument("no table entry for " + term_str(mk_app(t->name, args)));
  return mk_app(it->second);
}

}  // namespace

FormulaPtr concrete_expand(const ProblemFile& p) {
  if (p.objects.empty())
    throw std::invalid_argument("concrete mode needs an objects directive");
  if (!p.sentence) throw std::invalid_argument("no sentence to expand");
  FormulaPtr f = p.sentence;
  auto frees = free_variables(f);
  for (size_t i = frees.size(); i-- > 0;) f = f_inf(frees[i], f);

  struct Expander {
    const ProblemFile& p;
    FormulaPtr operator()(const FormulaPtr& f) {
      switch (f->kind) {
        case FK::Scalar:
        case FK::Pred:
          return f;
        case FK::Neg:
          return f_neg((*this)(f->a));
        case FK::Mul:
          return f_mul(f->num, (*this)(f->a));
        case FK::Add:
          return f_add((*this)(f->a), (*this)(f->b));
        case FK::Sub:
          return f_sub((*this)(f->a), (*this)(f->b));
        case FK::Min:
          return f_min((*this)(f->a), (*this)(f->b));
        case FK::Max:
          return f_max((*this)(f->a), (*this)(f->b));
        case FK::Inf:
        case FK::Sup: {
          FormulaPtr acc;
          for (const auto& obj : p.objects) {
            Substitution s({{f->name, mk_app(obj)}});
            auto inst = (*this)(formula_subst(f->a, s));
            if (!acc)
              acc = inst;
            else
              acc = f->kind == FK::Inf ? f_min(acc, inst) : f_max(acc, inst);
          }
          return acc;
        }
      }
      return f;
    }
  } expand{p};
  f = expand(f);

  struct Folder {
    const ProblemFile& p;
    FormulaPtr operator()(const FormulaPtr& f) {
      switch (f->kind) {
        case FK::Scalar:
          return f;
        case FK::Pred: {
          std::vector<TermPtr> args;
          args.reserve(f->args.size());
          for (const auto& t : f->args) args.push_back(rewrite_known(t, p));
          return f_pred(f->name, std::move(args));
        }
        case FK::Neg:
          return f_neg((*this)(f->a));
        case FK::Mul:
          return f_mul(f->num, (*this)(f->a));
        case FK::Add:
          return f_add((*this)(f->a), (*this)(f->b));
        case FK::Sub:
          return f_sub((*this)(f->a), (*this)(f->b));
        case FK::Min:
          return f_min((*this)(f->a), (*this)(f->b));
        case FK::Max:
          return f_max((*this)(f->a), (*this)(f->b));
        default:
          throw std::logic_error("quantifier survived expansion");
      }
    }
  } fold{p};
  return fold(f);
}

namespace {

ConcreteGround build_concrete(const SymbolTable& symbols, const FormulaPtr& ground) {
  ConcreteGround out;
  MinNormalSentence mn = to_min_normal(ground, symbols);

  bool all_single = true;
  for (const auto& sc : mn.superclauses)
    if (sc.disjuncts.size() > 1) all_single = false;

  if (all_single) {
    // no disjunctions, so the indicator construction would be a no-op
    out.symbols = mn.symbols;
    for (const auto& sc : mn.superclauses) out.clauses.push_back(sc.disjuncts[0]);
  } else {
    ReducedSentence rs = to_reduced_normal(mn);
    out.symbols = rs.symbols;
    out.clauses = rs.clauses;
  }

  std::map<std::string, size_t> atom_index;
  auto var_of = [&](const PredAtom& a) -> size_t {
    std::string key = atom_str(a);
    auto it = atom_index.find(key);
    if (it != atom_index.end()) return it->second;
    size_t idx = out.atoms.size();
    atom_index[key] = idx;
    out.atoms.push_back(a);
    const auto& pd = out.symbols.preds.at(a.pred);
    out.milp.vars.push_back(MilpVar{key, pd.integral, pd.lo, pd.hi});
    return idx;
  };
  for (const auto& c : out.clauses) {
    LinearIneq row;
    row.constant = 0;
    for (const auto& lit : c.lits) {
      if (!lit.atom) {
        row.constant += lit.coeff;
        continue;
      }
      size_t idx = var_of(*lit.atom);
      if (row.coeffs.size() <= idx) row.coeffs.resize(idx + 1, Rat(0));
      row.coeffs[idx] += lit.coeff;
    }
    out.milp.rows.push_back(std::move(row));
  }
  for (auto& r : out.milp.rows) r.coeffs.resize(out.milp.vars.size(), Rat(0));
  return out;
}

}  // namespace

ConcreteGround concrete_ground(const ProblemFile& p) {
  return build_concrete(p.symbols, concrete_expand(p));
}

ConcreteResult concrete_value(const ProblemFile& p, int cut_budget) {
  FormulaPtr f = concrete_expand(p);
  IntervalBound bounds = interval_of(f, p.symbols);

  bool integral = true;
  for (const auto& [name, decl] : p.symbols.preds)
    if (!decl.integral) integral = false;
  Rat eps(1);
  if (integral) eps = epsilon_of(f, p.symbols);

  // epigraph: maximize w subject to f - eps*w >= 0; the value is eps*w
  SymbolTable syms = p.symbols;
  NameGen gen;
  for (const auto& [n, d] : syms.preds) gen.reserve(n);
  for (const auto& [n, d] : syms.funs) gen.reserve(n);
  std::string w = gen.claim("w");
  Rat wlo = bounds.lo / eps, whi = bounds.hi / eps;
  if (integral) {
    wlo = rat_ceil(wlo);
    whi = rat_floor(whi);
  }
  syms.preds[w] = PredDecl{0, wlo, whi, integral};

  FormulaPtr epi = f_sub(f, f_mul(eps, f_pred(w, {})));
  ConcreteGround cg = build_concrete(syms, epi);

  std::vector<Rat> objective(cg.milp.vars.size(), Rat(0));
  bool found = false;
  for (size_t j = 0; j < cg.atoms.size(); ++j)
    if (cg.atoms[j].pred == w) {
      objective[j] = 1;
      found = true;
    }
  ConcreteResult out;
  if (!found) {
    // the sentence mentions no atom at all: its value is the constant bound
    out.status = MilpStatus::Feasible;
    out.value = bounds.lo;
    return out;
  }
  MilpOptions opts;
  opts.cut_budget = cut_budget;
  opts.objective = &objective;
  MilpResult mr = milp_decide(cg.milp, opts);
  out.status = mr.status;
  if (mr.status == MilpStatus::Feasible) {
    out.value = eps * *mr.optimum;
    for (size_t j = 0; j < cg.atoms.size(); ++j)
      if (cg.atoms[j].pred != w)
        out.assignment.emplace_back(atom_str(cg.atoms[j]), mr.point[j]);
  }
  return out;
}

}  // namespace fop
