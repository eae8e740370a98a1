#include "fop/lifted.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "fop/eval.hpp"
#include "fop/normal.hpp"

namespace fop {

namespace {

void term_vars(const TermPtr& t, std::set<std::string>& out) {
  if (t->var) {
    out.insert(t->name);
    return;
  }
  for (const auto& a : t->args) term_vars(a, out);
}

// first-appearance atom dictionary, textual identity
struct AtomDict {
  std::vector<PredAtom> atoms;
  std::map<std::string, size_t> index;

  size_t of(const PredAtom& a) {
    std::string key = atom_str(a);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    size_t j = atoms.size();
    atoms.push_back(a);
    index.emplace(std::move(key), j);
    return j;
  }
};

LinearIneq clause_row(const SumClause& c, AtomDict& dict) {
  LinearIneq row;
  row.constant = 0;
  for (const auto& l : c.lits) {
    if (!l.atom) {
      row.constant += l.coeff;
      continue;
    }
    size_t j = dict.of(*l.atom);
    if (row.coeffs.size() <= j) row.coeffs.resize(j + 1, Rat(0));
    row.coeffs[j] += l.coeff;
  }
  return row;
}

SumClause bound_clause(const SymbolTable& symbols, const std::string& pred,
                       BoundSide side, std::vector<TermPtr> args) {
  auto it = symbols.preds.find(pred);
  if (it == symbols.preds.end())
    throw MilpError("bound on undeclared predicate '" + pred + "'");
  const PredDecl& d = it->second;
  if (static_cast<int>(args.size()) != d.arity)
    throw MilpError("bound on '" + pred + "' expects " +
                    std::to_string(d.arity) + " argument(s)");
  Rat lo = d.integral ? rat_ceil(d.lo) : d.lo;
  Rat hi = d.integral ? rat_floor(d.hi) : d.hi;
  SumClause c;
  if (side == BoundSide::Upper) {
    c.lits.push_back(Literal{hi, std::nullopt});
    c.lits.push_back(Literal{Rat(-1), PredAtom{pred, std::move(args)}});
  } else {
    c.lits.push_back(Literal{Rat(1), PredAtom{pred, std::move(args)}});
    c.lits.push_back(Literal{Rat(-lo), std::nullopt});
  }
  return clause_canon(c);
}

// variable-renamed key so textually distinct copies of one clause collide
std::string alpha_key(const SumClause& c) {
  auto vars = clause_free_vars(c);
  if (vars.empty()) return clause_str(c);
  std::map<std::string, TermPtr> m;
  for (size_t i = 0; i < vars.size(); ++i)
    m[vars[i]] = mk_var("~a" + std::to_string(i + 1));
  return clause_str(clause_subst(c, Substitution(std::move(m))));
}

}  // namespace

SumClause implicit_clause(const SymbolTable& symbols, const std::string& pred,
                          BoundSide side, NameGen& gen) {
  auto it = symbols.preds.find(pred);
  if (it == symbols.preds.end())
    throw MilpError("bound on undeclared predicate '" + pred + "'");
  std::vector<TermPtr> args;
  for (int i = 0; i < it->second.arity; ++i)
    args.push_back(mk_var(gen.fresh("v")));
  return bound_clause(symbols, pred, side, std::move(args));
}

std::optional<LiftedCut> lifted_cut(const ReducedSentence& s,
                                    const CutRequest& req,
                                    const std::vector<SumClause>& prior) {
  if (req.lambda.size() != req.picks.size())
    throw MilpError("cut request needs one multiplier per pick");
  if (!req.weakening.empty() && req.weakening.size() != req.picks.size())
    throw MilpError("cut request weakening must match the picks");
  if (req.picks.empty()) return std::nullopt;

  NameGen gen;
  for (const auto& [n, d] : s.symbols.preds) gen.reserve(n);
  for (const auto& [n, d] : s.symbols.funs) gen.reserve(n);
  gen.reserve("nil");
  std::set<std::string> outside;  // names the request may mention
  for (const auto& c : s.clauses)
    for (const auto& v : clause_free_vars(c)) outside.insert(v);
  for (const auto& p : req.picks) {
    for (const auto& [v, t] : p.subst) term_vars(t, outside);
    for (const auto& t : p.args) term_vars(t, outside);
  }
  for (const auto& v : outside) gen.reserve(v);

  // instantiate the picks; clause copies are standardized apart first, then
  // the substitution lands on the renamed variables
  std::vector<SumClause> picked;
  for (const auto& p : req.picks) {
    if (p.kind == CutPick::Bound) {
      picked.push_back(bound_clause(s.symbols, p.pred, p.side, p.args));
      continue;
    }
    const std::vector<SumClause>& source =
        p.kind == CutPick::Clause ? s.clauses : prior;
    const char* what = p.kind == CutPick::Clause ? "clause" : "earlier cut";
    if (p.index < 0 || p.index >= static_cast<int>(source.size()))
      throw MilpError(std::string("pick references a missing ") + what);
    std::map<std::string, std::string> renaming;
    SumClause copy = clause_rename_apart(source[p.index], gen, &renaming);
    std::map<std::string, TermPtr> m;
    for (const auto& [v, t] : p.subst) {
      auto r = renaming.find(v);
      if (r == renaming.end())
        throw MilpError("substitution names '" + v +
                        "', not a variable of the picked " + what);
      m[r->second] = t;
    }
    if (!m.empty()) copy = clause_subst(copy, Substitution(std::move(m)));
    picked.push_back(clause_canon(copy));
  }

  // linear relaxation over the textually distinct atoms of the picks
  AtomDict dict;
  std::vector<LinearIneq> rows;
  rows.reserve(picked.size());
  for (const auto& c : picked) rows.push_back(clause_row(c, dict));

  MilpProblem prob;
  for (const auto& a : dict.atoms) {
    auto it = s.symbols.preds.find(a.pred);
    if (it == s.symbols.preds.end())
      throw MilpError("undeclared predicate '" + a.pred + "' in a pick");
    prob.vars.push_back(MilpVar{atom_str(a), it->second.integral,
                                it->second.lo, it->second.hi});
  }
  tighten_integer_bounds(prob);
  for (auto& r : rows) {
    r.coeffs.resize(prob.vars.size(), Rat(0));
    prob.rows.push_back(std::move(r));
  }

  Tableau t = to_equality_form(prob);
  std::vector<Rat> lam = req.lambda;
  lam.resize(t.rows.size(), Rat(0));
  auto cut = gomory_cut(t, lam, CutMode::Auto);
  if (!cut) return std::nullopt;

  std::vector<Rat> weak;
  if (!req.weakening.empty()) {
    weak = req.weakening;
    weak.resize(t.rows.size(), Rat(0));
  }
  LinearIneq lin = eliminate_slacks(*cut, t, weak);
  lin = round_integer_constant(lin, prob.vars);

  // read the inequality back as a clause, atoms in canonical order
  std::vector<std::pair<PredAtom, Rat>> lits;
  for (size_t j = 0; j < dict.atoms.size(); ++j)
    if (lin.coeffs[j] != 0) lits.emplace_back(dict.atoms[j], lin.coeffs[j]);
  std::sort(lits.begin(), lits.end(),
            [](const auto& x, const auto& y) {
              return atom_cmp(x.first, y.first) < 0;
            });
  SumClause out;
  for (auto& [a, c] : lits) out.lits.push_back(Literal{c, a});
  if (lin.constant != 0 || out.lits.empty())
    out.lits.push_back(Literal{lin.constant, std::nullopt});

  // standardize the result apart from the host sentence
  auto vars = clause_free_vars(out);
  if (!vars.empty()) {
    std::map<std::string, TermPtr> m;
    for (const auto& v : vars) m[v] = mk_var(gen.fresh(v));
    out = clause_subst(out, Substitution(std::move(m)));
  }
  return LiftedCut{clause_canon(out), req};
}

std::string sentence_digest(const FormulaPtr& f) {
  std::string s = formula_str(f);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

// --------------------------------------------------------- refutation loop

namespace {

// map a tableau multiplier vector back to the picks that generated the rows
CutRequest request_from(const std::vector<Rat>& lam, const Tableau& t,
                        const GroundProblem& gp, size_t n_orig) {
  CutRequest req;
  for (size_t r = 0; r < t.rows.size() && r < lam.size(); ++r) {
    if (lam[r] == 0) continue;
    const RowOrigin& o = t.rows[r].origin;
    CutPick p;
    if (o.kind == RowOrigin::User) {
      const GroundInstance& gi = gp.instances[o.index];
      if (gi.clause < static_cast<int>(n_orig)) {
        p.kind = CutPick::Clause;
        p.index = gi.clause;
        p.subst = gi.subst.pairs();
      } else {
        p.kind = CutPick::PriorCut;
        p.index = gi.clause - static_cast<int>(n_orig);
      }
    } else if (o.kind == RowOrigin::UpperBound) {
      p.kind = CutPick::Bound;
      p.side = BoundSide::Upper;
      p.pred = gp.atoms[o.index].pred;
      p.args = gp.atoms[o.index].args;
    } else {
      p.kind = CutPick::PriorCut;
      p.index = o.index;
    }
    req.picks.push_back(std::move(p));
    req.lambda.push_back(lam[r]);
  }
  return req;
}

// reorder the per-tableau-row multipliers into the stored certificate shape:
// instance rows, this depth's cut rows, upper bounds, then the lower-bound
// residuals that absorb what is left of each column
TraceTerminal build_terminal(const Tableau& t, const std::vector<Rat>& nu,
                             const std::vector<GroundInstance>& instances,
                             size_t n_orig, size_t prior_cuts,
                             size_t total_cuts) {
  size_t I = instances.size();
  size_t A = t.n_structurals;
  TraceTerminal out;
  out.grounding = instances;
  for (size_t k = prior_cuts; k < total_cuts; ++k)
    out.grounding.push_back(
        GroundInstance{static_cast<int>(n_orig + k), Substitution{}});

  std::vector<Rat> lower(A, Rat(0));
  for (size_t r = 0; r < t.rows.size(); ++r) {
    if (nu[r] == 0) continue;
    for (size_t j = 0; j < A; ++j) {
      Rat a = t.coeff(r, j);
      if (a != 0) lower[j] -= nu[r] * a;
    }
  }
  out.farkas.reserve(t.rows.size() + A);
  for (size_t r = 0; r < I; ++r) out.farkas.push_back(nu[r]);
  for (size_t r = I + A; r < t.rows.size(); ++r) out.farkas.push_back(nu[r]);
  for (size_t r = I; r < I + A; ++r) out.farkas.push_back(nu[r]);
  for (auto& d : lower) {
    if (d < 0) throw std::logic_error("negative lower-bound residual");
    out.farkas.push_back(std::move(d));
  }
  return out;
}

bool finite_universe(const ReducedSentence& s) {
  SymbolTable g = grounding_symbols(s);
  for (const auto& [n, d] : g.funs)
    if (d.arity > 0) return false;
  return true;
}

// clause -> structural tableau row (shifted constant), matching add_row
std::pair<std::vector<Rat>, Rat> clause_tab_row(
    const SumClause& c, const Tableau& t,
    const std::map<std::string, size_t>& atom_index) {
  std::vector<Rat> a(t.n_structurals, Rat(0));
  Rat b = 0;
  for (const auto& l : c.lits) {
    if (!l.atom) {
      b += l.coeff;
      continue;
    }
    auto it = atom_index.find(atom_str(*l.atom));
    if (it == atom_index.end())
      throw std::logic_error("cut atom escapes the grounding");
    a[it->second] += l.coeff;
  }
  for (size_t j = 0; j < a.size(); ++j)
    if (a[j] != 0) b += a[j] * t.cols[j].lo;
  return {std::move(a), std::move(b)};
}

}  // namespace

RefuteResult refute(const ReducedSentence& s, const RefuteOptions& opts) {
  RefuteResult out;
  size_t n_orig = s.clauses.size();
  std::vector<SumClause> cuts;
  std::set<std::string> seen;
  bool saturated = finite_universe(s);
  int max_depth = saturated ? 0 : opts.max_depth;

  for (int depth = 0; depth <= max_depth; ++depth) {
    ReducedSentence host = s;
    for (const auto& c : cuts) {
      host.clauses.push_back(c);
      host.origins.push_back(ReducedSentence::Origin{-1, -1});
    }
    std::vector<GroundInstance> instances;
    try {
      instances = full_grounding(host, depth, opts.pool_cap);
    } catch (const MilpError&) {
      break;  // the pool blew up; report what the budget allowed
    }
    size_t prior_cuts = cuts.size();
    GroundProblem gp = ground_subproblem(host, instances);
    tighten_integer_bounds(gp.milp);
    Tableau t = to_equality_form(gp.milp);
    std::map<std::string, size_t> atom_index;
    for (size_t j = 0; j < gp.atoms.size(); ++j)
      atom_index[atom_str(gp.atoms[j])] = j;

    auto try_lambda = [&](const std::vector<Rat>& lam) -> bool {
      CutRequest req = request_from(lam, t, gp, n_orig);
      if (req.picks.empty()) return false;
      std::optional<LiftedCut> lc = lifted_cut(s, req, cuts);
      if (!lc) return false;
      if (!seen.insert(alpha_key(lc->clause)).second) return false;
      bool has_atom = false;
      Rat constant = 0;
      for (const auto& l : lc->clause.lits) {
        if (l.atom)
          has_atom = true;
        else
          constant += l.coeff;
      }
      if (!has_atom && constant >= 0) return false;  // vacuous

      ++out.cuts_used;
      out.trace.steps.push_back(TraceStep{lc->request, clause_str(lc->clause)});
      cuts.push_back(lc->clause);

      // the same clause joins the working tableau as a plain row
      auto [a, b] = clause_tab_row(lc->clause, t, atom_index);
      t.add_row(std::move(a), std::move(b),
                RowOrigin{RowOrigin::Cut, static_cast<int>(cuts.size() - 1)});
      return true;
    };

    while (true) {
      SimplexResult lp = simplex_solve(t);
      if (lp.status == LpStatus::Infeasible) {
        out.status = MilpStatus::Infeasible;
        out.trace.terminal = build_terminal(t, lp.farkas.row_mults, instances,
                                            n_orig, prior_cuts, cuts.size());
        return out;
      }
      bool integral = true;
      for (size_t j = 0; j < gp.milp.vars.size() && integral; ++j)
        if (gp.milp.vars[j].integral && !rat_is_integer(lp.point[j]))
          integral = false;
      if (integral) {
        if (saturated) {
          // complete grounding with an integral point: a countermodel
          out.status = MilpStatus::Feasible;
          return out;
        }
        break;  // inconclusive at this depth
      }
      if (out.cuts_used >= opts.cut_budget) return out;

      std::vector<std::pair<Rat, size_t>> cand;
      for (size_t r = 0; r < t.rows.size(); ++r) {
        int bc = lp.basis[r];
        if (bc < 0 || !t.cols[bc].integral) continue;
        Rat f = rat_frac(lp.basic_value[r]);
        if (f == 0) continue;
        cand.emplace_back(std::move(f), r);
      }
      std::stable_sort(cand.begin(), cand.end(),
                       [](const auto& x, const auto& y) {
                         return x.first > y.first;
                       });
      bool accepted = false;
      for (const auto& [f, r] : cand)
        if (try_lambda(lp.row_mults[r])) {
          accepted = true;
          break;
        }
      if (!accepted) {
        for (int d = 2; d <= 4 && !accepted; ++d)
          for (size_t r = 0; r < t.rows.size() && !accepted; ++r)
            for (int pn = 1; pn < d && !accepted; ++pn) {
              std::vector<Rat> lam(t.rows.size(), Rat(0));
              lam[r] = rat_make(pn, d);
              accepted = try_lambda(lam);
            }
        for (int d = 2; d <= 3 && !accepted; ++d)
          for (size_t r = 0; r < t.rows.size() && !accepted; ++r)
            for (size_t r2 = r + 1; r2 < t.rows.size() && !accepted; ++r2)
              for (int pn = 1; pn < d && !accepted; ++pn)
                for (int qn = 1; qn < d && !accepted; ++qn) {
                  std::vector<Rat> lam(t.rows.size(), Rat(0));
                  lam[r] = rat_make(pn, d);
                  lam[r2] = rat_make(qn, d);
                  accepted = try_lambda(lam);
                }
      }
      if (!accepted) break;  // stalled; take the next depth
    }
  }
  return out;
}

ProofTrace lift_ground_proof(const ReducedSentence& s, const GroundProblem& gp,
                             const MilpResult& mr) {
  if (mr.status != MilpStatus::Infeasible)
    throw MilpError("only an infeasible run lifts to a proof");
  ProofTrace out;
  size_t n_orig = s.clauses.size();
  MilpProblem q = gp.milp;
  tighten_integer_bounds(q);
  Tableau t = to_equality_form(q);
  std::map<std::string, size_t> atom_index;
  for (size_t j = 0; j < gp.atoms.size(); ++j)
    atom_index[atom_str(gp.atoms[j])] = j;

  std::vector<SumClause> derived;
  for (const auto& step : mr.cuts) {
    CutRequest req = request_from(step.lambda, t, gp, n_orig);
    std::optional<LiftedCut> lc = lifted_cut(s, req, derived);
    if (!lc) throw MilpError("ground cut does not lift");
    out.steps.push_back(TraceStep{lc->request, clause_str(lc->clause)});
    derived.push_back(lc->clause);
    auto [a, b] = clause_tab_row(lc->clause, t, atom_index);
    if (a != step.reduced.coeffs)
      throw MilpError("lifted clause diverges from the ground cut");
    t.add_row(std::move(a), std::move(b),
              RowOrigin{RowOrigin::Cut, static_cast<int>(derived.size() - 1)});
  }
  if (mr.farkas.row_mults.size() != t.rows.size())
    throw MilpError("certificate does not match the replayed tableau");
  out.terminal = build_terminal(t, mr.farkas.row_mults, gp.instances, n_orig,
                                0, derived.size());
  return out;
}

// ------------------------------------------------------------- entailment

EntailResult refute_sentence(const FormulaPtr& s, const SymbolTable& symbols,
                             const RefuteOptions& opts) {
  EntailResult out;
  out.refutand = s;
  ReducedSentence rs = to_reduced_normal(to_min_normal(s, symbols));
  RefuteResult rr = refute(rs, opts);
  out.status = rr.status;
  out.trace = std::move(rr.trace);
  out.trace.digest = sentence_digest(s);
  out.cuts_used = rr.cuts_used;
  return out;
}

EntailResult entails(const FormulaPtr& s, const FormulaPtr& s2,
                     const SymbolTable& symbols, const RefuteOptions& opts) {
  Rat eps;
  try {
    epsilon_of(s, symbols);
    eps = epsilon_of(s2, symbols);
  } catch (const FragmentError&) {
    throw FragmentError(
        "entailment is decided on the integer fragment only; "
        "use epsilon-entailment for real-sorted sentences");
  }
  Rat margin = Rat(-eps / 2);
  FormulaPtr refutand = f_min(s, f_sub(f_scalar(margin), s2));
  return refute_sentence(refutand, symbols, opts);
}

EntailResult epsilon_entails(const FormulaPtr& s, const FormulaPtr& s2,
                             const Rat& eps, const SymbolTable& symbols,
                             const RefuteOptions& opts) {
  FormulaPtr refutand = f_min(s, f_sub(f_scalar(eps), s2));
  return refute_sentence(refutand, symbols, opts);
}

// ---------------------------------------------------------- value bounds

ValueBounds infer_value(const FormulaPtr& s, const SymbolTable& symbols,
                        const RefuteOptions& opts) {
  IntervalBound range = interval_of(s, symbols);
  ValueBounds out;
  out.upper = range.hi;

  SymbolTable syms = symbols;
  NameGen gen;
  for (const auto& [n, d] : syms.preds) gen.reserve(n);
  for (const auto& [n, d] : syms.funs) gen.reserve(n);
  for (const auto& v : free_variables(s)) gen.reserve(v);
  std::string z = gen.claim("z");
  syms.preds[z] = PredDecl{0, range.lo, range.hi, false};

  // epigraph sentence: s - z is feasible exactly when value(s) >= z
  FormulaPtr g = f_sub(s, f_pred(z));
  ReducedSentence rs = to_reduced_normal(to_min_normal(g, syms));
  bool saturated = finite_universe(rs);
  int max_depth = saturated ? 0 : opts.max_depth;

  for (int depth = 0; depth <= max_depth; ++depth) {
    std::vector<GroundInstance> instances;
    try {
      instances = full_grounding(rs, depth, opts.pool_cap);
    } catch (const MilpError&) {
      break;
    }
    GroundProblem gp = ground_subproblem(rs, instances);
    std::vector<Rat> obj(gp.milp.vars.size(), Rat(0));
    bool has_z = false;
    for (size_t j = 0; j < gp.atoms.size(); ++j)
      if (gp.atoms[j].pred == z && gp.atoms[j].args.empty()) {
        obj[j] = 1;
        has_z = true;
      }
    if (!has_z) continue;

    MilpOptions mo;
    mo.cut_budget = opts.cut_budget;
    mo.objective = &obj;
    MilpResult mr = milp_decide(gp.milp, mo);
    if (mr.status == MilpStatus::Feasible && mr.optimum) {
      if (*mr.optimum < out.upper) out.upper = *mr.optimum;
      if (saturated) {
        out.lower = *mr.optimum;
        out.exact = true;
        return out;
      }
    } else if (mr.status == MilpStatus::BudgetExhausted) {
      // fall back to the plain relaxation bound at this depth
      MilpProblem q = gp.milp;
      tighten_integer_bounds(q);
      SimplexResult lp = simplex_solve(to_equality_form(q), &obj);
      if (lp.status == LpStatus::Optimal && lp.objective < out.upper)
        out.upper = lp.objective;
    } else if (mr.status == MilpStatus::Infeasible) {
      // cannot happen: z = range.lo satisfies every clause of s - z
      break;
    }
  }

  // model-side lower bound from small domains
  for (int n = 1; n <= 2; ++n) {
    try {
      Rat v = brute_force_value(s, symbols, n);
      if (!out.lower || v > *out.lower) out.lower = v;
    } catch (const EvalError&) {
      break;  // family over the enumeration cap
    }
  }
  if (out.lower && *out.lower == out.upper) out.exact = true;
  return out;
}

// ------------------------------------------------------------ verification

VerifyResult verify_trace(const FormulaPtr& s, const SymbolTable& symbols,
                          const ProofTrace& t) {
  VerifyResult out;
  if (sentence_digest(s) != t.digest) {
    out.failed_step = -2;
    out.message = "trace was made for a different sentence";
    return out;
  }
  ReducedSentence rs;
  try {
    rs = to_reduced_normal(to_min_normal(s, symbols));
  } catch (const std::exception& e) {
    out.failed_step = -2;
    out.message = e.what();
    return out;
  }

  std::vector<SumClause> derived;
  for (size_t i = 0; i < t.steps.size(); ++i) {
    out.failed_step = static_cast<int>(i);
    std::optional<LiftedCut> lc;
    try {
      lc = lifted_cut(rs, t.steps[i].request, derived);
    } catch (const std::exception& e) {
      out.message = e.what();
      return out;
    }
    if (!lc) {
      out.message = "request yields no cut (combination already integral)";
      return out;
    }
    if (clause_str(lc->clause) != t.steps[i].clause) {
      out.message = "re-derived clause differs: " + clause_str(lc->clause);
      return out;
    }
    derived.push_back(lc->clause);
  }

  out.failed_step = -1;
  ReducedSentence host = rs;
  for (const auto& c : derived) {
    host.clauses.push_back(c);
    host.origins.push_back(ReducedSentence::Origin{-1, -1});
  }
  GroundProblem gp;
  try {
    gp = ground_subproblem(host, t.terminal.grounding);
  } catch (const std::exception& e) {
    out.message = e.what();
    return out;
  }
  tighten_integer_bounds(gp.milp);
  size_t I = gp.milp.rows.size();
  size_t A = gp.milp.vars.size();
  if (t.terminal.farkas.size() != I + 2 * A) {
    out.message = "certificate length mismatch";
    return out;
  }
  for (const auto& v : t.terminal.farkas)
    if (v < 0) {
      out.message = "negative multiplier";
      return out;
    }
  for (size_t j = 0; j < A; ++j) {
    Rat sum = 0;
    for (size_t r = 0; r < I; ++r) {
      const auto& coeffs = gp.milp.rows[r].coeffs;
      if (j < coeffs.size() && coeffs[j] != 0)
        sum += t.terminal.farkas[r] * coeffs[j];
    }
    sum -= t.terminal.farkas[I + j];      // u_j - x_j >= 0
    sum += t.terminal.farkas[I + A + j];  // x_j - l_j >= 0
    if (sum != 0) {
      out.message = "multipliers do not cancel " + gp.milp.vars[j].name;
      return out;
    }
  }
  Rat total = 0;
  for (size_t r = 0; r < I; ++r)
    total += t.terminal.farkas[r] * gp.milp.rows[r].constant;
  for (size_t j = 0; j < A; ++j) {
    total += t.terminal.farkas[I + j] * gp.milp.vars[j].hi;
    total -= t.terminal.farkas[I + A + j] * gp.milp.vars[j].lo;
  }
  if (total >= 0) {
    out.message = "combination is not a contradiction";
    return out;
  }
  out.valid = true;
  out.failed_step = 0;
  out.message.clear();
  return out;
}

}  // namespace fop
