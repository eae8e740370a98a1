#include <map>
#include <string>

#include "doctest.h"
#include "fop/eval.hpp"
#include "fop/lifted.hpp"
#include "fop/normal.hpp"

using namespace fop;

namespace {

TermPtr s_tower(int k, TermPtr base) {
  for (int i = 0; i < k; ++i) base = mk_app("S", {base});
  return base;
}

// alpha-comparison: rename free variables in first-use order on both sides
SumClause alpha_norm(const SumClause& c) {
  std::map<std::string, TermPtr> m;
  int k = 0;
  for (const auto& v : clause_free_vars(c))
    m[v] = mk_var("av" + std::to_string(++k));
  return clause_canon(clause_subst(c, Substitution(std::move(m))));
}

bool alpha_eq(const SumClause& a, const SumClause& b) {
  return clause_eq(alpha_norm(a), alpha_norm(b));
}

ProblemFile chain_problem() {
  return parse_problem(
      "pred x/1 in int[0,8]; fun S/1;"
      "sentence x(i) - 2*x(S(i)); query -x(S(S(S(i))));");
}

ProblemFile eagle_problem() {
  return parse_problem(
      "pred flies/1 in int[0,1]; pred bird/1 in int[0,1];"
      "pred eagle/1 in int[0,1]; fun Stanley/0; fun father/1;"
      "sentence (flies(x) - bird(x)) ^ (bird(y) - eagle(y))"
      " ^ (eagle(father(z)) - eagle(z)) ^ (eagle(Stanley) - 1);"
      "query flies(father(Stanley)) - 1;");
}

ReducedSentence reduce(const FormulaPtr& f, const SymbolTable& syms) {
  return to_reduced_normal(to_min_normal(f, syms));
}

}  // namespace

TEST_CASE("implicit range clauses") {
  auto p = chain_problem();
  NameGen gen;
  auto up = clause_canon(implicit_clause(p.symbols, "x", BoundSide::Upper, gen));
  REQUIRE(up.lits.size() == 2);
  CHECK(up.lits[0].atom->pred == "x");
  CHECK(up.lits[0].coeff == Rat(-1));
  CHECK(up.lits[0].atom->args[0]->var);
  CHECK(clause_constant(up) == Rat(8));

  auto lo = clause_canon(implicit_clause(p.symbols, "x", BoundSide::Lower, gen));
  REQUIRE(lo.lits.size() == 1);
  CHECK(lo.lits[0].coeff == Rat(1));
  CHECK(clause_constant(lo) == Rat(0));

  SymbolTable loose;
  loose.preds["y"] = PredDecl{0, Rat(1, 3), Rat(7, 2), true};
  auto yup = clause_canon(implicit_clause(loose, "y", BoundSide::Upper, gen));
  CHECK(clause_constant(yup) == Rat(3));  // integer range tightens first
  auto ylo = clause_canon(implicit_clause(loose, "y", BoundSide::Lower, gen));
  CHECK(clause_constant(ylo) == Rat(-1));

  SymbolTable realtab;
  realtab.preds["r"] = PredDecl{0, Rat(-2), Rat(2), false};
  auto rlo = clause_canon(implicit_clause(realtab, "r", BoundSide::Lower, gen));
  CHECK(clause_constant(rlo) == Rat(2));  // r() - (-2)
}

TEST_CASE("one lifted cut telescopes the halving chain") {
  auto p = chain_problem();
  auto rs = reduce(p.sentence, p.symbols);
  REQUIRE(rs.clauses.size() == 1);

  CutRequest req;
  for (int k = 0; k < 4; ++k) {
    CutPick pick;
    pick.kind = CutPick::Clause;
    pick.index = 0;
    pick.subst = {{"i", s_tower(k, mk_var("i"))}};
    req.picks.push_back(pick);
  }
  CutPick bound;
  bound.kind = CutPick::Bound;
  bound.pred = "x";
  bound.side = BoundSide::Upper;
  bound.args = {mk_var("i")};
  req.picks.push_back(bound);
  req.lambda = {Rat(1, 16), Rat(2, 16), Rat(4, 16), Rat(8, 16), Rat(1, 16)};

  auto cut = lifted_cut(rs, req);
  REQUIRE(cut.has_value());
  SumClause expect;
  expect.lits.push_back(
      Literal{Rat(-1), PredAtom{"x", {s_tower(4, mk_var("w"))}}});
  CHECK(alpha_eq(cut->clause, expect));
  CHECK(cut->request.picks.size() == 5);

  // the same combination is sound on every small model of the chain
  for (int n = 1; n <= 2; ++n) {
    for_each_model(rs.symbols, n, 1u << 20, [&](const Model& m) {
      if (evaluate(p.sentence, m, p.symbols) >= Rat(0))
        CHECK(evaluate(clause_formula(cut->clause), m, p.symbols) >= Rat(0));
    });
  }
}

TEST_CASE("integral combinations yield no cut") {
  auto p = parse_problem("pred p/1 in int[0,1]; fun a/0; sentence p(a) - 1;");
  auto rs = reduce(p.sentence, p.symbols);
  CutRequest req;
  CutPick pick;
  pick.kind = CutPick::Clause;
  pick.index = 0;
  req.picks.push_back(pick);
  req.lambda = {Rat(1)};
  CHECK(!lifted_cut(rs, req).has_value());
}

TEST_CASE("atom merging reproduces resolution") {
  auto p = parse_problem(
      "pred p/1 in int[0,1]; pred q/1 in int[0,1]; pred r/1 in int[0,1];"
      "sentence (p(x) - q(x)) ^ (q(y) + r(y) - 1);");
  auto rs = reduce(p.sentence, p.symbols);
  REQUIRE(rs.clauses.size() == 2);

  CutRequest req;
  CutPick one;
  one.kind = CutPick::Clause;
  one.index = 0;
  one.subst = {{"x", mk_var("m")}};
  CutPick two;
  two.kind = CutPick::Clause;
  two.index = 1;
  two.subst = {{"y", mk_var("m")}};
  req.picks = {one, two};
  req.lambda = {Rat(1, 2), Rat(1, 2)};

  auto cut = lifted_cut(rs, req);
  REQUIRE(cut.has_value());
  SumClause expect;
  expect.lits.push_back(Literal{Rat(1), PredAtom{"p", {mk_var("w")}}});
  expect.lits.push_back(Literal{Rat(1), PredAtom{"r", {mk_var("w")}}});
  expect.lits.push_back(Literal{Rat(-1), std::nullopt});
  CHECK(alpha_eq(cut->clause, expect));

  for (int n = 1; n <= 2; ++n) {
    for_each_model(rs.symbols, n, 1u << 20, [&](const Model& m) {
      if (evaluate(p.sentence, m, p.symbols) >= Rat(0))
        CHECK(evaluate(clause_formula(cut->clause), m, p.symbols) >= Rat(0));
    });
  }

  // merging alone, with unit multipliers, leaves an integral row: no cut
  auto p2 = parse_problem(
      "pred p/1 in int[0,1]; pred q/1 in int[0,1];"
      "sentence (p(x) - q(x)) ^ q(y);");
  auto rs2 = reduce(p2.sentence, p2.symbols);
  CutRequest req2;
  one.subst = {{"x", mk_var("m")}};
  two.index = 1;
  two.subst = {{"y", mk_var("m")}};
  req2.picks = {one, two};
  req2.lambda = {Rat(1), Rat(1)};
  CHECK(!lifted_cut(rs2, req2).has_value());
}

TEST_CASE("entailment by refutation on the halving chain") {
  auto p = chain_problem();
  auto er = entails(p.sentence, p.query, p.symbols);
  CHECK(er.status == MilpStatus::Infeasible);
  CHECK(er.cuts_used <= 50);
  auto vr = verify_trace(er.refutand, p.symbols, er.trace);
  CHECK(vr.valid);

  // tampering with a multiplier is caught at the step that used it
  auto bad = er.trace;
  REQUIRE(!bad.steps.empty());
  REQUIRE(!bad.steps[0].request.lambda.empty());
  bad.steps[0].request.lambda[0] = Rat(bad.steps[0].request.lambda[0] * 2);
  auto bv = verify_trace(er.refutand, p.symbols, bad);
  CHECK(!bv.valid);
  CHECK(bv.failed_step == 0);

  // a trace is bound to its sentence
  auto dv = verify_trace(p.sentence, p.symbols, er.trace);
  CHECK(!dv.valid);
  CHECK(dv.failed_step == -2);

  // tampering with the terminal combination is caught too
  auto badf = er.trace;
  REQUIRE(!badf.terminal.farkas.empty());
  badf.terminal.farkas[0] = Rat(badf.terminal.farkas[0] + 1);
  auto fv = verify_trace(er.refutand, p.symbols, badf);
  CHECK(!fv.valid);
  CHECK(fv.failed_step == -1);
}

TEST_CASE("eagle chain query is proved and replayable") {
  auto p = eagle_problem();
  auto er = entails(p.sentence, p.query, p.symbols);
  REQUIRE(er.status == MilpStatus::Infeasible);
  CHECK(er.cuts_used <= 200);
  CHECK(verify_trace(er.refutand, p.symbols, er.trace).valid);

  // self-entailment closes without any grounding depth to speak of
  auto self = entails(p.query, p.query, p.symbols);
  CHECK(self.status == MilpStatus::Infeasible);
}

TEST_CASE("real-sorted queries are redirected to margin entailment") {
  auto p = parse_problem("pred r/0 in real[0,1]; sentence r();");
  CHECK_THROWS_AS(entails(p.sentence, p.sentence, p.symbols), FragmentError);

  auto close = parse_problem("pred r/0 in real[0,1]; sentence r() - 1;");
  auto proved = epsilon_entails(close.sentence, p.sentence, Rat(1, 2), close.symbols);
  CHECK(proved.status == MilpStatus::Infeasible);

  // with margin 1 the refutand r() - 1 ^ (1 - r()) pins r at 1: a countermodel
  auto open = epsilon_entails(close.sentence, p.sentence, Rat(1), close.symbols);
  CHECK(open.status == MilpStatus::Feasible);
}

TEST_CASE("margin entailment over the integers") {
  auto p = parse_problem("pred p/0 in int[0,1]; sentence p() - 1;");
  auto q = parse_formula("p()", p.symbols);
  CHECK(epsilon_entails(p.sentence, q, Rat(1, 2), p.symbols).status ==
        MilpStatus::Infeasible);
  // margin 1 asks for p > 1, and p = 1 is a countermodel over a finite universe
  CHECK(epsilon_entails(p.sentence, q, Rat(1), p.symbols).status ==
        MilpStatus::Feasible);
}

TEST_CASE("saturated refutation recognizes feasibility") {
  auto one = parse_problem("sentence 1;");
  auto rs = reduce(one.sentence, one.symbols);
  CHECK(refute(rs).status == MilpStatus::Feasible);

  auto neg = parse_problem("sentence -1;");
  auto er = refute_sentence(neg.sentence, neg.symbols);
  CHECK(er.status == MilpStatus::Infeasible);
  CHECK(verify_trace(neg.sentence, neg.symbols, er.trace).valid);

  // an empty trace never certifies anything
  ProofTrace empty;
  empty.digest = sentence_digest(one.sentence);
  auto vr = verify_trace(one.sentence, one.symbols, empty);
  CHECK(!vr.valid);
  CHECK(vr.failed_step == -1);
}

TEST_CASE("value bounds") {
  auto c = parse_problem("sentence 3;");
  auto vb = infer_value(c.sentence, c.symbols);
  CHECK(vb.exact);
  CHECK(vb.upper == Rat(3));
  REQUIRE(vb.lower.has_value());
  CHECK(*vb.lower == Rat(3));

  auto p = parse_problem("pred p/0 in int[0,1]; sentence p() - 1;");
  auto vp = infer_value(p.sentence, p.symbols);
  CHECK(vp.exact);
  CHECK(vp.upper == Rat(0));

  auto e = eagle_problem();
  auto ve = infer_value(e.sentence, e.symbols);
  CHECK(ve.exact);
  CHECK(ve.upper == Rat(0));
}

TEST_CASE("ground refutations lift to replayable traces") {
  auto p = parse_problem(
      "pred x/1 in int[0,8]; fun S/1;"
      "sentence (x(i) - 2*x(S(i))) ^ (-1/2 - (-x(S(S(S(i))))));");
  auto rs = reduce(p.sentence, p.symbols);
  auto nr = naive_infer(rs);
  REQUIRE(nr.status == MilpStatus::Infeasible);

  auto t = lift_ground_proof(rs, nr.problem, nr.milp);
  CHECK(t.steps.size() == nr.milp.cuts.size());
  t.digest = sentence_digest(p.sentence);
  CHECK(verify_trace(p.sentence, p.symbols, t).valid);
}

TEST_CASE("traces survive the JSON surface byte for byte") {
  auto p = chain_problem();
  auto er = entails(p.sentence, p.query, p.symbols);
  REQUIRE(er.status == MilpStatus::Infeasible);

  auto rsyms = reduce(er.refutand, p.symbols).symbols;
  std::string j = trace_to_json(er.trace);
  ProofTrace back = trace_from_json(j, rsyms);
  CHECK(trace_to_json(back) == j);
  CHECK(verify_trace(er.refutand, p.symbols, back).valid);
}

TEST_CASE("sentence digests pin the exact sentence") {
  auto a = parse_problem("pred p/0 in int[0,1]; sentence p() - 1;");
  auto b = parse_problem("pred p/0 in int[0,1]; sentence p() - 1;");
  CHECK(sentence_digest(a.sentence) == sentence_digest(b.sentence));
  auto c = parse_problem("pred p/0 in int[0,1]; sentence p();");
  CHECK(sentence_digest(a.sentence) != sentence_digest(c.sentence));
}
