#include "doctest.h"
#include "fop/eval.hpp"
#include "fop/ground.hpp"

using namespace fop;

namespace {

ReducedSentence reduce(const FormulaPtr& f, const SymbolTable& syms) {
  return to_reduced_normal(to_min_normal(f, syms));
}

ProblemFile chain_problem() {
  return parse_problem(
      "pred x/1 in int[0,8]; fun S/1; sentence x(i) - 2*x(S(i));");
}

ProblemFile chain_refutand() {
  return parse_problem(
      "pred x/1 in int[0,8]; fun S/1;"
      "sentence (x(i) - 2*x(S(i))) ^ (-1/2 - (-x(S(S(S(i))))));");
}

}  // namespace

TEST_CASE("herbrand terms by depth") {
  SymbolTable fam;
  fam.funs["Stanley"] = FunDecl{0};
  fam.funs["father"] = FunDecl{1};
  auto t1 = herbrand_terms(fam, 1);
  REQUIRE(t1.size() == 2);
  CHECK(term_str(t1[0]) == "Stanley");
  CHECK(term_str(t1[1]) == "father(Stanley)");

  SymbolTable consts;
  consts.funs["Stanley"] = FunDecl{0};
  for (int d = 0; d <= 3; ++d) CHECK(herbrand_terms(consts, d).size() == 1);

  SymbolTable nilfam;
  nilfam.funs["S"] = FunDecl{1};
  auto t2 = herbrand_terms(nilfam, 2);
  REQUIRE(t2.size() == 3);
  CHECK(term_str(t2[0]) == "nil");
  CHECK(term_str(t2[1]) == "S(nil)");
  CHECK(term_str(t2[2]) == "S(S(nil))");
}

TEST_CASE("herbrand growth matches the signature count") {
  SymbolTable s;
  s.funs["a"] = FunDecl{0};
  s.funs["b"] = FunDecl{0};
  s.funs["f"] = FunDecl{1};
  s.funs["g"] = FunDecl{2};
  // T(0) = 2; T(d+1) = 2 + T(d) + T(d)^2
  size_t expect = 2;
  auto prev = herbrand_terms(s, 0);
  CHECK(prev.size() == expect);
  for (int d = 1; d <= 2; ++d) {
    expect = 2 + expect + expect * expect;
    auto cur = herbrand_terms(s, d);
    CHECK(cur.size() == expect);
    // the shallower layer is a prefix-closed subset
    for (const auto& t : prev) {
      bool found = false;
      for (const auto& u : cur)
        if (term_eq(t, u)) found = true;
      CHECK(found);
    }
    prev = cur;
  }
}

TEST_CASE("grounding builds one variable per distinct atom") {
  auto p = chain_problem();
  auto rs = reduce(p.sentence, p.symbols);
  auto terms = herbrand_terms(rs.symbols, 2);  // nil, S(nil), S(S(nil))
  std::vector<GroundInstance> insts;
  for (const auto& t : terms)
    insts.push_back({0, Substitution({{"i", t}})});
  auto gp = ground_subproblem(rs, insts);
  CHECK(gp.milp.rows.size() == 3);
  CHECK(gp.atoms.size() == 4);  // x(nil) .. x(S(S(S(nil))))
  CHECK(gp.milp.vars.size() == 4);
  for (const auto& v : gp.milp.vars) {
    CHECK(v.integral);
    CHECK(v.lo == Rat(0));
    CHECK(v.hi == Rat(8));
  }

  CHECK_THROWS_AS(
      ground_subproblem(rs, {{0, Substitution({{"i", mk_var("free")}})}}),
      std::invalid_argument);

  auto gp0 = ground_subproblem(rs, {});
  CHECK(gp0.milp.rows.empty());
  CHECK(milp_decide(gp0.milp).status == MilpStatus::Feasible);
}

TEST_CASE("full grounding is ordered and capped") {
  auto p = chain_refutand();
  auto rs = reduce(p.sentence, p.symbols);
  auto insts = full_grounding(rs, 1);
  // both clauses at nil and S(nil), clauses in order
  REQUIRE(insts.size() == 4);
  CHECK(insts[0].clause == 0);
  CHECK(insts[1].clause == 0);
  CHECK(insts[2].clause == 1);
  CHECK(insts[3].clause == 1);
  CHECK(term_str(insts[0].subst.lookup("i")) == "nil");
  CHECK(term_str(insts[1].subst.lookup("i")) == "S(nil)");

  CHECK_THROWS_AS(full_grounding(rs, 20, 10), MilpError);
}

TEST_CASE("grounding universe ignores unused declarations") {
  auto p = parse_problem(
      "pred q/0 in int[0,1]; fun junk/1; fun other/0; sentence q() - 1;");
  auto rs = reduce(p.sentence, p.symbols);
  auto gs = grounding_symbols(rs);
  CHECK(!gs.funs.count("junk"));
  CHECK(!gs.funs.count("other"));
  CHECK(full_grounding(rs, 3).size() == 1);
}

TEST_CASE("naive inference refutes the grounded chain") {
  auto p = chain_refutand();
  auto rs = reduce(p.sentence, p.symbols);
  auto r = naive_infer(rs);
  REQUIRE(r.status == MilpStatus::Infeasible);
  CHECK(r.milp.status == MilpStatus::Infeasible);
  CHECK(r.subproblems_tried > 0);
  // soundness cross-check: no small model reaches value 0
  CHECK(brute_force_value(p.sentence, p.symbols, 1) < 0);
  CHECK(brute_force_value(p.sentence, p.symbols, 2) < 0);
}

TEST_CASE("naive inference cannot refute a constant truth") {
  auto p = parse_problem("sentence 1;");
  auto rs = reduce(p.sentence, p.symbols);
  NaiveOptions o;
  o.max_subproblems = 50;
  CHECK(naive_infer(rs, o).status == MilpStatus::BudgetExhausted);
}

TEST_CASE("naive inference refutes the eagle refutand within depth 2") {
  auto p = parse_problem(
      "pred flies/1 in int[0,1]; pred bird/1 in int[0,1];"
      "pred eagle/1 in int[0,1]; fun Stanley/0; fun father/1;"
      "sentence (flies(x) - bird(x)) ^ (bird(y) - eagle(y))"
      " ^ (eagle(father(z)) - eagle(z)) ^ (eagle(Stanley) - 1)"
      " ^ (-1/2 - (flies(father(Stanley)) - 1));");
  auto rs = reduce(p.sentence, p.symbols);
  NaiveOptions o;
  o.max_depth = 2;
  auto r = naive_infer(rs, o);
  CHECK(r.status == MilpStatus::Infeasible);
  CHECK(brute_force_value(p.sentence, p.symbols, 1) < 0);
}

TEST_CASE("concrete expansion closes the domain") {
  auto p = parse_problem(
      "pred x/1 in int[0,8]; fun S/1; objects 1, 2, 3, 4;"
      "define S(1) = 2; define S(2) = 3; define S(3) = 4; define S(4) = 4;"
      "sentence x(1) + 8*(!i. (x(i) - 2*x(S(i))));");
  auto g = concrete_expand(p);
  CHECK(free_variables(g).empty());

  auto r = concrete_value(p);
  REQUIRE(r.status == MilpStatus::Feasible);
  CHECK(r.value == Rat(8));

  auto trivial = parse_problem("objects a; sentence 3;");
  auto rt = concrete_value(trivial);
  REQUIRE(rt.status == MilpStatus::Feasible);
  CHECK(rt.value == Rat(3));
}

TEST_CASE("cardinality objective counts true entries") {
  auto p = parse_problem(
      "pred p/1 in int[0,1]; objects a, b, c, d;"
      "sentence p(x1) + p(x2) + p(x3) + p(x4) - 2;");
  auto r = concrete_value(p);
  REQUIRE(r.status == MilpStatus::Feasible);
  CHECK(r.value == Rat(2));
  // matches the exhaustive oracle over all 16 tables (no functions involved)
  CHECK(brute_force_value(p.sentence, p.symbols, 4) == Rat(2));
}

TEST_CASE("concrete grounding feeds the solver directly") {
  auto p = parse_problem(
      "pred x/1 in int[0,8]; fun S/1; objects 1, 2, 3, 4;"
      "define S(1) = 2; define S(2) = 3; define S(3) = 4; define S(4) = 4;"
      "sentence (!i. (x(i) - 2*x(S(i)))) ^ (x(1) - 8);");
  auto cg = concrete_ground(p);
  CHECK(cg.milp.vars.size() == 4);
  auto r = milp_decide(cg.milp);
  REQUIRE(r.status == MilpStatus::Feasible);
  // forced down the chain: 8, 4, 2, then x(4) pinned to 0 by x(4) >= 2 x(4)
  for (size_t j = 0; j < cg.atoms.size(); ++j) {
    if (atom_str(cg.atoms[j]) == "x(1)") CHECK(r.point[j] == Rat(8));
    if (atom_str(cg.atoms[j]) == "x(4)") CHECK(r.point[j] == Rat(0));
  }
}
