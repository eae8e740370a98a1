#include "doctest.h"
#include "fop/parser.hpp"

using namespace fop;

TEST_CASE("problem file with declarations and a free variable") {
  auto p = parse_problem(
      "pred x/1 in int[0,8];\n"
      "fun S/1;\n"
      "sentence x(i) - 2*x(S(i));\n");
  REQUIRE(p.symbols.has_pred("x"));
  CHECK(p.symbols.preds.at("x").arity == 1);
  CHECK(p.symbols.preds.at("x").integral);
  CHECK(p.symbols.preds.at("x").lo == Rat(0));
  CHECK(p.symbols.preds.at("x").hi == Rat(8));
  CHECK(p.symbols.funs.at("S").arity == 1);
  REQUIRE(p.sentence);
  CHECK(free_variables(p.sentence) == std::vector<std::string>{"i"});
}

TEST_CASE("constant sentence") {
  auto p = parse_problem("sentence 3;");
  REQUIRE(p.sentence);
  CHECK(p.sentence->kind == FK::Scalar);
  CHECK(p.sentence->num == Rat(3));
}

TEST_CASE("min binds before max") {
  SymbolTable syms;
  for (const char* n : {"p", "q", "r"})
    syms.preds[n] = PredDecl{1, Rat(0), Rat(1), true};
  auto f = parse_formula("p(x) ^ q(x) v r(x)", syms);
  auto expect = f_min(f_pred("p", {mk_var("x")}),
                      f_max(f_pred("q", {mk_var("x")}), f_pred("r", {mk_var("x")})));
  CHECK(formula_eq(f, expect));
}

TEST_CASE("sums bind before max, binders are loosest") {
  SymbolTable syms;
  syms.preds["p"] = PredDecl{1, Rat(0), Rat(1), true};
  syms.preds["q"] = PredDecl{1, Rat(0), Rat(1), true};
  auto f = parse_formula("p(x) - 1 v q(x)", syms);
  auto expect = f_max(f_sub(f_pred("p", {mk_var("x")}), f_scalar(1)),
                      f_pred("q", {mk_var("x")}));
  CHECK(formula_eq(f, expect));

  auto g = parse_formula("!y. p(y) ^ q(y)", syms);
  REQUIRE(g->kind == FK::Inf);
  CHECK(g->a->kind == FK::Min);
  CHECK(free_variables(g).empty());
}

TEST_CASE("diagnostics carry position and reason") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_problem(text, "t.fop");
      FAIL_CHECK("no error for: " << text);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
      CHECK(e.line >= 1);
      CHECK(e.col >= 1);
    }
  };
  expect_error("pred p/1 in int[0,1];\nsentence p(a, b);\n", "expects 1 argument");
  expect_error("sentence q();\n", "undeclared predicate");
  expect_error("pred p/0 in int[0,1]; pred p/0 in int[0,1];\nsentence 1;\n",
               "duplicate");
  expect_error("pred p/0 in int[3,1];\nsentence 1;\n", "empty range");
  expect_error("pred x/1 in int[0,8];\nsentence x(1);\n", "not a declared object");
  expect_error("objects a; define g(a) = a;\nsentence 1;\n", "undeclared function");
}

TEST_CASE("concrete directives") {
  auto p = parse_problem(
      "pred x/1 in int[0,8]; fun S/1;\n"
      "objects 1, 2, 3, 4;\n"
      "define S(1) = 2; define S(2) = 3; define S(3) = 4; define S(4) = 4;\n"
      "sentence x(1) + 8*(!i. (x(i) - 2*x(S(i))));\n"
      "threshold 1/2;\n");
  CHECK(p.objects == std::vector<std::string>{"1", "2", "3", "4"});
  CHECK(p.fun_table.at({"S", {"4"}}) == "4");
  REQUIRE(p.threshold);
  CHECK(*p.threshold == rat_make(1, 2));
}

TEST_CASE("comments and query directives") {
  auto p = parse_problem(
      "# leading note\n"
      "pred flies/1 in int[0,1]; fun Stanley/0;\n"
      "sentence flies(Stanley); # trailing note\n"
      "query flies(Stanley) - 1;\n");
  REQUIRE(p.query);
  CHECK(formula_eq(p.query, f_sub(f_pred("flies", {mk_app("Stanley")}), f_scalar(1))));
}

TEST_CASE("print/parse round-trips a whole problem") {
  auto text =
      "pred bird/1 in int[0,1];\n"
      "pred eagle/1 in int[0,1];\n"
      "pred flies/1 in int[0,1];\n"
      "fun Stanley/0;\n"
      "fun father/1;\n"
      "sentence (flies(x) - bird(x)) ^ (bird(y) - eagle(y))"
      " ^ (eagle(father(z)) - eagle(z)) ^ (eagle(Stanley) - 1);\n"
      "query flies(father(Stanley)) - 1;\n";
  auto p = parse_problem(text);
  auto q = parse_problem(print_problem(p));
  CHECK(formula_eq(q.sentence, p.sentence));
  CHECK(formula_eq(q.query, p.query));
  CHECK(q.symbols.preds.size() == p.symbols.preds.size());
  CHECK(q.symbols.funs.size() == p.symbols.funs.size());

  auto c = parse_problem(
      "pred x/1 in int[0,8]; fun S/1; objects 1, 2; define S(1) = 2; "
      "define S(2) = 2; sentence x(1);");
  auto c2 = parse_problem(print_problem(c));
  CHECK(c2.objects == c.objects);
  CHECK(c2.fun_table == c.fun_table);
  CHECK(formula_eq(c2.sentence, c.sentence));
}
