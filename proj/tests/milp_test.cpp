#include <random>

#include "doctest.h"
#include "fop/milp.hpp"

using namespace fop;

namespace {

MilpVar int_var(const std::string& n, long lo, long hi) {
  return MilpVar{n, true, Rat(lo), Rat(hi)};
}

// all-integer box problems: enumerate every lattice point
template <typename F>
void for_each_point(const MilpProblem& p, F&& visit) {
  std::vector<long> x(p.vars.size());
  auto rec = [&](auto&& self, size_t j) -> void {
    if (j == p.vars.size()) {
      visit(x);
      return;
    }
    for (long v = rat_ceil(p.vars[j].lo).get_num().get_si();
         v <= rat_floor(p.vars[j].hi).get_num().get_si(); ++v) {
      x[j] = v;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
}

bool point_satisfies(const std::vector<long>& x, const LinearIneq& q) {
  Rat lhs = q.constant;
  for (size_t j = 0; j < q.coeffs.size(); ++j) lhs += q.coeffs[j] * Rat(x[j]);
  return lhs >= 0;
}

bool integer_feasible(const MilpProblem& p) {
  bool found = false;
  for_each_point(p, [&](const std::vector<long>& x) {
    if (found) return;
    for (const auto& r : p.rows)
      if (!point_satisfies(x, r)) return;
    found = true;
  });
  return found;
}

}  // namespace

TEST_CASE("equality form bookkeeping") {
  MilpProblem p;
  p.vars = {int_var("x", 0, 8)};
  p.rows = {LinearIneq{{Rat(1)}, Rat(-2)}};  // x - 2 >= 0
  auto t = to_equality_form(p);
  CHECK(t.n_structurals == 1);
  REQUIRE(t.rows.size() == 2);  // the constraint plus one upper-bound row
  CHECK(t.cols.size() == 3);
  CHECK(t.rows[0].origin.kind == RowOrigin::User);
  CHECK(t.rows[1].origin.kind == RowOrigin::UpperBound);
  CHECK(t.cols[t.rows[0].slack_col].is_slack);

  MilpProblem empty;
  empty.vars = {int_var("x", 0, 3)};
  auto te = to_equality_form(empty);
  CHECK(te.rows.size() == 1);  // bound row only
}

TEST_CASE("chain system pins the telescoping cut") {
  // four halving constraints over five 0..8 integers plus the first upper
  // bound row, combined with multipliers (1,2,4,8,1)/16
  MilpProblem p;
  for (int j = 0; j < 5; ++j) p.vars.push_back(int_var("x" + std::to_string(j), 0, 8));
  for (int r = 0; r < 4; ++r) {
    LinearIneq q{{Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)}, Rat(0)};
    q.coeffs[r] = 1;
    q.coeffs[r + 1] = -2;
    p.rows.push_back(q);
  }
  auto t = to_equality_form(p);
  REQUIRE(t.rows.size() == 9);  // 4 constraints + 5 upper bounds
  std::vector<Rat> lambda(t.rows.size(), Rat(0));
  lambda[0] = rat_make(1, 16);
  lambda[1] = rat_make(2, 16);
  lambda[2] = rat_make(4, 16);
  lambda[3] = rat_make(8, 16);
  lambda[4] = rat_make(1, 16);  // upper bound of x0

  auto cut = gomory_cut(t, lambda);
  REQUIRE(cut);
  CHECK(cut->pure);
  CHECK(cut->rhs == rat_make(1, 2));  // the fractional right-hand side
  auto lin = eliminate_slacks(*cut, t);
  REQUIRE(lin.coeffs.size() == 5);
  for (int j = 0; j < 4; ++j) CHECK(lin.coeffs[j] == Rat(0));
  CHECK(lin.coeffs[4] == Rat(-1));
  // the structural coefficient on x4 is integral, so the cut lives on the
  // slacks and substitutes out to -x4 >= 0 with no separate rounding step
  CHECK(lin.constant == Rat(0));
  auto rounded = round_integer_constant(lin, p.vars);
  CHECK(rounded.constant == Rat(0));
  CHECK(rounded.coeffs == lin.coeffs);

  // an integral combination yields no cut
  std::vector<Rat> unit(t.rows.size(), Rat(0));
  unit[0] = 1;
  CHECK(!gomory_cut(t, unit));
}

TEST_CASE("pure cuts refuse real columns") {
  MilpProblem p;
  p.vars = {MilpVar{"r", false, Rat(0), Rat(1)}};
  p.rows = {LinearIneq{{Rat(2)}, Rat(-1)}};  // 2r - 1 >= 0
  auto t = to_equality_form(p);
  std::vector<Rat> lambda(t.rows.size(), Rat(0));
  lambda[0] = rat_make(1, 2);
  CHECK_THROWS_AS(gomory_cut(t, lambda, CutMode::PureOnly), MilpError);
}

TEST_CASE("slack elimination substitutes defining rows") {
  MilpProblem p;
  p.vars = {int_var("x", 0, 8)};
  p.rows = {LinearIneq{{Rat(1)}, Rat(-2)}};  // s1 = x - 2
  auto t = to_equality_form(p);
  CutInequality c;
  c.coeffs.assign(t.cols.size(), Rat(0));
  c.coeffs[t.rows[0].slack_col] = 1;
  c.rhs = 1;  // s1 >= 1
  c.lambda.assign(t.rows.size(), Rat(0));
  c.pure = true;
  auto lin = eliminate_slacks(c, t);
  REQUIRE(lin.coeffs.size() == 1);
  CHECK(lin.coeffs[0] == Rat(1));
  CHECK(lin.constant == Rat(-3));  // x - 3 >= 0
}

TEST_CASE("simplex optimizes and certifies") {
  MilpProblem box;
  box.vars = {int_var("x", 0, 8)};
  auto tb = to_equality_form(box);
  std::vector<Rat> obj = {Rat(1)};
  auto r1 = simplex_solve(tb, &obj);
  REQUIRE(r1.status == LpStatus::Optimal);
  CHECK(r1.objective == Rat(8));

  // concrete halving chain: maximize x1
  MilpProblem chain;
  for (int j = 0; j < 4; ++j)
    chain.vars.push_back(int_var("x" + std::to_string(j + 1), 0, 8));
  chain.rows = {
      LinearIneq{{Rat(1), Rat(-2), Rat(0), Rat(0)}, Rat(0)},
      LinearIneq{{Rat(0), Rat(1), Rat(-2), Rat(0)}, Rat(0)},
      LinearIneq{{Rat(0), Rat(0), Rat(1), Rat(-2)}, Rat(0)},
      LinearIneq{{Rat(0), Rat(0), Rat(0), Rat(-1)}, Rat(0)},
  };
  std::vector<Rat> obj1 = {Rat(1), Rat(0), Rat(0), Rat(0)};
  auto r2 = simplex_solve(to_equality_form(chain), &obj1);
  REQUIRE(r2.status == LpStatus::Optimal);
  CHECK(r2.objective == Rat(8));
  for (const auto& row : chain.rows) {
    Rat lhs = row.constant;
    for (size_t j = 0; j < 4; ++j) lhs += row.coeffs[j] * r2.point[j];
    CHECK(lhs >= 0);
  }
  // the paper's witness satisfies the same system
  std::vector<long> witness = {8, 4, 2, 0};
  for (const auto& row : chain.rows) CHECK(point_satisfies(witness, row));

  MilpProblem bad;
  bad.vars = {MilpVar{"x", false, Rat(0), Rat(8)}};
  bad.rows = {LinearIneq{{Rat(1)}, Rat(-1)},   // x >= 1
              LinearIneq{{Rat(-1)}, Rat(0)}};  // -x >= 0
  auto t3 = to_equality_form(bad);
  auto r3 = simplex_solve(t3);
  REQUIRE(r3.status == LpStatus::Infeasible);
  const auto& nu = r3.farkas.row_mults;
  REQUIRE(nu.size() == t3.rows.size());
  Rat total = 0;
  std::vector<Rat> combo(t3.n_structurals, Rat(0));
  for (size_t r = 0; r < nu.size(); ++r) {
    CHECK(nu[r] >= 0);
    total += nu[r] * t3.rows[r].b;
    for (size_t j = 0; j < t3.n_structurals; ++j)
      combo[j] += nu[r] * t3.rows[r].a[j];
  }
  for (const auto& c : combo) CHECK(c <= 0);
  CHECK(total < 0);
}

TEST_CASE("milp_decide closes the half-integral gap") {
  MilpProblem p;
  p.vars = {int_var("x", 0, 1)};
  p.rows = {LinearIneq{{Rat(2)}, Rat(-1)},    // 2x - 1 >= 0
            LinearIneq{{Rat(-2)}, Rat(1)}};   // 1 - 2x >= 0
  auto r = milp_decide(p);
  CHECK(r.status == MilpStatus::Infeasible);
  CHECK(!r.cuts.empty());
}

TEST_CASE("milp_decide finds integral witnesses") {
  MilpProblem p;
  p.vars = {int_var("x", 2, 5), int_var("y", -1, 3)};
  auto r = milp_decide(p);
  REQUIRE(r.status == MilpStatus::Feasible);
  REQUIRE(r.point.size() == 2);
  for (size_t j = 0; j < 2; ++j) {
    CHECK(rat_is_integer(r.point[j]));
    CHECK(r.point[j] >= p.vars[j].lo);
    CHECK(r.point[j] <= p.vars[j].hi);
  }

  MilpProblem chain;
  for (int j = 0; j < 4; ++j)
    chain.vars.push_back(int_var("x" + std::to_string(j + 1), 0, 8));
  chain.rows = {
      LinearIneq{{Rat(1), Rat(-2), Rat(0), Rat(0)}, Rat(0)},
      LinearIneq{{Rat(0), Rat(1), Rat(-2), Rat(0)}, Rat(0)},
      LinearIneq{{Rat(0), Rat(0), Rat(1), Rat(-2)}, Rat(0)},
      LinearIneq{{Rat(1), Rat(0), Rat(0), Rat(0)}, Rat(-8)},  // x1 >= 8
  };
  auto r2 = milp_decide(chain);
  REQUIRE(r2.status == MilpStatus::Feasible);
  CHECK(r2.point[0] == Rat(8));
  for (const auto& row : chain.rows) {
    Rat lhs = row.constant;
    for (size_t j = 0; j < 4; ++j) lhs += row.coeffs[j] * r2.point[j];
    CHECK(lhs >= 0);
  }
}

TEST_CASE("bound tightening rounds inward") {
  MilpProblem p;
  p.vars = {MilpVar{"x", true, rat_make(1, 3), rat_make(7, 2)},
            MilpVar{"r", false, rat_make(1, 3), rat_make(7, 2)}};
  tighten_integer_bounds(p);
  CHECK(p.vars[0].lo == Rat(1));
  CHECK(p.vars[0].hi == Rat(3));
  CHECK(p.vars[1].lo == rat_make(1, 3));
  CHECK(p.vars[1].hi == rat_make(7, 2));
}

TEST_CASE("random instances: cuts are valid and decisions exact") {
  std::mt19937 rng(987654);
  for (int inst = 0; inst < 60; ++inst) {
    MilpProblem p;
    int nv = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < nv; ++j) {
      long lo = static_cast<long>(rng() % 4);
      long hi = lo + static_cast<long>(rng() % (9 - lo));
      p.vars.push_back(int_var("v" + std::to_string(j), lo, hi));
    }
    int nr = 1 + static_cast<int>(rng() % 4);
    for (int r = 0; r < nr; ++r) {
      LinearIneq q;
      for (int j = 0; j < nv; ++j)
        q.coeffs.push_back(Rat(static_cast<long>(rng() % 7) - 3));
      q.constant = Rat(static_cast<long>(rng() % 21) - 10);
      p.rows.push_back(q);
    }
    MilpOptions opts;
    opts.cut_budget = 200;
    auto r = milp_decide(p, opts);
    bool truth = integer_feasible(p);
    REQUIRE(r.status != MilpStatus::BudgetExhausted);
    CHECK((r.status == MilpStatus::Feasible) == truth);
    if (r.status == MilpStatus::Feasible) {
      for (const auto& row : p.rows) {
        Rat lhs = row.constant;
        for (size_t j = 0; j < r.point.size(); ++j) lhs += row.coeffs[j] * r.point[j];
        CHECK(lhs >= 0);
      }
    }
    // no cut may exclude any originally feasible lattice point
    for (const auto& step : r.cuts) {
      for_each_point(p, [&](const std::vector<long>& x) {
        for (const auto& row : p.rows)
          if (!point_satisfies(x, row)) return;
        CHECK(point_satisfies(x, step.reduced));
      });
    }
  }
}

TEST_CASE("decide twice, same trace") {
  MilpProblem p;
  p.vars = {int_var("x", 0, 8), int_var("y", 0, 8)};
  p.rows = {LinearIneq{{Rat(2), Rat(-3)}, Rat(-1)},
            LinearIneq{{Rat(-1), Rat(2)}, Rat(0)},
            LinearIneq{{Rat(3), Rat(1)}, Rat(-7)}};
  auto a = milp_decide(p);
  auto b = milp_decide(p);
  CHECK(a.status == b.status);
  REQUIRE(a.cuts.size() == b.cuts.size());
  for (size_t i = 0; i < a.cuts.size(); ++i) {
    CHECK(a.cuts[i].lambda == b.cuts[i].lambda);
    CHECK(a.cuts[i].reduced.coeffs == b.cuts[i].reduced.coeffs);
    CHECK(a.cuts[i].reduced.constant == b.cuts[i].reduced.constant);
  }
}

TEST_CASE("lp text round-trip") {
  MilpProblem p;
  p.vars = {int_var("x", 0, 8), MilpVar{"r", false, rat_make(-1, 2), rat_make(5, 2)}};
  p.rows = {LinearIneq{{Rat(1), rat_make(-7, 3)}, rat_make(1, 6)},
            LinearIneq{{Rat(-2), Rat(0)}, Rat(9)}};
  auto q = lp_import(lp_export(p));
  REQUIRE(q.vars.size() == p.vars.size());
  for (size_t j = 0; j < p.vars.size(); ++j) {
    CHECK(q.vars[j].integral == p.vars[j].integral);
    CHECK(q.vars[j].lo == p.vars[j].lo);
    CHECK(q.vars[j].hi == p.vars[j].hi);
  }
  REQUIRE(q.rows.size() == p.rows.size());
  for (size_t r = 0; r < p.rows.size(); ++r) {
    CHECK(q.rows[r].coeffs == p.rows[r].coeffs);
    CHECK(q.rows[r].constant == p.rows[r].constant);
  }
}
