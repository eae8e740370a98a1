#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fop/rational.hpp"

namespace fop {

struct MilpError : std::runtime_error {
  explicit MilpError(const std::string& msg) : std::runtime_error(msg) {}
};

struct MilpVar {
  std::string name;
  bool integral;
  Rat lo, hi;
};

// a . x + b >= 0
struct LinearIneq {
  std::vector<Rat> coeffs;
  Rat constant;
};

struct MilpProblem {
  std::vector<MilpVar> vars;
  std::vector<LinearIneq> rows;
};

// Equality-form system. Each row keeps its inequality reading
// a . cols + b >= 0 and owns a slack column s = a . cols + b; the simplex
// and cut code work on the orientation -a . cols + s = b. Structural
// variables are shifted so their lower bound is zero; cut rows may give
// nonzero coefficients to earlier slack columns.
struct RowOrigin {
  enum Kind { User, UpperBound, Cut } kind;
  int index;  // user row index, structural column, or cut ordinal
};

struct TabColumn {
  std::string name;
  bool integral;
  bool is_slack;
  int def_row;  // slack: the row that defines it; structural: -1
  Rat lo, hi;   // structural only
};

struct TabRow {
  std::vector<Rat> a;  // inequality coefficients over columns present at creation
  Rat b;
  int slack_col;
  RowOrigin origin;
};

struct Tableau {
  std::vector<TabColumn> cols;
  std::vector<TabRow> rows;
  size_t n_structurals = 0;

  Rat coeff(size_t row, size_t col) const;  // 0 beyond a row's stored width
  // appends the row and its slack column; slack is integer-sorted iff the
  // coefficients, constant, and every involved column are
  void add_row(std::vector<Rat> a, Rat b, RowOrigin origin);
};

// Shifts variables to zero lower bounds, adds one row per problem inequality
// (in order), then one upper-bound row per variable.
Tableau to_equality_form(const MilpProblem& p);
// Only the problem rows; callers add bound rows selectively.
Tableau to_equality_form_rows_only(const MilpProblem& p);
void add_upper_bound_rows(Tableau& t);

// nu >= 0 over rows with sum nu_r a_r <= 0 componentwise and
// sum nu_r b_r < 0: no nonnegative point satisfies all rows.
struct FarkasCertificate {
  std::vector<Rat> row_mults;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct SimplexResult {
  LpStatus status = LpStatus::Optimal;
  std::vector<Rat> point;        // structural values in original coordinates
  Rat objective = 0;
  FarkasCertificate farkas;      // Infeasible only
  // per simplex row: basic system column (-1 if an artificial stayed basic),
  // its value, and the multipliers expressing that tableau row over the
  // original rows
  std::vector<int> basis;
  std::vector<Rat> basic_value;
  std::vector<std::vector<Rat>> row_mults;
};

// objective: maximize obj . x over structural columns (original coordinates);
// null means pure feasibility.
SimplexResult simplex_solve(const Tableau& t,
                            const std::vector<Rat>* objective = nullptr);

struct CutInequality {
  std::vector<Rat> coeffs;  // over all tableau columns, slack columns included
  Rat rhs;                  // meaning coeffs . cols >= rhs
  std::vector<Rat> lambda;  // row combination that produced it
  bool pure;                // fractional cut over integer columns only
};

enum class CutMode { Auto, PureOnly };

// Combines the rows by lambda and applies the Gomory rounding: the pure
// fractional cut when every involved column is integer-sorted, the mixed
// integer cut otherwise. nullopt when the combined right-hand side is
// integral (no cut). PureOnly raises MilpError on real columns.
std::optional<CutInequality> gomory_cut(const Tableau& t,
                                        const std::vector<Rat>& lambda,
                                        CutMode mode = CutMode::Auto);

// Substitutes each slack by its defining row (after adding the requested
// weakening, which must leave every slack coefficient nonnegative) and
// returns the cut over the original variables, unshifted. Weakening vector
// is indexed by row; empty means zero.
LinearIneq eliminate_slacks(const CutInequality& c, const Tableau& t,
                            const std::vector<Rat>& weakening = {});

// Rounds the constant down when every coefficient is integral and applies
// only to integer-sorted variables.
LinearIneq round_integer_constant(const LinearIneq& q, const std::vector<MilpVar>& vars);

enum class MilpStatus { Feasible, Infeasible, BudgetExhausted };

struct CutStep {
  std::vector<Rat> lambda;  // over the rows present when the cut was made
  CutInequality cut;
  LinearIneq reduced;  // slack-free form in original coordinates, constant
                       // rounded; this is what joins the tableau
};

struct MilpResult {
  MilpStatus status = MilpStatus::BudgetExhausted;
  std::vector<Rat> point;     // Feasible: witness in original coordinates
  std::optional<Rat> optimum; // Feasible with an objective
  FarkasCertificate farkas;   // Infeasible: over the final tableau rows
  std::vector<CutStep> cuts;
  Tableau tableau;            // final system, cut rows included
};

struct MilpOptions {
  int cut_budget = 200;
  const std::vector<Rat>* objective = nullptr;  // maximize over p.vars
};

// ceil/floor the bounds of integer variables in place
void tighten_integer_bounds(MilpProblem& p);

MilpResult milp_decide(const MilpProblem& p, const MilpOptions& opts = {});

// LP-file surface (subset sufficient for round-tripping our own output;
// exact rationals ride in comments next to the decimal body).
std::string lp_export(const MilpProblem& p);
MilpProblem lp_import(const std::string& text, const std::string& filename = "<lp>");

}  // namespace fop
