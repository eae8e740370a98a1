#include "fop/milp.hpp"

#include <algorithm>
#include <set>

namespace fop {

Rat Tableau::coeff(size_t row, size_t col) const {
  const auto& a = rows[row].a;
  return col < a.size() ? a[col] : Rat(0);
}

void Tableau::add_row(std::vector<Rat> a, Rat b, RowOrigin origin) {
  a.resize(cols.size(), Rat(0));
  bool integral = rat_is_integer(b);
  for (size_t c = 0; c < a.size() && integral; ++c)
    if (a[c] != 0 && (!rat_is_integer(a[c]) || !cols[c].integral))
      integral = false;
  int row_index = static_cast<int>(rows.size());
  TabColumn slack;
  slack.name = "s" + std::to_string(row_index + 1);
  slack.integral = integral;
  slack.is_slack = true;
  slack.def_row = row_index;
  slack.lo = 0;
  slack.hi = 0;
  int slack_col = static_cast<int>(cols.size());
  cols.push_back(std::move(slack));
  rows.push_back(TabRow{std::move(a), std::move(b), slack_col, origin});
}

Tableau to_equality_form_rows_only(const MilpProblem& p) {
  Tableau t;
  t.n_structurals = p.vars.size();
  for (const auto& v : p.vars) {
    TabColumn c;
    c.name = v.name;
    c.integral = v.integral;
    c.is_slack = false;
    c.def_row = -1;
    c.lo = v.lo;
    c.hi = v.hi;
    t.cols.push_back(std::move(c));
  }
  for (size_t r = 0; r < p.rows.size(); ++r) {
    const auto& row = p.rows[r];
    if (row.coeffs.size() != p.vars.size())
      throw MilpError("row dimension mismatch");
    // shift x = lo + y: a.x + b = a.y + (a.lo + b)
    Rat b = row.constant;
    for (size_t j = 0; j < p.vars.size(); ++j) b += row.coeffs[j] * p.vars[j].lo;
    t.add_row(row.coeffs, b, RowOrigin{RowOrigin::User, static_cast<int>(r)});
  }
  return t;
}

void add_upper_bound_rows(Tableau& t) {
  for (size_t j = 0; j < t.n_structurals; ++j) {
    std::vector<Rat> a(t.cols.size(), Rat(0));
    a[j] = -1;
    Rat b = t.cols[j].hi - t.cols[j].lo;
    t.add_row(std::move(a), std::move(b),
              RowOrigin{RowOrigin::UpperBound, static_cast<int>(j)});
  }
}

Tableau to_equality_form(const MilpProblem& p) {
  Tableau t = to_equality_form_rows_only(p);
  add_upper_bound_rows(t);
  return t;
}

// ---------------------------------------------------------------- simplex

namespace {

struct Simplex {
  const Tableau& t;
  size_t m, nsys, width;                 // rows, system cols, matrix width
  std::vector<std::vector<Rat>> mat;     // m x width: system | artificials | rhs
  std::vector<int> sign;                 // row flips applied for phase 1
  std::vector<int> basis;                // per row: column index (>= nsys: artificial)
  std::vector<Rat> zrow;                 // reduced costs, width wide

  explicit Simplex(const Tableau& tab) : t(tab) {
    m = t.rows.size();
    nsys = t.cols.size();
    width = nsys + m + 1;
    mat.assign(m, std::vector<Rat>(width, Rat(0)));
    sign.assign(m, 1);
    basis.assign(m, 0);
    for (size_t r = 0; r < m; ++r) {
      // equality orientation: -a . cols + s = b
      for (size_t c = 0; c < nsys; ++c) mat[r][c] = -t.coeff(r, c);
      mat[r][t.rows[r].slack_col] += 1;
      mat[r][width - 1] = t.rows[r].b;
      if (mat[r][width - 1] < 0) {
        for (auto& x : mat[r]) x = -x;
        sign[r] = -1;
      }
      mat[r][nsys + r] = 1;
      basis[r] = static_cast<int>(nsys + r);
    }
  }

  void pivot(size_t row, size_t col) {
    Rat p = mat[row][col];
    for (auto& x : mat[row]) x /= p;
    for (size_t r = 0; r < m; ++r) {
      if (r == row || mat[r][col] == 0) continue;
      Rat f = mat[r][col];
      for (size_t c = 0; c < width; ++c) mat[r][c] -= f * mat[row][c];
    }
    if (zrow[col] != 0) {
      Rat f = zrow[col];
      for (size_t c = 0; c < width; ++c) zrow[c] -= f * mat[row][c];
    }
    basis[row] = static_cast<int>(col);
  }

  // Bland: entering = lowest-index system column with negative reduced cost;
  // leaving = min ratio, ties by lowest basic column. Returns false when no
  // entering column remains.
  bool step(bool* unbounded) {
    size_t enter = width;
    for (size_t c = 0; c < nsys; ++c)
      if (zrow[c] < 0) {
        enter = c;
        break;
      }
    if (enter == width) return false;
    size_t leave = m;
    Rat best;
    for (size_t r = 0; r < m; ++r) {
      if (mat[r][enter] <= 0) continue;
      Rat ratio = mat[r][width - 1] / mat[r][enter];
      if (leave == m || ratio < best ||
          (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == m) {
      *unbounded = true;
      return false;
    }
    pivot(leave, enter);
    return true;
  }

  void set_costs(const std::vector<Rat>& cost) {  // cost over all columns
    zrow.assign(width, Rat(0));
    for (size_t c = 0; c < nsys + m; ++c) zrow[c] = cost[c];
    for (size_t r = 0; r < m; ++r) {
      int b = basis[r];
      if (cost[b] == 0) continue;
      Rat f = cost[b];
      for (size_t c = 0; c < width; ++c) zrow[c] -= f * mat[r][c];
    }
  }

  Rat phase1() {
    std::vector<Rat> cost(nsys + m, Rat(0));
    for (size_t r = 0; r < m; ++r) cost[nsys + r] = 1;
    set_costs(cost);
    bool unbounded = false;
    while (step(&unbounded)) {
    }
    Rat v = 0;
    for (size_t r = 0; r < m; ++r)
      if (basis[r] >= static_cast<int>(nsys)) v += mat[r][width - 1];
    return v;
  }

  void drive_out_artificials() {
    for (size_t r = 0; r < m; ++r) {
      if (basis[r] < static_cast<int>(nsys)) continue;
      for (size_t c = 0; c < nsys; ++c)
        if (mat[r][c] != 0) {
          pivot(r, c);
          break;
        }
      // an all-zero row is redundant; its artificial stays basic at zero
    }
  }

  bool phase2(const std::vector<Rat>& obj_y) {  // maximize obj_y . y
    std::vector<Rat> cost(nsys + m, Rat(0));
    for (size_t c = 0; c < nsys; ++c) cost[c] = -obj_y[c];
    set_costs(cost);
    bool unbounded = false;
    while (step(&unbounded)) {
    }
    return !unbounded;
  }
};

}  // namespace

SimplexResult simplex_solve(const Tableau& t, const std::vector<Rat>* objective) {
  SimplexResult out;
  Simplex s(t);
  size_t m = s.m, nsys = s.nsys, width = s.width;

  Rat v = s.phase1();
  if (v > 0) {
    out.status = LpStatus::Infeasible;
    // dual of phase 1, read from the retained artificial columns
    std::vector<Rat> pi(m, Rat(0));
    for (size_t r = 0; r < m; ++r) {
      if (s.basis[r] < static_cast<int>(nsys)) continue;
      for (size_t i = 0; i < m; ++i) pi[i] += s.mat[r][nsys + i];
    }
    out.farkas.row_mults.resize(m);
    for (size_t i = 0; i < m; ++i)
      out.farkas.row_mults[i] = -Rat(s.sign[i]) * pi[i];
    return out;
  }
  s.drive_out_artificials();

  if (objective) {
    if (objective->size() != t.n_structurals)
      throw MilpError("objective dimension mismatch");
    std::vector<Rat> obj_y(nsys, Rat(0));
    for (size_t j = 0; j < t.n_structurals; ++j) obj_y[j] = (*objective)[j];
    if (!s.phase2(obj_y)) {
      out.status = LpStatus::Unbounded;
      return out;
    }
  }

  out.status = LpStatus::Optimal;
  std::vector<Rat> val(nsys, Rat(0));
  for (size_t r = 0; r < m; ++r)
    if (s.basis[r] < static_cast<int>(nsys))
      val[s.basis[r]] = s.mat[r][width - 1];
  out.point.resize(t.n_structurals);
  for (size_t j = 0; j < t.n_structurals; ++j)
    out.point[j] = val[j] + t.cols[j].lo;
  if (objective)
    for (size_t j = 0; j < t.n_structurals; ++j)
      out.objective += (*objective)[j] * out.point[j];

  out.basis.resize(m);
  out.basic_value.resize(m);
  out.row_mults.assign(m, std::vector<Rat>(m, Rat(0)));
  for (size_t r = 0; r < m; ++r) {
    out.basis[r] = s.basis[r] < static_cast<int>(nsys) ? s.basis[r] : -1;
    out.basic_value[r] = s.mat[r][width - 1];
    for (size_t i = 0; i < m; ++i)
      out.row_mults[r][i] = s.mat[r][nsys + i] * Rat(s.sign[i]);
  }
  return out;
}

// ------------------------------------------------------------ gomory cuts

std::optional<CutInequality> gomory_cut(const Tableau& t,
                                        const std::vector<Rat>& lambda,
                                        CutMode mode) {
  if (lambda.size() > t.rows.size()) throw MilpError("lambda dimension mismatch");
  std::vector<Rat> coef(t.cols.size(), Rat(0));
  Rat rhs = 0;
  for (size_t r = 0; r < lambda.size(); ++r) {
    if (lambda[r] == 0) continue;
    for (size_t c = 0; c < t.cols.size(); ++c) {
      Rat a = t.coeff(r, c);
      if (a != 0) coef[c] -= lambda[r] * a;
    }
    coef[t.rows[r].slack_col] += lambda[r];
    rhs += lambda[r] * t.rows[r].b;
  }
  Rat f0 = rat_frac(rhs);
  if (f0 == 0) return std::nullopt;

  bool all_integral = true;
  for (size_t c = 0; c < coef.size(); ++c)
    if (coef[c] != 0 && !t.cols[c].integral) all_integral = false;
  if (!all_integral && mode == CutMode::PureOnly)
    throw MilpError("pure cut requested on a row with real-sorted columns");

  CutInequality cut;
  cut.lambda = lambda;
  cut.rhs = f0;
  cut.coeffs.assign(coef.size(), Rat(0));
  if (all_integral) {
    cut.pure = true;
    for (size_t c = 0; c < coef.size(); ++c)
      if (coef[c] != 0) cut.coeffs[c] = rat_frac(coef[c]);
  } else {
    cut.pure = false;
    Rat ratio = f0 / (Rat(1) - f0);
    for (size_t c = 0; c < coef.size(); ++c) {
      if (coef[c] == 0) continue;
      if (t.cols[c].integral) {
        Rat fc = rat_frac(coef[c]);
        cut.coeffs[c] = fc <= f0 ? fc : Rat(ratio * (Rat(1) - fc));
      } else {
        cut.coeffs[c] = coef[c] > 0 ? coef[c] : Rat(ratio * -coef[c]);
      }
    }
  }
  return cut;
}

LinearIneq eliminate_slacks(const CutInequality& c, const Tableau& t,
                            const std::vector<Rat>& weakening) {
  std::vector<Rat> coef = c.coeffs;
  coef.resize(t.cols.size(), Rat(0));
  Rat rhs = c.rhs;
  if (!weakening.empty()) {
    if (weakening.size() != t.rows.size())
      throw MilpError("weakening dimension mismatch");
    for (size_t r = 0; r < t.rows.size(); ++r) {
      if (weakening[r] < 0) throw MilpError("weakening must be nonnegative");
      coef[t.rows[r].slack_col] += weakening[r];
    }
  }
  for (size_t r = t.rows.size(); r-- > 0;) {
    Rat q = coef[t.rows[r].slack_col];
    if (q == 0) continue;
    if (q < 0)
      throw MilpError("negative slack coefficient; weaken the cut first");
    for (size_t cc = 0; cc < t.rows[r].a.size(); ++cc) {
      Rat a = t.rows[r].a[cc];
      if (a != 0) coef[cc] += q * a;
    }
    rhs -= q * t.rows[r].b;
    coef[t.rows[r].slack_col] = 0;
  }
  LinearIneq out;
  out.coeffs.resize(t.n_structurals);
  Rat shift = 0;  // back to original coordinates
  for (size_t j = 0; j < t.n_structurals; ++j) {
    out.coeffs[j] = coef[j];
    shift += coef[j] * t.cols[j].lo;
  }
  out.constant = -(rhs + shift);
  return out;
}

LinearIneq round_integer_constant(const LinearIneq& q,
                                  const std::vector<MilpVar>& vars) {
  for (size_t j = 0; j < q.coeffs.size(); ++j)
    if (q.coeffs[j] != 0 &&
        (!rat_is_integer(q.coeffs[j]) || !vars[j].integral))
      return q;
  LinearIneq out = q;
  Rat fl(rat_floor(out.constant));
  out.constant = fl;
  return out;
}

// ------------------------------------------------------------ decide loop

namespace {

std::string cut_key(const CutInequality& c) {
  std::string k = rat_str(c.rhs);
  for (const auto& x : c.coeffs) {
    k += '|';
    k += rat_str(x);
  }
  size_t end = k.size();
  while (end > 2 && k[end - 1] == '0' && k[end - 2] == '|') end -= 2;
  return k.substr(0, end);
}

LinearIneq append_cut_row(Tableau& t, const CutInequality& cut,
                          const std::vector<MilpVar>& vars, int ordinal) {
  // store the cut in structural form so later rows and certificates never
  // depend on slack columns
  LinearIneq lin = round_integer_constant(eliminate_slacks(cut, t), vars);
  std::vector<Rat> a(t.n_structurals, Rat(0));
  Rat b = lin.constant;
  for (size_t j = 0; j < t.n_structurals && j < lin.coeffs.size(); ++j) {
    a[j] = lin.coeffs[j];
    if (a[j] != 0) b += a[j] * t.cols[j].lo;
  }
  t.add_row(std::move(a), std::move(b), RowOrigin{RowOrigin::Cut, ordinal});
  return lin;
}

}  // namespace

void tighten_integer_bounds(MilpProblem& p) {
  for (auto& v : p.vars) {
    if (!v.integral) continue;
    v.lo = Rat(rat_ceil(v.lo));
    v.hi = Rat(rat_floor(v.hi));
  }
}

MilpResult milp_decide(const MilpProblem& p, const MilpOptions& opts) {
  MilpProblem q = p;
  tighten_integer_bounds(q);
  MilpResult out;
  out.tableau = to_equality_form(q);
  Tableau& t = out.tableau;
  std::set<std::string> seen;

  for (int iter = 0;; ++iter) {
    SimplexResult lp = simplex_solve(t, opts.objective);
    if (lp.status == LpStatus::Infeasible) {
      out.status = MilpStatus::Infeasible;
      out.farkas = lp.farkas;
      return out;
    }
    if (lp.status == LpStatus::Unbounded)
      throw MilpError("unbounded relaxation on a box-bounded problem");

    bool integral = true;
    for (size_t j = 0; j < q.vars.size(); ++j)
      if (q.vars[j].integral && !rat_is_integer(lp.point[j])) integral = false;
    if (integral) {
      out.status = MilpStatus::Feasible;
      out.point = lp.point;
      if (opts.objective) out.optimum = lp.objective;
      return out;
    }
    if (iter >= opts.cut_budget) {
      out.status = MilpStatus::BudgetExhausted;
      return out;
    }

    // candidate rows: basic integer column at a fractional value, ranked by
    // fractional part of the right-hand side, ties by row order
    std::vector<std::pair<Rat, size_t>> cand;
    for (size_t r = 0; r < t.rows.size(); ++r) {
      int b = lp.basis[r];
      if (b < 0 || !t.cols[b].integral) continue;
      Rat f = rat_frac(lp.basic_value[r]);
      if (f == 0) continue;
      cand.emplace_back(std::move(f), r);
    }
    std::stable_sort(cand.begin(), cand.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });

    bool accepted = false;
    for (const auto& [f, r] : cand) {
      auto cut = gomory_cut(t, lp.row_mults[r], CutMode::Auto);
      if (!cut) continue;
      if (!seen.insert(cut_key(*cut)).second) continue;
      out.cuts.push_back(CutStep{lp.row_mults[r], *cut, {}});
      out.cuts.back().reduced =
          append_cut_row(t, *cut, q.vars, static_cast<int>(out.cuts.size()) - 1);
      accepted = true;
      break;
    }
    if (!accepted) {
      // exhaustive fallback: small single- and two-row combinations
      for (int d = 2; d <= 4 && !accepted; ++d)
        for (size_t r = 0; r < t.rows.size() && !accepted; ++r)
          for (int pnum = 1; pnum < d && !accepted; ++pnum) {
            std::vector<Rat> lam(t.rows.size(), Rat(0));
            lam[r] = rat_make(pnum, d);
            auto cut = gomory_cut(t, lam, CutMode::Auto);
            if (!cut || !seen.insert(cut_key(*cut)).second) continue;
            out.cuts.push_back(CutStep{lam, *cut, {}});
            out.cuts.back().reduced = append_cut_row(
                t, *cut, q.vars, static_cast<int>(out.cuts.size()) - 1);
            accepted = true;
          }
      for (int d = 2; d <= 3 && !accepted; ++d)
        for (size_t r = 0; r < t.rows.size() && !accepted; ++r)
          for (size_t s2 = r + 1; s2 < t.rows.size() && !accepted; ++s2)
            for (int pn = 1; pn < d && !accepted; ++pn)
              for (int qn = 1; qn < d && !accepted; ++qn) {
                std::vector<Rat> lam(t.rows.size(), Rat(0));
                lam[r] = rat_make(pn, d);
                lam[s2] = rat_make(qn, d);
                auto cut = gomory_cut(t, lam, CutMode::Auto);
                if (!cut || !seen.insert(cut_key(*cut)).second) continue;
                out.cuts.push_back(CutStep{lam, *cut, {}});
                out.cuts.back().reduced = append_cut_row(
                    t, *cut, q.vars, static_cast<int>(out.cuts.size()) - 1);
                accepted = true;
              }
    }
    if (!accepted) {
      out.status = MilpStatus::BudgetExhausted;
      return out;
    }
  }
}

}  // namespace fop
