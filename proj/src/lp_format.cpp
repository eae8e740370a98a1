#include <cctype>
#include <map>
#include <sstream>

#include "fop/milp.hpp"

namespace fop {

// Body lines are standard LP format with decimal approximations; structured
// comments carry exact rationals and the unsanitized names, and the importer
// prefers them when present.

std::string lp_export(const MilpProblem& p) {
  std::ostringstream os;
  os << "\\ fop-lp 1\n";
  for (size_t j = 0; j < p.vars.size(); ++j) {
    const auto& v = p.vars[j];
    os << "\\ var v" << j + 1 << " name={" << v.name << "} sort="
       << (v.integral ? "int" : "real") << " lo=" << rat_str(v.lo)
       << " hi=" << rat_str(v.hi) << "\n";
  }
  for (size_t r = 0; r < p.rows.size(); ++r) {
    os << "\\ exact c" << r + 1 << ":";
    for (const auto& c : p.rows[r].coeffs) os << " " << rat_str(c);
    os << " | " << rat_str(p.rows[r].constant) << "\n";
  }
  os << "Maximize\n obj: 0\nSubject To\n";
  for (size_t r = 0; r < p.rows.size(); ++r) {
    os << " c" << r + 1 << ":";
    bool any = false;
    for (size_t j = 0; j < p.rows[r].coeffs.size(); ++j) {
      const Rat& c = p.rows[r].coeffs[j];
      if (c == 0) continue;
      if (c < 0)
        os << " - " << rat_decimal(Rat(-c));
      else
        os << (any ? " + " : " ") << rat_decimal(c);
      os << " v" << j + 1;
      any = true;
    }
    if (!any) os << " 0 v1";
    os << " >= " << rat_decimal(Rat(-p.rows[r].constant)) << "\n";
  }
  os << "Bounds\n";
  for (size_t j = 0; j < p.vars.size(); ++j)
    os << " " << rat_decimal(p.vars[j].lo) << " <= v" << j + 1
       << " <= " << rat_decimal(p.vars[j].hi) << "\n";
  bool any_int = false;
  for (const auto& v : p.vars) any_int = any_int || v.integral;
  if (any_int) {
    os << "General\n";
    for (size_t j = 0; j < p.vars.size(); ++j)
      if (p.vars[j].integral) os << " v" << j + 1 << "\n";
  }
  os << "End\n";
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& file, int line, const std::string& msg) {
  throw MilpError(file + ":" + std::to_string(line) + ": " + msg);
}

bool parse_var_comment(const std::string& body, MilpVar& out) {
  // v<N> name={...} sort=int|real lo=<rat> hi=<rat>
  auto npos = body.find("name={");
  auto close = body.find('}', npos == std::string::npos ? 0 : npos);
  auto spos = body.find("sort=", close == std::string::npos ? 0 : close);
  auto lpos = body.find("lo=");
  auto hpos = body.find("hi=");
  if (npos == std::string::npos || close == std::string::npos ||
      spos == std::string::npos || lpos == std::string::npos ||
      hpos == std::string::npos)
    return false;
  out.name = body.substr(npos + 6, close - npos - 6);
  out.integral = body.compare(spos + 5, 3, "int") == 0;
  out.lo = rat_parse(trim(body.substr(lpos + 3, body.find(' ', lpos) - lpos - 3)));
  out.hi = rat_parse(trim(body.substr(hpos + 3)));
  return true;
}

}  // namespace

MilpProblem lp_import(const std::string& text, const std::string& filename) {
  MilpProblem p;
  std::vector<std::vector<std::string>> exact_rows;
  std::map<std::string, size_t> var_index;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  enum { None, Rows, Bounds, Ints } section = None;
  bool have_exact_vars = false;

  // body fallbacks when exact comments are absent
  std::vector<std::string> body_names;
  std::vector<MilpVar> body_vars;
  std::vector<LinearIneq> body_rows;
  auto body_var = [&](const std::string& name) -> size_t {
    auto it = var_index.find(name);
    if (it != var_index.end()) return it->second;
    size_t idx = body_vars.size();
    var_index[name] = idx;
    body_vars.push_back(MilpVar{name, false, Rat(0), Rat(0)});
    body_names.push_back(name);
    return idx;
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '\\') {
      std::string body = trim(line.substr(1));
      if (body.rfind("var v", 0) == 0) {
        MilpVar v;
        if (parse_var_comment(body.substr(4), v)) {
          p.vars.push_back(v);
          have_exact_vars = true;
        }
      } else if (body.rfind("exact c", 0) == 0) {
        auto colon = body.find(':');
        if (colon == std::string::npos) fail(filename, lineno, "bad exact row");
        std::istringstream row(body.substr(colon + 1));
        std::vector<std::string> toks;
        std::string tk;
        while (row >> tk) toks.push_back(tk);
        exact_rows.push_back(std::move(toks));
      }
      continue;
    }
    std::string low;
    for (char c : line) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low.rfind("maximize", 0) == 0 || low.rfind("minimize", 0) == 0 ||
        low.rfind("max", 0) == 0 || low.rfind("min", 0) == 0) {
      section = None;
      continue;
    }
    if (low.rfind("subject to", 0) == 0 || low == "st" || low == "s.t.") {
      section = Rows;
      continue;
    }
    if (low.rfind("bounds", 0) == 0) {
      section = Bounds;
      continue;
    }
    if (low.rfind("general", 0) == 0 || low.rfind("integer", 0) == 0 ||
        low.rfind("binary", 0) == 0) {
      section = Ints;
      continue;
    }
    if (low.rfind("end", 0) == 0) break;
    if (line[0] == 'o' && line.rfind("obj", 0) == 0) continue;
    if (have_exact_vars) continue;  // body is advisory when comments exist

    if (section == Rows) {
      auto colon = line.find(':');
      std::string expr = colon == std::string::npos ? line : line.substr(colon + 1);
      size_t rel = expr.find(">=");
      bool flip = false;
      if (rel == std::string::npos) {
        rel = expr.find("<=");
        flip = true;
      }
      if (rel == std::string::npos) fail(filename, lineno, "expected >= or <=");
      std::string lhs = expr.substr(0, rel), rhs = trim(expr.substr(rel + 2));
      LinearIneq ineq;
      ineq.constant = -rat_parse(rhs);
      std::istringstream ls(lhs);
      std::string tok;
      Rat sign_acc(1), pending(1);
      bool have_coef = false;
      while (ls >> tok) {
        if (tok == "+") {
          sign_acc = 1;
          continue;
        }
        if (tok == "-") {
          sign_acc = -1;
          continue;
        }
        bool numeric = std::isdigit(static_cast<unsigned char>(tok[0])) ||
                       ((tok[0] == '-' || tok[0] == '+') && tok.size() > 1);
        if (numeric) {
          pending = sign_acc * rat_parse(tok);
          have_coef = true;
          continue;
        }
        size_t idx = body_var(tok);
        Rat c = have_coef ? pending : sign_acc;
        if (ineq.coeffs.size() <= idx) ineq.coeffs.resize(idx + 1, Rat(0));
        ineq.coeffs[idx] += c;
        sign_acc = 1;
        pending = 1;
        have_coef = false;
      }
      if (flip) {
        for (auto& c : ineq.coeffs) c = -c;
        ineq.constant = -ineq.constant;
      }
      body_rows.push_back(std::move(ineq));
    } else if (section == Bounds) {
      std::istringstream bs(line);
      std::string a, le1, name, le2, b;
      if (!(bs >> a >> le1 >> name >> le2 >> b) || le1 != "<=" || le2 != "<=")
        fail(filename, lineno, "unsupported bounds line");
      size_t idx = body_var(name);
      body_vars[idx].lo = rat_parse(a);
      body_vars[idx].hi = rat_parse(b);
    } else if (section == Ints) {
      std::istringstream bs(line);
      std::string name;
      while (bs >> name) body_vars[body_var(name)].integral = true;
    }
  }

  if (have_exact_vars) {
    for (const auto& toks : exact_rows) {
      LinearIneq ineq;
      size_t k = 0;
      for (; k < toks.size() && toks[k] != "|"; ++k)
        ineq.coeffs.push_back(rat_parse(toks[k]));
      if (k + 2 != toks.size() || toks[k] != "|")
        throw MilpError(filename + ": bad exact row");
      ineq.constant = rat_parse(toks[k + 1]);
      ineq.coeffs.resize(p.vars.size(), Rat(0));
      p.rows.push_back(std::move(ineq));
    }
    return p;
  }
  p.vars = body_vars;
  for (auto& r : body_rows) r.coeffs.resize(p.vars.size(), Rat(0));
  p.rows = body_rows;
  return p;
}

}  // namespace fop
