#include "fop/fol.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "fop/parser.hpp"

namespace fop {

namespace {
std::shared_ptr<FolFormula> fnode(FolK k) {
  auto f = std::make_shared<FolFormula>();
  f->kind = k;
  return f;
}
}  // namespace

FolPtr fol_true() { return fnode(FolK::True); }
FolPtr fol_false() { return fnode(FolK::False); }

FolPtr fol_atom(std::string pred, std::vector<TermPtr> args) {
  auto f = fnode(FolK::Atom);
  f->name = std::move(pred);
  f->args = std::move(args);
  return f;
}

FolPtr fol_not(FolPtr x) {
  auto f = fnode(FolK::Not);
  f->a = std::move(x);
  return f;
}

namespace {
FolPtr fbinary(FolK k, FolPtr x, FolPtr y) {
  auto f = fnode(k);
  f->a = std::move(x);
  f->b = std::move(y);
  return f;
}
}  // namespace

FolPtr fol_and(FolPtr x, FolPtr y) { return fbinary(FolK::And, std::move(x), std::move(y)); }
FolPtr fol_or(FolPtr x, FolPtr y) { return fbinary(FolK::Or, std::move(x), std::move(y)); }
FolPtr fol_implies(FolPtr x, FolPtr y) { return fbinary(FolK::Implies, std::move(x), std::move(y)); }

FolPtr fol_forall(std::string var, FolPtr body) {
  auto f = fnode(FolK::Forall);
  f->name = std::move(var);
  f->a = std::move(body);
  return f;
}

FolPtr fol_exists(std::string var, FolPtr body) {
  auto f = fnode(FolK::Exists);
  f->name = std::move(var);
  f->a = std::move(body);
  return f;
}

namespace {
// precedence: -> (0, right assoc) < | (1) < & (2) < ~ (3) < atom (4)
void fol_print(const FolPtr& f, int ctx, std::string& out) {
  auto wrap = [&](int lev, auto body) {
    bool paren = lev < ctx;
    if (paren) out += "(";
    body();
    if (paren) out += ")";
  };
  switch (f->kind) {
    case FolK::True: out += "T"; return;
    case FolK::False: out += "F"; return;
    case FolK::Atom: {
      out += f->name;
      if (!f->args.empty()) {
        out += "(";
        for (size_t i = 0; i < f->args.size(); ++i) {
          if (i) out += ",";
          out += term_str(f->args[i]);
        }
        out += ")";
      }
      return;
    }
    case FolK::Not:
      wrap(3, [&] {
        out += "~";
        fol_print(f->a, 4, out);
      });
      return;
    case FolK::And:
      wrap(2, [&] {
        fol_print(f->a, 2, out);
        out += " & ";
        fol_print(f->b, 3, out);
      });
      return;
    case FolK::Or:
      wrap(1, [&] {
        fol_print(f->a, 1, out);
        out += " | ";
        fol_print(f->b, 2, out);
      });
      return;
    case FolK::Implies:
      wrap(0, [&] {
        fol_print(f->a, 1, out);
        out += " -> ";
        fol_print(f->b, 0, out);
      });
      return;
    case FolK::Forall:
    case FolK::Exists:
      wrap(0, [&] {
        out += f->kind == FolK::Forall ? "forall " : "exists ";
        out += f->name;
        out += ". ";
        fol_print(f->a, 0, out);
      });
      return;
  }
}
}  // namespace

std::string fol_str(const FolPtr& f) {
  std::string out;
  fol_print(f, 0, out);
  return out;
}

// ------------------------------------------------------------- parsing

namespace {

struct FolParser {
  const std::string& src;
  const std::string& file;
  size_t pos = 0;
  int line = 1, col = 1;
  std::set<std::string> bound;
  std::map<std::string, int> pred_arity, fun_arity;

  FolParser(const std::string& s, const std::string& f) : src(s), file(f) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(file, line, col, msg);
  }

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < src.size()) {
      if (src[pos] == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(src[pos]))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      advance();
      return true;
    }
    return false;
  }

  bool eat_arrow() {
    skip_ws();
    if (pos + 1 < src.size() && src[pos] == '-' && src[pos + 1] == '>') {
      advance();
      advance();
      return true;
    }
    return false;
  }

  std::string peek_ident() {
    skip_ws();
    size_t p = pos;
    std::string id;
    while (p < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[p])) || src[p] == '_')) {
      id += src[p];
      ++p;
    }
    return id;
  }

  std::string take_ident() {
    std::string id = peek_ident();
    if (id.empty()) fail("expected an identifier");
    for (size_t i = 0; i < id.size(); ++i) advance();
    return id;
  }

  void note_fun(const std::string& name, int arity) {
    if (pred_arity.count(name)) fail("'" + name + "' used as both predicate and function");
    auto [it, fresh] = fun_arity.emplace(name, arity);
    if (!fresh && it->second != arity) fail("inconsistent arity for '" + name + "'");
  }

  void note_pred(const std::string& name, int arity) {
    if (fun_arity.count(name)) fail("'" + name + "' used as both predicate and function");
    auto [it, fresh] = pred_arity.emplace(name, arity);
    if (!fresh && it->second != arity) fail("inconsistent arity for '" + name + "'");
  }

  TermPtr parse_term() {
    std::string name = take_ident();
    if (eat('(')) {
      std::vector<TermPtr> args;
      if (!eat(')')) {
        args.push_back(parse_term());
        while (eat(',')) args.push_back(parse_term());
        if (!eat(')')) fail("expected ')'");
      }
      note_fun(name, static_cast<int>(args.size()));
      return mk_app(name, std::move(args));
    }
    if (bound.count(name)) return mk_var(name);
    // bare names: capitalized reads as a constant (Stanley), lowercase as a
    // free variable (x, y, z)
    if (std::isupper(static_cast<unsigned char>(name[0]))) {
      note_fun(name, 0);
      return mk_app(name);
    }
    return mk_var(name);
  }

  FolPtr parse_implies() {
    std::string id = peek_ident();
    if (id == "forall" || id == "exists") {
      take_ident();
      std::string var = take_ident();
      if (!eat('.')) fail("expected '.' after binder variable");
      bool fresh = bound.insert(var).second;
      auto body = parse_implies();
      if (fresh) bound.erase(var);
      return id == "forall" ? fol_forall(var, body) : fol_exists(var, body);
    }
    auto f = parse_or();
    if (eat_arrow()) return fol_implies(f, parse_implies());
    return f;
  }

  FolPtr parse_or() {
    auto f = parse_and();
    while (true) {
      skip_ws();
      if (pos < src.size() && src[pos] == '|') {
        advance();
        f = fol_or(f, parse_and());
      } else {
        break;
      }
    }
    return f;
  }

  FolPtr parse_and() {
    auto f = parse_unary();
    while (true) {
      skip_ws();
      if (pos < src.size() && src[pos] == '&') {
        advance();
        f = fol_and(f, parse_unary());
      } else {
        break;
      }
    }
    return f;
  }

  FolPtr parse_unary() {
    skip_ws();
    if (pos < src.size() && src[pos] == '~') {
      advance();
      return fol_not(parse_unary());
    }
    if (eat('(')) {
      auto f = parse_implies();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    std::string id = peek_ident();
    if (id == "forall" || id == "exists") return parse_implies();
    if (id == "T") {
      take_ident();
      return fol_true();
    }
    if (id == "F") {
      take_ident();
      return fol_false();
    }
    if (id.empty()) fail("expected a formula");
    std::string name = take_ident();
    std::vector<TermPtr> args;
    if (eat('(')) {
      if (!eat(')')) {
        args.push_back(parse_term());
        while (eat(',')) args.push_back(parse_term());
        if (!eat(')')) fail("expected ')'");
      }
    }
    note_pred(name, static_cast<int>(args.size()));
    return fol_atom(name, std::move(args));
  }
};

}  // namespace

FolFile parse_fol(const std::string& text, const std::string& filename) {
  FolParser p(text, filename);
  auto f = p.parse_implies();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input after formula");
  FolFile out;
  out.formula = f;
  for (const auto& [name, arity] : p.pred_arity)
    out.symbols.preds[name] = PredDecl{arity, Rat(0), Rat(1), true};
  for (const auto& [name, arity] : p.fun_arity)
    out.symbols.funs[name] = FunDecl{arity};
  return out;
}

// --------------------------------------------------------- translation

namespace {

FolPtr rewrite_implications(const FolPtr& f) {
  switch (f->kind) {
    case FolK::True:
    case FolK::False:
    case FolK::Atom:
      return f;
    case FolK::Not:
      return fol_not(rewrite_implications(f->a));
    case FolK::And:
      return fol_and(rewrite_implications(f->a), rewrite_implications(f->b));
    case FolK::Or:
      return fol_or(rewrite_implications(f->a), rewrite_implications(f->b));
    case FolK::Implies:
      return fol_or(fol_not(rewrite_implications(f->a)), rewrite_implications(f->b));
    case FolK::Forall:
      return fol_forall(f->name, rewrite_implications(f->a));
    case FolK::Exists:
      return fol_exists(f->name, rewrite_implications(f->a));
  }
  return f;
}

FormulaPtr trans(const FolPtr& f, FolMode m) {
  switch (f->kind) {
    case FolK::True:
      return f_scalar(1);
    case FolK::False:
      return f_scalar(m == FolMode::A ? -1 : 0);
    case FolK::Atom: {
      auto p = f_pred(f->name, f->args);
      // mode A works in {-1,+1}; the 0/1 predicate is rescaled
      if (m == FolMode::A) return f_sub(f_mul(2, p), f_scalar(1));
      return p;
    }
    case FolK::Not:
      return m == FolMode::A ? f_neg(trans(f->a, m))
                             : f_sub(f_scalar(1), trans(f->a, m));
    case FolK::And:
      return f_min(trans(f->a, m), trans(f->b, m));
    case FolK::Or:
      return m == FolMode::A
                 ? f_max(trans(f->a, m), trans(f->b, m))
                 : f_min(f_scalar(1), f_add(trans(f->a, m), trans(f->b, m)));
    case FolK::Implies:
      // rewritten before translation
      return trans(fol_or(fol_not(f->a), f->b), m);
    case FolK::Forall:
      return f_inf(f->name, trans(f->a, m));
    case FolK::Exists:
      return f_sup(f->name, trans(f->a, m));
  }
  return f_scalar(0);
}

// ---- threshold-0 normalization helpers --------------------------------

struct SumParts {
  std::vector<std::pair<Rat, FormulaPtr>> parts;
  Rat konst = 0;
};

void flatten_sum(const FormulaPtr& f, const Rat& c, SumParts& out) {
  switch (f->kind) {
    case FK::Scalar:
      out.konst += c * f->num;
      return;
    case FK::Add:
      flatten_sum(f->a, c, out);
      flatten_sum(f->b, c, out);
      return;
    case FK::Sub:
      flatten_sum(f->a, c, out);
      flatten_sum(f->b, Rat(-c), out);
      return;
    case FK::Neg:
      flatten_sum(f->a, Rat(-c), out);
      return;
    case FK::Mul:
      flatten_sum(f->a, Rat(c * f->num), out);
      return;
    default:
      for (auto& [coeff, node] : out.parts) {
        if (formula_eq(node, f)) {
          coeff += c;
          return;
        }
      }
      out.parts.emplace_back(c, f);
      return;
  }
}

FormulaPtr rebuild_sum(const SumParts& in) {
  std::vector<std::pair<Rat, FormulaPtr>> ordered;
  for (const auto& p : in.parts)
    if (p.first > 0) ordered.push_back(p);
  for (const auto& p : in.parts)
    if (p.first < 0) ordered.push_back(p);
  FormulaPtr acc;
  for (const auto& [c, node] : ordered) {
    if (!acc) {
      if (c == 1) acc = node;
      else if (c == -1) acc = f_neg(node);
      else acc = f_mul(c, node);
    } else if (c == 1) {
      acc = f_add(acc, node);
    } else if (c == -1) {
      acc = f_sub(acc, node);
    } else if (c > 0) {
      acc = f_add(acc, f_mul(c, node));
    } else {
      acc = f_sub(acc, f_mul(Rat(-c), node));
    }
  }
  if (!acc) return f_scalar(in.konst);
  if (in.konst > 0) return f_add(acc, f_scalar(in.konst));
  if (in.konst < 0) return f_sub(acc, f_scalar(Rat(-in.konst)));
  return acc;
}

// f + c with the constant pushed through lattice operators exactly.
FormulaPtr add_const(const FormulaPtr& f, const Rat& c) {
  if (c == 0) return f;
  switch (f->kind) {
    case FK::Min:
      return f_min(add_const(f->a, c), add_const(f->b, c));
    case FK::Max:
      return f_max(add_const(f->a, c), add_const(f->b, c));
    case FK::Inf:
      return f_inf(f->name, add_const(f->a, c));
    case FK::Sup:
      return f_sup(f->name, add_const(f->a, c));
    default: {
      SumParts parts;
      flatten_sum(f, Rat(1), parts);
      parts.konst += c;
      return rebuild_sum(parts);
    }
  }
}

// sign_ok: every ancestor is min/max/quantifier, so rewrites that only
// preserve the sign of the value (0 ^ X -> X) are admissible.
FormulaPtr simp(const FormulaPtr& f, bool sign_ok) {
  switch (f->kind) {
    case FK::Scalar:
    case FK::Pred:
      return f;
    case FK::Min:
    case FK::Max: {
      auto a = simp(f->a, sign_ok);
      auto b = simp(f->b, sign_ok);
      if (a->kind == FK::Scalar && b->kind == FK::Scalar)
        return f_scalar(f->kind == FK::Min ? std::min(a->num, b->num)
                                           : std::max(a->num, b->num));
      if (sign_ok && f->kind == FK::Min) {
        if (a->kind == FK::Scalar && a->num == 0) return b;
        if (b->kind == FK::Scalar && b->num == 0) return a;
      }
      return f->kind == FK::Min ? f_min(a, b) : f_max(a, b);
    }
    case FK::Inf:
      return f_inf(f->name, simp(f->a, sign_ok));
    case FK::Sup:
      return f_sup(f->name, simp(f->a, sign_ok));
    default: {
      SumParts parts;
      flatten_sum(f, Rat(1), parts);
      for (auto& [c, node] : parts.parts) node = simp(node, false);
      std::erase_if(parts.parts,
                    [](const std::pair<Rat, FormulaPtr>& p) { return p.first == 0; });
      return rebuild_sum(parts);
    }
  }
}

}  // namespace

FormulaPtr translate_fol(const FolPtr& f, FolMode mode, bool simplify) {
  auto g = trans(rewrite_implications(f), mode);
  if (!simplify) return g;
  if (mode == FolMode::B) g = add_const(g, Rat(-1));
  return simp(g, true);
}

Rat fol_threshold(FolMode mode, bool simplified) {
  if (mode == FolMode::A) return Rat(0);
  return simplified ? Rat(0) : Rat(1, 2);
}

}  // namespace fop
