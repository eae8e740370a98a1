#include "fop/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fop {

namespace {

enum class Tok {
  Ident, Number, LParen, RParen, LBracket, RBracket, Comma, Semi, Dot,
  Plus, Minus, Star, Slash, Caret, Or, Bang, Quest, Equals, End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

struct Lexer {
  const std::string& src;
  const std::string& file;
  size_t pos = 0;
  int line = 1, col = 1;

  Lexer(const std::string& s, const std::string& f) : src(s), file(f) {}

  [[noreturn]] void fail(int l, int c, const std::string& msg) const {
    throw ParseError(file, l, c, msg);
  }

  void advance() {
    if (pos < src.size()) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  Token next() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      break;
    }
    if (pos >= src.size()) return {Tok::End, "", line, col};
    int l = line, c0 = col;
    char c = src[pos];
    auto one = [&](Tok k) {
      advance();
      return Token{k, std::string(1, c), l, c0};
    };
    switch (c) {
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case '[': return one(Tok::LBracket);
      case ']': return one(Tok::RBracket);
      case ',': return one(Tok::Comma);
      case ';': return one(Tok::Semi);
      case '.': return one(Tok::Dot);
      case '+': return one(Tok::Plus);
      case '-': return one(Tok::Minus);
      case '*': return one(Tok::Star);
      case '/': return one(Tok::Slash);
      case '^': return one(Tok::Caret);
      case '!': return one(Tok::Bang);
      case '?': return one(Tok::Quest);
      case '=': return one(Tok::Equals);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        num += src[pos];
        advance();
      }
      // decimal literal: digits '.' digits (the dot otherwise ends a binder)
      if (pos + 1 < src.size() && src[pos] == '.' &&
          std::isdigit(static_cast<unsigned char>(src[pos + 1]))) {
        num += '.';
        advance();
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
          num += src[pos];
          advance();
        }
      }
      return {Tok::Number, num, l, c0};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
        id += src[pos];
        advance();
      }
      if (id == "v") return {Tok::Or, id, l, c0};
      return {Tok::Ident, id, l, c0};
    }
    fail(l, c0, std::string("unexpected character '") + c + "'");
  }
};

struct Parser {
  Lexer lex;
  Token tok;
  ProblemFile out;

  Parser(const std::string& src, const std::string& file) : lex(src, file) {
    tok = lex.next();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(lex.file, tok.line, tok.col, msg);
  }

  void bump() { tok = lex.next(); }

  bool at(Tok k) const { return tok.kind == k; }
  bool at_ident(const char* kw) const { return at(Tok::Ident) && tok.text == kw; }

  void expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    bump();
  }

  std::string expect_ident(const char* what) {
    if (!at(Tok::Ident)) fail(std::string("expected ") + what);
    std::string s = tok.text;
    bump();
    return s;
  }

  // signed rational: ["-"] NUMBER ["/" NUMBER]
  Rat parse_rat() {
    bool neg = false;
    if (at(Tok::Minus)) {
      neg = true;
      bump();
    }
    if (!at(Tok::Number)) fail("expected a number");
    std::string text = tok.text;
    bump();
    if (at(Tok::Slash)) {
      bump();
      if (!at(Tok::Number)) fail("expected a denominator");
      text += "/" + tok.text;
      bump();
    }
    Rat r = rat_parse(text);
    return neg ? Rat(-r) : r;
  }

  int parse_arity() {
    if (!at(Tok::Number)) fail("expected an arity");
    int a = std::stoi(tok.text);
    bump();
    return a;
  }

  // ----- terms ---------------------------------------------------------

  TermPtr parse_term() {
    if (at(Tok::Number)) {
      // numeric object constant; only meaningful under an objects directive
      std::string n = tok.text;
      bump();
      if (!out.symbols.has_fun(n))
        fail("numeric constant '" + n + "' is not a declared object");
      return mk_app(n);
    }
    if (!at(Tok::Ident)) fail("expected a term");
    std::string name = tok.text;
    int l = tok.line, c = tok.col;
    bump();
    if (at(Tok::LParen)) {
      bump();
      std::vector<TermPtr> args;
      if (!at(Tok::RParen)) {
        args.push_back(parse_term());
        while (at(Tok::Comma)) {
          bump();
          args.push_back(parse_term());
        }
      }
      expect(Tok::RParen, "')'");
      auto it = out.symbols.funs.find(name);
      if (it == out.symbols.funs.end())
        throw ParseError(lex.file, l, c, "undeclared function '" + name + "'");
      if (it->second.arity != static_cast<int>(args.size()))
        throw ParseError(lex.file, l, c,
                         "function '" + name + "' expects " +
                             std::to_string(it->second.arity) + " argument(s)");
      return mk_app(name, std::move(args));
    }
    if (out.symbols.has_fun(name)) {
      if (out.symbols.funs.at(name).arity != 0)
        throw ParseError(lex.file, l, c,
                         "function '" + name + "' used without arguments");
      return mk_app(name);
    }
    return mk_var(name);
  }

  // ----- formulas ------------------------------------------------------
  // binder (loosest), then ^, then v, then +/-, then scalar factors.

  FormulaPtr parse_formula_root() {
    if (at(Tok::Bang) || at(Tok::Quest)) {
      bool inf = at(Tok::Bang);
      bump();
      std::string var = expect_ident("a variable after the binder");
      if (out.symbols.has(var))
        fail("binder variable '" + var + "' collides with a declared symbol");
      expect(Tok::Dot, "'.' after the binder variable");
      auto body = parse_formula_root();
      return inf ? f_inf(var, body) : f_sup(var, body);
    }
    return parse_min();
  }

  FormulaPtr parse_min() {
    auto f = parse_max();
    while (at(Tok::Caret)) {
      bump();
      f = f_min(f, parse_max());
    }
    return f;
  }

  FormulaPtr parse_max() {
    auto f = parse_sum();
    while (at(Tok::Or)) {
      bump();
      f = f_max(f, parse_sum());
    }
    return f;
  }

  FormulaPtr parse_sum() {
    auto f = parse_factor();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      bool plus = at(Tok::Plus);
      bump();
      auto g = parse_factor();
      f = plus ? f_add(f, g) : f_sub(f, g);
    }
    return f;
  }

  FormulaPtr parse_factor() {
    if (at(Tok::Minus)) {
      bump();
      return f_neg(parse_factor());
    }
    if (at(Tok::Number)) {
      // scalar, rational literal, or coefficient
      std::string text = tok.text;
      int l = tok.line, c = tok.col;
      bump();
      if (at(Tok::Slash)) {
        bump();
        if (!at(Tok::Number)) throw ParseError(lex.file, l, c, "expected a denominator");
        text += "/" + tok.text;
        bump();
      }
      Rat r = rat_parse(text);
      if (at(Tok::Star)) {
        bump();
        return f_mul(r, parse_factor());
      }
      return f_scalar(r);
    }
    auto f = parse_primary();
    if (at(Tok::Star)) {
      bump();
      Rat r = parse_rat();
      return f_mul(r, f);
    }
    return f;
  }

  FormulaPtr parse_primary() {
    if (at(Tok::LParen)) {
      bump();
      auto f = parse_formula_root();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (!at(Tok::Ident)) fail("expected a formula");
    std::string name = tok.text;
    int l = tok.line, c = tok.col;
    bump();
    std::vector<TermPtr> args;
    if (at(Tok::LParen)) {
      bump();
      if (!at(Tok::RParen)) {
        args.push_back(parse_term());
        while (at(Tok::Comma)) {
          bump();
          args.push_back(parse_term());
        }
      }
      expect(Tok::RParen, "')'");
    }
    auto it = out.symbols.preds.find(name);
    if (it == out.symbols.preds.end())
      throw ParseError(lex.file, l, c, "undeclared predicate '" + name + "'");
    if (it->second.arity != static_cast<int>(args.size()))
      throw ParseError(lex.file, l, c,
                       "predicate '" + name + "' expects " +
                           std::to_string(it->second.arity) + " argument(s)");
    return f_pred(name, std::move(args));
  }

  // ----- declarations --------------------------------------------------

  void declare_object(const std::string& name, int l, int c) {
    if (out.symbols.has_pred(name))
      throw ParseError(lex.file, l, c, "object '" + name + "' collides with a predicate");
    auto it = out.symbols.funs.find(name);
    if (it != out.symbols.funs.end() && it->second.arity != 0)
      throw ParseError(lex.file, l, c, "object '" + name + "' collides with a function");
    if (std::find(out.objects.begin(), out.objects.end(), name) != out.objects.end())
      throw ParseError(lex.file, l, c, "duplicate object '" + name + "'");
    out.symbols.funs[name] = FunDecl{0};
    out.objects.push_back(name);
  }

  std::string parse_object_name() {
    if (at(Tok::Number) || at(Tok::Ident)) {
      std::string s = tok.text;
      bump();
      return s;
    }
    fail("expected an object name");
  }

  void parse_file() {
    while (!at(Tok::End)) {
      if (at_ident("pred")) {
        bump();
        std::string name = expect_ident("a predicate name");
        if (out.symbols.has(name)) fail("duplicate declaration of '" + name + "'");
        expect(Tok::Slash, "'/'");
        int arity = parse_arity();
        if (!at_ident("in")) fail("expected 'in'");
        bump();
        bool integral;
        if (at_ident("int")) integral = true;
        else if (at_ident("real")) integral = false;
        else fail("expected 'int' or 'real'");
        bump();
        expect(Tok::LBracket, "'['");
        Rat lo = parse_rat();
        expect(Tok::Comma, "','");
        Rat hi = parse_rat();
        expect(Tok::RBracket, "']'");
        if (lo > hi) fail("empty range for '" + name + "'");
        out.symbols.preds[name] = PredDecl{arity, lo, hi, integral};
      } else if (at_ident("fun")) {
        bump();
        std::string name = expect_ident("a function name");
        if (out.symbols.has(name)) fail("duplicate declaration of '" + name + "'");
        expect(Tok::Slash, "'/'");
        int arity = parse_arity();
        out.symbols.funs[name] = FunDecl{arity};
      } else if (at_ident("sentence")) {
        if (out.sentence) fail("duplicate sentence");
        bump();
        out.sentence = parse_formula_root();
      } else if (at_ident("query")) {
        if (out.query) fail("duplicate query");
        bump();
        out.query = parse_formula_root();
      } else if (at_ident("threshold")) {
        if (out.threshold) fail("duplicate threshold");
        bump();
        out.threshold = parse_rat();
      } else if (at_ident("objects")) {
        bump();
        declare_object(parse_object_name(), tok.line, tok.col);
        while (at(Tok::Comma)) {
          bump();
          declare_object(parse_object_name(), tok.line, tok.col);
        }
      } else if (at_ident("define")) {
        bump();
        int l = tok.line, c = tok.col;
        std::string fn = expect_ident("a function name");
        auto it = out.symbols.funs.find(fn);
        if (it == out.symbols.funs.end())
          throw ParseError(lex.file, l, c, "undeclared function '" + fn + "'");
        std::vector<std::string> args;
        if (at(Tok::LParen)) {
          bump();
          if (!at(Tok::RParen)) {
            args.push_back(parse_object_name());
            while (at(Tok::Comma)) {
              bump();
              args.push_back(parse_object_name());
            }
          }
          expect(Tok::RParen, "')'");
        }
        if (it->second.arity != static_cast<int>(args.size()))
          throw ParseError(lex.file, l, c, "wrong number of arguments for '" + fn + "'");
        expect(Tok::Equals, "'='");
        std::string val = parse_object_name();
        for (const auto& a : args)
          if (std::find(out.objects.begin(), out.objects.end(), a) == out.objects.end())
            throw ParseError(lex.file, l, c, "'" + a + "' is not a declared object");
        if (std::find(out.objects.begin(), out.objects.end(), val) == out.objects.end())
          throw ParseError(lex.file, l, c, "'" + val + "' is not a declared object");
        out.fun_table[{fn, args}] = val;
      } else {
        fail("expected a declaration or directive");
      }
      expect(Tok::Semi, "';'");
    }
  }
};

}  // namespace

ProblemFile parse_problem(const std::string& text, const std::string& filename) {
  Parser p(text, filename);
  p.parse_file();
  return p.out;
}

FormulaPtr parse_formula(const std::string& text, const SymbolTable& symbols) {
  Parser p(text, "<formula>");
  p.out.symbols = symbols;
  auto f = p.parse_formula_root();
  if (!p.at(Tok::End)) p.fail("trailing input after formula");
  return f;
}

std::string print_declarations(const SymbolTable& symbols) {
  std::ostringstream os;
  for (const auto& [name, d] : symbols.preds)
    os << "pred " << name << "/" << d.arity << " in " << (d.integral ? "int" : "real")
       << "[" << rat_str(d.lo) << "," << rat_str(d.hi) << "];\n";
  for (const auto& [name, d] : symbols.funs)
    os << "fun " << name << "/" << d.arity << ";\n";
  return os.str();
}

std::string print_problem(const ProblemFile& p) {
  std::ostringstream os;
  std::set<std::string> object_names(p.objects.begin(), p.objects.end());
  for (const auto& [name, d] : p.symbols.preds)
    os << "pred " << name << "/" << d.arity << " in " << (d.integral ? "int" : "real")
       << "[" << rat_str(d.lo) << "," << rat_str(d.hi) << "];\n";
  for (const auto& [name, d] : p.symbols.funs)
    if (!object_names.count(name))
      os << "fun " << name << "/" << d.arity << ";\n";
  if (!p.objects.empty()) {
    os << "objects ";
    for (size_t i = 0; i < p.objects.size(); ++i) {
      if (i) os << ", ";
      os << p.objects[i];
    }
    os << ";\n";
  }
  for (const auto& [key, val] : p.fun_table) {
    os << "define " << key.first;
    if (!key.second.empty()) {
      os << "(";
      for (size_t i = 0; i < key.second.size(); ++i) {
        if (i) os << ",";
        os << key.second[i];
      }
      os << ")";
    }
    os << " = " << val << ";\n";
  }
  if (p.sentence) os << "sentence " << formula_str(p.sentence) << ";\n";
  if (p.query) os << "query " << formula_str(p.query) << ";\n";
  if (p.threshold) os << "threshold " << rat_str(*p.threshold) << ";\n";
  return os.str();
}

}  // namespace fop
