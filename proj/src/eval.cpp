#include "fop/eval.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <thread>

#include "fop/parser.hpp"

namespace fop {

int Model::index_of(const std::string& object) const {
  auto it = std::find(objects.begin(), objects.end(), object);
  return it == objects.end() ? -1 : static_cast<int>(it - objects.begin());
}

namespace {

unsigned long long pow_ull(unsigned long long base, int exp,
                           unsigned long long cap) {
  unsigned long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

size_t table_index(const std::vector<int>& args, size_t n) {
  size_t idx = 0, stride = 1;
  for (int a : args) {
    idx += stride * static_cast<size_t>(a);
    stride *= n;
  }
  return idx;
}

// decode flat table slot back into an argument tuple, for printing
std::vector<int> decode_args(size_t idx, int arity, size_t n) {
  std::vector<int> args(arity);
  for (int i = 0; i < arity; ++i) {
    args[i] = static_cast<int>(idx % n);
    idx /= n;
  }
  return args;
}

}  // namespace

// ----------------------------------------------------------- model files

namespace {

struct ModelParser {
  const std::string& src;
  const std::string& file;
  const SymbolTable& syms;
  size_t pos = 0;
  int line = 1, col = 1;

  ModelParser(const std::string& s, const std::string& f, const SymbolTable& sy)
      : src(s), file(f), syms(sy) {}

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

  bool done() {
    skip_ws();
    return pos >= src.size();
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string take_word() {
    skip_ws();
    std::string w;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) ||
            src[pos] == '_')) {
      w += src[pos];
      advance();
    }
    if (w.empty()) fail("expected a name");
    return w;
  }

  std::string take_number_token() {
    skip_ws();
    std::string w;
    while (pos < src.size() &&
           (std::isdigit(static_cast<unsigned char>(src[pos])) ||
            src[pos] == '.' || src[pos] == '/' || src[pos] == '-')) {
      w += src[pos];
      advance();
    }
    if (w.empty()) fail("expected a number");
    return w;
  }
};

}  // namespace

Model parse_model(const std::string& text, const SymbolTable& symbols,
                  const std::string& filename) {
  ModelParser p(text, filename, symbols);
  Model m;
  std::map<std::string, std::vector<bool>> fun_set, pred_set;
  while (!p.done()) {
    std::string kw = p.take_word();
    if (kw == "objects") {
      if (!m.objects.empty()) p.fail("duplicate objects directive");
      m.objects.push_back(p.take_word());
      while (p.eat(',')) m.objects.push_back(p.take_word());
      p.expect(';');
      for (size_t i = 0; i < m.objects.size(); ++i)
        for (size_t j = i + 1; j < m.objects.size(); ++j)
          if (m.objects[i] == m.objects[j]) p.fail("duplicate object '" + m.objects[i] + "'");
      size_t n = m.objects.size();
      for (const auto& [name, decl] : symbols.funs) {
        size_t sz = 1;
        for (int i = 0; i < decl.arity; ++i) sz *= n;
        m.funs[name].assign(sz, -1);
        fun_set[name].assign(sz, false);
      }
      for (const auto& [name, decl] : symbols.preds) {
        size_t sz = 1;
        for (int i = 0; i < decl.arity; ++i) sz *= n;
        m.preds[name].assign(sz, Rat(0));
        pred_set[name].assign(sz, false);
      }
      continue;
    }
    if (m.objects.empty()) p.fail("objects directive must come first");
    bool is_fun = kw == "fun";
    if (!is_fun && kw != "pred") p.fail("expected 'objects', 'fun' or 'pred'");
    std::string name = p.take_word();
    std::vector<int> args;
    if (p.eat('(')) {
      if (!p.eat(')')) {
        do {
          std::string obj = p.take_word();
          int idx = m.index_of(obj);
          if (idx < 0) p.fail("unknown object '" + obj + "'");
          args.push_back(idx);
        } while (p.eat(','));
        p.expect(')');
      }
    }
    p.expect('=');
    if (is_fun) {
      auto it = symbols.funs.find(name);
      if (it == symbols.funs.end()) p.fail("undeclared function '" + name + "'");
      if (it->second.arity != static_cast<int>(args.size()))
        p.fail("arity mismatch for function '" + name + "'");
      std::string obj = p.take_word();
      int val = m.index_of(obj);
      if (val < 0) p.fail("unknown object '" + obj + "'");
      size_t slot = table_index(args, m.objects.size());
      if (fun_set[name][slot]) p.fail("duplicate entry for function '" + name + "'");
      m.funs[name][slot] = val;
      fun_set[name][slot] = true;
    } else {
      auto it = symbols.preds.find(name);
      if (it == symbols.preds.end()) p.fail("undeclared predicate '" + name + "'");
      if (it->second.arity != static_cast<int>(args.size()))
        p.fail("arity mismatch for predicate '" + name + "'");
      Rat val;
      try {
        val = rat_parse(p.take_number_token());
      } catch (const std::invalid_argument& e) {
        p.fail(e.what());
      }
      if (val < it->second.lo || val > it->second.hi)
        p.fail("value out of range for predicate '" + name + "'");
      if (it->second.integral && !rat_is_integer(val))
        p.fail("non-integer value for integer predicate '" + name + "'");
      size_t slot = table_index(args, m.objects.size());
      if (pred_set[name][slot]) p.fail("duplicate entry for predicate '" + name + "'");
      m.preds[name][slot] = val;
      pred_set[name][slot] = true;
    }
    p.expect(';');
  }
  if (m.objects.empty()) p.fail("model has no objects");
  for (const auto& [name, filled] : fun_set)
    for (size_t i = 0; i < filled.size(); ++i)
      if (!filled[i]) throw EvalError("model is missing an entry for function '" + name + "'");
  for (const auto& [name, filled] : pred_set)
    for (size_t i = 0; i < filled.size(); ++i)
      if (!filled[i]) throw EvalError("model is missing an entry for predicate '" + name + "'");
  return m;
}

std::string print_model(const Model& m, const SymbolTable& symbols) {
  std::ostringstream out;
  out << "objects ";
  for (size_t i = 0; i < m.objects.size(); ++i) {
    if (i) out << ", ";
    out << m.objects[i];
  }
  out << ";\n";
  size_t n = m.objects.size();
  auto args_str = [&](size_t slot, int arity) {
    std::string s = "(";
    auto args = decode_args(slot, arity, n);
    for (int i = 0; i < arity; ++i) {
      if (i) s += ",";
      s += m.objects[args[i]];
    }
    return s + ")";
  };
  for (const auto& [name, decl] : symbols.funs) {
    const auto& table = m.funs.at(name);
    for (size_t slot = 0; slot < table.size(); ++slot)
      out << "fun " << name << args_str(slot, decl.arity) << " = "
          << m.objects[table[slot]] << ";\n";
  }
  for (const auto& [name, decl] : symbols.preds) {
    const auto& table = m.preds.at(name);
    for (size_t slot = 0; slot < table.size(); ++slot)
      out << "pred " << name << args_str(slot, decl.arity) << " = "
          << rat_str(table[slot]) << ";\n";
  }
  return out.str();
}

// ------------------------------------------------------------ evaluation

int evaluate_term(const TermPtr& t, const Model& m, const Valuation& v) {
  if (t->var) {
    auto it = v.find(t->name);
    if (it == v.end()) throw EvalError("unbound variable '" + t->name + "'");
    return it->second;
  }
  auto it = m.funs.find(t->name);
  if (it == m.funs.end()) throw EvalError("no table for function '" + t->name + "'");
  std::vector<int> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(evaluate_term(a, m, v));
  return it->second[table_index(args, m.objects.size())];
}

namespace {

Rat eval_closed(const FormulaPtr& f, const Model& m, Valuation& v) {
  switch (f->kind) {
    case FK::Scalar:
      return f->num;
    case FK::Pred: {
      auto it = m.preds.find(f->name);
      if (it == m.preds.end()) throw EvalError("no table for predicate '" + f->name + "'");
      std::vector<int> args;
      args.reserve(f->args.size());
      for (const auto& a : f->args) args.push_back(evaluate_term(a, m, v));
      return it->second[table_index(args, m.objects.size())];
    }
    case FK::Neg: {
      Rat r = -eval_closed(f->a, m, v);
      return r;
    }
    case FK::Mul: {
      Rat r = f->num * eval_closed(f->a, m, v);
      return r;
    }
    case FK::Add: {
      Rat r = eval_closed(f->a, m, v) + eval_closed(f->b, m, v);
      return r;
    }
    case FK::Sub: {
      Rat r = eval_closed(f->a, m, v) - eval_closed(f->b, m, v);
      return r;
    }
    case FK::Min:
      return std::min(eval_closed(f->a, m, v), eval_closed(f->b, m, v));
    case FK::Max:
      return std::max(eval_closed(f->a, m, v), eval_closed(f->b, m, v));
    case FK::Inf:
    case FK::Sup: {
      auto saved = v.find(f->name);
      int old = saved == v.end() ? -1 : saved->second;
      Rat best;
      for (size_t o = 0; o < m.objects.size(); ++o) {
        v[f->name] = static_cast<int>(o);
        Rat r = eval_closed(f->a, m, v);
        if (o == 0 || (f->kind == FK::Inf ? r < best : r > best)) best = r;
      }
      if (old >= 0) v[f->name] = old;
      else v.erase(f->name);
      return best;
    }
  }
  throw EvalError("malformed formula");
}

}  // namespace

Rat evaluate(const FormulaPtr& f, const Model& m, const SymbolTable& symbols,
             const Valuation& v) {
  (void)symbols;
  if (m.objects.empty()) throw EvalError("model has no objects");
  std::vector<std::string> missing;
  for (const auto& x : free_variables(f))
    if (!v.count(x)) missing.push_back(x);
  Valuation w = v;
  if (missing.empty()) return eval_closed(f, m, w);
  // implicit outer min over the unbound free variables
  size_t n = m.objects.size();
  unsigned long long total = pow_ull(n, static_cast<int>(missing.size()),
                                     1ull << 62);
  Rat best;
  for (unsigned long long k = 0; k < total; ++k) {
    unsigned long long rest = k;
    for (const auto& x : missing) {
      w[x] = static_cast<int>(rest % n);
      rest /= n;
    }
    Rat r = eval_closed(f, m, w);
    if (k == 0 || r < best) best = r;
  }
  return best;
}

// ------------------------------------------------------- model families

namespace {

struct Family {
  std::vector<std::string> object_names;
  // one odometer digit per table slot
  struct Slot {
    bool is_fun;
    std::string symbol;
    size_t index;
    std::vector<Rat> grid;  // predicate slots only
  };
  std::vector<Slot> slots;
  std::vector<unsigned long long> radix;
  unsigned long long count = 1;

  Model decode(unsigned long long k) const {
    Model m;
    m.objects = object_names;
    for (size_t i = 0; i < slots.size(); ++i) {
      unsigned long long digit = k % radix[i];
      k /= radix[i];
      const Slot& s = slots[i];
      if (s.is_fun) {
        auto& table = m.funs[s.symbol];
        if (table.size() <= s.index) table.resize(s.index + 1, 0);
        table[s.index] = static_cast<int>(digit);
      } else {
        auto& table = m.preds[s.symbol];
        if (table.size() <= s.index) table.resize(s.index + 1, Rat(0));
        table[s.index] = s.grid[static_cast<size_t>(digit)];
      }
    }
    return m;
  }
};

Family build_family(const SymbolTable& symbols, int n, unsigned long long cap) {
  if (n < 1) throw EvalError("model family needs at least one object");
  Family fam;
  for (int i = 0; i < n; ++i) fam.object_names.push_back("o" + std::to_string(i + 1));
  size_t nn = static_cast<size_t>(n);
  for (const auto& [name, decl] : symbols.funs) {
    size_t sz = 1;
    for (int i = 0; i < decl.arity; ++i) sz *= nn;
    for (size_t idx = 0; idx < sz; ++idx) {
      fam.slots.push_back({true, name, idx, {}});
      fam.radix.push_back(nn);
    }
  }
  for (const auto& [name, decl] : symbols.preds) {
    std::vector<Rat> grid;
    if (decl.integral) {
      for (Rat v = Rat(rat_ceil(decl.lo)); v <= decl.hi; v += 1) grid.push_back(v);
    } else {
      grid.push_back(decl.lo);
      if (decl.hi != decl.lo) {
        Rat mid = (decl.lo + decl.hi) / 2;
        grid.push_back(mid);
        grid.push_back(decl.hi);
      }
    }
    if (grid.empty()) throw EvalError("predicate '" + name + "' has an empty range");
    size_t sz = 1;
    for (int i = 0; i < decl.arity; ++i) sz *= nn;
    for (size_t idx = 0; idx < sz; ++idx) {
      fam.slots.push_back({false, name, idx, grid});
      fam.radix.push_back(grid.size());
    }
  }
  for (unsigned long long r : fam.radix) {
    if (fam.count > cap / r + 1) {
      fam.count = cap + 1;
      break;
    }
    fam.count *= r;
  }
  if (fam.count > cap)
    throw EvalError("model family exceeds the enumeration cap");
  return fam;
}

}  // namespace

Rat brute_force_value(const FormulaPtr& f, const SymbolTable& symbols, int n,
                      const BruteForceOptions& opts) {
  Family fam = build_family(symbols, n, opts.cap);
  int jobs = std::max(1, opts.jobs);
  std::vector<Rat> best(jobs);
  // vector<bool> is bit-packed and racy across threads; use bytes
  std::vector<char> any(jobs, 0);
  auto work = [&](int t) {
    for (unsigned long long k = t; k < fam.count; k += jobs) {
      Model m = fam.decode(k);
      Rat r = evaluate(f, m, symbols);
      if (!any[t] || r > best[t]) {
        best[t] = r;
        any[t] = 1;
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  Rat out;
  bool got = false;
  for (int t = 0; t < jobs; ++t) {
    if (!any[t]) continue;
    if (!got || best[t] > out) {
      out = best[t];
      got = true;
    }
  }
  if (!got) throw EvalError("empty model family");
  return out;
}

void for_each_model(const SymbolTable& symbols, int n, unsigned long long cap,
                    const std::function<void(const Model&)>& visit) {
  Family fam = build_family(symbols, n, cap);
  for (unsigned long long k = 0; k < fam.count; ++k) visit(fam.decode(k));
}

}  // namespace fop
