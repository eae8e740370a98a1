#include <cctype>
#include <map>
#include <stdexcept>

#include "fop/lifted.hpp"
#include "json.hpp"

namespace fop {

using nlohmann::json;

// ----------------------------------------------------------- term parsing

namespace {

struct TermScanner {
  const std::string& text;
  const SymbolTable& symbols;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("bad term '" + text + "': " + msg);
  }

  std::string name() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected a name");
    return text.substr(start, pos - start);
  }

  TermPtr term() {
    std::string n = name();
    skip_ws();
    std::vector<TermPtr> args;
    bool parens = pos < text.size() && text[pos] == '(';
    if (parens) {
      ++pos;
      skip_ws();
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
      } else {
        while (true) {
          args.push_back(term());
          skip_ws();
          if (pos < text.size() && text[pos] == ',') {
            ++pos;
            continue;
          }
          if (pos < text.size() && text[pos] == ')') {
            ++pos;
            break;
          }
          fail("expected ',' or ')'");
        }
      }
    }
    auto it = symbols.funs.find(n);
    if (it != symbols.funs.end()) {
      if (static_cast<int>(args.size()) != it->second.arity)
        fail("'" + n + "' expects " + std::to_string(it->second.arity) +
             " argument(s)");
      return mk_app(n, std::move(args));
    }
    if (n == "nil") {
      if (!args.empty()) fail("'nil' takes no arguments");
      return mk_app(n);
    }
    if (!args.empty()) fail("undeclared function '" + n + "'");
    return mk_var(n);
  }
};

}  // namespace

TermPtr parse_term_text(const std::string& text, const SymbolTable& symbols) {
  TermScanner sc{text, symbols};
  TermPtr t = sc.term();
  sc.skip_ws();
  if (sc.pos != text.size()) sc.fail("trailing input");
  return t;
}

// --------------------------------------------------------------- to json

namespace {

json subst_to_json(const std::map<std::string, TermPtr>& m) {
  json out = json::object();
  for (const auto& [v, t] : m) out[v] = term_str(t);
  return out;
}

json rats_to_json(const std::vector<Rat>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(rat_str(r));
  return out;
}

json pick_to_json(const CutPick& p) {
  json out = json::object();
  switch (p.kind) {
    case CutPick::Clause:
      out["kind"] = "clause";
      out["index"] = p.index;
      out["subst"] = subst_to_json(p.subst);
      break;
    case CutPick::PriorCut:
      out["kind"] = "cut";
      out["index"] = p.index;
      out["subst"] = subst_to_json(p.subst);
      break;
    case CutPick::Bound:
      out["kind"] = "bound";
      out["pred"] = p.pred;
      out["side"] = p.side == BoundSide::Upper ? "upper" : "lower";
      {
        json args = json::array();
        for (const auto& t : p.args) args.push_back(term_str(t));
        out["args"] = std::move(args);
      }
      break;
  }
  return out;
}

}  // namespace

std::string trace_to_json(const ProofTrace& t) {
  json out;
  out["version"] = t.version;
  out["sentence_digest"] = t.digest;
  json steps = json::array();
  for (const auto& s : t.steps) {
    json step;
    json picks = json::array();
    for (const auto& p : s.request.picks) picks.push_back(pick_to_json(p));
    step["picks"] = std::move(picks);
    step["lambda"] = rats_to_json(s.request.lambda);
    step["weakening"] = rats_to_json(s.request.weakening);
    step["result_clause"] = s.clause;
    steps.push_back(std::move(step));
  }
  out["steps"] = std::move(steps);
  json grounding = json::array();
  for (const auto& g : t.terminal.grounding) {
    json e;
    e["clause"] = g.clause;
    e["subst"] = subst_to_json(g.subst.pairs());
    grounding.push_back(std::move(e));
  }
  out["terminal"]["grounding"] = std::move(grounding);
  out["terminal"]["farkas"] = rats_to_json(t.terminal.farkas);
  return out.dump(2) + "\n";
}

// ------------------------------------------------------------- from json

namespace {

[[noreturn]] void bad_trace(const std::string& msg) {
  throw std::runtime_error("bad trace: " + msg);
}

std::map<std::string, TermPtr> subst_from_json(const json& j,
                                               const SymbolTable& symbols) {
  if (!j.is_object()) bad_trace("subst must be an object");
  std::map<std::string, TermPtr> m;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) bad_trace("subst values must be term strings");
    m[k] = parse_term_text(v.get<std::string>(), symbols);
  }
  return m;
}

std::vector<Rat> rats_from_json(const json& j, const char* what) {
  if (!j.is_array()) bad_trace(std::string(what) + " must be an array");
  std::vector<Rat> out;
  for (const auto& e : j) {
    if (!e.is_string()) bad_trace(std::string(what) + " entries are strings");
    out.push_back(rat_parse(e.get<std::string>()));
  }
  return out;
}

CutPick pick_from_json(const json& j, const SymbolTable& symbols) {
  if (!j.is_object()) bad_trace("pick must be an object");
  CutPick p;
  std::string kind = j.value("kind", "");
  if (kind == "clause" || kind == "cut") {
    p.kind = kind == "clause" ? CutPick::Clause : CutPick::PriorCut;
    if (!j.contains("index") || !j["index"].is_number_integer())
      bad_trace("pick needs an integer index");
    p.index = j["index"].get<int>();
    if (j.contains("subst")) p.subst = subst_from_json(j["subst"], symbols);
  } else if (kind == "bound") {
    p.kind = CutPick::Bound;
    if (!j.contains("pred") || !j["pred"].is_string())
      bad_trace("bound pick needs a predicate name");
    p.pred = j["pred"].get<std::string>();
    std::string side = j.value("side", "");
    if (side == "upper")
      p.side = BoundSide::Upper;
    else if (side == "lower")
      p.side = BoundSide::Lower;
    else
      bad_trace("bound side must be 'upper' or 'lower'");
    if (j.contains("args")) {
      if (!j["args"].is_array()) bad_trace("bound args must be an array");
      for (const auto& a : j["args"]) {
        if (!a.is_string()) bad_trace("bound args are term strings");
        p.args.push_back(parse_term_text(a.get<std::string>(), symbols));
      }
    }
  } else {
    bad_trace("unknown pick kind '" + kind + "'");
  }
  return p;
}

}  // namespace

ProofTrace trace_from_json(const std::string& text,
                           const SymbolTable& symbols) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad_trace(e.what());
  }
  if (!j.is_object()) bad_trace("top level must be an object");
  ProofTrace t;
  t.version = j.value("version", 0);
  if (t.version != 1) bad_trace("unsupported version");
  if (!j.contains("sentence_digest") || !j["sentence_digest"].is_string())
    bad_trace("missing sentence_digest");
  t.digest = j["sentence_digest"].get<std::string>();

  if (j.contains("steps")) {
    if (!j["steps"].is_array()) bad_trace("steps must be an array");
    for (const auto& s : j["steps"]) {
      TraceStep step;
      if (!s.contains("picks") || !s["picks"].is_array())
        bad_trace("step needs picks");
      for (const auto& p : s["picks"])
        step.request.picks.push_back(pick_from_json(p, symbols));
      if (!s.contains("lambda")) bad_trace("step needs lambda");
      step.request.lambda = rats_from_json(s["lambda"], "lambda");
      if (s.contains("weakening"))
        step.request.weakening = rats_from_json(s["weakening"], "weakening");
      if (!s.contains("result_clause") || !s["result_clause"].is_string())
        bad_trace("step needs result_clause");
      step.clause = s["result_clause"].get<std::string>();
      t.steps.push_back(std::move(step));
    }
  }

  if (!j.contains("terminal") || !j["terminal"].is_object())
    bad_trace("missing terminal");
  const json& term = j["terminal"];
  if (!term.contains("grounding") || !term["grounding"].is_array())
    bad_trace("terminal needs a grounding");
  for (const auto& g : term["grounding"]) {
    if (!g.is_object() || !g.contains("clause") ||
        !g["clause"].is_number_integer())
      bad_trace("grounding entries need a clause index");
    GroundInstance gi;
    gi.clause = g["clause"].get<int>();
    if (g.contains("subst"))
      gi.subst = Substitution(subst_from_json(g["subst"], symbols));
    t.terminal.grounding.push_back(std::move(gi));
  }
  if (!term.contains("farkas")) bad_trace("terminal needs multipliers");
  t.terminal.farkas = rats_from_json(term["farkas"], "farkas");
  return t;
}

}  // namespace fop
