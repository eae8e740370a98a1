#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fop/ast.hpp"

namespace fop {

struct ParseError : std::runtime_error {
  ParseError(const std::string& file, int line, int col, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line, col;
};

// A parsed .fop problem: declarations, one sentence, optional directives.
struct ProblemFile {
  SymbolTable symbols;
  FormulaPtr sentence;  // null if the file declares only symbols
  FormulaPtr query;     // optional query directive
  std::optional<Rat> threshold;
  // Domain closure (concrete mode): declared object names, in order, and
  // the known-function table mapping f(objects...) -> object.
  std::vector<std::string> objects;
  std::map<std::pair<std::string, std::vector<std::string>>, std::string> fun_table;
};

ProblemFile parse_problem(const std::string& text,
                          const std::string& filename = "<input>");

// Parses a single formula against existing declarations (tests, query files).
FormulaPtr parse_formula(const std::string& text, const SymbolTable& symbols);

std::string print_declarations(const SymbolTable& symbols);
std::string print_problem(const ProblemFile& p);

}  // namespace fop
