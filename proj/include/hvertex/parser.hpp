#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hvertex/lca.hpp"

namespace hvertex::parse {

enum class ParseErrorKind { Syntax, DuplicateName, UnknownGenerator, NotLinear };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, int line, int column, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        kind_(kind), line_(line), column_(column) {}
  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  ParseErrorKind kind_;
  int line_, column_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Symbol, Neg, Sum, Product, Power, Derivative };
  Kind kind;
  int line = 0, column = 0;
  Rational number;
  std::string name;  // Symbol name, or "T"/"Th" for Derivative
  int exponent = 1;  // Power exponent, derivative order
  std::vector<ExprPtr> children;
  // Sum: '+' or '-' per child. Product: '*', '.' or '/' joining child i to i-1.
  std::vector<char> ops;
};

ExprPtr parse_expr(std::string_view text, int line = 1);

struct GeneratorDecl {
  std::string name;
  Rational weight;
  int line = 0;
};

struct BracketDeclText {
  std::string left, right;
  ExprPtr value;
  int line = 0, left_col = 0, right_col = 0;
};

struct AlgebraFile {
  std::string name;
  std::vector<std::string> params;
  std::vector<GeneratorDecl> generators;
  std::vector<BracketDeclText> brackets;
};

AlgebraFile parse_algebra(std::string_view text);
// Resolves names and evaluates brackets into T-basis structure constants.
LcaDefinition to_definition(const AlgebraFile& file);
// Canonical file text for a loaded algebra (brackets i <= j).
std::string render_algebra(const LCAlgebra& alg);

}  // namespace hvertex::parse
