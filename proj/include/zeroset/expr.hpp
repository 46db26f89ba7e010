#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeroset/problem.hpp"

namespace zeroset {

// Parse failure with the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Expression trees for formulas over variables x1..xd.
//
// Grammar, loosest to tightest binding:
//   additive       := multiplicative (('+' | '-') multiplicative)*
//   multiplicative := unary (('*' | '/') unary)*
//   unary          := ('-' | '+') unary | power
//   power          := atom ('^' unary)?          right-associative
//   atom           := number | 'pi' | variable | function '(' args ')' | '(' additive ')'
//
// Unary minus binds looser than '^', so -x1^2 reads as -(x1^2); the exponent
// position accepts a signed operand, so 2^-3 parses.  Functions: sin, cos,
// tan, exp, log, sqrt, abs (one argument), min, max (two arguments).
struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprKind { constant, variable, negate, add, subtract, multiply, divide, power, call };

struct Expr {
  ExprKind kind;
  double value = 0.0;             // constant
  int var_index = 0;              // variable, zero-based
  std::string function;           // call
  std::vector<ExprPtr> children;  // operands / arguments
};

// Parses `text` against dimension `dim`; variable indices above dim are
// rejected.  Throws ParseError.
ExprPtr parse_expression(const std::string& text, int dim);

// Fully parenthesized rendering; parse_expression(pretty_print(e)) rebuilds
// a structurally identical tree.
std::string pretty_print(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

// Flat postfix program for fast repeated evaluation.  NaN and infinity are
// returned as-is; the counted evaluation path in ScalarField turns them into
// errors.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);

  double operator()(const Point& z) const;
  int max_stack() const { return max_stack_; }

 private:
  enum class Op : std::uint8_t {
    push_const, push_var, negate, add, subtract, multiply, divide, power,
    sin, cos, tan, exp, log, sqrt, abs, min, max
  };
  struct Instr {
    Op op;
    double value = 0.0;
    int var = 0;
  };
  std::vector<Instr> code_;
  int max_stack_ = 0;
};

// Convenience: parse and wrap as a counted field of the given dimension.
ScalarField make_field(const std::string& text, int dim);

}  // namespace zeroset
