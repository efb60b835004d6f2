#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cktbench/symexpr/rational_func.hpp"

namespace cktbench::symexpr {

/// Immutable expression tree produced by the equation parser.
class ExprTree {
 public:
  enum class Kind { Add, Sub, Mul, Div, Pow, Neg, Symbol, Constant };

  static ExprTree symbol(std::string name);
  static ExprTree constant(Rational value);
  static ExprTree binary(Kind kind, ExprTree lhs, ExprTree rhs);
  static ExprTree negate(ExprTree operand);
  static ExprTree power(ExprTree base, int exponent);

  Kind kind() const { return node_->kind; }
  const std::vector<ExprTree>& children() const { return node_->children; }
  const std::string& name() const { return node_->name; }
  const Rational& value() const { return node_->value; }
  int exponent() const { return node_->exponent; }

  /// Fully parenthesized rendering, for diagnostics.
  std::string to_string() const;

  friend bool operator==(const ExprTree& a, const ExprTree& b);

 private:
  struct Node {
    Kind kind = Kind::Constant;
    std::vector<ExprTree> children;
    std::string name;
    Rational value;
    int exponent = 0;
  };
  std::shared_ptr<const Node> node_;
  explicit ExprTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  /// Zero-based byte offset into the original text.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses an expression or an equation `LHS = RHS`, returning the tree of
/// the right-hand side when `=` is present.
///
///   equation := [ lhs '=' ] expr
///   expr     := term { ('+' | '-') term }
///   term     := unary { ('*' | '/') unary }
///   unary    := ('-' | '+') unary | power
///   power    := primary [ ('^' | '**') exponent ]
///   exponent := ['-' | '+'] INTEGER | '(' ['-' | '+'] INTEGER ')'
///   primary  := NUMBER | IDENT [ '(' 's' ')' ] | '(' expr ')'
///
/// NUMBER accepts decimal and scientific literals, converted exactly.
/// `IDENT(s)` denotes the signal IDENT. Everything up to the last top-level
/// `=` is treated as the left-hand side and ignored.
ExprTree parse_equation(std::string_view text);

/// Exact flattening into a single numerator/denominator pair.
/// Throws std::domain_error on division by an expression that is zero.
RationalFunc to_rational(const ExprTree& tree);

/// parse_equation followed by to_rational.
RationalFunc parse_rational(std::string_view text);

}  // namespace cktbench::symexpr
