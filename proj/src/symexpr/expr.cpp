#include "cktbench/symexpr/expr.hpp"

#include <cctype>
#include <climits>

namespace cktbench::symexpr {

ExprTree ExprTree::symbol(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Symbol;
  n->name = std::move(name);
  return ExprTree(std::move(n));
}

ExprTree ExprTree::constant(Rational value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = std::move(value);
  return ExprTree(std::move(n));
}

ExprTree ExprTree::binary(Kind kind, ExprTree lhs, ExprTree rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = {std::move(lhs), std::move(rhs)};
  return ExprTree(std::move(n));
}

ExprTree ExprTree::negate(ExprTree operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Neg;
  n->children = {std::move(operand)};
  return ExprTree(std::move(n));
}

ExprTree ExprTree::power(ExprTree base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->children = {std::move(base)};
  n->exponent = exponent;
  return ExprTree(std::move(n));
}

std::string ExprTree::to_string() const {
  switch (kind()) {
    case Kind::Symbol: return name();
    case Kind::Constant: return value().get_str();
    case Kind::Neg: return "(-" + children()[0].to_string() + ")";
    case Kind::Pow: return "(" + children()[0].to_string() + "**" + std::to_string(exponent()) + ")";
    default: break;
  }
  const char* op = kind() == Kind::Add ? " + " : kind() == Kind::Sub ? " - " : kind() == Kind::Mul ? "*" : "/";
  return "(" + children()[0].to_string() + op + children()[1].to_string() + ")";
}

bool operator==(const ExprTree& a, const ExprTree& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.value() != b.value() || a.exponent() != b.exponent() ||
      a.children().size() != b.children().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    if (!(a.children()[i] == b.children()[i])) return false;
  }
  return true;
}

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error("parse error at " + std::to_string(position) + ": " + message), position_(position) {}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t offset) : text_(text), offset_(offset) {}

  ExprTree parse() {
    skip_ws();
    if (pos_ == text_.size()) fail("empty expression");
    ExprTree e = expr();
    skip_ws();
    if (pos_ != text_.size()) {
      if (text_[pos_] == ')') fail("unbalanced ')'");
      fail(std::string("unexpected '") + text_[pos_] + "'");
    }
    return e;
  }

 private:
  std::string_view text_;
  std::size_t offset_;
  std::size_t pos_ = 0;
  int depth_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, offset_ + pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip_ws();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  ExprTree expr() {
    ExprTree lhs = term();
    for (;;) {
      if (accept("+")) {
        lhs = ExprTree::binary(ExprTree::Kind::Add, lhs, term());
      } else if (accept("-")) {
        lhs = ExprTree::binary(ExprTree::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprTree term() {
    ExprTree lhs = unary();
    for (;;) {
      if (peek("**")) return lhs;
      if (accept("*")) {
        lhs = ExprTree::binary(ExprTree::Kind::Mul, lhs, unary());
      } else if (accept("/")) {
        lhs = ExprTree::binary(ExprTree::Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  ExprTree unary() {
    if (accept("-")) return ExprTree::negate(unary());
    if (accept("+")) return unary();
    return power();
  }

  ExprTree power() {
    ExprTree base = primary();
    if (accept("**") || accept("^")) return ExprTree::power(base, exponent());
    return base;
  }

  int exponent() {
    bool paren = accept("(");
    bool negative = false;
    if (accept("-")) {
      negative = true;
    } else {
      accept("+");
    }
    skip_ws();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 4096) fail("exponent too large");
      ++pos_;
    }
    if (pos_ == start) fail("exponent must be an integer literal");
    if (pos_ < text_.size() && (text_[pos_] == '.' || std::isalpha(static_cast<unsigned char>(text_[pos_])))) {
      fail("exponent must be an integer literal");
    }
    if (paren && !accept(")")) fail("expected ')' after exponent");
    return static_cast<int>(negative ? -value : value);
  }

  ExprTree primary() {
    skip_ws();
    if (pos_ == text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ++depth_;
      ExprTree inner = expr();
      if (!accept(")")) fail(pos_ == text_.size() ? "unbalanced '('" : "expected ')'");
      --depth_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (c == ')') fail("unbalanced ')'");
    fail(std::string("unexpected '") + c + "'");
  }

  ExprTree number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    try {
      return ExprTree::constant(parse_decimal(text_.substr(start, pos_ - start)));
    } catch (const std::invalid_argument&) {
      pos_ = start;
      fail("malformed number");
    }
  }

  ExprTree identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name(text_.substr(start, pos_ - start));
    // Signal notation: V1(s) names the signal V1.
    const std::size_t save = pos_;
    if (accept("(")) {
      if (accept(kFrequencyVar) && accept(")")) return ExprTree::symbol(std::move(name));
      pos_ = save;
      fail("function application is not supported");
    }
    return ExprTree::symbol(std::move(name));
  }
};

}  // namespace

ExprTree parse_equation(std::string_view text) {
  std::size_t offset = 0;
  if (auto eq = text.rfind('='); eq != std::string_view::npos) {
    offset = eq + 1;
    text = text.substr(offset);
  }
  return Parser(text, offset).parse();
}

RationalFunc to_rational(const ExprTree& tree) {
  using Kind = ExprTree::Kind;
  switch (tree.kind()) {
    case Kind::Constant: return RationalFunc(tree.value());
    case Kind::Symbol: return RationalFunc::symbol(tree.name());
    case Kind::Neg: return -to_rational(tree.children()[0]);
    case Kind::Pow: {
      RationalFunc base = to_rational(tree.children()[0]);
      if (tree.exponent() < 0 && base.is_zero()) throw std::domain_error("zero raised to a negative power");
      return base.pow(tree.exponent());
    }
    case Kind::Add: return to_rational(tree.children()[0]) + to_rational(tree.children()[1]);
    case Kind::Sub: return to_rational(tree.children()[0]) - to_rational(tree.children()[1]);
    case Kind::Mul: return to_rational(tree.children()[0]) * to_rational(tree.children()[1]);
    case Kind::Div: {
      RationalFunc den = to_rational(tree.children()[1]);
      if (den.is_zero()) throw std::domain_error("division by zero expression");
      return to_rational(tree.children()[0]) / den;
    }
  }
  throw std::logic_error("unknown expression node");
}

RationalFunc parse_rational(std::string_view text) { return to_rational(parse_equation(text)); }

}  // namespace cktbench::symexpr
