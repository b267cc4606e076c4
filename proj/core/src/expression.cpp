#include "foliage/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "foliage/errors.hpp"

namespace foliage {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::span<const std::string> variables, Expression& out)
      : text_(text), variables_(variables), out_(out) {}

  void parse() {
    skipSpace();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    parseSum();
    skipSpace();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
  }

 private:
  using Op = Expression::Op;

  void emit(Op op, double value = 0.0, int index = 0) { out_.tape_.push_back({op, value, index}); }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void parseSum() {
    parseProduct();
    for (;;) {
      if (accept('+')) {
        parseProduct();
        emit(Op::Add);
      } else if (accept('-')) {
        parseProduct();
        emit(Op::Sub);
      } else {
        return;
      }
    }
  }

  void parseProduct() {
    parseUnary();
    for (;;) {
      if (accept('*')) {
        parseUnary();
        emit(Op::Mul);
      } else if (accept('/')) {
        parseUnary();
        emit(Op::Div);
      } else {
        return;
      }
    }
  }

  void parseUnary() {
    if (accept('-')) {
      parseUnary();
      emit(Op::Neg);
    } else if (accept('+')) {
      parseUnary();
    } else {
      parsePower();
    }
  }

  void parsePower() {
    parsePrimary();
    if (!accept('^')) return;
    skipSpace();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    std::size_t digits = pos_;
    while (digits < text_.size() && std::isdigit(static_cast<unsigned char>(text_[digits]))) ++digits;
    if (digits == pos_ || (digits < text_.size() && (text_[digits] == '.' || text_[digits] == 'e'))) {
      throw ParseError("exponent must be an integer literal", start);
    }
    const int power = std::stoi(std::string(text_.substr(pos_, digits - pos_)));
    pos_ = digits;
    emit(Op::Pow, 0.0, negative ? -power : power);
    skipSpace();
    if (pos_ < text_.size() && text_[pos_] == '^') throw ParseError("chained exponents are not supported", pos_);
  }

  void parsePrimary() {
    skipSpace();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      parseSum();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      parseNumber();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      parseIdentifier();
      return;
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  void parseNumber() {
    const std::size_t start = pos_;
    std::string literal(text_.substr(pos_));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(literal, &used);
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
    pos_ += used;
    emit(Op::Const, value);
  }

  void parseIdentifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    skipSpace();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      Op op;
      if (name == "sin") {
        op = Op::Sin;
      } else if (name == "cos") {
        op = Op::Cos;
      } else if (name == "exp") {
        op = Op::Exp;
      } else {
        throw ParseError("unknown function '" + name + "'", start);
      }
      ++pos_;
      parseSum();
      if (!accept(')')) throw ParseError("expected ')' after argument of " + name, pos_);
      emit(op);
      return;
    }
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (variables_[i] == name) {
        emit(Op::Var, 0.0, static_cast<int>(i));
        return;
      }
    }
    if (name == "pi") {
      emit(Op::Const, std::numbers::pi);
      return;
    }
    throw ParseError("unknown symbol '" + name + "'", start);
  }

  std::string_view text_;
  std::span<const std::string> variables_;
  Expression& out_;
  std::size_t pos_ = 0;
};

Expression Expression::parse(std::string_view text, std::span<const std::string> variables) {
  Expression expr;
  expr.source_ = std::string(text);
  ExpressionParser(text, variables, expr).parse();
  return expr;
}

namespace {

double powInt(double x, int k) { return std::pow(x, k); }
Jet powInt(const Jet& x, int k) { return pow(x, k); }

}  // namespace

template <class T>
T Expression::run(std::span<const T> x) const {
  using std::cos;
  using std::exp;
  using std::sin;
  std::vector<T> stack;
  stack.reserve(tape_.size());
  auto pop = [&stack]() {
    T v = std::move(stack.back());
    stack.pop_back();
    return v;
  };
  for (const auto& in : tape_) {
    switch (in.op) {
      case Op::Const: stack.emplace_back(in.value); break;
      case Op::Var: stack.push_back(x[static_cast<std::size_t>(in.index)]); break;
      case Op::Neg: stack.back() = -stack.back(); break;
      case Op::Pow: stack.back() = powInt(stack.back(), in.index); break;
      case Op::Sin: stack.back() = sin(stack.back()); break;
      case Op::Cos: stack.back() = cos(stack.back()); break;
      case Op::Exp: stack.back() = exp(stack.back()); break;
      case Op::Add: { T r = pop(); stack.back() = stack.back() + r; break; }
      case Op::Sub: { T r = pop(); stack.back() = stack.back() - r; break; }
      case Op::Mul: { T r = pop(); stack.back() = stack.back() * r; break; }
      case Op::Div: { T r = pop(); stack.back() = stack.back() / r; break; }
    }
  }
  return stack.back();
}

double Expression::evaluate(std::span<const double> x) const { return run<double>(x); }
Jet Expression::evaluate(std::span<const Jet> x) const { return run<Jet>(x); }

}  // namespace foliage
