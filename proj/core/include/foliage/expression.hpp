#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foliage/jet.hpp"

namespace foliage {

/// Arithmetic expression over chart coordinates, compiled to a postfix tape.
///
/// Grammar: numbers, coordinate names, `pi`, binary + - * /, unary -,
/// `^` with an integer literal exponent, and the functions sin, cos, exp.
/// There is no branching, so evaluation in jet arithmetic is always defined
/// wherever divisions are.
class Expression {
 public:
  static Expression parse(std::string_view text, std::span<const std::string> variables);

  double evaluate(std::span<const double> x) const;
  Jet evaluate(std::span<const Jet> x) const;

  const std::string& source() const { return source_; }

 private:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp };
  struct Instr {
    Op op;
    double value = 0.0;
    int index = 0;
  };
  friend class ExpressionParser;

  template <class T>
  T run(std::span<const T> x) const;

  std::string source_;
  std::vector<Instr> tape_;
};

}  // namespace foliage
