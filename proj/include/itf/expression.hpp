#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace itf {

// value and first derivative, for forward-mode differentiation
struct Dual {
  double v = 0.0;
  double d = 0.0;
};

// Arithmetic expression in one variable x. Grammar: + - * / ^, unary minus,
// parentheses, numbers, constants pi and e, functions sin cos tan exp log
// sqrt abs. Parsed once, evaluated many times.
class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view text);  // throws SchemaError("expr")

  double operator()(double x) const;
  Dual eval(double x) const;  // f(x), f'(x)
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace itf
