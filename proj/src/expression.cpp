#include "itf/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "itf/errors.hpp"

namespace itf {

struct Expression::Node {
  enum class Op { num, var, add, sub, mul, div, pow, neg, fn };
  enum class Fn { sin, cos, tan, exp, log, sqrt, abs };
  Op op = Op::num;
  Fn fn = Fn::sin;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;
using Fn = Expression::Node::Fn;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    auto n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SchemaError("expr", msg + " at offset " + std::to_string(pos_) + " in '" +
                                  std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    auto n = product();
    for (;;) {
      if (eat('+'))
        n = make(Op::add, n, product());
      else if (eat('-'))
        n = make(Op::sub, n, product());
      else
        return n;
    }
  }
  NodePtr product() {
    auto n = unary();
    for (;;) {
      if (eat('*'))
        n = make(Op::mul, n, unary());
      else if (eat('/'))
        n = make(Op::div, n, unary());
      else
        return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Op::neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  // right-associative; -x^2 parses as -(x^2)
  NodePtr power() {
    auto base = atom();
    if (eat('^')) return make(Op::pow, base, unary());
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto n = sum();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(rest, &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Expression::Node>();
      n->op = Op::num;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id(s_.substr(start, pos_ - start));
      if (id == "x") return make(Op::var);
      if (id == "pi" || id == "e") {
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::num;
        n->value = id == "pi" ? std::numbers::pi : std::numbers::e;
        return n;
      }
      static const std::vector<std::pair<std::string, Fn>> fns = {
          {"sin", Fn::sin}, {"cos", Fn::cos},   {"tan", Fn::tan}, {"exp", Fn::exp},
          {"log", Fn::log}, {"sqrt", Fn::sqrt}, {"abs", Fn::abs}};
      for (const auto& [name, fn] : fns) {
        if (id != name) continue;
        if (!eat('(')) fail("expected '(' after " + id);
        auto arg = sum();
        if (!eat(')')) fail("missing ')'");
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::fn;
        n->fn = fn;
        n->a = arg;
        return n;
      }
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

Dual eval_node(const Expression::Node& n, double x) {
  switch (n.op) {
    case Op::num:
      return {n.value, 0.0};
    case Op::var:
      return {x, 1.0};
    case Op::neg: {
      const Dual a = eval_node(*n.a, x);
      return {-a.v, -a.d};
    }
    case Op::add: {
      const Dual a = eval_node(*n.a, x), b = eval_node(*n.b, x);
      return {a.v + b.v, a.d + b.d};
    }
    case Op::sub: {
      const Dual a = eval_node(*n.a, x), b = eval_node(*n.b, x);
      return {a.v - b.v, a.d - b.d};
    }
    case Op::mul: {
      const Dual a = eval_node(*n.a, x), b = eval_node(*n.b, x);
      return {a.v * b.v, a.d * b.v + a.v * b.d};
    }
    case Op::div: {
      const Dual a = eval_node(*n.a, x), b = eval_node(*n.b, x);
      return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    }
    case Op::pow: {
      const Dual a = eval_node(*n.a, x), b = eval_node(*n.b, x);
      const double v = std::pow(a.v, b.v);
      if (b.d == 0.0) {
        // constant exponent keeps x^p well defined at x = 0 and for negative bases
        const double d = b.v == 0.0 ? 0.0 : b.v * std::pow(a.v, b.v - 1.0) * a.d;
        return {v, d};
      }
      return {v, v * (b.d * std::log(a.v) + b.v * a.d / a.v)};
    }
    case Op::fn: {
      const Dual a = eval_node(*n.a, x);
      switch (n.fn) {
        case Fn::sin:
          return {std::sin(a.v), std::cos(a.v) * a.d};
        case Fn::cos:
          return {std::cos(a.v), -std::sin(a.v) * a.d};
        case Fn::tan: {
          const double c = std::cos(a.v);
          return {std::tan(a.v), a.d / (c * c)};
        }
        case Fn::exp: {
          const double e = std::exp(a.v);
          return {e, e * a.d};
        }
        case Fn::log:
          return {std::log(a.v), a.d / a.v};
        case Fn::sqrt: {
          const double r = std::sqrt(a.v);
          return {r, a.d / (2.0 * r)};
        }
        case Fn::abs:
          return {std::abs(a.v), a.v < 0 ? -a.d : a.d};
      }
    }
  }
  return {};
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = std::string(text);
  return e;
}

double Expression::operator()(double x) const { return eval_node(*root_, x).v; }

Dual Expression::eval(double x) const { return eval_node(*root_, x); }

}  // namespace itf
