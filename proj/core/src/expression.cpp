#include "hmfem/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hmfem {

struct Expr {
  enum class Op { constant, var_x, var_y, add, sub, mul, div, pow, neg, sin, cos, exp, ln };
  Op op = Op::constant;
  double value = 0.0;
  ExprPtr lhs, rhs;
};

namespace {

using Op = Expr::Op;

ExprPtr make_const(double v) {
  auto e = std::make_shared<Expr>();
  e->op = Op::constant;
  e->value = v;
  return e;
}

ExprPtr make_node(Op op, ExprPtr lhs, ExprPtr rhs = nullptr) {
  // light constant folding keeps derivative trees small
  const bool lc = lhs && lhs->op == Op::constant;
  const bool rc = rhs && rhs->op == Op::constant;
  if (op == Op::neg && lc) return make_const(-lhs->value);
  if (lc && rc) {
    switch (op) {
      case Op::add: return make_const(lhs->value + rhs->value);
      case Op::sub: return make_const(lhs->value - rhs->value);
      case Op::mul: return make_const(lhs->value * rhs->value);
      case Op::div: return make_const(lhs->value / rhs->value);
      case Op::pow: return make_const(std::pow(lhs->value, rhs->value));
      default: break;
    }
  }
  if (op == Op::add) {
    if (lc && lhs->value == 0.0) return rhs;
    if (rc && rhs->value == 0.0) return lhs;
  }
  if (op == Op::sub && rc && rhs->value == 0.0) return lhs;
  if (op == Op::mul) {
    if ((lc && lhs->value == 0.0) || (rc && rhs->value == 0.0)) return make_const(0.0);
    if (lc && lhs->value == 1.0) return rhs;
    if (rc && rhs->value == 1.0) return lhs;
  }
  if (op == Op::div && rc && rhs->value == 1.0) return lhs;
  if (op == Op::pow && rc && rhs->value == 1.0) return lhs;
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    ExprPtr e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  ExprPtr expression() {
    ExprPtr e = term();
    for (;;) {
      skip_space();
      if (consume('+')) {
        e = make_node(Op::add, e, term());
      } else if (consume('-')) {
        e = make_node(Op::sub, e, term());
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      skip_space();
      if (consume('*')) {
        e = make_node(Op::mul, e, unary());
      } else if (consume('/')) {
        e = make_node(Op::div, e, unary());
      } else {
        return e;
      }
    }
  }

  ExprPtr unary() {
    skip_space();
    if (consume('-')) return make_node(Op::neg, unary());
    if (consume('+')) return unary();
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    skip_space();
    if (consume('^')) return make_node(Op::pow, base, unary());  // right associative
    return base;
  }

  ExprPtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (consume('(')) {
      ExprPtr e = expression();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::string id = identifier();
      if (id == "x") return make_node(Op::var_x, nullptr);
      if (id == "y") return make_node(Op::var_y, nullptr);
      if (id == "pi") return make_const(std::numbers::pi);
      Op op;
      if (id == "sin") {
        op = Op::sin;
      } else if (id == "cos") {
        op = Op::cos;
      } else if (id == "exp") {
        op = Op::exp;
      } else if (id == "ln") {
        op = Op::ln;
      } else {
        fail("unknown identifier '" + id + "'");
      }
      expect('(');
      ExprPtr arg = expression();
      expect(')');
      return make_node(op, std::move(arg));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<size_t>(end - begin);
    return make_const(v);
  }

  std::string identifier() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_space();
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("expression: " + why + " at position " + std::to_string(pos_) +
                                " in \"" + std::string(text_) + "\"");
  }

  std::string_view text_;
  size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

double evaluate(const Expr& e, double x, double y) {
  switch (e.op) {
    case Op::constant: return e.value;
    case Op::var_x: return x;
    case Op::var_y: return y;
    case Op::add: return evaluate(*e.lhs, x, y) + evaluate(*e.rhs, x, y);
    case Op::sub: return evaluate(*e.lhs, x, y) - evaluate(*e.rhs, x, y);
    case Op::mul: return evaluate(*e.lhs, x, y) * evaluate(*e.rhs, x, y);
    case Op::div: return evaluate(*e.lhs, x, y) / evaluate(*e.rhs, x, y);
    case Op::pow: return std::pow(evaluate(*e.lhs, x, y), evaluate(*e.rhs, x, y));
    case Op::neg: return -evaluate(*e.lhs, x, y);
    case Op::sin: return std::sin(evaluate(*e.lhs, x, y));
    case Op::cos: return std::cos(evaluate(*e.lhs, x, y));
    case Op::exp: return std::exp(evaluate(*e.lhs, x, y));
    case Op::ln: return std::log(evaluate(*e.lhs, x, y));
  }
  return 0.0;
}

double evaluate(const ExprPtr& e, double x, double y) { return evaluate(*e, x, y); }

ExprPtr differentiate(const ExprPtr& e, char var) {
  if (var != 'x' && var != 'y') throw std::invalid_argument("differentiate: var must be x or y");
  switch (e->op) {
    case Op::constant: return make_const(0.0);
    case Op::var_x: return make_const(var == 'x' ? 1.0 : 0.0);
    case Op::var_y: return make_const(var == 'y' ? 1.0 : 0.0);
    case Op::add: return make_node(Op::add, differentiate(e->lhs, var), differentiate(e->rhs, var));
    case Op::sub: return make_node(Op::sub, differentiate(e->lhs, var), differentiate(e->rhs, var));
    case Op::mul:
      return make_node(Op::add, make_node(Op::mul, differentiate(e->lhs, var), e->rhs),
                       make_node(Op::mul, e->lhs, differentiate(e->rhs, var)));
    case Op::div:
      return make_node(
          Op::div,
          make_node(Op::sub, make_node(Op::mul, differentiate(e->lhs, var), e->rhs),
                    make_node(Op::mul, e->lhs, differentiate(e->rhs, var))),
          make_node(Op::mul, e->rhs, e->rhs));
    case Op::pow: {
      if (e->rhs->op == Op::constant) {
        // d(f^c) = c f^(c-1) f', valid for negative bases too
        ExprPtr fp = make_node(Op::pow, e->lhs, make_const(e->rhs->value - 1.0));
        return make_node(Op::mul, make_const(e->rhs->value),
                         make_node(Op::mul, std::move(fp), differentiate(e->lhs, var)));
      }
      // d(f^g) = f^g * (g' ln f + g f'/f), requires f > 0
      ExprPtr fg = make_node(Op::pow, e->lhs, e->rhs);
      ExprPtr t1 = make_node(Op::mul, differentiate(e->rhs, var), make_node(Op::ln, e->lhs));
      ExprPtr t2 = make_node(Op::div, make_node(Op::mul, e->rhs, differentiate(e->lhs, var)),
                             e->lhs);
      return make_node(Op::mul, std::move(fg), make_node(Op::add, std::move(t1), std::move(t2)));
    }
    case Op::neg: return make_node(Op::neg, differentiate(e->lhs, var));
    case Op::sin:
      return make_node(Op::mul, make_node(Op::cos, e->lhs), differentiate(e->lhs, var));
    case Op::cos:
      return make_node(Op::neg,
                       make_node(Op::mul, make_node(Op::sin, e->lhs), differentiate(e->lhs, var)));
    case Op::exp:
      return make_node(Op::mul, make_node(Op::exp, e->lhs), differentiate(e->lhs, var));
    case Op::ln: return make_node(Op::div, differentiate(e->lhs, var), e->lhs);
  }
  return make_const(0.0);
}

}  // namespace hmfem
