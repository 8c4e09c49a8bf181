#pragma once

#include <memory>
#include <string_view>

namespace hmfem {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Minimal analytic grammar over the variables x and y: +, -, *, /, ^,
// sin, cos, exp, ln, parentheses, numeric literals and the constant pi.
// Throws std::invalid_argument on syntax errors.
ExprPtr parse_expression(std::string_view text);

double evaluate(const Expr& e, double x, double y);
double evaluate(const ExprPtr& e, double x, double y);

// Symbolic partial derivative with respect to var ('x' or 'y').
ExprPtr differentiate(const ExprPtr& e, char var);

}  // namespace hmfem
