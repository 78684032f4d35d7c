#pragma once

#include <memory>
#include <string>
#include <vector>

#include "algcurv/poly.hpp"

namespace algcurv {

/// Expression tree produced by the polynomial grammar. Kept around so tests can
/// evaluate inputs independently of the Poly conversion.
struct ExprAst {
    enum class Kind { Number, Variable, Add, Sub, Neg, Mul, Pow, Group };

    Kind kind = Kind::Number;
    Rational number;                             // Number
    std::size_t var = 0;                         // Variable (index into the declared list)
    unsigned exponent = 0;                       // Pow
    std::vector<std::shared_ptr<ExprAst>> kids;  // operands
};

/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*' factor) | atom-led factor)*     (juxtaposition)
///   factor := ['-'] atom ['^' uint]
///   atom   := rational | variable | '(' expr ')'
/// '^' binds to the atom only, so -x^2 reads as -(x^2). Whitespace is ignored.
ExprAst parse_expression(const std::string& text, const std::vector<std::string>& variables);

Poly ast_to_poly(const ExprAst& ast, const std::vector<std::string>& variables);

Poly parse_poly(const std::string& text, const std::vector<std::string>& variables);

/// Direct recursive evaluation of the tree; the independent route used by tests.
Rational eval_ast(const ExprAst& ast, const std::vector<Rational>& point);

}  // namespace algcurv
