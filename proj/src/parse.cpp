#include "algcurv/parse.hpp"

#include <cctype>

namespace algcurv {
namespace {

using AstPtr = std::shared_ptr<ExprAst>;

AstPtr make(ExprAst::Kind kind) {
    auto node = std::make_shared<ExprAst>();
    node->kind = kind;
    return node;
}

class Parser {
  public:
    Parser(const std::string& text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

    AstPtr run() {
        skip_ws();
        if (pos_ >= text_.size()) throw Error(ErrorCode::SyntaxError, "empty expression", pos_);
        AstPtr e = expr();
        skip_ws();
        if (pos_ < text_.size())
            throw Error(ErrorCode::SyntaxError,
                        std::string("unexpected character '") + text_[pos_] + "' at offset " + std::to_string(pos_),
                        pos_);
        return e;
    }

  private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool starts_atom(char c) const {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
               std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }

    AstPtr expr() {
        AstPtr lhs = term();
        while (true) {
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            AstPtr rhs = term();
            AstPtr node = make(c == '+' ? ExprAst::Kind::Add : ExprAst::Kind::Sub);
            node->kids = {lhs, rhs};
            lhs = node;
        }
        return lhs;
    }

    AstPtr term() {
        AstPtr lhs = factor(true);
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                AstPtr rhs = factor(true);
                AstPtr node = make(ExprAst::Kind::Mul);
                node->kids = {lhs, rhs};
                lhs = node;
            } else if (starts_atom(c)) {
                // juxtaposition, e.g. 3x^2y; a leading '-' is not absorbed here
                AstPtr rhs = factor(false);
                AstPtr node = make(ExprAst::Kind::Mul);
                node->kids = {lhs, rhs};
                lhs = node;
            } else {
                break;
            }
        }
        return lhs;
    }

    AstPtr factor(bool allow_minus) {
        char c = peek();
        bool neg = false;
        if (allow_minus && c == '-') {
            neg = true;
            ++pos_;
        }
        AstPtr base = atom();
        if (peek() == '^') {
            ++pos_;
            unsigned e = exponent();
            AstPtr node = make(ExprAst::Kind::Pow);
            node->exponent = e;
            node->kids = {base};
            base = node;
        }
        if (neg) {
            AstPtr node = make(ExprAst::Kind::Neg);
            node->kids = {base};
            base = node;
        }
        return base;
    }

    unsigned exponent() {
        skip_ws();
        std::size_t at = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            if (text_[pos_] == '-')
                throw Error(ErrorCode::NonPolynomial, "negative exponent at offset " + std::to_string(at), at);
            ++pos_;
        }
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw Error(ErrorCode::SyntaxError, "expected integer exponent at offset " + std::to_string(at), at);
        unsigned long value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + unsigned(text_[pos_] - '0');
            if (value > 4096) throw Error(ErrorCode::BadInput, "exponent too large at offset " + std::to_string(at), at);
            ++pos_;
        }
        if (pos_ < text_.size() && text_[pos_] == '.')
            throw Error(ErrorCode::NonPolynomial, "fractional exponent at offset " + std::to_string(at), at);
        return unsigned(value);
    }

    AstPtr atom() {
        char c = peek();
        std::size_t at = pos_;
        if (c == '(') {
            ++pos_;
            AstPtr inner = expr();
            if (peek() != ')')
                throw Error(ErrorCode::SyntaxError, "expected ')' at offset " + std::to_string(pos_), pos_);
            ++pos_;
            AstPtr node = make(ExprAst::Kind::Group);
            node->kids = {inner};
            return node;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return variable();
        throw Error(ErrorCode::SyntaxError, "expected number, variable or '(' at offset " + std::to_string(at), at);
    }

    AstPtr number() {
        std::size_t at = pos_;
        BigInt ip = digits(at);
        Rational value(ip);
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            std::size_t fs = pos_;
            BigInt frac = digits(fs);
            BigInt scale = 1;
            for (std::size_t k = fs; k < pos_; ++k) scale *= 10;
            value += Rational(frac, scale);
        } else if (peek() == '/') {
            ++pos_;
            skip_ws();
            std::size_t ds = pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw Error(ErrorCode::SyntaxError, "expected integer denominator at offset " + std::to_string(ds), ds);
            BigInt den = digits(ds);
            if (den == 0) throw Error(ErrorCode::SyntaxError, "zero denominator at offset " + std::to_string(ds), ds);
            value = Rational(numerator(value), den);
        }
        AstPtr node = make(ExprAst::Kind::Number);
        node->number = value;
        return node;
    }

    BigInt digits(std::size_t at) {
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw Error(ErrorCode::SyntaxError, "expected digits at offset " + std::to_string(at), at);
        BigInt out = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            out = out * 10 + (text_[pos_] - '0');
            ++pos_;
        }
        return out;
    }

    AstPtr variable() {
        std::size_t at = pos_;
        // longest declared name wins, so multi-letter variables coexist with juxtaposition
        std::size_t best = 0, best_index = 0;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            const std::string& name = vars_[i];
            if (name.size() > best && text_.compare(at, name.size(), name) == 0) {
                best = name.size();
                best_index = i;
            }
        }
        if (best == 0) {
            std::size_t end = at;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            throw Error(ErrorCode::UnknownVariable,
                        "unknown variable '" + text_.substr(at, end - at) + "' at offset " + std::to_string(at), at);
        }
        pos_ = at + best;
        AstPtr node = make(ExprAst::Kind::Variable);
        node->var = best_index;
        return node;
    }

    const std::string& text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

Poly to_poly(const ExprAst& node, const std::vector<std::string>& vars) {
    switch (node.kind) {
        case ExprAst::Kind::Number: return Poly::constant(vars, node.number);
        case ExprAst::Kind::Variable: return Poly::variable(vars, node.var);
        case ExprAst::Kind::Add: return to_poly(*node.kids[0], vars) + to_poly(*node.kids[1], vars);
        case ExprAst::Kind::Sub: return to_poly(*node.kids[0], vars) - to_poly(*node.kids[1], vars);
        case ExprAst::Kind::Neg: return -to_poly(*node.kids[0], vars);
        case ExprAst::Kind::Mul: return to_poly(*node.kids[0], vars) * to_poly(*node.kids[1], vars);
        case ExprAst::Kind::Pow: return to_poly(*node.kids[0], vars).pow(node.exponent);
        case ExprAst::Kind::Group: return to_poly(*node.kids[0], vars);
    }
    throw Error(ErrorCode::BadInput, "corrupt expression tree");
}

}  // namespace

ExprAst parse_expression(const std::string& text, const std::vector<std::string>& variables) {
    return *Parser(text, variables).run();
}

Poly ast_to_poly(const ExprAst& ast, const std::vector<std::string>& variables) {
    return to_poly(ast, variables);
}

Poly parse_poly(const std::string& text, const std::vector<std::string>& variables) {
    return ast_to_poly(parse_expression(text, variables), variables);
}

Rational eval_ast(const ExprAst& node, const std::vector<Rational>& point) {
    switch (node.kind) {
        case ExprAst::Kind::Number: return node.number;
        case ExprAst::Kind::Variable: return point.at(node.var);
        case ExprAst::Kind::Add: return eval_ast(*node.kids[0], point) + eval_ast(*node.kids[1], point);
        case ExprAst::Kind::Sub: return eval_ast(*node.kids[0], point) - eval_ast(*node.kids[1], point);
        case ExprAst::Kind::Neg: return -eval_ast(*node.kids[0], point);
        case ExprAst::Kind::Mul: return eval_ast(*node.kids[0], point) * eval_ast(*node.kids[1], point);
        case ExprAst::Kind::Pow: {
            Rational base = eval_ast(*node.kids[0], point), acc(1);
            for (unsigned i = 0; i < node.exponent; ++i) acc *= base;
            return acc;
        }
        case ExprAst::Kind::Group: return eval_ast(*node.kids[0], point);
    }
    throw Error(ErrorCode::BadInput, "corrupt expression tree");
}

}  // namespace algcurv
