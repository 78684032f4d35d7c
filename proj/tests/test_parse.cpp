#include "doctest.h"

#include "algcurv/parse.hpp"
#include "test_util.hpp"

using namespace algcurv;

namespace {
const std::vector<std::string> XY{"x", "y"};

/// Random expression source text plus its tree, drawn from the grammar.
std::string random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
    std::uniform_int_distribution<int> small(0, 9);
    std::uniform_int_distribution<int> den(1, 9);
    std::uniform_int_distribution<int> expo(0, 3);
    switch (pick(rng)) {
        case 0: {
            int n = small(rng);
            if (small(rng) < 3) return std::to_string(n) + "/" + std::to_string(den(rng));
            return std::to_string(n);
        }
        case 1: return small(rng) % 2 ? "x" : "y";
        case 2: return "(" + random_expr(rng, depth - 1) + "+" + random_expr(rng, depth - 1) + ")";
        case 3: return "(" + random_expr(rng, depth - 1) + "-" + random_expr(rng, depth - 1) + ")";
        case 4: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
        default: return "(" + random_expr(rng, depth - 1) + ")^" + std::to_string(expo(rng));
    }
}
}  // namespace

TEST_SUITE("parse") {
    TEST_CASE("model curve inputs") {
        Poly f = parse_poly("x^3-x^2+y^2", XY);
        Poly expect = Poly::zero(XY);
        expect.add_term(Monomial{{3, 0}}, Rational(1));
        expect.add_term(Monomial{{2, 0}}, Rational(-1));
        expect.add_term(Monomial{{0, 2}}, Rational(1));
        CHECK(f == expect);

        Poly g = parse_poly("(x^2+y^2)^3-4x^2y^2", XY);
        CHECK(g.total_degree() == 6);
        CHECK(g.min_degree() == 4);

        Poly h = parse_poly("2/3*x", XY);
        CHECK(h == Poly::variable(XY, 0, Rational(2, 3)));
    }

    TEST_CASE("juxtaposition and precedence") {
        CHECK(parse_poly("3x^2y", XY) == parse_poly("3*(x^2)*y", XY));
        CHECK(parse_poly("-x^2", XY) == -parse_poly("x^2", XY));
        CHECK(parse_poly("2(x+y)", XY) == parse_poly("2*x+2*y", XY));
        CHECK(parse_poly("x - y", XY) == parse_poly("x-y", XY));
        CHECK(parse_poly("0.5x", XY) == Poly::variable(XY, 0, Rational(1, 2)));
    }

    TEST_CASE("rejections") {
        CHECK_THROWS_WITH_AS(parse_poly("x^-1", XY), doctest::Contains("NonPolynomial"), Error);
        CHECK_THROWS_WITH_AS(parse_poly("x^1.5", XY), doctest::Contains("NonPolynomial"), Error);
        CHECK_THROWS_WITH_AS(parse_poly("x+", XY), doctest::Contains("SyntaxError"), Error);
        CHECK_THROWS_WITH_AS(parse_poly("x^2 = 0", XY), doctest::Contains("SyntaxError"), Error);
        CHECK_THROWS_WITH_AS(parse_poly("w+1", XY), doctest::Contains("UnknownVariable"), Error);
        CHECK_THROWS_WITH_AS(parse_poly("", XY), doctest::Contains("SyntaxError"), Error);
        try {
            parse_poly("x*/2", XY);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SyntaxError);
            CHECK(e.offset() == 2);
        }
    }

    TEST_CASE("multi-character variable names use longest match") {
        std::vector<std::string> vars{"x", "xy"};
        Poly p = parse_poly("xy", vars);
        CHECK(p == Poly::variable(vars, 1));
    }

    TEST_CASE("round trip on random polynomials") {
        std::mt19937 rng(101);
        for (int it = 0; it < 1000; ++it) {
            Poly f = testutil::random_poly(rng, XY, 5, 7);
            CHECK(parse_poly(to_string(f), XY) == f);
        }
    }

    TEST_CASE("fuzzed derivations evaluate consistently") {
        std::mt19937 rng(202);
        for (int it = 0; it < 300; ++it) {
            std::string text = random_expr(rng, 3);
            ExprAst ast = parse_expression(text, XY);
            Poly p = ast_to_poly(ast, XY);
            for (int pt = 0; pt < 5; ++pt) {
                auto at = testutil::random_point(rng, 2);
                CHECK(eval_ast(ast, at) == evaluate_exact(p, at));
            }
        }
    }
}
