#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "algcurv/numkit.hpp"
#include "test_util.hpp"

using namespace algcurv;

TEST_SUITE("numkit") {
    TEST_CASE("exact rational roots") {
        // sigma^2 - 6 sigma + 8
        auto roots = roots_exact_first({Rational(8), Rational(-6), Rational(1)});
        REQUIRE(roots.size() == 2);
        CHECK(roots[0].exact);
        CHECK(roots[0].exact_value == 2);
        CHECK(roots[1].exact_value == 4);

        // (m-1)^2
        auto dbl = roots_exact_first({Rational(1), Rational(-2), Rational(1)});
        REQUIRE(dbl.size() == 1);
        CHECK(dbl[0].multiplicity == 2);
        CHECK(dbl[0].exact_value == 1);
    }

    TEST_CASE("complex pair") {
        auto roots = roots_exact_first({Rational(1), Rational(0), Rational(1)});
        REQUIRE(roots.size() == 2);
        CHECK(roots[0].z.imag() == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(roots[1].z.imag() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(roots[0].z.real() == doctest::Approx(0.0).epsilon(1e-10));
        // conjugate symmetry is exact
        CHECK(roots[0].z == std::conj(roots[1].z));
    }

    TEST_CASE("product of roots reconstructs the polynomial") {
        std::mt19937 rng(55);
        std::uniform_real_distribution<double> coeff(-3.0, 3.0);
        for (int it = 0; it < 25; ++it) {
            int deg = 3 + it % 6;
            UniPoly p;
            for (int i = 0; i <= deg; ++i) p.coeffs.emplace_back(coeff(rng), 0.0);
            if (std::abs(p.coeffs.back()) < 0.1) p.coeffs.back() = Complex(1.0, 0.0);
            if (std::abs(p.coeffs.front()) < 0.05) p.coeffs.front() = Complex(0.5, 0.0);
            auto roots = roots_all(p);
            std::vector<Complex> mono{Complex(1.0, 0.0)};
            for (const auto& r : roots)
                for (int m = 0; m < r.multiplicity; ++m) {
                    std::vector<Complex> next(mono.size() + 1, Complex(0.0, 0.0));
                    for (std::size_t i = 0; i < mono.size(); ++i) {
                        next[i + 1] += mono[i];
                        next[i] -= mono[i] * r.z;
                    }
                    mono = next;
                }
            REQUIRE(mono.size() == p.coeffs.size());
            for (std::size_t i = 0; i < mono.size(); ++i) {
                Complex expect = p.coeffs[i] / p.coeffs.back();
                CHECK(std::abs(mono[i] - expect) <= 1e-8 * std::max(1.0, std::abs(expect)));
            }
        }
    }

    TEST_CASE("wilkinson-style stress stays within the contract") {
        // roots 1..12, integer coefficients: the exact path peels them all off
        std::vector<Rational> poly{Rational(1)};
        for (int r = 1; r <= 12; ++r) {
            std::vector<Rational> next(poly.size() + 1, Rational(0));
            for (std::size_t i = 0; i < poly.size(); ++i) {
                next[i + 1] += poly[i];
                next[i] -= poly[i] * r;
            }
            poly = next;
        }
        auto roots = roots_exact_first(poly);
        REQUIRE(roots.size() == 12);
        for (int r = 1; r <= 12; ++r) {
            CHECK(roots[std::size_t(r - 1)].exact);
            CHECK(roots[std::size_t(r - 1)].exact_value == r);
        }

        // perturbed variant goes through the float path; the residual bound or
        // NoConvergence is the contract, never a silently wrong answer
        UniPoly fp;
        for (const Rational& c : poly) fp.coeffs.push_back(to_complex(c));
        fp.coeffs[5] *= 1.0 + 1e-7;
        try {
            auto froots = roots_all(fp);
            double norm = 0.0;
            for (const Complex& c : fp.coeffs) norm += std::abs(c);
            for (const auto& r : froots) {
                Complex val(0.0, 0.0);
                for (std::size_t i = fp.coeffs.size(); i-- > 0;) val = val * r.z + fp.coeffs[i];
                CHECK(std::abs(val) <= 1e-12 * norm * std::pow(std::max(1.0, std::abs(r.z)), 12.0));
            }
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NoConvergence);
        }
    }

    TEST_CASE("float affine solve classifies and solves") {
        LinearSystem<Complex> sys;
        sys.unknowns = {"al", "be", "ga"};
        sys.rows = {{Complex(1, 0), Complex(0, 0), Complex(0, 0)},
                    {Complex(0, 0), Complex(2, 0), Complex(0, 0)},
                    {Complex(0, 0), Complex(0, 0), Complex(1, 0)}};
        double g = 1.0 / (2.0 * std::sqrt(2.0));
        sys.rhs = {Complex(0, 0), Complex(0, 0), Complex(-g, 0)};
        auto sol = solve_affine(sys);
        REQUIRE(sol.kind == AffineSolution<Complex>::Kind::Unique);
        CHECK(std::abs(sol.particular[0]) == 0.0);
        CHECK(std::abs(sol.particular[1]) == 0.0);
        CHECK(sol.particular[2].real() == doctest::Approx(-g).epsilon(1e-14));
    }

    TEST_CASE("inconsistent and underdetermined classification") {
        LinearSystem<Rational> bad;
        bad.unknowns = {"s"};
        bad.rows = {{Rational(0)}};
        bad.rhs = {Rational(1)};
        CHECK(solve_affine(bad).kind == AffineSolution<Rational>::Kind::Inconsistent);

        LinearSystem<Rational> under;
        under.unknowns = {"s", "t"};
        under.rows = {{Rational(1), Rational(-1)}};
        under.rhs = {Rational(0)};
        auto sol = solve_affine(under);
        REQUIRE(sol.kind == AffineSolution<Rational>::Kind::Underdetermined);
        REQUIRE(sol.free_indices.size() == 1);
        CHECK(sol.free_indices[0] == 1);  // t is free
        CHECK(sol.free_coeffs[0][0] == 1);
    }

    TEST_CASE("random consistent rational systems solve with zero residual") {
        std::mt19937 rng(77);
        for (int it = 0; it < 40; ++it) {
            std::size_t n = 2 + it % 3;
            std::size_t m = n + it % 2;
            LinearSystem<Rational> sys;
            for (std::size_t j = 0; j < n; ++j) sys.unknowns.push_back("u" + std::to_string(j));
            std::vector<Rational> truth;
            for (std::size_t j = 0; j < n; ++j) truth.push_back(testutil::random_rational(rng));
            for (std::size_t i = 0; i < m; ++i) {
                std::vector<Rational> row;
                Rational acc(0);
                for (std::size_t j = 0; j < n; ++j) {
                    row.push_back(testutil::random_rational(rng));
                    acc += row.back() * truth[j];
                }
                sys.rows.push_back(row);
                sys.rhs.push_back(acc);
            }
            auto sol = solve_affine(sys);
            REQUIRE(sol.kind != AffineSolution<Rational>::Kind::Inconsistent);
            // plug the particular solution back in: residual must vanish exactly
            for (std::size_t i = 0; i < m; ++i) {
                Rational acc(0);
                for (std::size_t j = 0; j < n; ++j) acc += sys.rows[i][j] * sol.particular[j];
                CHECK(acc == sys.rhs[i]);
            }
        }
    }
}
