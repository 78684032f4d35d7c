#include "doctest.h"

#include <cmath>

#include "algcurv/parse.hpp"
#include "algcurv/space.hpp"
#include "test_util.hpp"

using namespace algcurv;

namespace {
const std::vector<std::string> XYZ{"x", "y", "z"};
const std::vector<Rational> O3{Rational(0), Rational(0), Rational(0)};

Poly P3(const std::string& text) { return parse_poly(text, XYZ); }

bool has_tangent(const std::vector<ProjDirection>& dirs, const std::array<double, 3>& t, int mult,
                 double tol = 1e-9) {
    for (const auto& d : dirs) {
        if (d.multiplicity != mult) continue;
        double err = 0.0;
        for (std::size_t i = 0; i < 3; ++i) err = std::max(err, std::abs(d.components[i].real() - t[i]));
        if (err <= tol) return true;
    }
    return false;
}

const SpaceBranch* find_branch(const SpaceAnalysis& a, const std::array<double, 3>& t, double tol = 1e-9) {
    for (const auto& b : a.branches) {
        double err = 0.0;
        for (std::size_t i = 0; i < 3; ++i) err = std::max(err, std::abs(b.tangent.components[i].real() - t[i]));
        if (err <= tol) return &b;
    }
    return nullptr;
}
}  // namespace

TEST_SUITE("space") {
    TEST_CASE("tangent directions") {
        // regular point of a sphere/saddle intersection
        auto t11 = space_tangents(P3("x^2+y^2+z^2-2x"), P3("x^2+2y-yz+z"), O3);
        REQUIRE(t11.size() == 1);
        double n5 = std::sqrt(5.0);
        CHECK(has_tangent(t11, {0, 1 / n5, -2 / n5}, 1));

        // coincident tangent planes resolved through the pencil
        auto t12 = space_tangents(P3("x^2+y^2-2x"), P3("x^2+z^2-4x"), O3);
        REQUIRE(t12.size() == 2);
        double n3 = std::sqrt(3.0);
        CHECK(has_tangent(t12, {0, 1 / n3, std::sqrt(2.0) / n3}, 1, 1e-8));
        CHECK(has_tangent(t12, {0, 1 / n3, -std::sqrt(2.0) / n3}, 1, 1e-8));

        // four tangents, one of them doubled
        auto t14 = space_tangents(P3("x^4+y^2+yz^2-z^2"), parse_poly("x*y", XYZ), O3);
        REQUIRE(t14.size() == 3);
        double s2 = std::sqrt(0.5);
        CHECK(has_tangent(t14, {0, s2, s2}, 1));
        CHECK(has_tangent(t14, {0, s2, -s2}, 1));
        CHECK(has_tangent(t14, {1, 0, 0}, 2));
    }

    TEST_CASE("regular sphere-saddle intersection carries the closed-form frenet data") {
        Poly f = P3("x^2+y^2+z^2-2x"), g = P3("x^2+2y-yz+z");
        auto a = space_branch_frenet(f, g, O3);
        REQUIRE(a.branches.size() == 1);
        const SpaceBranch& b = a.branches[0];
        REQUIRE(b.curvature.finite);
        CHECK(b.curvature.value == doctest::Approx(std::sqrt(141.0 / 125.0)).epsilon(1e-12));
        REQUIRE(b.torsion.defined);
        REQUIRE(b.torsion.exact.has_value());
        CHECK(*b.torsion.exact == Rational(-36, 141));

        auto impl = regular_space_frenet_implicit(f, g, O3);
        CHECK(impl.curvature == doctest::Approx(b.curvature.value).epsilon(1e-12));
        REQUIRE(impl.torsion_defined);
        CHECK(impl.torsion == doctest::Approx(b.torsion.value).epsilon(1e-12));
    }

    TEST_CASE("two congruent cylinders") {
        auto a = space_branch_frenet(P3("x^2+y^2-2x"), P3("x^2+z^2-2x"), O3);
        REQUIRE(a.branches.size() == 2);
        for (const auto& b : a.branches) {
            REQUIRE(b.curvature.finite);
            REQUIRE(b.curvature.exact.has_value());
            CHECK(*b.curvature.exact == Rational(1, 2));
            REQUIRE(b.torsion.defined);
            CHECK(b.torsion.value == doctest::Approx(0.0));
        }
    }

    TEST_CASE("two cylinders of different radii") {
        auto a = space_branch_frenet(P3("x^2+y^2-2x"), P3("x^2+z^2-4x"), O3);
        REQUIRE(a.branches.size() == 2);
        double want_tau = 1.0 / (4.0 * std::sqrt(2.0));
        double taus[2];
        int idx = 0;
        for (const auto& b : a.branches) {
            REQUIRE(b.curvature.finite);
            CHECK(b.curvature.value == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
            REQUIRE(b.torsion.defined);
            CHECK(std::abs(b.torsion.value) == doctest::Approx(want_tau).epsilon(1e-10));
            taus[idx++] = b.torsion.value;
        }
        CHECK(taus[0] * taus[1] < 0);  // opposite signs on the two branches
    }

    TEST_CASE("singular surface cut by a cylinder") {
        auto a = space_branch_frenet(P3("x^4+y^2+yz^2-z^2"), P3("x^2+y^2-2x"), O3);
        REQUIRE(a.branches.size() == 2);
        double want_k = std::sqrt(3.0) / (2.0 * std::sqrt(2.0));
        double taus[2];
        int idx = 0;
        for (const auto& b : a.branches) {
            REQUIRE(b.curvature.finite);
            CHECK(b.curvature.value == doctest::Approx(want_k).epsilon(1e-10));
            REQUIRE(b.torsion.defined);
            REQUIRE(b.torsion.exact.has_value());
            Rational mag = *b.torsion.exact < 0 ? Rational(-*b.torsion.exact) : *b.torsion.exact;
            CHECK(mag == Rational(3, 4));
            taus[idx++] = b.torsion.value;
        }
        CHECK(taus[0] * taus[1] < 0);
    }

    TEST_CASE("four-fold point with a doubled planar branch") {
        auto a = space_branch_frenet(P3("x^4+y^2+yz^2-z^2"), parse_poly("x*y", XYZ), O3);
        CHECK(a.multiplicity == 4);
        double s2 = std::sqrt(0.5);
        const SpaceBranch* plus = find_branch(a, {0, s2, s2});
        REQUIRE(plus);
        CHECK(plus->curvature.value == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
        REQUIRE(plus->torsion.defined);
        CHECK(plus->torsion.value == doctest::Approx(0.0));

        const SpaceBranch* axis = find_branch(a, {1, 0, 0});
        REQUIRE(axis);
        CHECK(axis->multiplicity == 2);
        REQUIRE(axis->curvature.exact.has_value());
        CHECK(*axis->curvature.exact == 2);
        REQUIRE(axis->torsion.defined);
        CHECK(*axis->torsion.exact == 0);
    }

    TEST_CASE("implicit formulas on simple configurations") {
        auto circle = regular_space_frenet_implicit(P3("z"), P3("x^2+y^2-1"), {Rational(1), Rational(0), Rational(0)});
        CHECK(circle.curvature == doctest::Approx(1.0).epsilon(1e-14));
        REQUIRE(circle.torsion_defined);
        CHECK(circle.torsion == doctest::Approx(0.0));

        auto line = regular_space_frenet_implicit(P3("x"), P3("y"), {Rational(0), Rational(0), Rational(5)});
        CHECK(line.curvature == doctest::Approx(0.0));
        CHECK(!line.torsion_defined);

        CHECK_THROWS_WITH_AS(regular_space_frenet_implicit(P3("x^2+y^2-2x"), P3("x^2+z^2-2x"), O3),
                             doctest::Contains("SingularPoint"), Error);
    }

    TEST_CASE("swapping the defining surfaces changes nothing") {
        Poly f = P3("x^4+y^2+yz^2-z^2"), g = P3("x^2+y^2-2x");
        auto a = space_branch_frenet(f, g, O3);
        auto b = space_branch_frenet(g, f, O3);
        REQUIRE(a.branches.size() == b.branches.size());
        for (std::size_t i = 0; i < a.branches.size(); ++i) {
            CHECK(same_direction(a.branches[i].tangent, b.branches[i].tangent));
            CHECK(a.branches[i].curvature.value == doctest::Approx(b.branches[i].curvature.value).epsilon(1e-9));
            CHECK(a.branches[i].torsion.value == doctest::Approx(b.branches[i].torsion.value).epsilon(1e-9));
        }
    }

    TEST_CASE("reversing the tangent leaves curvature and torsion alone") {
        Poly f = P3("x^2+y^2+z^2-2x"), g = P3("x^2+2y-yz+z");
        ProjDirection fwd;
        fwd.exact = std::vector<Rational>{Rational(0), Rational(1), Rational(-2)};
        fwd.components = {Complex(0, 0), Complex(1 / std::sqrt(5.0), 0), Complex(-2 / std::sqrt(5.0), 0)};
        ProjDirection bwd = fwd;
        bwd.exact = std::vector<Rational>{Rational(0), Rational(-1), Rational(2)};
        bwd.components = {Complex(0, 0), Complex(-1 / std::sqrt(5.0), 0), Complex(2 / std::sqrt(5.0), 0)};
        auto a = space_branches_for_tangent(f, g, O3, fwd);
        auto b = space_branches_for_tangent(f, g, O3, bwd);
        REQUIRE(a.branches.size() == 1);
        REQUIRE(b.branches.size() == 1);
        CHECK(a.branches[0].curvature.value == doctest::Approx(b.branches[0].curvature.value).epsilon(1e-12));
        CHECK(a.branches[0].torsion.value == doctest::Approx(b.branches[0].torsion.value).epsilon(1e-12));
    }

    TEST_CASE("dilation scales curvature and torsion inversely") {
        Poly f = P3("x^4+y^2+yz^2-z^2"), g = P3("x^2+y^2-2x");
        Rational s(2);
        std::vector<Poly> dil{Poly::variable(XYZ, 0, 1 / s), Poly::variable(XYZ, 1, 1 / s),
                              Poly::variable(XYZ, 2, 1 / s)};
        auto a = space_branch_frenet(f, g, O3);
        auto b = space_branch_frenet(f.substituted(dil), g.substituted(dil), O3);
        REQUIRE(a.branches.size() == b.branches.size());
        for (std::size_t i = 0; i < a.branches.size(); ++i) {
            CHECK(b.branches[i].curvature.value ==
                  doctest::Approx(a.branches[i].curvature.value / 2.0).epsilon(1e-9));
            if (a.branches[i].torsion.defined)
                CHECK(b.branches[i].torsion.value ==
                      doctest::Approx(a.branches[i].torsion.value / 2.0).epsilon(1e-9));
        }
    }

    TEST_CASE("complex tangents are reported, not solved") {
        auto a = space_branch_frenet(P3("x^2+y^2+z^3"), P3("z"), O3);
        REQUIRE(a.branches.size() == 2);
        for (const auto& b : a.branches) {
            CHECK(b.diagnostics == SpaceDiag::ComplexTangent);
            CHECK(!b.curvature.finite);
            CHECK(!b.tangent.is_real);
        }
    }

    TEST_CASE("degenerate pencils are refused rather than guessed") {
        CHECK_THROWS_WITH_AS(space_tangents(P3("z"), P3("z-x^3"), O3), doctest::Contains("PencilUnresolved"),
                             Error);
    }

    TEST_CASE("staged and implicit results agree at random regular points") {
        std::mt19937 rng(2024);
        int done = 0;
        while (done < 20) {
            Poly gf = testutil::random_poly(rng, XYZ, 2, 4);
            Poly gg = testutil::random_poly(rng, XYZ, 2, 4);
            auto p = testutil::random_point(rng, 3, 2, 2);
            Poly f = gf - Poly::constant(XYZ, evaluate_exact(gf, p));
            Poly g = gg - Poly::constant(XYZ, evaluate_exact(gg, p));
            SpaceFrenet impl;
            try {
                impl = regular_space_frenet_implicit(f, g, p);
            } catch (const Error&) {
                continue;
            }
            SpaceAnalysis a;
            try {
                a = space_branch_frenet(f, g, p);
            } catch (const Error& e) {
                continue;  // e.g. the cone of one factor fails to split
            }
            if (a.branches.size() != 1 || !a.branches[0].curvature.finite) continue;
            CHECK(std::abs(a.branches[0].curvature.value - impl.curvature) <=
                  1e-8 * std::max(1.0, impl.curvature));
            if (impl.torsion_defined && a.branches[0].torsion.defined)
                CHECK(std::abs(a.branches[0].torsion.value - impl.torsion) <=
                      1e-8 * std::max(1.0, std::abs(impl.torsion)));
            ++done;
        }
    }
}
