#include "doctest.h"

#include <cmath>

#include "algcurv/parse.hpp"
#include "algcurv/surface.hpp"
#include "test_util.hpp"

using namespace algcurv;

namespace {
const std::vector<std::string> XYZ{"x", "y", "z"};
const std::vector<Rational> O3{Rational(0), Rational(0), Rational(0)};

const SurfaceBranch* find_branch(const SurfaceAnalysis& a, const std::vector<Rational>& normal) {
    auto rep = primitive_representative(normal);
    for (const auto& b : a.branches)
        if (b.normal.exact && *b.normal.exact == rep) return &b;
    return nullptr;
}

SurfaceFrame frame_from(const std::array<double, 3>& n, const std::array<double, 3>& seed) {
    auto dot = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    };
    std::array<double, 3> u{};
    double nn = dot(n, n);
    for (int i = 0; i < 3; ++i) u[i] = seed[i] - dot(seed, n) / nn * n[i];
    double ul = std::sqrt(dot(u, u));
    for (double& c : u) c /= ul;
    std::array<double, 3> w{n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]};
    double wl = std::sqrt(dot(w, w));
    for (double& c : w) c /= wl;
    // (u, w, n) right-handed
    return SurfaceFrame{u, {-w[0], -w[1], -w[2]}, n};
}
}  // namespace

TEST_SUITE("surface") {
    TEST_CASE("plane plus sphere through the origin") {
        auto a = surface_branch_curvatures(parse_poly("(x-y)*(x^2+y^2+z^2-2x)", XYZ), O3);
        CHECK(a.multiplicity == 2);
        REQUIRE(a.branches.size() == 2);

        const SurfaceBranch* flat = find_branch(a, {Rational(1), Rational(-1), Rational(0)});
        REQUIRE(flat);
        REQUIRE(flat->curvature_defined);
        CHECK(*flat->gauss_exact == 0);
        CHECK(*flat->mean_exact == 0);

        const SurfaceBranch* sphere = find_branch(a, {Rational(1), Rational(0), Rational(0)});
        REQUIRE(sphere);
        REQUIRE(sphere->curvature_defined);
        CHECK(*sphere->gauss_exact == 1);
        Rational mean_abs = *sphere->mean_exact < 0 ? Rational(-*sphere->mean_exact) : *sphere->mean_exact;
        CHECK(mean_abs == 1);
    }

    TEST_CASE("two crossing sheets") {
        auto a = surface_branch_curvatures(parse_poly("x^4+y^2+yz^2-z^2", XYZ), O3);
        REQUIRE(a.branches.size() == 2);
        double want = std::sqrt(2.0) / 8.0;
        for (const auto& b : a.branches) {
            REQUIRE(b.curvature_defined);
            CHECK(*b.gauss_exact == 0);
            CHECK(b.mean_abs == doctest::Approx(want).epsilon(1e-10));
        }
    }

    TEST_CASE("unit sphere at the north pole") {
        auto a = surface_branch_curvatures(parse_poly("x^2+y^2+z^2-1", XYZ),
                                           {Rational(0), Rational(0), Rational(1)});
        REQUIRE(a.branches.size() == 1);
        CHECK(*a.branches[0].gauss_exact == 1);
        CHECK(a.branches[0].mean_abs == doctest::Approx(1.0));
    }

    TEST_CASE("implicit formulas at regular points") {
        auto [kg, km] = regular_surface_curvatures_implicit(parse_poly("x^2+y^2+z^2-1", XYZ),
                                                            {Rational(0), Rational(0), Rational(1)});
        CHECK(kg == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(km) == doctest::Approx(1.0).epsilon(1e-14));

        auto [pg, pm] = regular_surface_curvatures_implicit(parse_poly("z", XYZ), O3);
        CHECK(pg == doctest::Approx(0.0));
        CHECK(pm == doctest::Approx(0.0));

        auto [cg, cm] = regular_surface_curvatures_implicit(parse_poly("x^2+y^2-1", XYZ),
                                                            {Rational(1), Rational(0), Rational(0)});
        CHECK(cg == doctest::Approx(0.0));
        CHECK(std::abs(cm) == doctest::Approx(0.5).epsilon(1e-12));

        CHECK_THROWS_WITH_AS(regular_surface_curvatures_implicit(parse_poly("x^2+y^2-z^2", XYZ), O3),
                             doctest::Contains("SingularPoint"), Error);
    }

    TEST_CASE("branch path matches the implicit formulas at regular points") {
        std::mt19937 rng(321);
        int done = 0;
        while (done < 40) {
            Poly g = testutil::random_poly(rng, XYZ, 3, 6);
            auto p = testutil::random_point(rng, 3, 3, 3);
            Poly f = g - Poly::constant(XYZ, evaluate_exact(g, p));
            std::array<Rational, 3> grad;
            bool regular = false;
            for (std::size_t i = 0; i < 3; ++i) {
                grad[i] = evaluate_exact(f.derivative(i), p);
                if (grad[i] != 0) regular = true;
            }
            if (!regular) continue;
            auto a = surface_branch_curvatures(f, p);
            REQUIRE(a.branches.size() == 1);
            REQUIRE(a.branches[0].curvature_defined);
            auto [kg, km] = regular_surface_curvatures_implicit(f, p);
            // orient the mean against grad F before comparing
            double dotgn = 0.0;
            for (std::size_t i = 0; i < 3; ++i)
                dotgn += to_double(grad[i]) * a.branches[0].normal.components[i].real();
            double mean = a.branches[0].mean_signed * (dotgn >= 0 ? 1.0 : -1.0);
            CHECK(std::abs(a.branches[0].gauss - kg) <= 1e-9 * std::max(1.0, std::abs(kg)));
            CHECK(std::abs(mean - km) <= 1e-9 * std::max(1.0, std::abs(km)));
            ++done;
        }
    }

    TEST_CASE("orientation flip negates the mean curvature") {
        Poly f = parse_poly("x^2+y^2+z^2-1", XYZ);
        std::vector<Rational> p{Rational(0), Rational(0), Rational(1)};
        TangentPlane plane;
        plane.normal = direction_from_exact({Rational(0), Rational(0), Rational(1)}, 1);
        plane.multiplicity = 1;
        auto up = surface_branch_for_plane(f, p, plane, 0, frame_from({0, 0, 1}, {1, 0.2, 0}));
        auto down = surface_branch_for_plane(f, p, plane, 0, frame_from({0, 0, -1}, {1, 0.2, 0}));
        REQUIRE(up.curvature_defined);
        REQUIRE(down.curvature_defined);
        CHECK(up.mean_signed == doctest::Approx(-down.mean_signed).epsilon(1e-12));
        CHECK(up.gauss == doctest::Approx(down.gauss).epsilon(1e-12));
    }

    TEST_CASE("frame independence") {
        Poly f = parse_poly("x^4+y^2+yz^2-z^2", XYZ);
        TangentPlane plane;
        plane.normal = direction_from_exact({Rational(0), Rational(1), Rational(-1)}, 1);
        plane.multiplicity = 1;
        double s2 = std::sqrt(0.5);
        std::array<double, 3> n{0, s2, -s2};
        auto base = surface_branch_for_plane(f, O3, plane, 0, frame_from(n, {1, 0, 0}));
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> angle(0.0, 6.28);
        for (int trial = 0; trial < 5; ++trial) {
            double th = angle(rng);
            SurfaceFrame fr = frame_from(n, {1, 0, 0});
            SurfaceFrame rot = fr;
            for (int i = 0; i < 3; ++i) {
                rot.u[i] = std::cos(th) * fr.u[i] + std::sin(th) * fr.w[i];
                rot.w[i] = -std::sin(th) * fr.u[i] + std::cos(th) * fr.w[i];
            }
            auto got = surface_branch_for_plane(f, O3, plane, 0, rot);
            REQUIRE(got.curvature_defined);
            CHECK(got.gauss == doctest::Approx(base.gauss).epsilon(1e-9));
            CHECK(got.mean_signed == doctest::Approx(base.mean_signed).epsilon(1e-9));
        }
    }

    TEST_CASE("scaling and dilation behave covariantly") {
        Poly f = parse_poly("(x-y)*(x^2+y^2+z^2-2x)", XYZ);
        auto a = surface_branch_curvatures(f, O3);
        auto b = surface_branch_curvatures(f * Rational(9, 4), O3);
        REQUIRE(a.branches.size() == b.branches.size());
        for (std::size_t i = 0; i < a.branches.size(); ++i) {
            CHECK(a.branches[i].gauss == doctest::Approx(b.branches[i].gauss).epsilon(1e-12));
            CHECK(a.branches[i].mean_abs == doctest::Approx(b.branches[i].mean_abs).epsilon(1e-12));
        }

        Rational s(2);
        std::vector<Poly> dil{Poly::variable(XYZ, 0, 1 / s), Poly::variable(XYZ, 1, 1 / s),
                              Poly::variable(XYZ, 2, 1 / s)};
        auto c = surface_branch_curvatures(f.substituted(dil), O3);
        REQUIRE(c.branches.size() == a.branches.size());
        for (std::size_t i = 0; i < a.branches.size(); ++i) {
            CHECK(c.branches[i].gauss == doctest::Approx(a.branches[i].gauss / 4.0).epsilon(1e-9));
            CHECK(c.branches[i].mean_abs == doctest::Approx(a.branches[i].mean_abs / 2.0).epsilon(1e-9));
        }
    }

    TEST_CASE("fractional-power sheets along irrational planes are cusp sheets") {
        auto a = surface_branch_curvatures(parse_poly("x^2-2y^2+z^3", XYZ), O3);
        REQUIRE(a.branches.size() == 2);
        for (const auto& b : a.branches) {
            CHECK(b.diagnostics == SurfaceDiag::CuspSheet);
            CHECK(!b.curvature_defined);
        }
    }

    TEST_CASE("complex tangent planes are reported without curvature") {
        auto a = surface_branch_curvatures(parse_poly("x^2+y^2+z^3", XYZ), O3);
        REQUIRE(a.branches.size() == 2);
        for (const auto& b : a.branches) {
            CHECK(b.diagnostics == SurfaceDiag::ComplexPlane);
            CHECK(!b.curvature_defined);
            CHECK(!b.normal.is_real);
        }
    }

    TEST_CASE("rotations carry the normals along") {
        // orthogonal map with rational entries (3-4-5 in xy composed with 3-4-5 in yz)
        std::vector<Poly> rot{(parse_poly("3x-4y", XYZ)) * Rational(1, 5),
                              (parse_poly("4x+3y", XYZ) * Rational(3, 5) - parse_poly("5z", XYZ) * Rational(4, 5)) *
                                  Rational(1, 5),
                              (parse_poly("4x+3y", XYZ) * Rational(4, 5) + parse_poly("5z", XYZ) * Rational(3, 5)) *
                                  Rational(1, 5)};
        Poly f = parse_poly("x^4+y^2+yz^2-z^2", XYZ);
        auto before = surface_branch_curvatures(f, O3);
        auto after = surface_branch_curvatures(f.substituted(rot), O3);
        REQUIRE(before.branches.size() == after.branches.size());
        // {g=0} = M^T {f=0}, so normals of g are M^T applied to normals of f
        double m[3][3] = {{3.0 / 5, -4.0 / 5, 0}, {12.0 / 25, 9.0 / 25, -4.0 / 5}, {16.0 / 25, 12.0 / 25, 3.0 / 5}};
        for (const auto& bf : before.branches) {
            std::array<double, 3> want{};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) want[i] += m[j][i] * bf.normal.components[j].real();
            bool found = false;
            for (const auto& ba : after.branches) {
                double direct = 0, flipped = 0;
                for (int i = 0; i < 3; ++i) {
                    direct = std::max(direct, std::abs(ba.normal.components[i].real() - want[i]));
                    flipped = std::max(flipped, std::abs(ba.normal.components[i].real() + want[i]));
                }
                if (std::min(direct, flipped) <= 1e-9) found = true;
            }
            CHECK(found);
        }
    }

    TEST_CASE("repeated tangent plane is flagged, not guessed") {
        // two spheres osculating the same plane x = 0 at the origin
        Poly f = parse_poly("(x^2+y^2+z^2-2x)*(x^2+y^2+z^2-4x)", XYZ);
        auto a = surface_branch_curvatures(f, O3);
        REQUIRE(a.branches.size() == 1);
        CHECK(a.branches[0].diagnostics == SurfaceDiag::DegeneratePlane);
        CHECK(!a.branches[0].curvature_defined);
        CHECK(a.branches[0].multiplicity == 2);
    }
}
