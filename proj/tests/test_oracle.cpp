#include "doctest.h"

#include <cmath>

#include "algcurv/oracle.hpp"
#include "algcurv/parse.hpp"
#include "test_util.hpp"

using namespace algcurv;

namespace {
const std::vector<std::string> XY{"x", "y"};
const std::vector<std::string> XYZ{"x", "y", "z"};
const std::vector<Rational> O2{Rational(0), Rational(0)};
const std::vector<Rational> O3{Rational(0), Rational(0), Rational(0)};
}  // namespace

TEST_SUITE("oracle") {
    TEST_CASE("traced samples satisfy the defining equation") {
        Poly f = parse_poly("x^3-x^2+y^2", XY);
        double s2 = std::sqrt(0.5);
        auto samples = trace_plane_branch(f, O2, {s2, s2}, 1e-1, 10);
        REQUIRE(samples.size() >= 4);
        double scale = 1.0 + 1 + 1 + 1;  // 1 + sum |coeffs|
        double prev = 1e9;
        for (const auto& s : samples) {
            CHECK(s.residual <= 1e-10 * scale);
            CHECK(s.h < prev);
            prev = s.h;
        }
    }

    TEST_CASE("samples of the circle branch stay on the circle") {
        Poly f = parse_poly("(x-y)*(x^2+y^2-2x)", XY);
        auto samples = trace_plane_branch(f, O2, {0.0, 1.0});
        for (const auto& s : samples) {
            double circle = s.x[0] * s.x[0] + s.x[1] * s.x[1] - 2 * s.x[0];
            CHECK(std::abs(circle) <= 1e-9);
        }
        double k = estimate_curvature(samples, O2);
        CHECK(k == doctest::Approx(1.0).epsilon(1e-3));
    }

    TEST_CASE("isolated real point yields NoBranch") {
        Poly f = parse_poly("x^3+x^2+y^2", XY);
        CHECK_THROWS_WITH_AS(trace_plane_branch(f, O2, {1.0, 0.0}), doctest::Contains("NoBranch"), Error);
    }

    TEST_CASE("curvature estimates") {
        // straight line
        Poly line = parse_poly("(x-y)*(x^2+y^2-2x)", XY);
        double s2 = std::sqrt(0.5);
        auto lsam = trace_plane_branch(line, O2, {s2, s2});
        CHECK(estimate_curvature(lsam, O2) == doctest::Approx(0.0).epsilon(1e-6));

        // node of the cubic: both branches carry sqrt(2)/4
        Poly f = parse_poly("x^3-x^2+y^2", XY);
        auto fsam = trace_plane_branch(f, O2, {s2, s2});
        double want = std::sqrt(2.0) / 4.0;
        CHECK(std::abs(estimate_curvature(fsam, O2) - want) <= 1e-2 * want);

        CHECK_THROWS_WITH_AS(estimate_curvature({lsam[0], lsam[1]}, O2), doctest::Contains("InsufficientSamples"),
                             Error);
    }

    TEST_CASE("estimates converge as the start radius shrinks") {
        Poly f = parse_poly("x^3-x^2+y^2", XY);
        double s2 = std::sqrt(0.5);
        double k1 = estimate_curvature(trace_plane_branch(f, O2, {s2, s2}, 2e-2, 12), O2);
        double k2 = estimate_curvature(trace_plane_branch(f, O2, {s2, s2}, 1e-2, 12), O2);
        double k3 = estimate_curvature(trace_plane_branch(f, O2, {s2, s2}, 5e-3, 12), O2);
        double want = std::sqrt(2.0) / 4.0;
        CHECK(std::abs(k3 - want) <= std::abs(k1 - want) + 1e-12);
        CHECK(std::abs(k3 - k2) <= std::abs(k2 - k1) + 1e-12);
    }

    TEST_CASE("fan separates two branches sharing the tangent") {
        Poly f = parse_poly("2x^4-3x^2y+y^2-2y^3+y^4", XY);
        auto traces = trace_plane_fan(f, O2, {1.0, 0.0});
        REQUIRE(traces.size() == 2);
        double k0 = estimate_curvature(traces[0].samples, O2);
        double k1 = estimate_curvature(traces[1].samples, O2);
        if (k0 > k1) std::swap(k0, k1);
        CHECK(k0 == doctest::Approx(2.0).epsilon(1e-2));
        CHECK(k1 == doctest::Approx(4.0).epsilon(1e-2));
    }

    TEST_CASE("cusp estimates blow up") {
        Poly f = parse_poly("x^3-y^2", XY);
        auto samples = trace_plane_branch(f, O2, {1.0, 0.0}, 1e-2, 26);
        double k = estimate_curvature(samples, O2);
        CHECK(k > 1e4);
    }

    TEST_CASE("space tracing on a planar circle") {
        Poly f = parse_poly("z", XYZ), g = parse_poly("x^2+y^2-2x", XYZ);
        auto samples = trace_space_branch(f, g, O3, {0.0, 1.0, 0.0});
        REQUIRE(samples.size() >= 5);
        for (const auto& s : samples) CHECK(s.residual <= 1e-9);
        auto [k, tau] = estimate_frenet(samples, O3);
        CHECK(k == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(std::abs(tau) <= 1e-4);
    }

    TEST_CASE("space estimates match the closed forms for two cylinders") {
        Poly f = parse_poly("x^2+y^2-2x", XYZ), g = parse_poly("x^2+z^2-4x", XYZ);
        double n3 = std::sqrt(3.0);
        auto samples = trace_space_branch(f, g, O3, {0.0, 1.0 / n3, std::sqrt(2.0) / n3});
        auto [k, tau] = estimate_frenet(samples, O3);
        CHECK(std::abs(k - 1.0 / 3.0) <= 1e-2 / 3.0);
        double want_tau = -1.0 / (4.0 * std::sqrt(2.0));
        CHECK(std::abs(tau - want_tau) <= 5e-2);
    }

    TEST_CASE("space estimates for the quartic sheet cut by a cylinder") {
        Poly f = parse_poly("x^4+y^2+yz^2-z^2", XYZ), g = parse_poly("x^2+y^2-2x", XYZ);
        double s2 = std::sqrt(0.5);
        auto samples = trace_space_branch(f, g, O3, {0.0, s2, s2});
        auto [k, tau] = estimate_frenet(samples, O3);
        double want_k = std::sqrt(3.0) / (2.0 * std::sqrt(2.0));
        CHECK(std::abs(k - want_k) <= 1e-2 * want_k);
        CHECK(std::abs(tau - (-0.75)) <= 5e-2);
    }

    TEST_CASE("normal sections of the cylinder") {
        Poly f = parse_poly("x^2+y^2-1", XYZ);
        std::vector<Rational> p{Rational(1), Rational(0), Rational(0)};
        double axial = normal_section_curvature(f, p, {1, 0, 0}, {0, 0, 1});
        double around = normal_section_curvature(f, p, {1, 0, 0}, {0, 1, 0});
        CHECK(std::abs(axial) <= 1e-6);
        CHECK(std::abs(around) == doctest::Approx(1.0).epsilon(1e-3));
        // mean of an orthogonal pair of normal curvatures = mean curvature
        CHECK(std::abs((axial + around) / 2.0) == doctest::Approx(0.5).epsilon(1e-3));
    }
}
