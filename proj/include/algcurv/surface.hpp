#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "algcurv/singular.hpp"

namespace algcurv {

enum class SurfaceDiag { Regular, Sheet, CuspSheet, DegeneratePlane, ComplexPlane };

inline const char* to_string(SurfaceDiag d) {
    switch (d) {
        case SurfaceDiag::Regular: return "Regular";
        case SurfaceDiag::Sheet: return "Sheet";
        case SurfaceDiag::CuspSheet: return "CuspSheet";
        case SurfaceDiag::DegeneratePlane: return "DegeneratePlane";
        case SurfaceDiag::ComplexPlane: return "ComplexPlane";
    }
    return "?";
}

struct SurfaceBranch {
    ProjDirection normal;
    int multiplicity = 1;
    bool curvature_defined = false;
    double gauss = 0.0;
    double mean_signed = 0.0;
    double mean_abs = 0.0;
    std::optional<Rational> gauss_exact;
    std::optional<Rational> mean_exact;  // signed, when representable exactly
    int contact_order = 0;
    SurfaceDiag diagnostics = SurfaceDiag::Sheet;
};

struct SurfaceAnalysis {
    int multiplicity = 0;
    std::vector<SurfaceBranch> branches;
    std::vector<std::string> warnings;
};

/// Orthonormal in-plane frame override for testing frame independence; u, w
/// must be unit, orthogonal to each other and to the plane normal.
struct SurfaceFrame {
    std::array<double, 3> u{};
    std::array<double, 3> w{};
    std::array<double, 3> n{};
};

/// Gaussian and mean curvature per tangent plane at a point of F = 0.
/// max_order <= 0 selects r+10.
SurfaceAnalysis surface_branch_curvatures(const Poly& f, const std::vector<Rational>& point, int max_order = 0);

/// Single-plane entry point, exposed so tests can pin the frame.
SurfaceBranch surface_branch_for_plane(const Poly& f, const std::vector<Rational>& point, const TangentPlane& plane,
                                       int max_order = 0, const std::optional<SurfaceFrame>& frame = std::nullopt);

/// Implicit-formula curvatures at a regular point, signed against grad F:
/// K_G from the adjugate quadratic form, K_M from the Hessian quadratic form.
std::pair<double, double> regular_surface_curvatures_implicit(const Poly& f, const std::vector<Rational>& point);

}  // namespace algcurv
