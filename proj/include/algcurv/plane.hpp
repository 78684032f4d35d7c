#pragma once

#include <optional>
#include <string>
#include <vector>

#include "algcurv/singular.hpp"

namespace algcurv {

struct CurvatureValue {
    bool finite = true;
    double value = 0.0;
    std::optional<Rational> exact;  // set when the value is an exact rational

    static CurvatureValue infinite() { return {false, 0.0, std::nullopt}; }
    static CurvatureValue of(double v) { return {true, v, std::nullopt}; }
    static CurvatureValue of_exact(const Rational& v) { return {true, to_double(v), v}; }
};

enum class PlaneDiag { Regular, Node, Cusp, ComplexTangent };

inline const char* to_string(PlaneDiag d) {
    switch (d) {
        case PlaneDiag::Regular: return "Regular";
        case PlaneDiag::Node: return "Node";
        case PlaneDiag::Cusp: return "Cusp";
        case PlaneDiag::ComplexTangent: return "ComplexTangent";
    }
    return "?";
}

struct PlaneBranch {
    ProjDirection tangent;
    int multiplicity = 1;
    CurvatureValue curvature;
    int contact_order = 0;
    PlaneDiag diagnostics = PlaneDiag::Regular;
};

struct PlaneAnalysis {
    int multiplicity = 0;
    std::vector<PlaneBranch> branches;
    std::vector<std::string> warnings;
};

/// Branch-wise curvature at a point of a plane algebraic curve. The quadratic
/// jet is gauge-fixed with the acceleration normal to the tangent; the optional
/// `gauge_lambda` adds a tangential acceleration component (a reparametrization,
/// exposed so the invariance is testable). max_order <= 0 selects r+10.
PlaneAnalysis plane_branch_curvatures(const Poly& f, const std::vector<Rational>& point, int max_order = 0,
                                      const Rational& gauge_lambda = Rational(0));

/// Curvature at a regular point from the implicit formula
/// |Tan(F) * H(F) * Tan(F)^T| / |grad F|^3 with Tan(F) = (-F_y, F_x).
double regular_curvature_implicit(const Poly& f, const std::vector<Rational>& point);

}  // namespace algcurv
