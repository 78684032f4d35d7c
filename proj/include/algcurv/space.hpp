#pragma once

#include <optional>
#include <string>
#include <vector>

#include "algcurv/plane.hpp"
#include "algcurv/singular.hpp"

namespace algcurv {

enum class SpaceDiag { Regular, Node, Cusp, ComplexTangent };

inline const char* to_string(SpaceDiag d) {
    switch (d) {
        case SpaceDiag::Regular: return "Regular";
        case SpaceDiag::Node: return "Node";
        case SpaceDiag::Cusp: return "Cusp";
        case SpaceDiag::ComplexTangent: return "ComplexTangent";
    }
    return "?";
}

struct TorsionValue {
    bool defined = false;
    double value = 0.0;
    std::optional<Rational> exact;

    static TorsionValue undetermined() { return {false, 0.0, std::nullopt}; }
    static TorsionValue of(double v) { return {true, v, std::nullopt}; }
    static TorsionValue of_exact(const Rational& v) { return {true, to_double(v), v}; }
};

struct SpaceBranch {
    ProjDirection tangent;
    int multiplicity = 1;
    CurvatureValue curvature;
    TorsionValue torsion;
    int contact_order = 0;
    SpaceDiag diagnostics = SpaceDiag::Node;
};

struct SpaceAnalysis {
    int multiplicity = 0;
    std::vector<SpaceBranch> branches;
    std::vector<std::string> warnings;
};

/// Tangent directions of the curve F = G = 0 at a common point, from pairs of
/// tangent planes; coincident plane pairs go through the pencil refinement.
std::vector<ProjDirection> space_tangents(const Poly& f, const Poly& g, const std::vector<Rational>& point);

/// Branch-wise curvature and torsion via the staged order-by-order solve of the
/// cubic-jet coefficient equations.
SpaceAnalysis space_branch_frenet(const Poly& f, const Poly& g, const std::vector<Rational>& point,
                                  int max_order = 10);

/// Staged solve for one given tangent direction (taken as-is, without sign
/// normalization); exposed so orientation invariance is testable.
SpaceAnalysis space_branches_for_tangent(const Poly& f, const Poly& g, const std::vector<Rational>& point,
                                         const ProjDirection& tangent, int max_order = 10);

struct SpaceFrenet {
    double curvature = 0.0;
    bool torsion_defined = false;
    double torsion = 0.0;
};

/// Regular-point formulas built from T* = grad F x grad G and its directional
/// derivatives.
SpaceFrenet regular_space_frenet_implicit(const Poly& f, const Poly& g, const std::vector<Rational>& point);

}  // namespace algcurv
