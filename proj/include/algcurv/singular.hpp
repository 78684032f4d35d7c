#pragma once

#include <optional>
#include <vector>

#include "algcurv/numkit.hpp"
#include "algcurv/poly.hpp"

namespace algcurv {

/// A projective direction (2 or 3 homogeneous components) with multiplicity.
/// Reporting normalization: real directions are unit vectors with the first
/// nonzero component positive; complex directions carry a leading 1. When the
/// direction came out of exact arithmetic, `exact` holds a primitive integer
/// representative for downstream exact work.
struct ProjDirection {
    std::vector<Complex> components;
    int multiplicity = 1;
    bool is_real = true;
    std::optional<std::vector<Rational>> exact;
};

struct TangentPlane {
    ProjDirection normal;
    int multiplicity = 1;
};

/// Primitive integer representative: cleared denominators, gcd 1, first nonzero
/// entry positive.
std::vector<Rational> primitive_representative(const std::vector<Rational>& v);

ProjDirection direction_from_exact(const std::vector<Rational>& v, int multiplicity);
ProjDirection direction_from_complex(const std::vector<Complex>& v, int multiplicity, bool is_real);

bool same_direction(const ProjDirection& a, const ProjDirection& b, double tol = 1e-9);

int multiplicity(const Poly& f, const std::vector<Rational>& point);

/// Tangent directions of a plane curve at a point, from the roots of the lowest
/// homogeneous form of the recentered polynomial.
std::vector<ProjDirection> plane_tangent_directions(const Poly& f, const std::vector<Rational>& point);

/// Tangent planes of a surface at a point. For r >= 2 the lowest ternary form is
/// split into linear factors; NonLinearTangentCone when that fails.
std::vector<TangentPlane> surface_tangent_planes(const Poly& f, const std::vector<Rational>& point);

}  // namespace algcurv
