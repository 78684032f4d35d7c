#include "algcurv/singular.hpp"

#include <cmath>

namespace algcurv {
namespace {

void check_on_variety(const Poly& f, const std::vector<Rational>& point) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "the zero polynomial defines no variety");
    if (evaluate_exact(f, point) != 0)
        throw Error(ErrorCode::PointNotOnVariety, "F does not vanish at the given point");
}

std::vector<Complex> unit_real(const std::vector<Rational>& v) {
    double norm = 0.0;
    for (const Rational& c : v) norm += to_double(c) * to_double(c);
    norm = std::sqrt(norm);
    std::vector<Complex> out;
    for (const Rational& c : v) {
        double value = to_double(c) / norm;
        out.emplace_back(value == 0.0 ? 0.0 : value, 0.0);
    }
    return out;
}

}  // namespace

std::vector<Rational> primitive_representative(const std::vector<Rational>& v) {
    BigInt den_lcm = 1;
    for (const Rational& c : v) den_lcm = boost::multiprecision::lcm(den_lcm, denominator(c));
    std::vector<BigInt> ints;
    for (const Rational& c : v) ints.push_back(numerator(c) * (den_lcm / denominator(c)));
    BigInt g = 0;
    for (const BigInt& n : ints) g = boost::multiprecision::gcd(g, n);
    if (g == 0) throw Error(ErrorCode::BadInput, "zero vector has no primitive representative");
    int sign = 0;
    for (const BigInt& n : ints) {
        if (n != 0) {
            sign = n > 0 ? 1 : -1;
            break;
        }
    }
    std::vector<Rational> out;
    for (const BigInt& n : ints) out.push_back(Rational(n * sign, g));
    return out;
}

ProjDirection direction_from_exact(const std::vector<Rational>& v, int mult) {
    ProjDirection d;
    d.exact = primitive_representative(v);
    d.components = unit_real(*d.exact);
    d.multiplicity = mult;
    d.is_real = true;
    return d;
}

ProjDirection direction_from_complex(const std::vector<Complex>& v, int mult, bool is_real) {
    ProjDirection d;
    d.multiplicity = mult;
    d.is_real = is_real;
    if (is_real) {
        double norm = 0.0;
        for (const Complex& c : v) norm += c.real() * c.real();
        norm = std::sqrt(norm);
        double sign = 1.0;
        for (const Complex& c : v) {
            if (std::abs(c.real()) > 1e-12 * norm) {
                sign = c.real() > 0 ? 1.0 : -1.0;
                break;
            }
        }
        for (const Complex& c : v) {
            double value = sign * c.real() / norm;
            d.components.emplace_back(value == 0.0 ? 0.0 : value, 0.0);
        }
    } else {
        Complex lead(0.0, 0.0);
        for (const Complex& c : v) {
            if (std::abs(c) > 1e-12) {
                lead = c;
                break;
            }
        }
        for (const Complex& c : v) d.components.push_back(c / lead);
        // snap the leading entry to exactly 1
        for (Complex& c : d.components) {
            if (std::abs(c - Complex(1.0, 0.0)) < 1e-15) {
                c = Complex(1.0, 0.0);
                break;
            }
        }
    }
    return d;
}

bool same_direction(const ProjDirection& a, const ProjDirection& b, double tol) {
    if (a.components.size() != b.components.size()) return false;
    if (a.exact && b.exact) return *a.exact == *b.exact;
    if (a.is_real != b.is_real) return false;
    double diff = 0.0, flip = 0.0;
    for (std::size_t i = 0; i < a.components.size(); ++i) {
        diff = std::max(diff, std::abs(a.components[i] - b.components[i]));
        flip = std::max(flip, std::abs(a.components[i] + b.components[i]));
    }
    return std::min(diff, flip) <= tol;
}

int multiplicity(const Poly& f, const std::vector<Rational>& point) {
    check_on_variety(f, point);
    return int(f.shifted(point).min_degree());
}

std::vector<ProjDirection> plane_tangent_directions(const Poly& f, const std::vector<Rational>& point) {
    if (f.arity() != 2) throw Error(ErrorCode::BadInput, "plane tangents need a bivariate polynomial");
    check_on_variety(f, point);
    Poly shifted = f.shifted(point);
    unsigned r = shifted.min_degree();
    Poly form = shifted.homogeneous_part(r);

    // the (0,1) direction corresponds to the x-power dividing the form
    unsigned strip = r;
    for (const auto& [m, c] : form.terms()) strip = std::min(strip, m.exp[0]);

    std::vector<ProjDirection> out;
    if (strip > 0) out.push_back(direction_from_exact({Rational(0), Rational(1)}, int(strip)));

    if (strip < r) {
        // dehomogenize to the slope m = b1/a1
        std::vector<Rational> slopes(std::size_t(r - strip) + 1, Rational(0));
        for (const auto& [m, c] : form.terms()) slopes[m.exp[1]] += c;
        for (const RootCluster& root : roots_exact_first(slopes)) {
            if (root.exact) {
                out.push_back(direction_from_exact({Rational(1), root.exact_value}, root.multiplicity));
            } else {
                bool real = root.z.imag() == 0.0;
                out.push_back(direction_from_complex({Complex(1.0, 0.0), root.z}, root.multiplicity, real));
            }
        }
    }
    return out;
}

namespace {

/// Deterministic lattice point where the form does not vanish; exists on a
/// (deg+1)^3 grid for any nonzero polynomial.
std::vector<Rational> nonvanishing_point(const Poly& form) {
    int bound = std::max(form.total_degree(), 1) + 1;
    for (int a = 0; a <= bound; ++a)
        for (int b = 0; b <= bound; ++b)
            for (int c = 0; c <= bound; ++c) {
                std::vector<Rational> q{Rational(a), Rational(b), Rational(c)};
                if (evaluate_exact(form, q) != 0) return q;
            }
    throw Error(ErrorCode::BadInput, "form vanished on the whole probe grid");
}

struct LinePoint {
    bool exact = false;
    std::vector<Rational> exact_point;
    std::vector<Complex> point;
};

/// Roots of the form restricted to the projective line {s*Q + B}.
std::vector<LinePoint> line_section_points(const Poly& form, const std::vector<Rational>& q,
                                           const std::vector<Rational>& b) {
    std::vector<std::string> sring{"s"};
    std::vector<Poly> map;
    for (std::size_t i = 0; i < 3; ++i) {
        Poly entry = Poly::variable(sring, 0, q[i]);
        entry += Poly::constant(sring, b[i]);
        map.push_back(entry);
    }
    Poly restricted = form.substituted(map);
    std::vector<LinePoint> pts;
    if (restricted.is_zero()) return pts;  // line inside the cone; caller treats pairings exhaustively
    std::vector<Rational> coeffs = restricted.univariate_in(0);
    if (coeffs.size() < 2) return pts;
    for (const RootCluster& root : roots_exact_first(coeffs)) {
        LinePoint p;
        if (root.exact) {
            p.exact = true;
            for (std::size_t i = 0; i < 3; ++i) p.exact_point.push_back(root.exact_value * q[i] + b[i]);
            for (const Rational& c : p.exact_point) p.point.emplace_back(to_double(c), 0.0);
        } else {
            for (std::size_t i = 0; i < 3; ++i) p.point.push_back(root.z * to_double(q[i]) + to_double(b[i]));
        }
        for (int m = 0; m < root.multiplicity; ++m) pts.push_back(p);
    }
    return pts;
}

template <class V>
std::vector<V> cross3(const std::vector<V>& a, const std::vector<V>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Poly linear_form(const std::vector<std::string>& ring, const std::vector<Rational>& n) {
    Poly out(ring);
    for (std::size_t i = 0; i < 3; ++i) out += Poly::variable(ring, i, n[i]);
    return out;
}

CPoly linear_form_c(const std::vector<std::string>& ring, const std::vector<Complex>& n) {
    CPoly out(ring);
    for (std::size_t i = 0; i < 3; ++i) out += CPoly::variable(ring, i, n[i]);
    return out;
}

}  // namespace

std::vector<TangentPlane> surface_tangent_planes(const Poly& f, const std::vector<Rational>& point) {
    if (f.arity() != 3) throw Error(ErrorCode::BadInput, "surface tangent planes need a trivariate polynomial");
    check_on_variety(f, point);
    Poly shifted = f.shifted(point);
    unsigned r = shifted.min_degree();

    if (r == 1) {
        Poly lin = shifted.homogeneous_part(1);
        std::vector<Rational> grad(3, Rational(0));
        for (const auto& [m, c] : lin.terms())
            for (std::size_t i = 0; i < 3; ++i)
                if (m.exp[i]) grad[i] = c;
        TangentPlane plane;
        plane.normal = direction_from_exact(grad, 1);
        plane.multiplicity = 1;
        return {plane};
    }

    Poly form = shifted.homogeneous_part(r);
    std::vector<Rational> q = nonvanishing_point(form);
    std::vector<std::vector<Rational>> axes{{Rational(1), Rational(0), Rational(0)},
                                            {Rational(0), Rational(1), Rational(0)},
                                            {Rational(0), Rational(0), Rational(1)}};
    // {q, b1, b2} must be a basis so the two section lines meet only at q
    std::vector<std::vector<Rational>> basis;
    for (const auto& e : axes) {
        auto c = cross3<Rational>(q, e);
        if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
        if (basis.empty()) {
            basis.push_back(e);
            continue;
        }
        auto n = cross3<Rational>(q, basis[0]);
        Rational det = n[0] * e[0] + n[1] * e[1] + n[2] * e[2];
        if (det != 0) {
            basis.push_back(e);
            break;
        }
    }
    if (basis.size() != 2) throw Error(ErrorCode::BadInput, "failed to pick independent section lines");

    auto pts1 = line_section_points(form, q, basis[0]);
    auto pts2 = line_section_points(form, q, basis[1]);

    // candidate plane normals: lines through one root point on each section line
    std::vector<std::vector<Rational>> exact_candidates;
    std::vector<std::vector<Complex>> float_candidates;
    auto push_exact = [&](std::vector<Rational> n) {
        n = primitive_representative(n);
        for (const auto& seen : exact_candidates)
            if (seen == n) return;
        exact_candidates.push_back(std::move(n));
    };
    auto push_float = [&](const std::vector<Complex>& n) {
        double norm = 0.0;
        for (const Complex& c : n) norm = std::max(norm, std::abs(c));
        if (norm < 1e-12) return;
        Complex lead(0.0, 0.0);
        for (const Complex& c : n)
            if (std::abs(c) > 1e-9 * norm) {
                lead = c;
                break;
            }
        std::vector<Complex> unit;
        for (const Complex& c : n) unit.push_back(c / lead);
        for (const auto& seen : float_candidates) {
            double d = 0.0;
            for (std::size_t i = 0; i < 3; ++i) d = std::max(d, std::abs(seen[i] - unit[i]));
            if (d <= 1e-9) return;
        }
        float_candidates.push_back(std::move(unit));
    };
    for (const LinePoint& p1 : pts1) {
        for (const LinePoint& p2 : pts2) {
            if (p1.exact && p2.exact) {
                auto n = cross3<Rational>(p1.exact_point, p2.exact_point);
                if (n[0] == 0 && n[1] == 0 && n[2] == 0) continue;
                push_exact(n);
            } else {
                auto n = cross3<Complex>(p1.point, p2.point);
                push_float(n);
            }
        }
    }

    std::vector<TangentPlane> planes;
    unsigned extracted = 0;

    Poly cof = form;
    for (const auto& n : exact_candidates) {
        Poly lin = linear_form(form.ring(), n);
        int mult = 0;
        while (true) {
            auto quo = try_divide(cof, lin);
            if (!quo) break;
            cof = *quo;
            ++mult;
        }
        if (mult) {
            TangentPlane plane;
            plane.normal = direction_from_exact(n, mult);
            plane.multiplicity = mult;
            planes.push_back(plane);
            extracted += unsigned(mult);
        }
        if (cof.total_degree() <= 0) break;
    }

    if (cof.total_degree() == 1) {
        std::vector<Rational> n(3, Rational(0));
        for (const auto& [m, c] : cof.terms())
            for (std::size_t i = 0; i < 3; ++i)
                if (m.exp[i]) n[i] = c;
        TangentPlane plane;
        plane.normal = direction_from_exact(n, 1);
        plane.multiplicity = 1;
        planes.push_back(plane);
        extracted += 1;
        cof = Poly::constant(form.ring(), Rational(1));
    }

    if (cof.total_degree() >= 2) {
        CPoly cofc = to_cpoly(cof);
        double scale = cofc.max_coeff_abs();
        for (const auto& n : float_candidates) {
            CPoly lin = linear_form_c(form.ring(), n);
            int mult = 0;
            while (cofc.total_degree() >= 1) {
                auto [quo, residual] = divide_linear(cofc, lin);
                if (residual > 1e-10) break;
                cofc = quo;
                ++mult;
            }
            if (mult) {
                bool real = true;
                for (const Complex& c : n)
                    if (std::abs(c.imag()) > 1e-9) real = false;
                TangentPlane plane;
                plane.normal = direction_from_complex(n, mult, real);
                plane.multiplicity = mult;
                planes.push_back(plane);
                extracted += unsigned(mult);
            }
            if (cofc.total_degree() <= 0) break;
        }
        cofc = cofc.pruned(1e-10 * std::max(scale, 1.0));
        if (cofc.total_degree() == 1) {
            std::vector<Complex> n(3, Complex(0.0, 0.0));
            for (const auto& [m, c] : cofc.terms())
                for (std::size_t i = 0; i < 3; ++i)
                    if (m.exp[i]) n[i] = c;
            bool real = true;
            for (const Complex& c : n)
                if (std::abs(c.imag()) > 1e-9 * std::abs(c)) real = false;
            TangentPlane plane;
            plane.normal = direction_from_complex(n, 1, real);
            plane.multiplicity = 1;
            planes.push_back(plane);
            extracted += 1;
        } else if (cofc.total_degree() >= 2) {
            throw Error(ErrorCode::NonLinearTangentCone,
                        "the tangent cone has an irreducible factor of degree >= 2; no tangent planes are defined");
        }
    }

    if (extracted != r)
        throw Error(ErrorCode::NonLinearTangentCone,
                    "linear factors account for " + std::to_string(extracted) + " of multiplicity " +
                        std::to_string(r));
    return planes;
}

}  // namespace algcurv
