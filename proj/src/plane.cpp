#include "algcurv/plane.hpp"

#include <algorithm>
#include <cmath>

#include "algcurv/jets.hpp"
#include "algcurv/numkit.hpp"

namespace algcurv {
namespace {

const std::vector<std::string> kSigmaRing{"sg"};

bool tangent_sort_less(const PlaneBranch& a, const PlaneBranch& b) {
    if (a.tangent.is_real != b.tangent.is_real) return a.tangent.is_real;
    for (std::size_t i = 0; i < std::min(a.tangent.components.size(), b.tangent.components.size()); ++i) {
        const Complex &x = a.tangent.components[i], &y = b.tangent.components[i];
        if (std::abs(x.real() - y.real()) > 1e-12) return x.real() < y.real();
        if (std::abs(x.imag() - y.imag()) > 1e-12) return x.imag() < y.imag();
    }
    if (a.curvature.finite != b.curvature.finite) return a.curvature.finite;
    return a.curvature.value < b.curvature.value;
}

/// Exact-arithmetic branch solve for a tangent with a rational representative.
void solve_exact_tangent(const Poly& shifted, const ProjDirection& dir, unsigned r, int max_order,
                         const Rational& lambda, PlaneAnalysis& out) {
    const std::vector<Rational>& rep = *dir.exact;
    const Rational &a1 = rep[0], &b1 = rep[1];
    Rational norm2 = a1 * a1 + b1 * b1;

    TSeries<Rational> X = TSeries<Rational>::zero(kSigmaRing, max_order);
    TSeries<Rational> Y = TSeries<Rational>::zero(kSigmaRing, max_order);
    X.c[1] = Poly::constant(kSigmaRing, a1);
    Y.c[1] = Poly::constant(kSigmaRing, b1);
    X.c[2] = Poly::variable(kSigmaRing, 0, -b1 / 2) + Poly::constant(kSigmaRing, lambda * a1 / 2);
    Y.c[2] = Poly::variable(kSigmaRing, 0, a1 / 2) + Poly::constant(kSigmaRing, lambda * b1 / 2);

    TSeries<Rational> series = compose_series(shifted, {X, Y});

    int l = -1;
    for (int i = int(r) + 1; i <= max_order; ++i) {
        if (!series.c[std::size_t(i)].is_zero()) {
            l = i;
            break;
        }
    }
    if (l < 0)
        throw Error(ErrorCode::OrderExhausted,
                    "no nonzero jet coefficient up to order " + std::to_string(max_order));

    const Poly& cl = series.c[std::size_t(l)];
    if (cl.is_constant()) {
        PlaneBranch branch;
        branch.tangent = dir;
        branch.multiplicity = dir.multiplicity;
        branch.curvature = CurvatureValue::infinite();
        branch.contact_order = l;
        branch.diagnostics = PlaneDiag::Cusp;
        out.branches.push_back(branch);
        return;
    }

    std::vector<Rational> coeffs = cl.univariate_in(0);
    int emitted = 0;
    auto sqrt_norm = rational_sqrt(norm2);
    for (const RootCluster& root : roots_exact_first(coeffs)) {
        PlaneBranch branch;
        branch.tangent = dir;
        branch.multiplicity = root.multiplicity;
        branch.contact_order = l;
        if (root.exact) {
            Rational mag = root.exact_value < 0 ? Rational(-root.exact_value) : root.exact_value;
            if (sqrt_norm) {
                branch.curvature = CurvatureValue::of_exact(mag / *sqrt_norm);
            } else if (mag == 0) {
                branch.curvature = CurvatureValue::of_exact(Rational(0));
            } else {
                branch.curvature = CurvatureValue::of(to_double(mag) / std::sqrt(to_double(norm2)));
            }
            branch.diagnostics = r == 1 ? PlaneDiag::Regular : PlaneDiag::Node;
        } else if (root.z.imag() == 0.0) {
            branch.curvature = CurvatureValue::of(std::abs(root.z.real()) / std::sqrt(to_double(norm2)));
            branch.diagnostics = r == 1 ? PlaneDiag::Regular : PlaneDiag::Node;
        } else {
            branch.curvature = CurvatureValue::infinite();
            branch.diagnostics = PlaneDiag::ComplexTangent;
        }
        emitted += root.multiplicity;
        out.branches.push_back(branch);
    }
    if (emitted != dir.multiplicity)
        out.warnings.push_back("tangent direction carries multiplicity " + std::to_string(dir.multiplicity) +
                               " but the contact equation has degree " + std::to_string(emitted));
}

/// Float branch solve for irrational or complex tangents. Real tangents arrive
/// unit-normalized, so the curvature is just |sigma|.
void solve_float_tangent(const CPoly& shifted, const ProjDirection& dir, unsigned r, int max_order,
                         const Rational& lambda, PlaneAnalysis& out) {
    Complex a1 = dir.components[0], b1 = dir.components[1];
    Complex iso = a1 * a1 + b1 * b1;
    double iso_scale = std::norm(a1) + std::norm(b1);
    if (std::abs(iso) <= 1e-10 * iso_scale) {
        PlaneBranch branch;
        branch.tangent = dir;
        branch.multiplicity = dir.multiplicity;
        branch.curvature = CurvatureValue::infinite();
        branch.contact_order = int(r) + 1;
        branch.diagnostics = PlaneDiag::ComplexTangent;
        out.branches.push_back(branch);
        return;
    }

    Complex lam = to_complex(lambda);
    TSeries<Complex> X = TSeries<Complex>::zero(kSigmaRing, max_order);
    TSeries<Complex> Y = TSeries<Complex>::zero(kSigmaRing, max_order);
    X.c[1] = CPoly::constant(kSigmaRing, a1);
    Y.c[1] = CPoly::constant(kSigmaRing, b1);
    X.c[2] = CPoly::variable(kSigmaRing, 0, -b1 * 0.5) + CPoly::constant(kSigmaRing, lam * a1 * 0.5);
    Y.c[2] = CPoly::variable(kSigmaRing, 0, a1 * 0.5) + CPoly::constant(kSigmaRing, lam * b1 * 0.5);

    TSeries<Complex> series = compose_series(shifted, {X, Y});
    double scale = 1.0;
    for (const auto& c : series.c) scale = std::max(scale, c.max_coeff_abs());
    const double tol = 1e-9 * scale;

    int l = -1;
    CPoly cl(kSigmaRing);
    for (int i = int(r) + 1; i <= max_order; ++i) {
        cl = series.c[std::size_t(i)].pruned(tol);
        if (!cl.is_zero()) {
            l = i;
            break;
        }
    }
    if (l < 0)
        throw Error(ErrorCode::OrderExhausted,
                    "no nonzero jet coefficient up to order " + std::to_string(max_order));

    if (cl.is_constant()) {
        PlaneBranch branch;
        branch.tangent = dir;
        branch.multiplicity = dir.multiplicity;
        branch.curvature = CurvatureValue::infinite();
        branch.contact_order = l;
        branch.diagnostics = PlaneDiag::Cusp;
        out.branches.push_back(branch);
        return;
    }

    UniPoly up;
    up.coeffs = cl.univariate_in(0);
    int emitted = 0;
    for (const RootCluster& root : roots_all(up)) {
        PlaneBranch branch;
        branch.tangent = dir;
        branch.multiplicity = root.multiplicity;
        branch.contact_order = l;
        bool root_real = std::abs(root.z.imag()) <= 1e-8 * std::max(1.0, std::abs(root.z));
        if (dir.is_real && root_real) {
            branch.curvature = CurvatureValue::of(std::abs(root.z.real()));
            branch.diagnostics = r == 1 ? PlaneDiag::Regular : PlaneDiag::Node;
        } else {
            branch.curvature = CurvatureValue::infinite();
            branch.diagnostics = PlaneDiag::ComplexTangent;
        }
        emitted += root.multiplicity;
        out.branches.push_back(branch);
    }
    if (emitted != dir.multiplicity)
        out.warnings.push_back("tangent direction carries multiplicity " + std::to_string(dir.multiplicity) +
                               " but the contact equation has degree " + std::to_string(emitted));
}

}  // namespace

PlaneAnalysis plane_branch_curvatures(const Poly& f, const std::vector<Rational>& point, int max_order,
                                      const Rational& gauge_lambda) {
    if (f.arity() != 2) throw Error(ErrorCode::BadInput, "plane curvature needs a bivariate polynomial");
    PlaneAnalysis out;
    out.multiplicity = multiplicity(f, point);
    unsigned r = unsigned(out.multiplicity);
    if (max_order <= 0) max_order = int(r) + 10;
    if (max_order <= int(r)) throw Error(ErrorCode::BadInput, "max_order must exceed the multiplicity");

    Poly shifted = f.shifted(point);
    CPoly shifted_c = to_cpoly(shifted);
    for (const ProjDirection& dir : plane_tangent_directions(f, point)) {
        if (dir.exact)
            solve_exact_tangent(shifted, dir, r, max_order, gauge_lambda, out);
        else
            solve_float_tangent(shifted_c, dir, r, max_order, gauge_lambda, out);
    }
    std::sort(out.branches.begin(), out.branches.end(), tangent_sort_less);
    return out;
}

double regular_curvature_implicit(const Poly& f, const std::vector<Rational>& point) {
    if (f.arity() != 2) throw Error(ErrorCode::BadInput, "implicit plane curvature needs a bivariate polynomial");
    Poly fx = f.derivative(0), fy = f.derivative(1);
    Rational gx = evaluate_exact(fx, point), gy = evaluate_exact(fy, point);
    if (gx == 0 && gy == 0)
        throw Error(ErrorCode::SingularPoint, "gradient vanishes; use the branch-wise computation");
    Rational hxx = evaluate_exact(fx.derivative(0), point);
    Rational hxy = evaluate_exact(fx.derivative(1), point);
    Rational hyy = evaluate_exact(fy.derivative(1), point);
    Rational numerator = hxx * gy * gy - 2 * hxy * gx * gy + hyy * gx * gx;
    if (numerator < 0) numerator = -numerator;
    double grad2 = to_double(gx * gx + gy * gy);
    return to_double(numerator) / std::pow(grad2, 1.5);
}

}  // namespace algcurv
