#include "algcurv/surface.hpp"

#include <algorithm>
#include <cmath>

#include "algcurv/jets.hpp"
#include "algcurv/numkit.hpp"

namespace algcurv {
namespace {

const std::vector<std::string> kJetRing{"al", "be", "ga"};

std::size_t weakest_axis(const std::array<double, 3>& n) {
    std::size_t k = 0;
    double best = std::abs(n[0]);
    for (std::size_t i = 1; i < 3; ++i) {
        if (std::abs(n[i]) < best - 1e-15) {
            best = std::abs(n[i]);
            k = i;
        }
    }
    return k;
}

template <class V>
std::array<V, 3> cross(const std::array<V, 3>& a, const std::array<V, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Collect the affine subset of the pending equations and classify the solve.
template <class K>
AffineSolution<K> solve_accumulated(const std::vector<PolyT<K>>& eqs) {
    LinearSystem<K> sys;
    sys.unknowns = kJetRing;
    for (const PolyT<K>& eq : eqs) {
        if (eq.is_zero() || eq.total_degree() > 1) continue;
        std::vector<K> row(3, CoeffOps<K>::from_int(0));
        K rhs = CoeffOps<K>::from_int(0);
        for (const auto& [m, c] : eq.terms()) {
            if (m.total_degree() == 0) {
                rhs -= c;
                continue;
            }
            for (std::size_t i = 0; i < 3; ++i)
                if (m.exp[i]) row[i] += c;
        }
        sys.rows.push_back(std::move(row));
        sys.rhs.push_back(rhs);
    }
    return solve_affine(sys);
}

struct ExactFrame {
    std::vector<Rational> u, w, n;
    Rational p2, q2, m2;  // squared norms
};

ExactFrame exact_frame(const std::vector<Rational>& normal) {
    std::array<double, 3> nf{to_double(normal[0]), to_double(normal[1]), to_double(normal[2])};
    double len = std::sqrt(nf[0] * nf[0] + nf[1] * nf[1] + nf[2] * nf[2]);
    std::size_t k = weakest_axis({nf[0] / len, nf[1] / len, nf[2] / len});
    std::array<Rational, 3> n3{normal[0], normal[1], normal[2]};
    std::array<Rational, 3> ek{Rational(0), Rational(0), Rational(0)};
    ek[k] = 1;
    auto w3 = cross<Rational>(n3, ek);
    auto u3 = cross<Rational>(w3, n3);
    ExactFrame f;
    f.n = {n3[0], n3[1], n3[2]};
    f.w = {w3[0], w3[1], w3[2]};
    f.u = {u3[0], u3[1], u3[2]};
    auto dot = [](const std::vector<Rational>& a, const std::vector<Rational>& b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    };
    f.p2 = dot(f.u, f.u);
    f.q2 = dot(f.w, f.w);
    f.m2 = dot(f.n, f.n);
    return f;
}

SurfaceFrame float_frame(const std::array<double, 3>& n_unit) {
    std::size_t k = weakest_axis(n_unit);
    std::array<double, 3> ek{0, 0, 0};
    ek[k] = 1;
    auto w = cross<double>(n_unit, ek);
    double wl = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    for (double& c : w) c /= wl;
    auto u = cross<double>(w, n_unit);
    SurfaceFrame f;
    f.u = u;
    f.w = w;
    f.n = n_unit;
    return f;
}

/// Exact scaled-frame analysis: the patch runs along the integer frame vectors,
/// and the fundamental forms absorb the squared norms afterwards.
SurfaceBranch analyze_exact(const Poly& shifted, unsigned r, const TangentPlane& plane, int max_order) {
    SurfaceBranch branch;
    branch.normal = plane.normal;
    branch.multiplicity = plane.multiplicity;

    ExactFrame fr = exact_frame(*plane.normal.exact);
    std::vector<BiSeries<Rational>> entries;
    for (std::size_t i = 0; i < 3; ++i) {
        BiSeries<Rational> e = BiSeries<Rational>::zero(kJetRing, max_order);
        e.at(1, 0) = Poly::constant(kJetRing, fr.u[i]);
        e.at(0, 1) = Poly::constant(kJetRing, fr.w[i]);
        e.at(2, 0) = Poly::variable(kJetRing, 0, fr.n[i] / 2);
        e.at(1, 1) = Poly::variable(kJetRing, 1, fr.n[i]);
        e.at(0, 2) = Poly::variable(kJetRing, 2, fr.n[i] / 2);
        entries.push_back(std::move(e));
    }
    BiSeries<Rational> series = compose_biseries(shifted, entries);

    std::vector<Poly> eqs;
    for (int d = int(r) + 1; d <= max_order; ++d) {
        for (int j = 0; j <= d; ++j) eqs.push_back(series.at(d - j, j));
        auto sol = solve_accumulated(eqs);
        if (sol.kind == AffineSolution<Rational>::Kind::Inconsistent) {
            branch.diagnostics = SurfaceDiag::CuspSheet;
            branch.contact_order = d;
            return branch;
        }
        if (sol.kind == AffineSolution<Rational>::Kind::Unique) {
            Rational al = sol.particular[0], be = sol.particular[1], ga = sol.particular[2];
            Rational gauss = fr.m2 * (al * ga - be * be) / (fr.p2 * fr.q2);
            Rational mean_num = (fr.q2 * al + fr.p2 * ga) / (2 * fr.p2 * fr.q2);
            branch.curvature_defined = true;
            branch.gauss = to_double(gauss);
            branch.gauss_exact = gauss;
            auto m = rational_sqrt(fr.m2);
            if (m) {
                Rational mean = *m * mean_num;
                branch.mean_exact = mean;
                branch.mean_signed = to_double(mean);
            } else if (mean_num == 0) {
                branch.mean_exact = Rational(0);
                branch.mean_signed = 0.0;
            } else {
                branch.mean_signed = std::sqrt(to_double(fr.m2)) * to_double(mean_num);
            }
            branch.mean_abs = std::abs(branch.mean_signed);
            branch.contact_order = d;
            branch.diagnostics = r == 1 ? SurfaceDiag::Regular : SurfaceDiag::Sheet;
            return branch;
        }
    }
    branch.diagnostics = SurfaceDiag::DegeneratePlane;
    branch.contact_order = max_order;
    return branch;
}

SurfaceBranch analyze_float(const CPoly& shifted, unsigned r, const TangentPlane& plane, int max_order,
                            const SurfaceFrame& fr) {
    SurfaceBranch branch;
    branch.normal = plane.normal;
    branch.multiplicity = plane.multiplicity;

    std::vector<BiSeries<Complex>> entries;
    for (std::size_t i = 0; i < 3; ++i) {
        BiSeries<Complex> e = BiSeries<Complex>::zero(kJetRing, max_order);
        e.at(1, 0) = CPoly::constant(kJetRing, Complex(fr.u[i], 0));
        e.at(0, 1) = CPoly::constant(kJetRing, Complex(fr.w[i], 0));
        e.at(2, 0) = CPoly::variable(kJetRing, 0, Complex(fr.n[i] / 2, 0));
        e.at(1, 1) = CPoly::variable(kJetRing, 1, Complex(fr.n[i], 0));
        e.at(0, 2) = CPoly::variable(kJetRing, 2, Complex(fr.n[i] / 2, 0));
        entries.push_back(std::move(e));
    }
    BiSeries<Complex> series = compose_biseries(shifted, entries);
    double scale = 1.0;
    for (const auto& c : series.c) scale = std::max(scale, c.max_coeff_abs());
    const double tol = 1e-9 * scale;

    std::vector<CPoly> eqs;
    for (int d = int(r) + 1; d <= max_order; ++d) {
        for (int j = 0; j <= d; ++j) eqs.push_back(series.at(d - j, j).pruned(tol));
        auto sol = solve_accumulated(eqs);
        if (sol.kind == AffineSolution<Complex>::Kind::Inconsistent) {
            branch.diagnostics = SurfaceDiag::CuspSheet;
            branch.contact_order = d;
            return branch;
        }
        if (sol.kind == AffineSolution<Complex>::Kind::Unique) {
            Complex al = sol.particular[0], be = sol.particular[1], ga = sol.particular[2];
            Complex gauss = al * ga - be * be;
            Complex mean = (al + ga) * 0.5;
            branch.curvature_defined = true;
            branch.gauss = gauss.real();
            branch.mean_signed = mean.real();
            branch.mean_abs = std::abs(mean.real());
            branch.contact_order = d;
            branch.diagnostics = r == 1 ? SurfaceDiag::Regular : SurfaceDiag::Sheet;
            return branch;
        }
    }
    branch.diagnostics = SurfaceDiag::DegeneratePlane;
    branch.contact_order = max_order;
    return branch;
}

}  // namespace

SurfaceBranch surface_branch_for_plane(const Poly& f, const std::vector<Rational>& point, const TangentPlane& plane,
                                       int max_order, const std::optional<SurfaceFrame>& frame) {
    Poly shifted = f.shifted(point);
    unsigned r = shifted.min_degree();
    if (max_order <= 0) max_order = int(r) + 10;

    if (!plane.normal.is_real) {
        SurfaceBranch branch;
        branch.normal = plane.normal;
        branch.multiplicity = plane.multiplicity;
        branch.contact_order = int(r) + 1;
        branch.diagnostics = SurfaceDiag::ComplexPlane;
        return branch;
    }
    if (frame) return analyze_float(to_cpoly(shifted), r, plane, max_order, *frame);
    if (plane.normal.exact) return analyze_exact(shifted, r, plane, max_order);

    std::array<double, 3> n{plane.normal.components[0].real(), plane.normal.components[1].real(),
                            plane.normal.components[2].real()};
    double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    for (double& c : n) c /= len;
    return analyze_float(to_cpoly(shifted), r, plane, max_order, float_frame(n));
}

SurfaceAnalysis surface_branch_curvatures(const Poly& f, const std::vector<Rational>& point, int max_order) {
    if (f.arity() != 3) throw Error(ErrorCode::BadInput, "surface curvature needs a trivariate polynomial");
    SurfaceAnalysis out;
    out.multiplicity = multiplicity(f, point);
    for (const TangentPlane& plane : surface_tangent_planes(f, point)) {
        SurfaceBranch branch = surface_branch_for_plane(f, point, plane, max_order);
        if (branch.diagnostics == SurfaceDiag::DegeneratePlane)
            out.warnings.push_back("tangent plane of multiplicity " + std::to_string(plane.multiplicity) +
                                   " stayed underdetermined; no quadratic patch is singled out");
        out.branches.push_back(std::move(branch));
    }
    std::sort(out.branches.begin(), out.branches.end(), [](const SurfaceBranch& a, const SurfaceBranch& b) {
        if (a.normal.is_real != b.normal.is_real) return a.normal.is_real;
        for (std::size_t i = 0; i < 3; ++i) {
            double x = a.normal.components[i].real(), y = b.normal.components[i].real();
            if (std::abs(x - y) > 1e-12) return x < y;
        }
        return a.gauss < b.gauss;
    });
    return out;
}

std::pair<double, double> regular_surface_curvatures_implicit(const Poly& f, const std::vector<Rational>& point) {
    if (f.arity() != 3) throw Error(ErrorCode::BadInput, "implicit surface curvature needs a trivariate polynomial");
    std::array<Rational, 3> g;
    std::array<std::array<Rational, 3>, 3> h;
    for (std::size_t i = 0; i < 3; ++i) {
        Poly di = f.derivative(i);
        g[i] = evaluate_exact(di, point);
        for (std::size_t j = 0; j < 3; ++j) h[i][j] = evaluate_exact(di.derivative(j), point);
    }
    if (g[0] == 0 && g[1] == 0 && g[2] == 0)
        throw Error(ErrorCode::SingularPoint, "gradient vanishes; use the branch-wise computation");

    // adjugate of the symmetric Hessian
    std::array<std::array<Rational, 3>, 3> adj;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            std::size_t i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
            adj[j][i] = h[i1][j1] * h[i2][j2] - h[i1][j2] * h[i2][j1];
        }
    auto quad = [&](const std::array<std::array<Rational, 3>, 3>& M) {
        Rational acc(0);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) acc += g[i] * M[i][j] * g[j];
        return acc;
    };
    Rational g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
    Rational trace = h[0][0] + h[1][1] + h[2][2];
    double kg = to_double(quad(adj) / (g2 * g2));
    double km = to_double(quad(h) - g2 * trace) / (2.0 * std::pow(to_double(g2), 1.5));
    return {kg, km};
}

}  // namespace algcurv
