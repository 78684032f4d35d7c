#include "algcurv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "algcurv/error.hpp"

namespace algcurv {
namespace {

constexpr double kConeCos = 0.86602540378443864676;  // cos 30 deg
constexpr double kAcceptFactor = 1e-10;

struct Field2 {
    CPoly f, fx, fy;
    double scale = 1.0;

    explicit Field2(const CPoly& poly) : f(poly), fx(poly.derivative(0)), fy(poly.derivative(1)) {
        double s = 0.0;
        for (const auto& [m, c] : poly.terms()) s += std::abs(c);
        scale = 1.0 + s;
    }
    double eval(double x, double y) const { return f.evaluate({Complex(x, 0), Complex(y, 0)}).real(); }
    double dx(double x, double y) const { return fx.evaluate({Complex(x, 0), Complex(y, 0)}).real(); }
    double dy(double x, double y) const { return fy.evaluate({Complex(x, 0), Complex(y, 0)}).real(); }
};

/// One-dimensional damped Newton in the angle along the circle |x - P| = h.
/// Converges to machine level when it converges at all; returns the final |F|.
bool newton_on_circle(const Field2& field, double px, double py, double h, double& theta) {
    double g = field.eval(px + h * std::cos(theta), py + h * std::sin(theta));
    for (int iter = 0; iter < 120; ++iter) {
        if (g == 0.0) return true;
        double c = std::cos(theta), s = std::sin(theta);
        double gp = h * (-s * field.dx(px + h * c, py + h * s) + c * field.dy(px + h * c, py + h * s));
        if (std::abs(gp) < 1e-300) {
            theta += 1e-3;
            g = field.eval(px + h * std::cos(theta), py + h * std::sin(theta));
            continue;
        }
        double step = g / gp;
        step = std::clamp(step, -0.5, 0.5);
        double lam = 1.0;
        double gn = g;
        double tn = theta;
        bool improved = false;
        for (int k = 0; k < 30; ++k) {
            tn = theta - lam * step;
            gn = field.eval(px + h * std::cos(tn), py + h * std::sin(tn));
            if (std::abs(gn) < std::abs(g)) {
                improved = true;
                break;
            }
            lam *= 0.5;
        }
        if (!improved) break;
        theta = tn;
        g = gn;
    }
    return std::abs(g) <= kAcceptFactor * field.scale;
}

std::vector<TraceSample> trace_plane_core(const Field2& field, double px, double py,
                                          const std::array<double, 2>& direction, double h0, int steps) {
    double dn = std::hypot(direction[0], direction[1]);
    if (dn == 0.0) throw Error(ErrorCode::BadInput, "zero trace direction");
    double theta_dir = std::atan2(direction[1] / dn, direction[0] / dn);

    std::vector<TraceSample> out;
    double theta = theta_dir;
    int early_hits = 0;
    for (int j = 0; j < steps; ++j) {
        double h = h0 * std::pow(0.5, j);
        double th = out.empty() ? theta_dir : theta;
        bool ok = newton_on_circle(field, px, py, h, th);
        if (ok) {
            double dcos = std::cos(th) * std::cos(theta_dir) + std::sin(th) * std::sin(theta_dir);
            if (dcos >= kConeCos) {
                TraceSample s;
                s.x = {px + h * std::cos(th), py + h * std::sin(th)};
                s.h = h;
                s.residual = std::abs(field.eval(s.x[0], s.x[1]));
                out.push_back(std::move(s));
                theta = th;
                if (j <= 2) ++early_hits;
            }
        }
    }
    if (early_hits == 0)
        throw Error(ErrorCode::NoBranch, "no point of the curve found near the base point in that direction");
    return out;
}

double menger(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
    double abx = b[0] - a[0], aby = b[1] - a[1];
    double acx = c[0] - a[0], acy = c[1] - a[1];
    double cross = abx * acy - aby * acx;
    double lab = std::hypot(abx, aby);
    double lac = std::hypot(acx, acy);
    double lbc = std::hypot(c[0] - b[0], c[1] - b[1]);
    if (lab == 0 || lac == 0 || lbc == 0) return 0.0;
    return 2.0 * std::abs(cross) / (lab * lac * lbc);
}

std::vector<double> as_double(const std::vector<Rational>& p) {
    std::vector<double> out;
    for (const Rational& c : p) out.push_back(to_double(c));
    return out;
}

}  // namespace

std::vector<TraceSample> trace_plane_branch(const Poly& f, const std::vector<Rational>& point,
                                            const std::array<double, 2>& direction, double h0, int steps) {
    if (f.arity() != 2) throw Error(ErrorCode::BadInput, "plane tracing needs a bivariate polynomial");
    Field2 field(to_cpoly(f));
    auto p = as_double(point);
    return trace_plane_core(field, p[0], p[1], direction, h0, steps);
}

namespace {

std::vector<BranchTrace> trace_fan_core(const Field2& field, double px, double py,
                                        const std::array<double, 2>& direction, double h0, int steps) {
    std::array<double, 2> p{px, py};
    double dn = std::hypot(direction[0], direction[1]);
    double theta_dir = std::atan2(direction[1] / dn, direction[0] / dn);

    struct Hit {
        double h, theta, rate;
    };
    std::vector<Hit> hits;
    for (int j = 0; j < steps; ++j) {
        double h = h0 * std::pow(0.5, j);
        std::vector<double> roots;
        for (int o = -10; o <= 10; ++o) {
            double th = theta_dir + 0.05 * double(o);
            if (!newton_on_circle(field, p[0], p[1], h, th)) continue;
            double dcos = std::cos(th - theta_dir);
            if (dcos < kConeCos) continue;
            bool dup = false;
            for (double seen : roots)
                if (std::abs(seen - th) < 1e-8) dup = true;
            if (!dup) roots.push_back(th);
        }
        for (double th : roots) {
            double delta = std::remainder(th - theta_dir, 2 * M_PI);
            hits.push_back({h, th, delta / h});
        }
    }
    if (hits.empty()) throw Error(ErrorCode::NoBranch, "no point of the curve found near the base point");

    // group hits by the angular offset rate; per branch that rate approaches a
    // constant proportional to its curvature component
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.rate < b.rate; });
    std::vector<std::vector<Hit>> groups{{hits[0]}};
    for (std::size_t i = 1; i < hits.size(); ++i) {
        double prev = groups.back().back().rate;
        double gap = std::abs(hits[i].rate - prev);
        if (gap > 0.2 * std::max({1.0, std::abs(prev), std::abs(hits[i].rate)}) && gap > 0.05)
            groups.push_back({});
        groups.back().push_back(hits[i]);
    }

    std::vector<BranchTrace> out;
    for (const auto& g : groups) {
        BranchTrace tr;
        double last_h = -1.0;
        // hits are rate-sorted; rebuild per-radius order
        std::vector<Hit> sorted = g;
        std::sort(sorted.begin(), sorted.end(), [](const Hit& a, const Hit& b) { return a.h > b.h; });
        for (const Hit& hit : sorted) {
            if (hit.h == last_h) continue;
            last_h = hit.h;
            TraceSample s;
            s.x = {p[0] + hit.h * std::cos(hit.theta), p[1] + hit.h * std::sin(hit.theta)};
            s.h = hit.h;
            s.residual = std::abs(field.eval(s.x[0], s.x[1]));
            tr.samples.push_back(std::move(s));
        }
        if (tr.samples.size() >= 4) out.push_back(std::move(tr));
    }
    if (out.empty()) throw Error(ErrorCode::NoBranch, "traced points never settled into a branch");
    return out;
}

}  // namespace

std::vector<BranchTrace> trace_plane_fan(const Poly& f, const std::vector<Rational>& point,
                                         const std::array<double, 2>& direction, double h0, int steps) {
    if (f.arity() != 2) throw Error(ErrorCode::BadInput, "plane tracing needs a bivariate polynomial");
    Field2 field(to_cpoly(f));
    auto p = as_double(point);
    return trace_fan_core(field, p[0], p[1], direction, h0, steps);
}

double estimate_curvature(const std::vector<TraceSample>& samples, const std::vector<Rational>& point) {
    if (samples.size() < 4) throw Error(ErrorCode::InsufficientSamples, "curvature estimation needs >= 4 samples");
    auto p = as_double(point);
    std::array<double, 2> base{p[0], p[1]};
    std::vector<double> kappa;
    for (std::size_t j = 0; j + 1 < samples.size(); ++j) {
        std::array<double, 2> a{samples[j].x[0], samples[j].x[1]};
        std::array<double, 2> b{samples[j + 1].x[0], samples[j + 1].x[1]};
        kappa.push_back(menger(base, a, b));
    }
    double fine = kappa.back(), coarse = kappa[kappa.size() - 2];
    double extrapolated = 2.0 * fine - coarse;
    if (extrapolated > 1e6 || fine > 1e6) return std::numeric_limits<double>::infinity();
    return extrapolated;
}

namespace {

struct Field3 {
    CPoly f, g;
    std::array<CPoly, 3> df, dg;
    double scale_f = 1.0, scale_g = 1.0;

    Field3(const CPoly& fa, const CPoly& ga) : f(fa), g(ga) {
        for (std::size_t i = 0; i < 3; ++i) {
            df[i] = f.derivative(i);
            dg[i] = g.derivative(i);
        }
        auto weight = [](const CPoly& p) {
            double s = 0.0;
            for (const auto& [m, c] : p.terms()) s += std::abs(c);
            return 1.0 + s;
        };
        scale_f = weight(f);
        scale_g = weight(g);
    }
    double evalf(const std::array<double, 3>& x) const {
        return f.evaluate({Complex(x[0], 0), Complex(x[1], 0), Complex(x[2], 0)}).real();
    }
    double evalg(const std::array<double, 3>& x) const {
        return g.evaluate({Complex(x[0], 0), Complex(x[1], 0), Complex(x[2], 0)}).real();
    }
};

bool solve3(const std::array<std::array<double, 3>, 3>& a, const std::array<double, 3>& b,
            std::array<double, 3>& out) {
    double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                 a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                 a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if (std::abs(det) < 1e-300) return false;
    auto det3 = [&](int col) {
        std::array<std::array<double, 3>, 3> m = a;
        for (int r = 0; r < 3; ++r) m[std::size_t(r)][std::size_t(col)] = b[std::size_t(r)];
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    for (int c = 0; c < 3; ++c) out[std::size_t(c)] = det3(c) / det;
    return true;
}

}  // namespace

std::vector<TraceSample> trace_space_branch(const Poly& f, const Poly& g, const std::vector<Rational>& point,
                                            const std::array<double, 3>& direction, double h0, int steps) {
    if (f.arity() != 3 || g.arity() != 3)
        throw Error(ErrorCode::BadInput, "space tracing needs two trivariate polynomials");
    Field3 field(to_cpoly(f), to_cpoly(g));
    auto p = as_double(point);
    double dn = std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] + direction[2] * direction[2]);
    if (dn == 0.0) throw Error(ErrorCode::BadInput, "zero trace direction");
    std::array<double, 3> d{direction[0] / dn, direction[1] / dn, direction[2] / dn};

    std::vector<TraceSample> out;
    std::array<double, 3> warm = d;
    int early_hits = 0;
    for (int j = 0; j < steps; ++j) {
        double h = h0 * std::pow(0.5, j);
        std::array<double, 3> x{p[0] + h * warm[0], p[1] + h * warm[1], p[2] + h * warm[2]};
        auto residual = [&](const std::array<double, 3>& q) {
            double sph = (std::pow(q[0] - p[0], 2) + std::pow(q[1] - p[1], 2) + std::pow(q[2] - p[2], 2) - h * h) /
                         (2 * h);
            return std::max({std::abs(field.evalf(q)) / field.scale_f, std::abs(field.evalg(q)) / field.scale_g,
                             std::abs(sph) / (1 + h)});
        };
        double res = residual(x);
        bool converged = false;
        for (int iter = 0; iter < 120; ++iter) {
            if (res == 0.0) break;
            std::array<std::array<double, 3>, 3> jac;
            std::array<double, 3> rhs;
            std::vector<Complex> at{Complex(x[0], 0), Complex(x[1], 0), Complex(x[2], 0)};
            for (std::size_t c = 0; c < 3; ++c) {
                jac[0][c] = field.df[c].evaluate(at).real();
                jac[1][c] = field.dg[c].evaluate(at).real();
                jac[2][c] = (x[c] - p[c]) / h;
            }
            rhs[0] = -field.evalf(x);
            rhs[1] = -field.evalg(x);
            rhs[2] = -(std::pow(x[0] - p[0], 2) + std::pow(x[1] - p[1], 2) + std::pow(x[2] - p[2], 2) - h * h) /
                     (2 * h);
            std::array<double, 3> step{};
            if (!solve3(jac, rhs, step)) break;
            double lam = 1.0;
            bool improved = false;
            std::array<double, 3> xn = x;
            double rn = res;
            for (int k = 0; k < 30; ++k) {
                for (std::size_t c = 0; c < 3; ++c) xn[c] = x[c] + lam * step[c];
                rn = residual(xn);
                if (rn < res) {
                    improved = true;
                    break;
                }
                lam *= 0.5;
            }
            if (!improved) break;
            x = xn;
            res = rn;
        }
        converged = std::abs(field.evalf(x)) <= kAcceptFactor * field.scale_f &&
                    std::abs(field.evalg(x)) <= kAcceptFactor * field.scale_g;
        if (converged) {
            double dcos = ((x[0] - p[0]) * d[0] + (x[1] - p[1]) * d[1] + (x[2] - p[2]) * d[2]) / h;
            if (dcos >= kConeCos) {
                TraceSample s;
                s.x = {x[0], x[1], x[2]};
                s.h = h;
                s.residual = std::max(std::abs(field.evalf(x)), std::abs(field.evalg(x)));
                out.push_back(std::move(s));
                for (std::size_t c = 0; c < 3; ++c) warm[c] = (x[c] - p[c]) / h;
                if (j <= 2) ++early_hits;
            }
        }
    }
    if (early_hits == 0)
        throw Error(ErrorCode::NoBranch, "no point of the intersection curve found in that direction");
    return out;
}

std::pair<double, double> estimate_frenet(const std::vector<TraceSample>& samples,
                                          const std::vector<Rational>& point) {
    if (samples.size() < 4) throw Error(ErrorCode::InsufficientSamples, "frenet estimation needs >= 4 samples");
    auto p = as_double(point);

    // five points: the base point plus the four samples nearest to it,
    // ordered outward
    std::vector<std::array<double, 3>> q;
    q.push_back({p[0], p[1], p[2]});
    for (std::size_t i = 0; i < 4; ++i) {
        const TraceSample& s = samples[samples.size() - 1 - i];
        q.push_back({s.x[0], s.x[1], s.x[2]});
    }

    std::array<double, 5> t{};
    for (std::size_t i = 1; i < 5; ++i) {
        double d = 0.0;
        for (std::size_t c = 0; c < 3; ++c) d += std::pow(q[i][c] - q[i - 1][c], 2);
        t[i] = t[i - 1] + std::sqrt(d);
    }
    double tmax = t[4];
    for (double& v : t) v /= tmax;

    // quartic interpolation per coordinate (normalized parameter)
    std::array<std::array<double, 5>, 3> coeff{};
    for (std::size_t c = 0; c < 3; ++c) {
        std::array<std::array<double, 6>, 5> m{};
        for (std::size_t i = 0; i < 5; ++i) {
            double pw = 1.0;
            for (std::size_t j = 0; j < 5; ++j) {
                m[i][j] = pw;
                pw *= t[i];
            }
            m[i][5] = q[i][c];
        }
        for (std::size_t col = 0; col < 5; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < 5; ++r)
                if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
            std::swap(m[col], m[piv]);
            for (std::size_t r = 0; r < 5; ++r) {
                if (r == col || m[col][col] == 0.0) continue;
                double fct = m[r][col] / m[col][col];
                for (std::size_t j = col; j < 6; ++j) m[r][j] -= fct * m[col][j];
            }
        }
        for (std::size_t j = 0; j < 5; ++j) coeff[c][j] = m[j][5] / m[j][j];
    }

    std::array<double, 3> r1, r2, r3;
    for (std::size_t c = 0; c < 3; ++c) {
        r1[c] = coeff[c][1] / tmax;
        r2[c] = 2.0 * coeff[c][2] / (tmax * tmax);
        r3[c] = 6.0 * coeff[c][3] / (tmax * tmax * tmax);
    }
    std::array<double, 3> c12{r1[1] * r2[2] - r1[2] * r2[1], r1[2] * r2[0] - r1[0] * r2[2],
                              r1[0] * r2[1] - r1[1] * r2[0]};
    double c12n2 = c12[0] * c12[0] + c12[1] * c12[1] + c12[2] * c12[2];
    double r1n = std::sqrt(r1[0] * r1[0] + r1[1] * r1[1] + r1[2] * r1[2]);
    double k = std::sqrt(c12n2) / std::pow(r1n, 3.0);
    double tau = 0.0;
    if (c12n2 > 1e-24) {
        double det = c12[0] * r3[0] + c12[1] * r3[1] + c12[2] * r3[2];
        tau = det / c12n2;
    }
    return {k, tau};
}

double normal_section_curvature(const Poly& f, const std::vector<Rational>& point,
                                const std::array<double, 3>& n, const std::array<double, 3>& d, double h0,
                                int steps) {
    if (f.arity() != 3) throw Error(ErrorCode::BadInput, "normal sections need a trivariate polynomial");
    const std::vector<std::string> uv{"u", "w"};
    std::vector<CPoly> map;
    for (std::size_t i = 0; i < 3; ++i) {
        CPoly entry = CPoly::constant(uv, to_complex(point[i]));
        entry += CPoly::variable(uv, 0, Complex(d[i], 0));
        entry += CPoly::variable(uv, 1, Complex(n[i], 0));
        map.push_back(std::move(entry));
    }
    CPoly section = to_cpoly(f).substituted(map);
    Field2 field(section);

    // several sheets may cut the section plane; keep the branch that is
    // genuinely tangent to the in-plane axis (its angle vanishes with h)
    std::vector<BranchTrace> traces;
    try {
        traces = trace_fan_core(field, 0.0, 0.0, {1.0, 0.0}, h0, steps);
    } catch (const Error&) {
        traces = trace_fan_core(field, 0.0, 0.0, {-1.0, 0.0}, h0, steps);
    }
    const std::vector<TraceSample>* chosen = nullptr;
    double best_angle = 1e300;
    for (const auto& tr : traces) {
        const TraceSample& tip = tr.samples.back();
        double angle = std::abs(std::atan2(tip.x[1], std::abs(tip.x[0])));
        if (angle < best_angle) {
            best_angle = angle;
            chosen = &tr.samples;
        }
    }
    if (!chosen) throw Error(ErrorCode::NoBranch, "no section branch tangent to the requested direction");
    const std::vector<TraceSample>& samples = *chosen;
    double k = estimate_curvature(samples, {Rational(0), Rational(0)});
    double num = 0.0, den = 0.0;
    for (const TraceSample& s : samples) {
        num += s.x[1] * s.x[0] * s.x[0];
        den += std::pow(s.x[0], 4.0);
    }
    double sign = (den > 0 && num / den < 0) ? -1.0 : 1.0;
    return sign * k;
}

}  // namespace algcurv
