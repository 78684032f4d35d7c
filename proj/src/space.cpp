#include "algcurv/space.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "algcurv/jets.hpp"
#include "algcurv/numkit.hpp"

namespace algcurv {
namespace {

// jet unknowns: normal acceleration (acc1, acc2) and the full jerk vector in
// the (v, n1, n2) basis
const std::vector<std::string> kJetRing{"acc1", "acc2", "jrk0", "jrk1", "jrk2"};
const std::vector<std::string> kPencilRing{"dp", "dq", "ax", "ay", "az"};

struct NeedsFloat {};  // exact staged solve hit irrational branching

template <class V>
std::array<V, 3> cross(const std::array<V, 3>& a, const std::array<V, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::size_t weakest_axis3(const std::array<double, 3>& n) {
    std::size_t k = 0;
    double best = std::abs(n[0]);
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(n[i]) < best - 1e-15) {
            best = std::abs(n[i]);
            k = i;
        }
    return k;
}

// ---------------------------------------------------------------------------
// staged jet solver
// ---------------------------------------------------------------------------

template <class K>
struct StageContext {
    std::vector<PolyT<K>> C, D;  // coefficient of t^i at index i
    int max_order = 10;
    double tol = 0.0;  // 0 means exact arithmetic
};

template <class K>
struct StageOutcome {
    bool cusp = false;              // contradiction before the acceleration was pinned
    bool exhausted = false;         // acceleration never pinned
    bool complex_data = false;      // acceleration pinned but not real
    bool mu_fixed = false;
    double mu_norm2 = 0.0;          // acc1^2 + acc2^2 |v|^2 as double
    std::optional<Rational> mu_norm2_exact;
    bool det_fixed = false;
    double det = 0.0;
    std::optional<Rational> det_exact;
    bool torsion_warning = false;   // contradiction after the acceleration was pinned
    bool forked = false;
    int mult = 1;
    int contact_order = 0;
};

template <class K>
struct SolverState {
    std::vector<std::pair<std::size_t, PolyT<K>>> defs;
    std::vector<PolyT<K>> pending;
    bool forked = false;
    int mult = 1;
    int contact_order = 0;
};

template <class K>
PolyT<K> reduce(const PolyT<K>& p, const SolverState<K>& st, double tol) {
    PolyT<K> out = p;
    for (const auto& [var, value] : st.defs) out = out.substituted_var(var, value);
    if (tol > 0.0) out = out.pruned(tol);
    return out;
}

template <class K>
class StagedSolver {
  public:
    StagedSolver(const StageContext<K>& ctx, const Rational& norm2_v) : ctx_(ctx), norm2_v_(norm2_v) {
        det_expr_ = PolyT<K>::zero(kJetRing);
        det_expr_ += PolyT<K>::variable(kJetRing, 0) * PolyT<K>::variable(kJetRing, 4);
        det_expr_ -= PolyT<K>::variable(kJetRing, 1) * PolyT<K>::variable(kJetRing, 3);
    }

    std::vector<StageOutcome<K>> run() {
        SolverState<K> init;
        advance(init, 1);
        return std::move(results_);
    }

  private:
    void emit_final(SolverState<K>& st) {
        StageOutcome<K> out;
        out.mult = st.mult;
        out.forked = st.forked;
        out.contact_order = st.contact_order;
        PolyT<K> mu1 = reduce(PolyT<K>::variable(kJetRing, 0), st, ctx_.tol);
        PolyT<K> mu2 = reduce(PolyT<K>::variable(kJetRing, 1), st, ctx_.tol);
        if (!mu1.is_constant() || !mu2.is_constant()) {
            out.exhausted = true;
            results_.push_back(out);
            return;
        }
        out.mu_fixed = true;
        fill_mu(out, mu1.constant_value(), mu2.constant_value());
        PolyT<K> det = reduce(det_expr_, st, ctx_.tol);
        if (det.is_constant()) {
            out.det_fixed = true;
            fill_det(out, det.constant_value());
        }
        results_.push_back(out);
    }

    void emit_contradiction(SolverState<K>& st) {
        PolyT<K> mu1 = reduce(PolyT<K>::variable(kJetRing, 0), st, ctx_.tol);
        PolyT<K> mu2 = reduce(PolyT<K>::variable(kJetRing, 1), st, ctx_.tol);
        StageOutcome<K> out;
        out.mult = st.mult;
        out.forked = st.forked;
        out.contact_order = st.contact_order;
        if (mu1.is_constant() && mu2.is_constant()) {
            out.mu_fixed = true;
            out.torsion_warning = true;
            fill_mu(out, mu1.constant_value(), mu2.constant_value());
        } else {
            out.cusp = true;
        }
        results_.push_back(out);
    }

    void fill_mu(StageOutcome<K>& out, const K& m1, const K& m2) {
        if constexpr (std::is_same_v<K, Rational>) {
            Rational n2 = m1 * m1 + m2 * m2 * norm2_v_;
            out.mu_norm2_exact = n2;
            out.mu_norm2 = to_double(n2);
        } else {
            double tol = std::max(ctx_.tol, 1e-9);
            if (std::abs(m1.imag()) > tol * (1 + std::abs(m1)) || std::abs(m2.imag()) > tol * (1 + std::abs(m2))) {
                out.complex_data = true;
                return;
            }
            out.mu_norm2 = m1.real() * m1.real() + m2.real() * m2.real() * to_double(norm2_v_);
        }
    }

    void fill_det(StageOutcome<K>& out, const K& d) {
        if constexpr (std::is_same_v<K, Rational>) {
            out.det_exact = d;
            out.det = to_double(d);
        } else {
            double tol = std::max(ctx_.tol, 1e-9);
            if (std::abs(d.imag()) > tol * (1 + std::abs(d))) {
                out.complex_data = true;
                return;
            }
            out.det = d.real();
        }
    }

    bool stop_ready(SolverState<K>& st) {
        if (!st.pending.empty()) return false;
        PolyT<K> mu1 = reduce(PolyT<K>::variable(kJetRing, 0), st, ctx_.tol);
        PolyT<K> mu2 = reduce(PolyT<K>::variable(kJetRing, 1), st, ctx_.tol);
        if (!mu1.is_constant() || !mu2.is_constant()) return false;
        PolyT<K> det = reduce(det_expr_, st, ctx_.tol);
        return det.is_constant();
    }

    void advance(SolverState<K> st, int next_order) {
        // exhaust the currently available moves
        while (true) {
            std::vector<PolyT<K>> kept;
            for (PolyT<K>& eq : st.pending) {
                PolyT<K> red = reduce(eq, st, ctx_.tol);
                if (red.is_zero()) continue;
                if (red.is_constant()) {
                    emit_contradiction(st);
                    return;
                }
                kept.push_back(std::move(red));
            }
            st.pending = std::move(kept);

            // batch of equations affine in every remaining unknown
            LinearSystem<K> sys;
            std::vector<std::size_t> vars;
            std::vector<std::size_t> used;
            for (std::size_t e = 0; e < st.pending.size(); ++e) {
                if (st.pending[e].total_degree() > 1) continue;
                used.push_back(e);
                for (std::size_t v : st.pending[e].support())
                    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
            }
            std::sort(vars.begin(), vars.end());
            if (!used.empty()) {
                for (std::size_t v : vars) sys.unknowns.push_back(kJetRing[v]);
                for (std::size_t e : used) {
                    std::vector<K> row(vars.size(), CoeffOps<K>::from_int(0));
                    K rhs = CoeffOps<K>::from_int(0);
                    for (const auto& [m, c] : st.pending[e].terms()) {
                        if (m.total_degree() == 0) {
                            rhs -= c;
                            continue;
                        }
                        for (std::size_t vi = 0; vi < vars.size(); ++vi)
                            if (m.exp[vars[vi]]) row[vi] += c;
                    }
                    sys.rows.push_back(std::move(row));
                    sys.rhs.push_back(rhs);
                }
                auto sol = solve_affine(sys);
                if (sol.kind == AffineSolution<K>::Kind::Inconsistent) {
                    emit_contradiction(st);
                    return;
                }
                // define every pivot unknown as an affine polynomial in the frees
                std::vector<bool> is_free(vars.size(), false);
                for (std::size_t fi : sol.free_indices) is_free[fi] = true;
                bool progressed = false;
                for (std::size_t vi = 0; vi < vars.size(); ++vi) {
                    if (is_free[vi]) continue;
                    PolyT<K> value = PolyT<K>::constant(kJetRing, sol.particular[vi]);
                    for (std::size_t fj = 0; fj < sol.free_indices.size(); ++fj) {
                        const K& coeff = sol.free_coeffs[vi][fj];
                        if (CoeffOps<K>::is_zero(coeff)) continue;
                        value += PolyT<K>::variable(kJetRing, vars[sol.free_indices[fj]], coeff);
                    }
                    st.defs.emplace_back(vars[vi], std::move(value));
                    progressed = true;
                }
                // the affine equations are now satisfied identically
                std::vector<PolyT<K>> rest;
                for (std::size_t e = 0; e < st.pending.size(); ++e)
                    if (std::find(used.begin(), used.end(), e) == used.end()) rest.push_back(st.pending[e]);
                st.pending = std::move(rest);
                if (progressed) continue;
            }

            // a single equation in a single unknown of degree >= 2 forks the branch
            std::size_t forkable = st.pending.size();
            for (std::size_t e = 0; e < st.pending.size(); ++e) {
                if (st.pending[e].support().size() == 1 && st.pending[e].total_degree() >= 2) {
                    forkable = e;
                    break;
                }
            }
            if (forkable < st.pending.size()) {
                PolyT<K> eq = st.pending[forkable];
                st.pending.erase(st.pending.begin() + long(forkable));
                std::size_t var = eq.support()[0];
                std::vector<RootCluster> roots;
                if constexpr (std::is_same_v<K, Rational>) {
                    roots = roots_exact_first(eq.univariate_in(var));
                    for (const RootCluster& r : roots)
                        if (!r.exact) throw NeedsFloat{};
                } else {
                    UniPoly up;
                    up.coeffs = eq.univariate_in(var);
                    roots = roots_all(up);
                }
                for (const RootCluster& root : roots) {
                    SolverState<K> fork = st;
                    K value;
                    if constexpr (std::is_same_v<K, Rational>) value = root.exact_value;
                    else value = root.z;
                    fork.defs.emplace_back(var, PolyT<K>::constant(kJetRing, value));
                    fork.forked = true;
                    fork.mult = st.mult * root.multiplicity;
                    advance(std::move(fork), next_order);
                }
                return;
            }
            break;  // no move available
        }

        if (stop_ready(st) || next_order > ctx_.max_order) {
            emit_final(st);
            return;
        }
        PolyT<K> c = reduce(ctx_.C[std::size_t(next_order)], st, ctx_.tol);
        PolyT<K> d = reduce(ctx_.D[std::size_t(next_order)], st, ctx_.tol);
        if (!c.is_zero()) st.pending.push_back(std::move(c));
        if (!d.is_zero()) st.pending.push_back(std::move(d));
        st.contact_order = next_order;
        advance(std::move(st), next_order + 1);
    }

    const StageContext<K>& ctx_;
    Rational norm2_v_;
    PolyT<K> det_expr_;
    std::vector<StageOutcome<K>> results_;
};

template <class K>
TSeries<K> jet_entry(const K& v_i, const K& n1_i, const K& n2_i, int cap) {
    TSeries<K> e = TSeries<K>::zero(kJetRing, cap);
    e.c[1] = PolyT<K>::constant(kJetRing, v_i);
    K half = CoeffOps<K>::from_int(1) / CoeffOps<K>::from_int(2);
    K sixth = CoeffOps<K>::from_int(1) / CoeffOps<K>::from_int(6);
    e.c[2] = PolyT<K>::variable(kJetRing, 0, n1_i * half) + PolyT<K>::variable(kJetRing, 1, n2_i * half);
    e.c[3] = PolyT<K>::variable(kJetRing, 2, v_i * sixth) + PolyT<K>::variable(kJetRing, 3, n1_i * sixth) +
             PolyT<K>::variable(kJetRing, 4, n2_i * sixth);
    return e;
}

// ---------------------------------------------------------------------------
// pencil refinement for coincident tangent planes
// ---------------------------------------------------------------------------

std::vector<Rational> uni_mod(std::vector<Rational> a, const std::vector<Rational>& b) {
    while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
        Rational f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        while (a.size() > 1 && a.back() == 0) a.pop_back();
        if (a.size() < b.size()) break;
    }
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    return a;
}

std::vector<Rational> uni_gcd(std::vector<Rational> a, std::vector<Rational> b) {
    auto trim = [](std::vector<Rational>& p) {
        while (p.size() > 1 && p.back() == 0) p.pop_back();
    };
    trim(a);
    trim(b);
    if (a.size() == 1 && a[0] == 0) std::swap(a, b);
    while (!(b.size() == 1 && b[0] == 0)) {
        std::vector<Rational> r = uni_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!(a.size() == 1 && a[0] == 0)) {
        Rational lead = a.back();
        for (Rational& c : a) c /= lead;
    }
    return a;
}

struct BinaryForm {
    // coefficient of dp^(deg-j) dq^j at index j
    std::vector<Rational> coeff;
    int degree() const { return int(coeff.size()) - 1; }
};

BinaryForm binary_from_poly(const Poly& p, std::size_t dq_index) {
    BinaryForm f;
    int deg = p.total_degree();
    f.coeff.assign(std::size_t(deg) + 1, Rational(0));
    for (const auto& [m, c] : p.terms()) f.coeff[m.exp[dq_index]] += c;
    return f;
}

struct PencilResult {
    std::vector<ProjDirection> directions;
};

PencilResult pencil_exact(const Poly& fsh, unsigned rf, const Poly& gsh, unsigned rg,
                          const std::vector<Rational>& normal, int pair_mult) {
    std::array<double, 3> nf{to_double(normal[0]), to_double(normal[1]), to_double(normal[2])};
    double len = std::sqrt(nf[0] * nf[0] + nf[1] * nf[1] + nf[2] * nf[2]);
    std::size_t k = weakest_axis3({nf[0] / len, nf[1] / len, nf[2] / len});
    std::array<Rational, 3> n3{normal[0], normal[1], normal[2]};
    std::array<Rational, 3> ek{Rational(0), Rational(0), Rational(0)};
    ek[k] = 1;
    auto ea = cross<Rational>(n3, ek);
    auto eb = cross<Rational>(n3, ea);

    int cap = int(std::max(rf, rg)) + 1;
    std::vector<TSeries<Rational>> entries;
    for (std::size_t i = 0; i < 3; ++i) {
        TSeries<Rational> e = TSeries<Rational>::zero(kPencilRing, cap);
        e.c[1] = Poly::variable(kPencilRing, 0, ea[i]) + Poly::variable(kPencilRing, 1, eb[i]);
        e.c[2] = Poly::variable(kPencilRing, 2 + i, Rational(1, 2));
        entries.push_back(std::move(e));
    }
    Poly eqf = compose_series(fsh, entries).c[rf + 1];
    Poly eqg = compose_series(gsh, entries).c[rg + 1];

    // rows of the affine system in the second-order block
    auto split = [&](const Poly& eq, std::array<Poly, 3>& row, Poly& rhs) {
        row = {Poly::zero(kPencilRing), Poly::zero(kPencilRing), Poly::zero(kPencilRing)};
        rhs = Poly::zero(kPencilRing);
        for (const auto& [m, c] : eq.terms()) {
            int acount = int(m.exp[2] + m.exp[3] + m.exp[4]);
            if (acount == 0) {
                Poly t(kPencilRing);
                t.add_term(m, -c);
                rhs += t;
                continue;
            }
            if (acount > 1) throw Error(ErrorCode::PencilUnresolved, "next-order equations are not affine");
            for (std::size_t j = 0; j < 3; ++j) {
                if (m.exp[2 + j]) {
                    Monomial rest = m;
                    rest.exp[2 + j] = 0;
                    Poly t(kPencilRing);
                    t.add_term(rest, c);
                    row[j] += t;
                }
            }
        }
    };
    std::array<Poly, 3> rowf, rowg;
    Poly rhsf(kPencilRing), rhsg(kPencilRing);
    split(eqf, rowf, rhsf);
    split(eqg, rowg, rhsg);

    // generic rank of the 2x3 coefficient matrix over sample directions
    int rank = 0;
    const std::array<std::array<int, 2>, 6> samples{{{1, 1}, {1, 2}, {2, 1}, {1, -1}, {3, 2}, {2, -3}}};
    for (const auto& s : samples) {
        std::vector<Rational> at{Rational(s[0]), Rational(s[1]), Rational(0), Rational(0), Rational(0)};
        std::array<Rational, 3> a0, a1;
        for (std::size_t j = 0; j < 3; ++j) {
            a0[j] = evaluate_exact(rowf[j], at);
            a1[j] = evaluate_exact(rowg[j], at);
        }
        bool any = false, full = false;
        for (std::size_t j = 0; j < 3; ++j) {
            if (a0[j] != 0 || a1[j] != 0) any = true;
            for (std::size_t l = j + 1; l < 3; ++l)
                if (a0[j] * a1[l] - a0[l] * a1[j] != 0) full = true;
        }
        rank = std::max(rank, full ? 2 : (any ? 1 : 0));
    }
    if (rank != 1)
        throw Error(ErrorCode::PencilUnresolved,
                    "shared tangent plane: the next-order system has generic rank " + std::to_string(rank));

    std::vector<BinaryForm> minors;
    for (std::size_t j = 0; j < 3; ++j) {
        Poly m = rowf[j] * rhsg - rowg[j] * rhsf;
        if (m.is_zero()) continue;
        for (std::size_t vi : m.support())
            if (vi >= 2) throw Error(ErrorCode::PencilUnresolved, "solvability minors involve jet unknowns");
        minors.push_back(binary_from_poly(m, 1));
    }
    if (minors.empty()) throw Error(ErrorCode::PencilUnresolved, "every in-plane direction is solvable");

    // strip shared monomial parts, then gcd the dehomogenized cores
    int strip_dq = 1 << 20, strip_dp = 1 << 20;
    std::vector<std::vector<Rational>> cores;
    for (const BinaryForm& f : minors) {
        int lo = 0;
        while (f.coeff[std::size_t(lo)] == 0) ++lo;
        int hi = f.degree();
        while (f.coeff[std::size_t(hi)] == 0) --hi;
        strip_dq = std::min(strip_dq, lo);
        strip_dp = std::min(strip_dp, f.degree() - hi);
        cores.push_back(std::vector<Rational>(f.coeff.begin() + lo, f.coeff.begin() + hi + 1));
    }
    std::vector<Rational> core = cores[0];
    for (std::size_t i = 1; i < cores.size(); ++i) core = uni_gcd(core, cores[i]);

    PencilResult out;
    auto dir_from_pq = [&](const Rational& p, const Rational& q, int mult) {
        std::vector<Rational> v{p * ea[0] + q * eb[0], p * ea[1] + q * eb[1], p * ea[2] + q * eb[2]};
        out.directions.push_back(direction_from_exact(v, mult * pair_mult));
    };
    if (strip_dq > 0) dir_from_pq(Rational(1), Rational(0), strip_dq);  // dq-factor: direction ea
    if (strip_dp > 0) dir_from_pq(Rational(0), Rational(1), strip_dp);  // dp-factor: direction eb
    if (core.size() >= 2) {
        for (const RootCluster& root : roots_exact_first(core)) {
            if (root.exact) {
                dir_from_pq(Rational(1), root.exact_value, root.multiplicity);
            } else {
                std::vector<Complex> v(3);
                for (std::size_t i = 0; i < 3; ++i)
                    v[i] = to_complex(ea[i]) + root.z * to_complex(eb[i]);
                bool real = std::abs(root.z.imag()) <= 1e-9 * std::max(1.0, std::abs(root.z));
                out.directions.push_back(
                    direction_from_complex(v, root.multiplicity * pair_mult, real));
            }
        }
    } else if (core.size() == 1 && core[0] != 0 && strip_dp == 0 && strip_dq == 0) {
        // constant solvability form: no direction admits a consistent jet
    }
    return out;
}

// ---------------------------------------------------------------------------

void accumulate_direction(std::vector<ProjDirection>& all, const ProjDirection& d) {
    for (ProjDirection& seen : all) {
        if (same_direction(seen, d)) {
            seen.multiplicity += d.multiplicity;
            return;
        }
    }
    all.push_back(d);
}

}  // namespace

std::vector<ProjDirection> space_tangents(const Poly& f, const Poly& g, const std::vector<Rational>& point) {
    if (f.arity() != 3 || g.arity() != 3)
        throw Error(ErrorCode::BadInput, "space curves need two trivariate polynomials");
    auto planes_f = surface_tangent_planes(f, point);
    auto planes_g = surface_tangent_planes(g, point);
    Poly fsh = f.shifted(point), gsh = g.shifted(point);
    unsigned rf = fsh.min_degree(), rg = gsh.min_degree();

    std::vector<ProjDirection> out;
    for (const TangentPlane& pf : planes_f) {
        for (const TangentPlane& pg : planes_g) {
            int pair_mult = pf.multiplicity * pg.multiplicity;
            if (pf.normal.exact && pg.normal.exact) {
                std::array<Rational, 3> a{(*pf.normal.exact)[0], (*pf.normal.exact)[1], (*pf.normal.exact)[2]};
                std::array<Rational, 3> b{(*pg.normal.exact)[0], (*pg.normal.exact)[1], (*pg.normal.exact)[2]};
                auto c = cross<Rational>(a, b);
                if (c[0] == 0 && c[1] == 0 && c[2] == 0) {
                    for (const ProjDirection& d : pencil_exact(fsh, rf, gsh, rg, *pf.normal.exact, pair_mult).directions)
                        accumulate_direction(out, d);
                } else {
                    accumulate_direction(out, direction_from_exact({c[0], c[1], c[2]}, pair_mult));
                }
            } else {
                std::array<Complex, 3> a{pf.normal.components[0], pf.normal.components[1], pf.normal.components[2]};
                std::array<Complex, 3> b{pg.normal.components[0], pg.normal.components[1], pg.normal.components[2]};
                auto c = cross<Complex>(a, b);
                double cn = std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]);
                double scale = 0.0;
                for (std::size_t i = 0; i < 3; ++i) scale = std::max(scale, std::abs(a[i]) + std::abs(b[i]));
                if (cn <= 1e-10 * scale * scale)
                    throw Error(ErrorCode::PencilUnresolved,
                                "coincident tangent planes with non-rational normals are not supported");
                bool real = true;
                for (const Complex& x : c)
                    if (std::abs(x.imag()) > 1e-9 * cn) real = false;
                accumulate_direction(out, direction_from_complex({c[0], c[1], c[2]}, pair_mult, real));
            }
        }
    }
    return out;
}

namespace {

struct TangentFrameExact {
    std::array<Rational, 3> v, n1, n2;
    Rational norm2_v, norm2_n1;
};

TangentFrameExact exact_tangent_frame(const std::vector<Rational>& rep) {
    std::array<Rational, 3> v{rep[0], rep[1], rep[2]};
    std::array<double, 3> vf{to_double(rep[0]), to_double(rep[1]), to_double(rep[2])};
    double len = std::sqrt(vf[0] * vf[0] + vf[1] * vf[1] + vf[2] * vf[2]);
    std::size_t k = weakest_axis3({vf[0] / len, vf[1] / len, vf[2] / len});
    std::array<Rational, 3> ek{Rational(0), Rational(0), Rational(0)};
    ek[k] = 1;
    TangentFrameExact fr;
    fr.v = v;
    fr.n1 = cross<Rational>(v, ek);
    fr.n2 = cross<Rational>(v, fr.n1);
    fr.norm2_v = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    fr.norm2_n1 = fr.n1[0] * fr.n1[0] + fr.n1[1] * fr.n1[1] + fr.n1[2] * fr.n1[2];
    return fr;
}

void finalize_branch(const ProjDirection& dir, const StageOutcome<Rational>& res, const Rational& norm2_v,
                     const Rational& norm2_n1, unsigned point_mult, SpaceAnalysis& out) {
    SpaceBranch b;
    b.tangent = dir;
    b.multiplicity = res.forked ? res.mult : dir.multiplicity;
    b.contact_order = res.contact_order;
    if (res.cusp) {
        b.curvature = CurvatureValue::infinite();
        b.torsion = TorsionValue::undetermined();
        b.diagnostics = SpaceDiag::Cusp;
        out.branches.push_back(b);
        return;
    }
    if (res.exhausted) throw Error(ErrorCode::OrderExhausted, "jet coefficients stayed free through max_order");

    Rational mu2 = *res.mu_norm2_exact;
    Rational k2 = norm2_n1 * mu2 / (norm2_v * norm2_v);
    auto k_exact = rational_sqrt(k2);
    if (k_exact)
        b.curvature = CurvatureValue::of_exact(*k_exact);
    else
        b.curvature = CurvatureValue::of(std::sqrt(to_double(k2)));
    b.diagnostics = point_mult == 1 ? SpaceDiag::Regular : SpaceDiag::Node;
    if (res.torsion_warning || !res.det_fixed) {
        b.torsion = TorsionValue::undetermined();
        if (res.torsion_warning)
            out.warnings.push_back("jet equations became inconsistent after the curvature was fixed");
    } else if (mu2 == 0) {
        b.torsion = *res.det_exact == 0 ? TorsionValue::of_exact(Rational(0)) : TorsionValue::undetermined();
    } else {
        b.torsion = TorsionValue::of_exact(*res.det_exact / mu2);
    }
    out.branches.push_back(b);
}

void finalize_branch_float(const ProjDirection& dir, const StageOutcome<Complex>& res, double norm2_v,
                           double norm2_n1, unsigned point_mult, SpaceAnalysis& out) {
    SpaceBranch b;
    b.tangent = dir;
    b.multiplicity = res.forked ? res.mult : dir.multiplicity;
    b.contact_order = res.contact_order;
    if (res.cusp) {
        b.curvature = CurvatureValue::infinite();
        b.torsion = TorsionValue::undetermined();
        b.diagnostics = SpaceDiag::Cusp;
        out.branches.push_back(b);
        return;
    }
    if (res.exhausted) throw Error(ErrorCode::OrderExhausted, "jet coefficients stayed free through max_order");
    if (res.complex_data) {
        b.curvature = CurvatureValue::infinite();
        b.torsion = TorsionValue::undetermined();
        b.diagnostics = SpaceDiag::ComplexTangent;
        out.branches.push_back(b);
        return;
    }
    double k2 = norm2_n1 * res.mu_norm2 / (norm2_v * norm2_v);
    b.curvature = CurvatureValue::of(std::sqrt(std::max(k2, 0.0)));
    b.diagnostics = point_mult == 1 ? SpaceDiag::Regular : SpaceDiag::Node;
    if (res.torsion_warning || !res.det_fixed) {
        b.torsion = TorsionValue::undetermined();
        if (res.torsion_warning)
            out.warnings.push_back("jet equations became inconsistent after the curvature was fixed");
    } else if (res.mu_norm2 <= 1e-18) {
        b.torsion = std::abs(res.det) <= 1e-12 ? TorsionValue::of(0.0) : TorsionValue::undetermined();
    } else {
        b.torsion = TorsionValue::of(res.det / res.mu_norm2);
    }
    out.branches.push_back(b);
}

bool merge_key_equal(const SpaceBranch& a, const SpaceBranch& b) {
    if (!same_direction(a.tangent, b.tangent, 1e-9)) return false;
    if (a.curvature.finite != b.curvature.finite) return false;
    if (a.curvature.finite && std::abs(a.curvature.value - b.curvature.value) > 1e-12 * (1 + a.curvature.value))
        return false;
    if (a.torsion.defined != b.torsion.defined) return false;
    if (a.torsion.defined && std::abs(a.torsion.value - b.torsion.value) > 1e-12 * (1 + std::abs(a.torsion.value)))
        return false;
    return a.diagnostics == b.diagnostics;
}

}  // namespace

namespace {

void analyze_tangent(const Poly& fsh, const Poly& gsh, const CPoly& fshc, const CPoly& gshc,
                 const ProjDirection& dir, int max_order, unsigned point_mult, SpaceAnalysis& out) {
    if (!dir.is_real) {
        SpaceBranch b;
        b.tangent = dir;
        b.multiplicity = dir.multiplicity;
        b.curvature = CurvatureValue::infinite();
        b.torsion = TorsionValue::undetermined();
        b.diagnostics = SpaceDiag::ComplexTangent;
        out.branches.push_back(b);
        return;
    }

    bool done = false;
    if (dir.exact) {
        TangentFrameExact fr = exact_tangent_frame(*dir.exact);
        StageContext<Rational> ctx;
        ctx.max_order = max_order;
        ctx.tol = 0.0;
        std::vector<TSeries<Rational>> ef;
        for (std::size_t i = 0; i < 3; ++i)
            ef.push_back(jet_entry<Rational>(fr.v[i], fr.n1[i], fr.n2[i], max_order));
        ctx.C = compose_series(fsh, ef).c;
        ctx.D = compose_series(gsh, ef).c;
        try {
            StagedSolver<Rational> solver(ctx, fr.norm2_v);
            for (const auto& res : solver.run())
                finalize_branch(dir, res, fr.norm2_v, fr.norm2_n1, point_mult, out);
            done = true;
        } catch (const NeedsFloat&) {
            done = false;  // retry below in float arithmetic
        }
    }
    if (!done) {
        // unit float tangent; the frame is built the same way in doubles
        std::array<Complex, 3> v{dir.components[0], dir.components[1], dir.components[2]};
        std::array<double, 3> vf{v[0].real(), v[1].real(), v[2].real()};
        std::size_t k = weakest_axis3(vf);
        std::array<Complex, 3> ek{Complex(0, 0), Complex(0, 0), Complex(0, 0)};
        ek[k] = Complex(1, 0);
        auto n1 = cross<Complex>(v, ek);
        auto n2 = cross<Complex>(v, n1);
        double norm2_v = 0.0, norm2_n1 = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            norm2_v += v[i].real() * v[i].real();
            norm2_n1 += n1[i].real() * n1[i].real();
        }
        StageContext<Complex> ctx;
        ctx.max_order = max_order;
        std::vector<TSeries<Complex>> ef;
        for (std::size_t i = 0; i < 3; ++i) ef.push_back(jet_entry<Complex>(v[i], n1[i], n2[i], max_order));
        auto cs = compose_series(fshc, ef);
        auto ds = compose_series(gshc, ef);
        double scale = 1.0;
        for (const auto& c : cs.c) scale = std::max(scale, c.max_coeff_abs());
        for (const auto& c : ds.c) scale = std::max(scale, c.max_coeff_abs());
        ctx.tol = 1e-9 * scale;
        ctx.C = cs.c;
        ctx.D = ds.c;
        // real float tangents are unit-normalized, so |v|^2 = 1 inside the solver
        StagedSolver<Complex> solver(ctx, Rational(1));
        for (const auto& res : solver.run())
            finalize_branch_float(dir, res, norm2_v, norm2_n1, point_mult, out);
    }
}

void merge_and_sort(SpaceAnalysis& out);

}  // namespace

SpaceAnalysis space_branch_frenet(const Poly& f, const Poly& g, const std::vector<Rational>& point, int max_order) {
    if (max_order < 4) throw Error(ErrorCode::BadInput, "max_order must be at least 4");
    SpaceAnalysis out;
    auto tangents = space_tangents(f, g, point);
    Poly fsh = f.shifted(point), gsh = g.shifted(point);
    unsigned point_mult = 0;
    for (const auto& d : tangents) point_mult += unsigned(d.multiplicity);
    out.multiplicity = int(point_mult);

    CPoly fshc = to_cpoly(fsh), gshc = to_cpoly(gsh);
    for (const ProjDirection& dir : tangents) analyze_tangent(fsh, gsh, fshc, gshc, dir, max_order, point_mult, out);
    merge_and_sort(out);
    return out;
}

SpaceAnalysis space_branches_for_tangent(const Poly& f, const Poly& g, const std::vector<Rational>& point,
                                         const ProjDirection& tangent, int max_order) {
    SpaceAnalysis out;
    Poly fsh = f.shifted(point), gsh = g.shifted(point);
    out.multiplicity = tangent.multiplicity;
    analyze_tangent(fsh, gsh, to_cpoly(fsh), to_cpoly(gsh), tangent, max_order, 2, out);
    merge_and_sort(out);
    return out;
}

namespace {

void merge_and_sort(SpaceAnalysis& out) {
    // merge branches that agree on tangent, curvature and torsion
    std::vector<SpaceBranch> merged;
    for (const SpaceBranch& b : out.branches) {
        bool found = false;
        for (SpaceBranch& m : merged)
            if (merge_key_equal(m, b)) {
                m.multiplicity += b.multiplicity;
                found = true;
                break;
            }
        if (!found) merged.push_back(b);
    }
    out.branches = std::move(merged);
    std::sort(out.branches.begin(), out.branches.end(), [](const SpaceBranch& a, const SpaceBranch& b) {
        if (a.tangent.is_real != b.tangent.is_real) return a.tangent.is_real;
        for (std::size_t i = 0; i < 3; ++i) {
            double x = a.tangent.components[i].real(), y = b.tangent.components[i].real();
            if (std::abs(x - y) > 1e-12) return x < y;
        }
        return a.curvature.value < b.curvature.value;
    });
}

}  // namespace

SpaceFrenet regular_space_frenet_implicit(const Poly& f, const Poly& g, const std::vector<Rational>& point) {
    if (f.arity() != 3 || g.arity() != 3)
        throw Error(ErrorCode::BadInput, "space curves need two trivariate polynomials");
    // W = grad F x grad G as a polynomial vector field
    std::array<Poly, 3> gf{f.derivative(0), f.derivative(1), f.derivative(2)};
    std::array<Poly, 3> gg{g.derivative(0), g.derivative(1), g.derivative(2)};
    std::array<Poly, 3> w{gf[1] * gg[2] - gf[2] * gg[1], gf[2] * gg[0] - gf[0] * gg[2],
                          gf[0] * gg[1] - gf[1] * gg[0]};

    std::array<Rational, 3> t1;
    for (std::size_t j = 0; j < 3; ++j) t1[j] = evaluate_exact(w[j], point);
    if (t1[0] == 0 && t1[1] == 0 && t1[2] == 0)
        throw Error(ErrorCode::SingularPoint, "grad F x grad G vanishes; use the branch-wise computation");

    std::array<std::array<Rational, 3>, 3> jac;  // jac[i][j] = d w_j / d x_i
    std::array<std::array<std::array<Rational, 3>, 3>, 3> hess;
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < 3; ++i) {
            Poly di = w[j].derivative(i);
            jac[i][j] = evaluate_exact(di, point);
            for (std::size_t l = 0; l < 3; ++l) hess[i][l][j] = evaluate_exact(di.derivative(l), point);
        }
    }
    std::array<Rational, 3> t2{Rational(0), Rational(0), Rational(0)};
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) t2[j] += t1[i] * jac[i][j];
    std::array<Rational, 3> t3{Rational(0), Rational(0), Rational(0)};
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t l = 0; l < 3; ++l) t3[j] += t1[i] * t1[l] * hess[i][l][j];
            t3[j] += t2[i] * jac[i][j];
        }
    }

    auto crossr = [](const std::array<Rational, 3>& a, const std::array<Rational, 3>& b) {
        return std::array<Rational, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                       a[0] * b[1] - a[1] * b[0]};
    };
    auto norm2 = [](const std::array<Rational, 3>& a) { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2]; };
    auto c12 = crossr(t1, t2);
    Rational c12n2 = norm2(c12);
    SpaceFrenet out;
    out.curvature = std::sqrt(to_double(c12n2)) / std::pow(to_double(norm2(t1)), 1.5);
    if (c12n2 != 0) {
        Rational det = c12[0] * t3[0] + c12[1] * t3[1] + c12[2] * t3[2];
        out.torsion_defined = true;
        out.torsion = to_double(det / c12n2);
    }
    return out;
}

}  // namespace algcurv
