#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "algcurv/poly.hpp"
#include "algcurv/rational.hpp"

namespace algcurv {

/// Univariate polynomial with complex coefficients, ascending degree.
struct UniPoly {
    std::vector<Complex> coeffs;
    int degree() const { return int(coeffs.size()) - 1; }
};

struct RootCluster {
    Complex z;
    int multiplicity = 1;
    bool exact = false;
    Rational exact_value;  // valid when exact
};

/// All complex roots with multiplicities. Near-equal roots (within 1e-8 relative)
/// are merged; conjugate symmetry is restored for real input.
std::vector<RootCluster> roots_all(const UniPoly& p);

/// Rational roots first (rational-root theorem + exact deflation), then the float
/// finder on whatever is left.
std::vector<RootCluster> roots_exact_first(const std::vector<Rational>& coeffs);

/// Exact synthetic division of a rational univariate by (z - r); returns the
/// deflated coefficients when the remainder is exactly zero.
std::optional<std::vector<Rational>> deflate_exact(const std::vector<Rational>& coeffs, const Rational& r);

template <class K>
struct LinearSystem {
    std::vector<std::vector<K>> rows;
    std::vector<K> rhs;
    std::vector<std::string> unknowns;
};

template <class K>
struct AffineSolution {
    enum class Kind { Unique, Underdetermined, Inconsistent };
    Kind kind = Kind::Inconsistent;
    // x[i] = particular[i] + sum_j free_coeffs[i][j] * t_j over the free unknowns
    std::vector<K> particular;
    std::vector<std::size_t> free_indices;
    std::vector<std::vector<K>> free_coeffs;
};

namespace detail {

inline bool pivot_viable(const Rational& v, double) { return v != 0; }
inline bool pivot_viable(const Complex& v, double floor) { return std::abs(v) > floor; }
inline double pivot_weight(const Rational& v) { return v != 0 ? 1.0 : 0.0; }
inline double pivot_weight(const Complex& v) { return std::abs(v); }

}  // namespace detail

/// Gauss-Jordan elimination in declared-unknown order. Exact over rationals;
/// for float entries, ranks are decided at `tol` relative to the largest entry.
template <class K>
AffineSolution<K> solve_affine(const LinearSystem<K>& sys, double tol = 1e-10) {
    const std::size_t m = sys.rows.size();
    const std::size_t n = sys.unknowns.size();
    std::vector<std::vector<K>> a(m, std::vector<K>(n + 1, CoeffOps<K>::from_int(0)));
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = sys.rows[i][j];
            scale = std::max(scale, CoeffOps<K>::abs(a[i][j]));
        }
        a[i][n] = sys.rhs[i];
        scale = std::max(scale, CoeffOps<K>::abs(a[i][n]));
    }
    const double floor = tol * std::max(scale, 1e-300);

    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t best = m;
        double best_w = 0.0;
        for (std::size_t r = row; r < m; ++r) {
            if (!detail::pivot_viable(a[r][col], floor)) continue;
            double w = detail::pivot_weight(a[r][col]);
            if (best == m || w > best_w) {
                best = r;
                best_w = w;
            }
        }
        if (best == m) continue;
        std::swap(a[row], a[best]);
        K inv = CoeffOps<K>::from_int(1) / a[row][col];
        for (std::size_t j = col; j <= n; ++j) a[row][j] = a[row][j] * inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row) continue;
            K f = a[r][col];
            if (CoeffOps<K>::is_zero(f)) continue;
            for (std::size_t j = col; j <= n; ++j) a[r][j] -= f * a[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }

    AffineSolution<K> out;
    for (std::size_t r = row; r < m; ++r) {
        if (detail::pivot_viable(a[r][n], floor)) {
            out.kind = AffineSolution<K>::Kind::Inconsistent;
            return out;
        }
    }

    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    for (std::size_t j = 0; j < n; ++j)
        if (!is_pivot[j]) out.free_indices.push_back(j);

    out.particular.assign(n, CoeffOps<K>::from_int(0));
    out.free_coeffs.assign(n, std::vector<K>(out.free_indices.size(), CoeffOps<K>::from_int(0)));
    for (std::size_t r = 0; r < pivot_col.size(); ++r) {
        std::size_t c = pivot_col[r];
        out.particular[c] = a[r][n];
        for (std::size_t f = 0; f < out.free_indices.size(); ++f)
            out.free_coeffs[c][f] = -a[r][out.free_indices[f]];
    }
    for (std::size_t f = 0; f < out.free_indices.size(); ++f)
        out.free_coeffs[out.free_indices[f]][f] = CoeffOps<K>::from_int(1);

    out.kind = out.free_indices.empty() ? AffineSolution<K>::Kind::Unique
                                        : AffineSolution<K>::Kind::Underdetermined;
    return out;
}

}  // namespace algcurv
