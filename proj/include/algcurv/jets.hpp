#pragma once

#include <vector>

#include "algcurv/poly.hpp"

namespace algcurv {

/// Truncated power series in one parameter t; coefficient i is a polynomial in
/// the jet unknowns. All coefficients share one unknown ring.
template <class K>
struct TSeries {
    std::vector<PolyT<K>> c;  // index = power of t, size cap+1

    static TSeries zero(const std::vector<std::string>& ring, int cap) {
        TSeries s;
        s.c.assign(std::size_t(cap) + 1, PolyT<K>::zero(ring));
        return s;
    }
    int cap() const { return int(c.size()) - 1; }
};

template <class K>
TSeries<K> ts_mul(const TSeries<K>& a, const TSeries<K>& b) {
    int cap = a.cap();
    TSeries<K> out = TSeries<K>::zero(a.c[0].ring(), cap);
    for (int i = 0; i <= cap; ++i) {
        if (a.c[std::size_t(i)].is_zero()) continue;
        for (int j = 0; i + j <= cap; ++j) {
            if (b.c[std::size_t(j)].is_zero()) continue;
            out.c[std::size_t(i + j)] += a.c[std::size_t(i)] * b.c[std::size_t(j)];
        }
    }
    return out;
}

/// F(entries...) truncated at the series cap. F must have no constant term when
/// the entries have no constant term if exact low-order vanishing is wanted;
/// callers pass the recentered polynomial.
template <class K>
TSeries<K> compose_series(const PolyT<K>& f, const std::vector<TSeries<K>>& entries) {
    if (entries.empty()) throw Error(ErrorCode::BadInput, "series composition needs at least one entry");
    if (f.arity() != entries.size()) throw Error(ErrorCode::BadInput, "series composition arity mismatch");
    const auto& ring = entries[0].c[0].ring();
    int cap = entries[0].cap();
    TSeries<K> out = TSeries<K>::zero(ring, cap);
    std::vector<std::vector<TSeries<K>>> powers(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        TSeries<K> one = TSeries<K>::zero(ring, cap);
        one.c[0] = PolyT<K>::constant(ring, CoeffOps<K>::from_int(1));
        powers[i].push_back(one);
    }
    auto power = [&](std::size_t i, unsigned e) -> const TSeries<K>& {
        while (powers[i].size() <= e) powers[i].push_back(ts_mul(powers[i].back(), entries[i]));
        return powers[i][e];
    };
    for (const auto& [m, coeff] : f.terms()) {
        TSeries<K> term = TSeries<K>::zero(ring, cap);
        term.c[0] = PolyT<K>::constant(ring, coeff);
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (m.exp[i]) term = ts_mul(term, power(i, m.exp[i]));
        for (int k = 0; k <= cap; ++k) out.c[std::size_t(k)] += term.c[std::size_t(k)];
    }
    return out;
}

/// Truncated series in two parameters (s,t), coefficients indexed by (i,j) with
/// i+j <= cap.
template <class K>
struct BiSeries {
    int cap = 0;
    std::vector<PolyT<K>> c;  // index via idx(i,j)

    static std::size_t idx(int i, int j) {
        int d = i + j;
        return std::size_t(d * (d + 1) / 2 + j);
    }
    static BiSeries zero(const std::vector<std::string>& ring, int cap) {
        BiSeries s;
        s.cap = cap;
        s.c.assign(std::size_t((cap + 1) * (cap + 2) / 2), PolyT<K>::zero(ring));
        return s;
    }
    const PolyT<K>& at(int i, int j) const { return c[idx(i, j)]; }
    PolyT<K>& at(int i, int j) { return c[idx(i, j)]; }
};

template <class K>
BiSeries<K> bs_mul(const BiSeries<K>& a, const BiSeries<K>& b) {
    BiSeries<K> out = BiSeries<K>::zero(a.c[0].ring(), a.cap);
    for (int da = 0; da <= a.cap; ++da)
        for (int ja = 0; ja <= da; ++ja) {
            const auto& pa = a.at(da - ja, ja);
            if (pa.is_zero()) continue;
            for (int db = 0; da + db <= a.cap; ++db)
                for (int jb = 0; jb <= db; ++jb) {
                    const auto& pb = b.at(db - jb, jb);
                    if (pb.is_zero()) continue;
                    out.at(da - ja + db - jb, ja + jb) += pa * pb;
                }
        }
    return out;
}

template <class K>
BiSeries<K> compose_biseries(const PolyT<K>& f, const std::vector<BiSeries<K>>& entries) {
    if (entries.empty() || f.arity() != entries.size())
        throw Error(ErrorCode::BadInput, "bi-series composition arity mismatch");
    const auto& ring = entries[0].c[0].ring();
    int cap = entries[0].cap;
    BiSeries<K> out = BiSeries<K>::zero(ring, cap);
    std::vector<std::vector<BiSeries<K>>> powers(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        BiSeries<K> one = BiSeries<K>::zero(ring, cap);
        one.at(0, 0) = PolyT<K>::constant(ring, CoeffOps<K>::from_int(1));
        powers[i].push_back(one);
    }
    auto power = [&](std::size_t i, unsigned e) -> const BiSeries<K>& {
        while (powers[i].size() <= e) powers[i].push_back(bs_mul(powers[i].back(), entries[i]));
        return powers[i][e];
    };
    for (const auto& [m, coeff] : f.terms()) {
        BiSeries<K> term = BiSeries<K>::zero(ring, cap);
        term.at(0, 0) = PolyT<K>::constant(ring, coeff);
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (m.exp[i]) term = bs_mul(term, power(i, m.exp[i]));
        for (std::size_t k = 0; k < out.c.size(); ++k) out.c[k] += term.c[k];
    }
    return out;
}

}  // namespace algcurv
