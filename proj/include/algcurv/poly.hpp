#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "algcurv/error.hpp"
#include "algcurv/rational.hpp"

namespace algcurv {

/// Exponent vector, one entry per ring variable.
struct Monomial {
    std::vector<unsigned> exp;

    unsigned total_degree() const {
        unsigned d = 0;
        for (unsigned e : exp) d += e;
        return d;
    }
    bool operator==(const Monomial& o) const { return exp == o.exp; }
};

/// Graded lexicographic: lower total degree first, then lex on exponents.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
        return a.exp < b.exp;
    }
};

template <class K>
struct CoeffOps;

template <>
struct CoeffOps<Rational> {
    static bool is_zero(const Rational& c) { return c == 0; }
    static double abs(const Rational& c) { return std::abs(to_double(c)); }
    static Rational from_int(int n) { return Rational(n); }
};

template <>
struct CoeffOps<Complex> {
    static bool is_zero(const Complex& c) { return c.real() == 0.0 && c.imag() == 0.0; }
    static double abs(const Complex& c) { return std::abs(c); }
    static Complex from_int(int n) { return Complex(double(n), 0.0); }
};

/// Sparse multivariate polynomial over an ordered variable list.
/// Terms are kept in canonical graded-lex order with no zero coefficients.
template <class K>
class PolyT {
  public:
    using TermMap = std::map<Monomial, K, GrlexLess>;

    PolyT() = default;
    explicit PolyT(std::vector<std::string> ring) : ring_(std::move(ring)) {}

    static PolyT zero(std::vector<std::string> ring) { return PolyT(std::move(ring)); }

    static PolyT constant(std::vector<std::string> ring, const K& c) {
        PolyT p(std::move(ring));
        p.add_term(Monomial{std::vector<unsigned>(p.arity(), 0)}, c);
        return p;
    }

    static PolyT variable(std::vector<std::string> ring, std::size_t index, const K& c = CoeffOps<K>::from_int(1)) {
        PolyT p(std::move(ring));
        if (index >= p.arity()) throw Error(ErrorCode::UnknownVariable, "variable index out of range");
        Monomial m{std::vector<unsigned>(p.arity(), 0)};
        m.exp[index] = 1;
        p.add_term(m, c);
        return p;
    }

    const std::vector<std::string>& ring() const { return ring_; }
    std::size_t arity() const { return ring_.size(); }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        if (terms_.empty()) return true;
        return terms_.size() == 1 && terms_.begin()->first.total_degree() == 0;
    }

    K constant_value() const {
        if (terms_.empty()) return CoeffOps<K>::from_int(0);
        if (!is_constant()) throw Error(ErrorCode::BadInput, "polynomial is not constant");
        return terms_.begin()->second;
    }

    std::size_t var_index(const std::string& name) const {
        for (std::size_t i = 0; i < ring_.size(); ++i)
            if (ring_[i] == name) return i;
        throw Error(ErrorCode::UnknownVariable, "no variable '" + name + "' in ring");
    }

    int total_degree() const {
        if (terms_.empty()) return -1;
        return int(terms_.rbegin()->first.total_degree());
    }

    int degree_in(std::size_t vi) const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, int(m.exp[vi]));
        return d;
    }

    void add_term(const Monomial& m, const K& c) {
        if (CoeffOps<K>::is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (CoeffOps<K>::is_zero(it->second)) terms_.erase(it);
        }
    }

    double max_coeff_abs() const {
        double m = 0.0;
        for (const auto& [mon, c] : terms_) m = std::max(m, CoeffOps<K>::abs(c));
        return m;
    }

    /// Drop coefficients of magnitude <= tol (used on float series only).
    PolyT pruned(double tol) const {
        PolyT out(ring_);
        for (const auto& [m, c] : terms_)
            if (CoeffOps<K>::abs(c) > tol) out.terms_.emplace(m, c);
        return out;
    }

    PolyT operator-() const {
        PolyT out(ring_);
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
        return out;
    }

    PolyT& operator+=(const PolyT& o) {
        auto [lhs, rhs] = aligned(*this, o);
        for (const auto& [m, c] : rhs.terms_) lhs.add_term(m, c);
        return *this = std::move(lhs);
    }
    PolyT& operator-=(const PolyT& o) {
        auto [lhs, rhs] = aligned(*this, o);
        for (const auto& [m, c] : rhs.terms_) lhs.add_term(m, -c);
        return *this = std::move(lhs);
    }
    friend PolyT operator+(PolyT a, const PolyT& b) { return a += b; }
    friend PolyT operator-(PolyT a, const PolyT& b) { return a -= b; }

    friend PolyT operator*(const PolyT& a, const PolyT& b) {
        auto [lhs, rhs] = aligned(a, b);
        PolyT out(lhs.ring_);
        for (const auto& [ma, ca] : lhs.terms_) {
            for (const auto& [mb, cb] : rhs.terms_) {
                Monomial m{std::vector<unsigned>(out.arity(), 0)};
                for (std::size_t i = 0; i < out.arity(); ++i) m.exp[i] = ma.exp[i] + mb.exp[i];
                out.add_term(m, ca * cb);
            }
        }
        return out;
    }

    PolyT& operator*=(const PolyT& o) { return *this = *this * o; }

    PolyT operator*(const K& s) const {
        PolyT out(ring_);
        if (CoeffOps<K>::is_zero(s)) return out;
        for (const auto& [m, c] : terms_) out.add_term(m, c * s);
        return out;
    }

    PolyT pow(unsigned e) const {
        PolyT out = constant(ring_, CoeffOps<K>::from_int(1));
        PolyT base = *this;
        while (e) {
            if (e & 1u) out = out * base;
            base = base * base;
            e >>= 1u;
        }
        return out;
    }

    bool operator==(const PolyT& o) const {
        if (ring_ != o.ring_) {
            if (is_constant() && o.is_constant()) return constant_value() == o.constant_value();
            return false;
        }
        return terms_ == o.terms_;
    }

    /// Sum of the total-degree-d terms.
    PolyT homogeneous_part(unsigned d) const {
        PolyT out(ring_);
        for (const auto& [m, c] : terms_)
            if (m.total_degree() == d) out.terms_.emplace(m, c);
        return out;
    }

    /// Smallest total degree with a nonzero term.
    unsigned min_degree() const {
        if (terms_.empty()) throw Error(ErrorCode::ZeroPolynomial, "min_degree of the zero polynomial");
        return terms_.begin()->first.total_degree();
    }

    PolyT derivative(std::size_t vi) const {
        if (vi >= arity()) throw Error(ErrorCode::UnknownVariable, "derivative variable out of range");
        PolyT out(ring_);
        for (const auto& [m, c] : terms_) {
            if (m.exp[vi] == 0) continue;
            Monomial d = m;
            unsigned e = d.exp[vi]--;
            out.add_term(d, c * CoeffOps<K>::from_int(int(e)));
        }
        return out;
    }

    /// F(P + u), exact recentering; done one variable at a time with a Horner shift.
    PolyT shifted(const std::vector<K>& point) const {
        if (point.size() != arity())
            throw Error(ErrorCode::BadInput, "shift point dimension does not match ring arity");
        PolyT cur = *this;
        for (std::size_t vi = 0; vi < arity(); ++vi) {
            if (CoeffOps<K>::is_zero(point[vi])) continue;
            cur = cur.shift_one(vi, point[vi]);
        }
        return cur;
    }

    /// Substitute one polynomial per ring variable; entries live in the target ring.
    PolyT substituted(const std::vector<PolyT>& map) const {
        if (map.size() != arity()) throw Error(ErrorCode::BadInput, "substitution map arity mismatch");
        std::vector<std::string> target = arity() ? map[0].ring() : ring_;
        for (const auto& entry : map)
            if (entry.ring() != target) throw Error(ErrorCode::MixedRings, "substitution entries disagree on target ring");
        PolyT out = PolyT::zero(target);
        std::vector<std::vector<PolyT>> powers(arity());
        for (std::size_t i = 0; i < arity(); ++i) powers[i].push_back(constant(target, CoeffOps<K>::from_int(1)));
        auto power = [&](std::size_t i, unsigned e) -> const PolyT& {
            while (powers[i].size() <= e) powers[i].push_back(powers[i].back() * map[i]);
            return powers[i][e];
        };
        for (const auto& [m, c] : terms_) {
            PolyT term = constant(target, c);
            for (std::size_t i = 0; i < arity(); ++i)
                if (m.exp[i]) term = term * power(i, m.exp[i]);
            out += term;
        }
        return out;
    }

    /// Replace variable vi by a polynomial over the same ring.
    PolyT substituted_var(std::size_t vi, const PolyT& value) const {
        if (value.ring() != ring_) throw Error(ErrorCode::MixedRings, "substituted_var value in a different ring");
        PolyT out(ring_);
        std::vector<PolyT> powers{constant(ring_, CoeffOps<K>::from_int(1))};
        auto power = [&](unsigned e) -> const PolyT& {
            while (powers.size() <= e) powers.push_back(powers.back() * value);
            return powers[e];
        };
        for (const auto& [m, c] : terms_) {
            Monomial rest = m;
            unsigned e = rest.exp[vi];
            rest.exp[vi] = 0;
            PolyT piece(ring_);
            piece.add_term(rest, c);
            out += piece * power(e);
        }
        return out;
    }

    PolyT substituted_value(std::size_t vi, const K& value) const {
        PolyT out(ring_);
        std::vector<K> powers{CoeffOps<K>::from_int(1)};
        auto power = [&](unsigned e) -> const K& {
            while (powers.size() <= e) powers.push_back(powers.back() * value);
            return powers[e];
        };
        for (const auto& [m, c] : terms_) {
            Monomial rest = m;
            unsigned e = rest.exp[vi];
            rest.exp[vi] = 0;
            out.add_term(rest, c * power(e));
        }
        return out;
    }

    template <class V>
    V evaluate_with(const std::vector<V>& point) const {
        if (point.size() != arity()) throw Error(ErrorCode::BadInput, "evaluation point dimension mismatch");
        std::vector<std::vector<V>> powers(arity());
        for (std::size_t i = 0; i < arity(); ++i) powers[i].push_back(V(1));
        auto power = [&](std::size_t i, unsigned e) -> const V& {
            while (powers[i].size() <= e) powers[i].push_back(powers[i].back() * point[i]);
            return powers[i][e];
        };
        V acc(0);
        for (const auto& [m, c] : terms_) {
            V term(1);
            for (std::size_t i = 0; i < arity(); ++i)
                if (m.exp[i]) term *= power(i, m.exp[i]);
            acc += coeff_as<V>(c) * term;
        }
        return acc;
    }

    Complex evaluate(const std::vector<Complex>& point) const { return evaluate_with<Complex>(point); }

    /// Extract coefficients as a univariate list in vi (all other exponents must be zero).
    std::vector<K> univariate_in(std::size_t vi) const {
        int d = degree_in(vi);
        std::vector<K> coeffs(std::size_t(std::max(d, 0)) + 1, CoeffOps<K>::from_int(0));
        for (const auto& [m, c] : terms_) {
            for (std::size_t i = 0; i < arity(); ++i)
                if (i != vi && m.exp[i] != 0)
                    throw Error(ErrorCode::BadInput, "polynomial is not univariate in '" + ring_[vi] + "'");
            coeffs[m.exp[vi]] = c;
        }
        return coeffs;
    }

    /// Variables that actually occur.
    std::vector<std::size_t> support() const {
        std::vector<bool> seen(arity(), false);
        for (const auto& [m, c] : terms_)
            for (std::size_t i = 0; i < arity(); ++i)
                if (m.exp[i]) seen[i] = true;
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < arity(); ++i)
            if (seen[i]) out.push_back(i);
        return out;
    }

  private:
    template <class V>
    static V coeff_as(const K& c) {
        if constexpr (std::is_same_v<K, Rational> && std::is_same_v<V, Complex>) return to_complex(c);
        else if constexpr (std::is_same_v<K, Rational> && std::is_same_v<V, double>) return to_double(c);
        else return V(c);
    }

    PolyT shift_one(std::size_t vi, const K& a) const {
        int d = degree_in(vi);
        if (d <= 0) return *this;
        // coefficient polynomials of x_vi^k
        std::vector<PolyT> coeff(std::size_t(d) + 1, PolyT(ring_));
        for (const auto& [m, c] : terms_) {
            Monomial rest = m;
            unsigned e = rest.exp[vi];
            rest.exp[vi] = 0;
            coeff[e].add_term(rest, c);
        }
        PolyT xa = variable(ring_, vi);
        xa += constant(ring_, a);
        PolyT acc = coeff[std::size_t(d)];
        for (int k = d - 1; k >= 0; --k) acc = acc * xa + coeff[std::size_t(k)];
        return acc;
    }

    // Lift constants across rings so that scalars combine with anything.
    static std::pair<PolyT, PolyT> aligned(const PolyT& a, const PolyT& b) {
        if (a.ring_ == b.ring_) return {a, b};
        if (b.is_constant()) return {a, constant(a.ring_, b.constant_value())};
        if (a.is_constant()) return {constant(b.ring_, a.constant_value()), b};
        throw Error(ErrorCode::MixedRings, "operands live in different rings");
    }

    std::vector<std::string> ring_;
    TermMap terms_;
};

using Poly = PolyT<Rational>;
using CPoly = PolyT<Complex>;

inline CPoly to_cpoly(const Poly& p) {
    CPoly out(p.ring());
    for (const auto& [m, c] : p.terms()) out.add_term(m, to_complex(c));
    return out;
}

inline Rational evaluate_exact(const Poly& p, const std::vector<Rational>& point) {
    return p.evaluate_with<Rational>(point);
}

/// Exact multivariate division; returns the quotient only when the remainder is zero.
inline std::optional<Poly> try_divide(const Poly& f, const Poly& g) {
    if (g.is_zero()) throw Error(ErrorCode::BadInput, "division by the zero polynomial");
    Poly rem = f;
    Poly quo(f.ring());
    const auto& glead = *g.terms().rbegin();
    while (!rem.is_zero()) {
        const auto& rlead = *rem.terms().rbegin();
        Monomial q{std::vector<unsigned>(f.arity(), 0)};
        bool divisible = true;
        for (std::size_t i = 0; i < f.arity(); ++i) {
            if (rlead.first.exp[i] < glead.first.exp[i]) {
                divisible = false;
                break;
            }
            q.exp[i] = rlead.first.exp[i] - glead.first.exp[i];
        }
        if (!divisible) return std::nullopt;
        Rational qc = rlead.second / glead.second;
        Poly qt(f.ring());
        qt.add_term(q, qc);
        quo += qt;
        rem -= qt * g;
    }
    return quo;
}

/// Divide a form by a linear form in float arithmetic. Returns the quotient and
/// the relative residual left after eliminating the pivot variable.
inline std::pair<CPoly, double> divide_linear(const CPoly& f, const CPoly& lin) {
    if (lin.total_degree() != 1) throw Error(ErrorCode::BadInput, "divisor is not linear");
    std::size_t pivot = 0;
    double best = -1.0;
    Complex cv(0.0, 0.0);
    for (const auto& [m, c] : lin.terms()) {
        if (m.total_degree() != 1) continue;
        for (std::size_t i = 0; i < f.arity(); ++i) {
            if (m.exp[i] == 1 && std::abs(c) > best) {
                best = std::abs(c);
                pivot = i;
                cv = c;
            }
        }
    }
    CPoly rem = f;
    CPoly quo(f.ring());
    double junk = 0.0;
    int dv = rem.degree_in(pivot);
    while (dv >= 1) {
        CPoly top(f.ring());
        for (const auto& [m, c] : rem.terms())
            if (int(m.exp[pivot]) == dv) top.add_term(m, c);
        // q = top / (cv * x_pivot)
        CPoly q(f.ring());
        for (const auto& [m, c] : top.terms()) {
            Monomial qm = m;
            qm.exp[pivot] -= 1;
            q.add_term(qm, c / cv);
        }
        quo += q;
        rem -= q * lin;
        // the top degree cancels only up to rounding; sweep the residue into
        // the residual instead of leaving it to stall the loop
        CPoly cleaned(f.ring());
        for (const auto& [m, c] : rem.terms()) {
            if (int(m.exp[pivot]) >= dv)
                junk = std::max(junk, std::abs(c));
            else
                cleaned.add_term(m, c);
        }
        rem = std::move(cleaned);
        dv = rem.degree_in(pivot);
    }
    double scale = f.max_coeff_abs();
    double residual = scale > 0 ? std::max(rem.max_coeff_abs(), junk) / scale : 0.0;
    return {quo, residual};
}

/// Canonical text form: descending graded-lex, explicit '*', '^' for powers,
/// coefficients printed as integers or num/den.
inline std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        Rational a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? "-" : "+");
            if (a < 0) a = -a;
        }
        bool any_var = m.total_degree() > 0;
        bool coeff_shown = !any_var || a != 1;
        if (coeff_shown) out << to_string(a);
        bool need_star = coeff_shown;
        for (std::size_t i = 0; i < p.arity(); ++i) {
            if (!m.exp[i]) continue;
            if (need_star) out << "*";
            out << p.ring()[i];
            if (m.exp[i] > 1) out << "^" << m.exp[i];
            need_star = true;
        }
        first = false;
    }
    return out.str();
}

}  // namespace algcurv
