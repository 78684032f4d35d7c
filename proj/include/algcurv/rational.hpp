#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algcurv/error.hpp"

namespace algcurv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Complex to_complex(const Rational& r) { return Complex(to_double(r), 0.0); }

inline std::string to_string(const Rational& r) { return r.str(); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// Exact square root when the rational is a perfect square.
inline std::optional<Rational> rational_sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    BigInt n = numerator(r), d = denominator(r);
    BigInt sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
    if (sn * sn != n || sd * sd != d) return std::nullopt;
    return Rational(sn, sd);
}

/// Parse "p", "p/q" or a decimal like "-0.25" into an exact rational.
inline Rational rational_from_string(const std::string& text) {
    std::size_t i = 0, n = text.size();
    auto fail = [&](const char* why) -> Rational {
        throw Error(ErrorCode::BadInput, std::string(why) + " in rational literal '" + text + "'");
    };
    if (n == 0) fail("empty");
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    auto digits = [&](BigInt& out) {
        std::size_t start = i;
        out = 0;
        while (i < n && text[i] >= '0' && text[i] <= '9') {
            out = out * 10 + (text[i] - '0');
            ++i;
        }
        return i > start;
    };
    BigInt ip;
    if (!digits(ip)) fail("missing digits");
    Rational value(ip);
    if (i < n && text[i] == '.') {
        ++i;
        std::size_t start = i;
        BigInt frac;
        if (!digits(frac)) fail("missing fractional digits");
        BigInt scale = 1;
        for (std::size_t k = start; k < i; ++k) scale *= 10;
        value += Rational(frac, scale);
    } else if (i < n && text[i] == '/') {
        ++i;
        BigInt den;
        if (!digits(den)) fail("missing denominator");
        if (den == 0) fail("zero denominator");
        value = Rational(ip, den);
    }
    if (i != n) fail("trailing characters");
    return neg ? Rational(-value) : value;
}

/// Parse a comma-separated list of rationals ("1/2,-0.25,3").
inline std::vector<Rational> point_from_string(const std::string& text) {
    std::vector<Rational> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string piece = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.push_back(rational_from_string(piece));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace algcurv
