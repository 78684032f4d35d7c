#include "algcurv/numkit.hpp"

#include <cmath>
#include <numeric>

namespace algcurv {
namespace {

constexpr double kResidualTol = 1e-12;
constexpr double kClusterTol = 1e-8;
constexpr int kMaxIterations = 500;

Complex horner(const std::vector<Complex>& a, Complex z) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = a.size(); i-- > 0;) acc = acc * z + a[i];
    return acc;
}

std::vector<Complex> derivative(const std::vector<Complex>& a) {
    std::vector<Complex> d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * double(i));
    if (d.empty()) d.push_back(Complex(0.0, 0.0));
    return d;
}

/// Aberth-Ehrlich simultaneous iteration on a polynomial with nonzero leading
/// and constant coefficients.
std::vector<Complex> aberth(const std::vector<Complex>& a) {
    const int n = int(a.size()) - 1;
    std::vector<Complex> dp = derivative(a);
    double norm = 0.0;
    for (const Complex& c : a) norm += std::abs(c);

    double radius = 0.0;
    for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(a[std::size_t(i)] / a[std::size_t(n)]));
    radius = 1.0 + radius;

    std::vector<Complex> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double theta = 2.0 * M_PI * (double(k) + 0.25) / double(n) + 0.7;
        z[std::size_t(k)] = 0.8 * radius * Complex(std::cos(theta), std::sin(theta));
    }

    auto bound = [&](const Complex& x) {
        return kResidualTol * norm * std::pow(std::max(1.0, std::abs(x)), double(n));
    };

    double best_worst = 1e300;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        bool all_ok = true;
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
            Complex zk = z[std::size_t(k)];
            Complex p = horner(a, zk);
            double res = std::abs(p);
            worst = std::max(worst, res / std::max(bound(zk), 1e-300));
            if (res > bound(zk)) all_ok = false;
        }
        best_worst = std::min(best_worst, worst);
        if (all_ok) return z;

        for (int k = 0; k < n; ++k) {
            Complex zk = z[std::size_t(k)];
            Complex p = horner(a, zk);
            if (std::abs(p) <= bound(zk)) continue;
            Complex d = horner(dp, zk);
            if (std::abs(d) < 1e-300) {
                z[std::size_t(k)] += Complex(1e-6 * radius, 1e-6 * radius);
                continue;
            }
            Complex w = p / d;
            Complex s(0.0, 0.0);
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                Complex diff = zk - z[std::size_t(j)];
                if (std::abs(diff) < 1e-300) diff = Complex(1e-12, 1e-12);
                s += Complex(1.0, 0.0) / diff;
            }
            Complex denom = Complex(1.0, 0.0) - w * s;
            Complex step = std::abs(denom) < 1e-12 ? w : w / denom;
            z[std::size_t(k)] = zk - step;
        }
    }
    throw Error(ErrorCode::NoConvergence,
                "root iteration did not reach the residual bound after 500 sweeps (best relative residual " +
                    std::to_string(best_worst) + ")");
}

std::vector<RootCluster> cluster_roots(std::vector<Complex> roots, bool real_input) {
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<RootCluster> clusters;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        Complex sum = roots[i];
        int count = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            Complex center = sum / double(count);
            double tol = kClusterTol * std::max({1.0, std::abs(center), std::abs(roots[j])});
            if (std::abs(roots[j] - center) <= tol) {
                sum += roots[j];
                ++count;
                used[j] = true;
            }
        }
        RootCluster c;
        c.z = sum / double(count);
        c.multiplicity = count;
        clusters.push_back(c);
    }
    if (real_input) {
        for (RootCluster& c : clusters) {
            if (std::abs(c.z.imag()) <= kClusterTol * std::max(1.0, std::abs(c.z))) c.z = Complex(c.z.real(), 0.0);
        }
        // force exact conjugate symmetry on leftover complex clusters
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            if (clusters[i].z.imag() <= 0.0) continue;
            for (std::size_t j = 0; j < clusters.size(); ++j) {
                if (clusters[j].z.imag() >= 0.0) continue;
                Complex mirrored = std::conj(clusters[j].z);
                double tol = kClusterTol * std::max(1.0, std::abs(clusters[i].z));
                if (std::abs(mirrored - clusters[i].z) <= tol && clusters[i].multiplicity == clusters[j].multiplicity) {
                    Complex avg = (clusters[i].z + mirrored) * 0.5;
                    clusters[i].z = avg;
                    clusters[j].z = std::conj(avg);
                    break;
                }
            }
        }
    }
    return clusters;
}

/// Trial-division factorisation capped for desk-scale inputs; empty on failure.
std::vector<BigInt> divisors_of(BigInt n, std::size_t cap) {
    if (n < 0) n = -n;
    if (n == 0) return {};
    std::vector<std::pair<BigInt, unsigned>> factors;
    BigInt m = n;
    for (BigInt p = 2; p * p <= m && p < 1000000; p = (p == 2 ? BigInt(3) : p + 2)) {
        if (m % p == 0) {
            unsigned e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            factors.emplace_back(p, e);
        }
    }
    if (m > 1) {
        if (m > BigInt("1000000000000")) return {};  // give up, float path will handle it
        factors.emplace_back(m, 1);
    }
    std::vector<BigInt> divs{1};
    for (const auto& [p, e] : factors) {
        std::size_t base = divs.size();
        BigInt pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) {
                divs.push_back(divs[i] * pk);
                if (divs.size() > cap) return {};
            }
        }
    }
    return divs;
}

}  // namespace

std::optional<std::vector<Rational>> deflate_exact(const std::vector<Rational>& coeffs, const Rational& r) {
    if (coeffs.size() < 2) return std::nullopt;
    std::vector<Rational> out(coeffs.size() - 1);
    Rational carry = coeffs.back();
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
        out[i] = carry;
        carry = coeffs[i] + r * carry;
    }
    if (carry != 0) return std::nullopt;
    return out;
}

std::vector<RootCluster> roots_all(const UniPoly& p) {
    std::vector<Complex> a = p.coeffs;
    while (!a.empty() && std::abs(a.back()) == 0.0) a.pop_back();
    if (a.size() < 2) throw Error(ErrorCode::BadInput, "root finding needs degree >= 1");

    bool real_input = true;
    for (const Complex& c : a)
        if (c.imag() != 0.0) real_input = false;

    std::vector<RootCluster> result;
    std::size_t zero_count = 0;
    while (zero_count + 1 < a.size() && CoeffOps<Complex>::is_zero(a[zero_count])) ++zero_count;
    if (zero_count) {
        a.erase(a.begin(), a.begin() + long(zero_count));
        RootCluster c;
        c.z = Complex(0.0, 0.0);
        c.multiplicity = int(zero_count);
        c.exact = true;
        c.exact_value = 0;
        result.push_back(c);
    }

    const int n = int(a.size()) - 1;
    std::vector<Complex> roots;
    if (n == 1) {
        roots.push_back(-a[0] / a[1]);
    } else if (n == 2) {
        Complex A = a[2], B = a[1], C = a[0];
        Complex disc = std::sqrt(B * B - 4.0 * A * C);
        // pick the sign that avoids cancellation
        Complex q = (std::abs(B + disc) >= std::abs(B - disc)) ? -(B + disc) * 0.5 : -(B - disc) * 0.5;
        if (std::abs(q) < 1e-300) {
            roots.push_back(Complex(0.0, 0.0));
            roots.push_back(Complex(0.0, 0.0));
        } else {
            roots.push_back(q / A);
            roots.push_back(C / q);
        }
    } else if (n >= 3) {
        roots = aberth(a);
    }
    for (const RootCluster& c : cluster_roots(std::move(roots), real_input)) result.push_back(c);
    return result;
}

std::vector<RootCluster> roots_exact_first(const std::vector<Rational>& coeffs_in) {
    std::vector<Rational> coeffs = coeffs_in;
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    if (coeffs.size() < 2) throw Error(ErrorCode::BadInput, "root finding needs degree >= 1");

    std::vector<RootCluster> result;
    std::size_t zero_count = 0;
    while (zero_count + 1 < coeffs.size() && coeffs[zero_count] == 0) ++zero_count;
    if (zero_count) {
        coeffs.erase(coeffs.begin(), coeffs.begin() + long(zero_count));
        RootCluster c;
        c.z = Complex(0.0, 0.0);
        c.multiplicity = int(zero_count);
        c.exact = true;
        c.exact_value = 0;
        result.push_back(c);
    }

    if (coeffs.size() >= 2) {
        BigInt den_lcm = 1;
        for (const Rational& c : coeffs) den_lcm = boost::multiprecision::lcm(den_lcm, denominator(c));
        std::vector<BigInt> ints(coeffs.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            ints[i] = numerator(coeffs[i]) * (den_lcm / denominator(coeffs[i]));

        std::vector<BigInt> ps = divisors_of(ints.front(), 4096);
        std::vector<BigInt> qs = divisors_of(ints.back(), 4096);
        if (!ps.empty() && !qs.empty() && ps.size() * qs.size() <= 65536) {
            std::vector<Rational> candidates;
            for (const BigInt& p : ps)
                for (const BigInt& q : qs) {
                    candidates.push_back(Rational(p, q));
                    candidates.push_back(Rational(-p, q));
                }
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
            for (const Rational& cand : candidates) {
                int mult = 0;
                while (coeffs.size() >= 2) {
                    auto deflated = deflate_exact(coeffs, cand);
                    if (!deflated) break;
                    coeffs = *deflated;
                    ++mult;
                }
                if (mult) {
                    RootCluster c;
                    c.z = Complex(to_double(cand), 0.0);
                    c.multiplicity = mult;
                    c.exact = true;
                    c.exact_value = cand;
                    result.push_back(c);
                }
                if (coeffs.size() < 2) break;
            }
        }
    }

    if (coeffs.size() >= 2) {
        UniPoly rest;
        for (const Rational& c : coeffs) rest.coeffs.push_back(to_complex(c));
        for (const RootCluster& c : roots_all(rest)) result.push_back(c);
    }

    std::sort(result.begin(), result.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    return result;
}

}  // namespace algcurv
