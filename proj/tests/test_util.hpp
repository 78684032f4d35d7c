#pragma once

#include <random>
#include <string>
#include <vector>

#include "algcurv/poly.hpp"

namespace testutil {

using algcurv::Poly;
using algcurv::Rational;

inline Rational random_rational(std::mt19937& rng, int num_bound = 9, int den_bound = 9) {
    std::uniform_int_distribution<int> num(-num_bound, num_bound);
    std::uniform_int_distribution<int> den(1, den_bound);
    return Rational(num(rng), den(rng));
}

inline Poly random_poly(std::mt19937& rng, const std::vector<std::string>& ring, int max_degree = 4,
                        int max_terms = 6) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> expd(0, max_degree);
    Poly p(ring);
    int terms = nterms(rng);
    for (int t = 0; t < terms; ++t) {
        algcurv::Monomial m{std::vector<unsigned>(ring.size(), 0)};
        int budget = max_degree;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            int e = std::min(expd(rng), budget);
            m.exp[i] = unsigned(e);
            budget -= e;
        }
        p.add_term(m, random_rational(rng));
    }
    return p;
}

inline std::vector<Rational> random_point(std::mt19937& rng, std::size_t dim, int num_bound = 5,
                                          int den_bound = 4) {
    std::vector<Rational> out;
    for (std::size_t i = 0; i < dim; ++i) out.push_back(random_rational(rng, num_bound, den_bound));
    return out;
}

}  // namespace testutil
