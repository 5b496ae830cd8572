#pragma once

#include "dmflag/matrix.hpp"

#include <random>

namespace dmflag::testing {

inline Poly random_poly(const RingPtr& R, std::mt19937_64& rng, int max_terms = 4, int max_deg = 2,
                        int coeff_range = 5) {
    std::uniform_int_distribution<int> nterm(0, max_terms), ex(0, max_deg),
        co(-coeff_range, coeff_range);
    std::vector<Term> terms;
    int n = nterm(rng);
    for (int k = 0; k < n; ++k) {
        Term t{Mono{}, R->field().from_int(co(rng))};
        for (int i = 0; i < R->nvars(); ++i) {
            t.m.e[i] = ex(rng);
            t.m.deg += t.m.e[i];
        }
        if (t.m.deg > max_deg) continue;
        terms.push_back(t);
    }
    return Poly::from_terms(R, std::move(terms));
}

inline Matrix random_matrix(const RingPtr& R, std::mt19937_64& rng, int rows, int cols,
                            double density = 0.5, int max_deg = 1) {
    std::bernoulli_distribution keep(density);
    Matrix m(R, rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (keep(rng)) m.at(r, c) = random_poly(R, rng, 2, max_deg);
    return m;
}

inline Poly P(const RingPtr& R, const char* s) { return Poly::parse(R, s); }

}  // namespace dmflag::testing
