#pragma once

// Bernoulli numbers in the first-kind convention B_1 = -1/2, i.e. the
// coefficients of y/(e^y - 1) = sum B_n y^n / n!.

#include <stdexcept>
#include <vector>

#include "dhasym/rational.hpp"

namespace dhasym {

inline Rational binomial(unsigned long n, unsigned long k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rational(b);
}

inline Rational factorial(unsigned long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

inline std::vector<Rational> bernoulli_upto(int n) {
    if (n < 0) throw std::invalid_argument("bernoulli: negative index");
    std::vector<Rational> b(static_cast<size_t>(n) + 1);
    b[0] = Rational(1);
    for (int m = 1; m <= n; ++m) {
        Rational s;
        for (int j = 0; j < m; ++j)
            s += binomial(static_cast<unsigned long>(m) + 1, static_cast<unsigned long>(j)) * b[j];
        b[m] = -s / Rational(m + 1);
    }
    return b;
}

inline Rational bernoulli(int n) { return bernoulli_upto(n)[static_cast<size_t>(n)]; }

}  // namespace dhasym
