#pragma once

// Shared oracles for the test suites. Everything here is independent of the
// implementation paths it checks: closed forms are evaluated directly in
// long double, integrals through the quadrature helper against raw
// evaluators.

#include <cmath>
#include <vector>

#include "ivsfun/quadrature.hpp"

namespace test_support {

// (a; q)_n = prod_{i=0}^{n-1} (1 - a q^i)
inline long double q_pochhammer(long double a, long double q, int n) {
    long double acc = 1.0L;
    long double aq = a;
    for (int i = 0; i < n; ++i) {
        acc *= (1.0L - aq);
        aq *= q;
    }
    return acc;
}

// (q; q)_inf, truncated when the factor is 1 to machine precision
inline long double q_pochhammer_inf(long double q) {
    long double acc = 1.0L;
    long double qi = q;
    while (qi > 1.0e-25L) {
        acc *= (1.0L - qi);
        qi *= q;
    }
    return acc;
}

// c_j closed form for unit jumps: (-1)^j q^{binom(j,2)} / (q;q)_j
inline long double poisson_coefficient(long double q, int j) {
    const long double sign = (j % 2 == 0) ? 1.0L : -1.0L;
    const long double expo = 0.5L * j * (j - 1);
    return sign * std::exp(expo * std::log(q)) / q_pochhammer(q, q, j);
}

// chi-square upper quantile via Wilson-Hilferty; good to ~1% for df >= 5
inline double chi2_quantile(double df, double z_upper) {
    const double t = 2.0 / (9.0 * df);
    const double c = 1.0 - t + z_upper * std::sqrt(t);
    return df * c * c * c;
}

template <class F>
double quad(const F& f, double lo, double hi, double tol = 1.0e-10) {
    return ivsfun::integrate(f, lo, hi, {tol, tol, 48, 400000});
}

} // namespace test_support
