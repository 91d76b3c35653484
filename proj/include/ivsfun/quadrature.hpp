#pragma once

// Adaptive quadrature on a G7/G15 Gauss-Legendre pair with bisection.

#include <array>
#include <cmath>
#include <cstddef>

#include "ivsfun/errors.hpp"

namespace ivsfun {

namespace detail {

struct NodeWeight {
    double x, w;
};

inline constexpr std::array<NodeWeight, 7> kGauss7 = {{
    {-9.49107912342758486e-01, 1.29484966168870647e-01},
    {-7.41531185599394460e-01, 2.79705391489276589e-01},
    {-4.05845151377397184e-01, 3.81830050505118312e-01},
    {0.00000000000000000e+00, 4.17959183673468959e-01},
    {4.05845151377397184e-01, 3.81830050505118312e-01},
    {7.41531185599394460e-01, 2.79705391489276589e-01},
    {9.49107912342758486e-01, 1.29484966168870647e-01},
}};

inline constexpr std::array<NodeWeight, 15> kGauss15 = {{
    {-9.87992518020485377e-01, 3.07532419961186465e-02},
    {-9.37273392400705951e-01, 7.03660474881080689e-02},
    {-8.48206583410427206e-01, 1.07159220467171773e-01},
    {-7.24417731360170070e-01, 1.39570677926153908e-01},
    {-5.70972172608538830e-01, 1.66269205816993781e-01},
    {-3.94151347077563385e-01, 1.86161000015561878e-01},
    {-2.01194093997434514e-01, 1.98431485327111246e-01},
    {0.00000000000000000e+00, 2.02578241925560898e-01},
    {2.01194093997434514e-01, 1.98431485327111246e-01},
    {3.94151347077563385e-01, 1.86161000015561878e-01},
    {5.70972172608538830e-01, 1.66269205816993781e-01},
    {7.24417731360170070e-01, 1.39570677926153908e-01},
    {8.48206583410427206e-01, 1.07159220467171773e-01},
    {9.37273392400705951e-01, 7.03660474881080689e-02},
    {9.87992518020485377e-01, 3.07532419961186465e-02},
}};

template <class F>
void gauss_pair(const F& f, double lo, double hi, double& g7, double& g15) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    g7 = 0.0;
    for (const auto& nw : kGauss7) g7 += nw.w * f(c + h * nw.x);
    g7 *= h;
    g15 = 0.0;
    for (const auto& nw : kGauss15) g15 += nw.w * f(c + h * nw.x);
    g15 *= h;
}

} // namespace detail

struct QuadOptions {
    double abs_tol = 1.0e-12;
    double rel_tol = 1.0e-10;
    int max_depth = 48;
    std::size_t max_intervals = 200000;
};

// Integrates f over [lo, hi]. Throws QuadratureFailure when the interval or
// depth budget runs out before the error estimate meets tolerance.
template <class F>
double integrate(const F& f, double lo, double hi, const QuadOptions& opt = {}) {
    if (!(hi > lo)) return 0.0;
    struct Seg {
        double lo, hi, tol;
        int depth;
    };
    std::size_t used = 0;
    double total = 0.0;
    // explicit stack; worst segments get split first by LIFO refinement
    std::array<Seg, 2048> stack;
    std::size_t top = 0;
    stack[top++] = {lo, hi, opt.abs_tol, 0};
    while (top) {
        Seg s = stack[--top];
        if (++used > opt.max_intervals) {
            throw QuadratureFailure("integrate: interval budget exhausted");
        }
        double g7, g15;
        detail::gauss_pair(f, s.lo, s.hi, g7, g15);
        double err = std::abs(g15 - g7);
        if (err <= s.tol || err <= opt.rel_tol * std::abs(g15)) {
            total += g15;
            continue;
        }
        if (s.depth >= opt.max_depth || top + 2 > stack.size()) {
            throw QuadratureFailure("integrate: tolerance unreachable (depth limit)");
        }
        double mid = 0.5 * (s.lo + s.hi);
        stack[top++] = {s.lo, mid, 0.5 * s.tol, s.depth + 1};
        stack[top++] = {mid, s.hi, 0.5 * s.tol, s.depth + 1};
    }
    return total;
}

} // namespace ivsfun
