#pragma once

// Double-double arithmetic (~31 significant decimal digits).
//
// The coefficient recurrences in this library produce normalizer sums that
// emerge from cancellation of terms up to ~24 orders of magnitude larger
// (discretized infinite-activity Levy measures); plain double or long double
// accumulation returns garbage there. Error-free transformations follow
// Dekker/Knuth; no FMA requirement (Veltkamp splitting).

#include <cmath>
#include <limits>

namespace ivsfun {

struct Dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr Dd() = default;
    constexpr Dd(double h) : hi(h), lo(0.0) {}
    constexpr Dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace detail {

inline Dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// requires |a| >= |b|
inline Dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline void split(double a, double& hi, double& lo) {
    constexpr double splitter = 134217729.0; // 2^27 + 1
    double t = splitter * a;
    hi = t - (t - a);
    lo = a - hi;
}

inline Dd two_prod(double a, double b) {
    double p = a * b;
    double ah, al, bh, bl;
    split(a, ah, al);
    split(b, bh, bl);
    double err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    return {p, err};
}

} // namespace detail

inline Dd operator+(Dd a, Dd b) {
    Dd s = detail::two_sum(a.hi, b.hi);
    Dd t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline Dd operator-(Dd a) { return {-a.hi, -a.lo}; }
inline Dd operator-(Dd a, Dd b) { return a + (-b); }

inline Dd operator*(Dd a, Dd b) {
    Dd p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline Dd operator/(Dd a, Dd b) {
    double q1 = a.hi / b.hi;
    Dd r = a - b * Dd(q1);
    double q2 = r.hi / b.hi;
    r = r - b * Dd(q2);
    double q3 = r.hi / b.hi;
    Dd q = detail::quick_two_sum(q1, q2);
    return q + Dd(q3);
}

inline Dd& operator+=(Dd& a, Dd b) { a = a + b; return a; }
inline Dd& operator-=(Dd& a, Dd b) { a = a - b; return a; }
inline Dd& operator*=(Dd& a, Dd b) { a = a * b; return a; }

inline bool operator<(Dd a, Dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(Dd a, Dd b) { return b < a; }

inline Dd dd_abs(Dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

// exp(x) for x.hi in roughly [-745, 709]; underflows/overflows saturate.
inline Dd dd_exp(Dd x) {
    if (x.hi <= -745.0) return Dd(0.0);
    if (x.hi >= 709.0) return Dd(std::numeric_limits<double>::infinity());

    constexpr Dd ln2{6.931471805599452862e-01, 2.319046813846299558e-17};
    double m = std::floor(x.hi / ln2.hi + 0.5);
    Dd r = x - ln2 * Dd(m);

    // scale down by 2^9, Taylor, then square 9 times
    constexpr double kscale = 512.0;
    r = r * Dd(1.0 / kscale);

    Dd term = r;
    Dd sum = r;
    for (int i = 2; i <= 20; ++i) {
        term = term * r / Dd(static_cast<double>(i));
        sum += term;
        if (std::abs(term.hi) < 1.0e-35 * std::abs(sum.hi)) break;
    }
    // sum = exp(r') - 1; square up: (1+s)^2 - 1 = s^2 + 2s
    for (int i = 0; i < 9; ++i) sum = sum * sum + Dd(2.0) * sum;
    Dd result = sum + Dd(1.0);
    return result * Dd(std::ldexp(1.0, static_cast<int>(m)));
}

inline Dd dd_log(Dd x) {
    // Newton on exp: y1 = y0 + x*exp(-y0) - 1
    double y0 = std::log(x.hi);
    Dd y(y0);
    for (int i = 0; i < 2; ++i) y = y + x * dd_exp(-y) - Dd(1.0);
    return y;
}

// x^n for integer n (binary powering)
inline Dd dd_powi(Dd x, long n) {
    if (n == 0) return Dd(1.0);
    bool inv = n < 0;
    unsigned long e = inv ? -static_cast<unsigned long>(n) : static_cast<unsigned long>(n);
    Dd acc(1.0), base = x;
    while (e) {
        if (e & 1UL) acc *= base;
        base *= base;
        e >>= 1;
    }
    return inv ? Dd(1.0) / acc : acc;
}

} // namespace ivsfun
