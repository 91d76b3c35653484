#include "ivsfun/special_functions.hpp"

#include <cmath>
#include <limits>

#include "ivsfun/errors.hpp"

namespace ivsfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008;

// Lentz continued fraction for Gamma(s, y), reliable for y >= 1.
double gamma_upper_cf(double s, double y) {
    constexpr double tiny = 1.0e-300;
    constexpr double eps = 1.0e-17;
    double b = y + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 512; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) {
            return std::exp(-y + s * std::log(y)) * h;
        }
    }
    throw QuadratureFailure("upper_incomplete_gamma: continued fraction stalled");
}

// lower series in long double; the s -> 0 recurrence below amplifies by 1/|s|
long double gamma_lower_series(long double s, long double y) {
    long double term = 1.0L / s;
    long double sum = term;
    for (int n = 1; n <= 512; ++n) {
        term *= y / (s + n);
        sum += term;
        if (std::abs(static_cast<double>(term)) < 1.0e-19 * std::abs(static_cast<double>(sum))) {
            return sum * std::exp(static_cast<long double>(-y + s * std::log(y)));
        }
    }
    throw QuadratureFailure("lower_incomplete_gamma: series stalled");
}

} // namespace

double lower_incomplete_gamma(double s, double y) {
    if (!(s > 0.0) || !(y >= 0.0)) throw InvalidArgument("lower_incomplete_gamma: need s > 0, y >= 0");
    if (y == 0.0) return 0.0;
    return static_cast<double>(gamma_lower_series(s, y));
}

double exponential_integral_e1(double y) {
    if (!(y > 0.0)) throw InvalidArgument("exponential_integral_e1: need y > 0");
    if (y >= 1.0) return gamma_upper_cf(0.0, y);
    // E1(y) = -gamma - ln y + sum_{n>=1} (-1)^{n+1} y^n / (n n!)
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n <= 64; ++n) {
        term *= -y / static_cast<double>(n);
        sum -= term / static_cast<double>(n);
        if (std::abs(term) < 1.0e-18 * (std::abs(sum) + 1.0)) break;
    }
    return -kEulerGamma - std::log(y) + sum;
}

double upper_incomplete_gamma(double s, double y) {
    if (!(y > 0.0)) throw InvalidArgument("upper_incomplete_gamma: need y > 0");
    if (!(s > -1.0 && s <= 0.0)) throw InvalidArgument("upper_incomplete_gamma: s must be in (-1, 0]");
    if (s == 0.0) return exponential_integral_e1(y);
    if (y >= 1.0) return gamma_upper_cf(s, y);
    // Gamma(s, y) = (y^s e^{-y} - Gamma(s+1, y)) / (-s), with s+1 in (0, 1).
    long double sl = s;
    long double yl = y;
    long double upper1 = std::tgammal(sl + 1.0L) - gamma_lower_series(sl + 1.0L, yl);
    long double head = std::exp(sl * std::log(yl) - yl);
    return static_cast<double>((head - upper1) / (-sl));
}

} // namespace ivsfun
