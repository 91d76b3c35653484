#pragma once

// Barycentric interpolation on Chebyshev-Lobatto nodes over [lo, hi].

#include <cmath>
#include <cstddef>
#include <vector>

namespace ivsfun {

class ChebyshevInterpolant {
public:
    ChebyshevInterpolant() = default;

    ChebyshevInterpolant(double lo, double hi, std::vector<double> values)
        : lo_(lo), hi_(hi), values_(std::move(values)) {
        const std::size_t n = values_.size() - 1;
        tnodes_.resize(values_.size());
        for (std::size_t i = 0; i <= n; ++i) {
            tnodes_[i] = -std::cos(M_PI * static_cast<double>(i) / static_cast<double>(n));
        }
    }

    // ascending nodes x_i = lo + (hi-lo)(1 - cos(i pi / n))/2, i = 0..n
    static std::vector<double> nodes(double lo, double hi, std::size_t count) {
        std::vector<double> x(count);
        const std::size_t n = count - 1;
        for (std::size_t i = 0; i < count; ++i) {
            x[i] = lo + (hi - lo) * 0.5 *
                            (1.0 - std::cos(M_PI * static_cast<double>(i) / static_cast<double>(n)));
        }
        x.front() = lo;
        x.back() = hi;
        return x;
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& values() const { return values_; }

    double operator()(double x) const {
        const std::size_t n = values_.size() - 1;
        const double t = 2.0 * (x - lo_) / (hi_ - lo_) - 1.0;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            double d = t - tnodes_[i];
            if (std::abs(d) < 1.0e-300) return values_[i];
            double w = (i % 2 == 0) ? 1.0 : -1.0;
            if (i == 0 || i == n) w *= 0.5;
            const double q = w / d;
            num += q * values_[i];
            den += q;
        }
        return num / den;
    }

private:
    double lo_ = 0.0;
    double hi_ = 1.0;
    std::vector<double> values_;
    std::vector<double> tnodes_; // -cos(i pi / n), exact weight pairing
};

} // namespace ivsfun
