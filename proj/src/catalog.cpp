#include "ivsfun/catalog.hpp"

#include <cmath>
#include <vector>

#include "ivsfun/errors.hpp"

namespace ivsfun {

namespace {

// one level of the MIPP mixing recurrence, k = 0, 1, ... until coverage
std::vector<long double> mix_level(const std::vector<long double>& prev, double lambda, double tol) {
    std::vector<long double> next;
    long double cum = 0.0L;
    for (int k = 0; cum < 1.0L - static_cast<long double>(tol); ++k) {
        if (k > 4096) throw MaxTermsExceeded("mipp_jumps: level did not reach coverage");
        // sum_j j^k e^{-lambda j} prev[j]; superexponential decay in j
        long double sum = (k == 0) ? prev[0] : 0.0L;
        int below = 0;
        for (std::size_t j = 1; j < prev.size(); ++j) {
            long double t = std::exp(static_cast<long double>(k) * std::log(static_cast<long double>(j)) -
                                     static_cast<long double>(lambda) * static_cast<long double>(j));
            t *= prev[j];
            sum += t;
            if (t < 1.0e-16L * sum) {
                if (++below >= 3) break;
            } else {
                below = 0;
            }
        }
        // lambda^k / k! prefactor, iteratively
        long double pref = 1.0L;
        for (int i = 1; i <= k; ++i) pref *= static_cast<long double>(lambda) / i;
        next.push_back(pref * sum);
        cum += next.back();
    }
    return next;
}

JumpPmf pmf_from_levels(const std::vector<long double>& level) {
    std::vector<double> masses(level.size() > 1 ? level.size() - 1 : 0);
    long double total = 0.0L;
    for (long double v : level) total += v;
    for (std::size_t i = 1; i < level.size(); ++i) masses[i - 1] = static_cast<double>(level[i]);
    double zero = static_cast<double>(level[0]);
    double tail = static_cast<double>(1.0L - total);
    if (tail < 0.0) tail = 0.0;
    return JumpPmf(std::move(masses), zero, tail, JumpPmf::Support::truncated_infinite);
}

} // namespace

JumpPmf poisson_jumps() {
    return JumpPmf({1.0}, 0.0, 0.0, JumpPmf::Support::finite);
}

JumpPmf mipp_jumps(int n, double lambda, double tol) {
    if (n < 2) throw InvalidArgument("mipp_jumps: need n >= 2");
    if (!(lambda > 0.0)) throw InvalidArgument("mipp_jumps: need lambda > 0");
    if (!(tol > 0.0 && tol < 1.0)) throw InvalidArgument("mipp_jumps: tol must be in (0, 1)");

    // level 1: Poisson(lambda)
    std::vector<long double> level;
    long double p = std::exp(static_cast<long double>(-lambda));
    long double cum = 0.0L;
    for (int k = 0; cum < 1.0L - static_cast<long double>(tol); ++k) {
        if (k > 4096) throw MaxTermsExceeded("mipp_jumps: Poisson base did not reach coverage");
        level.push_back(p);
        cum += p;
        p *= static_cast<long double>(lambda) / (k + 1);
    }
    for (int it = 0; it < n - 2; ++it) level = mix_level(level, lambda, tol);
    return pmf_from_levels(level);
}

JumpPmf space_fractional_jumps(double alpha, double tail_tol, std::size_t max_atoms) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("space_fractional_jumps: alpha must be in (0, 1)");
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw InvalidArgument("space_fractional_jumps: tail_tol in (0, 1)");
    std::vector<double> masses;
    masses.reserve(1024);
    long double pk = alpha; // k = 1: alpha Gamma(1-alpha)/Gamma(1-alpha)
    long double cum = 0.0L;
    for (std::size_t k = 1; k <= max_atoms; ++k) {
        masses.push_back(static_cast<double>(pk));
        cum += pk;
        if (1.0L - cum < static_cast<long double>(tail_tol)) break;
        pk *= (static_cast<long double>(k) - alpha) / (k + 1);
    }
    double tail = static_cast<double>(1.0L - cum);
    if (tail < 0.0) tail = 0.0;
    return JumpPmf(std::move(masses), 0.0, tail, JumpPmf::Support::truncated_infinite);
}

JumpPmf negative_binomial_jumps(double p0, double tail_tol) {
    if (!(p0 > 0.0 && p0 < 1.0)) throw InvalidArgument("negative_binomial_jumps: p0 must be in (0, 1)");
    const double c = -1.0 / std::log1p(-p0);
    std::vector<double> masses;
    long double cum = 0.0L;
    long double p0k = 1.0L;
    for (std::size_t k = 1; k <= (std::size_t{1} << 17); ++k) {
        p0k *= p0;
        masses.push_back(static_cast<double>(c * p0k / static_cast<long double>(k)));
        cum += masses.back();
        if (1.0L - cum < static_cast<long double>(tail_tol)) break;
    }
    double tail = static_cast<double>(1.0L - cum);
    if (tail < 0.0) tail = 0.0;
    return JumpPmf(std::move(masses), 0.0, tail, JumpPmf::Support::truncated_infinite);
}

IvsSpec poisson_process(double lambda, double drift) {
    return IvsSpec(lambda, poisson_jumps(), drift);
}

IvsSpec mipp_process(int n, double lambda, double drift, double tol) {
    return IvsSpec(lambda, mipp_jumps(n, lambda, tol), drift);
}

IvsSpec space_fractional_process(double lambda, double alpha, double drift) {
    return IvsSpec(std::pow(lambda, alpha), space_fractional_jumps(alpha), drift);
}

IvsSpec negative_binomial_process(double r, double p0, double drift) {
    if (!(r > 0.0)) throw InvalidArgument("negative_binomial_process: need r > 0");
    return IvsSpec(-r * std::log1p(-p0), negative_binomial_jumps(p0), drift);
}

} // namespace ivsfun
