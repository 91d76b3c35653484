#include "ivsfun/levy_approx.hpp"

#include <algorithm>
#include <cmath>

#include "ivsfun/errors.hpp"
#include "ivsfun/quadrature.hpp"
#include "ivsfun/special_functions.hpp"

namespace ivsfun {

LevyMeasureSpec LevyMeasureSpec::compound_poisson_exponential(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("cpe: need a > 0, b > 0");
    LevyMeasureSpec s;
    s.kind_ = Kind::cpe;
    s.a_ = a;
    s.b_ = b;
    return s;
}

LevyMeasureSpec LevyMeasureSpec::tempered_stable(double a, double b, double chi) {
    if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("tempered_stable: need a > 0, b > 0");
    if (!(chi >= 0.0 && chi < 1.0)) throw InvalidArgument("tempered_stable: chi must be in [0, 1)");
    LevyMeasureSpec s;
    s.kind_ = Kind::tempered_stable;
    s.a_ = a;
    s.b_ = b;
    s.chi_ = chi;
    return s;
}

LevyMeasureSpec LevyMeasureSpec::custom(std::function<double(double)> tail) {
    LevyMeasureSpec s;
    s.kind_ = Kind::custom;
    s.tail_ = std::move(tail);
    return s;
}

double LevyMeasureSpec::tail(double z) const {
    if (!(z > 0.0)) throw InvalidArgument("LevyMeasureSpec::tail: need z > 0");
    switch (kind_) {
        case Kind::cpe:
            return a_ / b_ * std::exp(-b_ * z);
        case Kind::tempered_stable:
            return a_ * std::pow(b_, chi_) * upper_incomplete_gamma(-chi_, b_ * z);
        case Kind::custom:
            return tail_(z);
    }
    return 0.0;
}

LevyGrid discretize(const LevyMeasureSpec& spec, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("discretize: epsilon in (0, 1)");
    LevyGrid grid;
    grid.epsilon = epsilon;
    grid.total = spec.tail(epsilon);
    if (!(grid.total > 0.0) || !std::isfinite(grid.total)) {
        throw InvalidTail("discretize: tail(epsilon) must be finite and positive");
    }
    double upper = grid.total; // tail(eps k), telescoping
    for (std::size_t k = 1;; ++k) {
        const double lower = spec.tail(epsilon * static_cast<double>(k + 1));
        const double mass = upper - lower;
        if (mass < -1.0e-12 * grid.total) {
            throw InvalidTail("discretize: tail function increased between lattice points");
        }
        grid.masses.push_back(std::max(0.0, mass));
        upper = lower;
        if (lower < 1.0e-12 * grid.total) break;
        if (k > (std::size_t{1} << 24)) {
            throw TruncationBudgetExceeded("discretize: atom budget exhausted");
        }
    }
    grid.k_cut = grid.masses.size();
    grid.rho = rho(spec, epsilon);
    return grid;
}

double rho(const LevyMeasureSpec& spec, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("rho: epsilon in (0, 1)");
    switch (spec.kind()) {
        case LevyMeasureSpec::Kind::cpe:
            // int_0^eps (a/b) e^{-bz} dz
            return std::sqrt(spec.a() / (spec.b() * spec.b()) * (-std::expm1(-spec.b() * epsilon)));
        case LevyMeasureSpec::Kind::tempered_stable: {
            // int_0^eps tail = eps tail(eps) + int_0^eps z nu(dz)  (parts), and
            // int_0^eps z nu(dz) = a b^{chi-1} gamma(1-chi, b eps)
            const double part1 = epsilon * spec.tail(epsilon);
            const double part2 = spec.a() * std::pow(spec.b(), spec.chi() - 1.0) *
                                 lower_incomplete_gamma(1.0 - spec.chi(), spec.b() * epsilon);
            return std::sqrt(part1 + part2);
        }
        case LevyMeasureSpec::Kind::custom: {
            // z = eps u^2 tames an integrable singularity of the tail at 0+
            const double v = integrate(
                [&](double u) { return spec.tail(epsilon * u * u) * 2.0 * u * epsilon; }, 0.0, 1.0,
                {1.0e-14, 1.0e-9, 48, 200000});
            return std::sqrt(v);
        }
    }
    return 0.0;
}

double levy_laplace_exponent(const LevyMeasureSpec& spec, double u) {
    if (!(u >= 0.0)) throw InvalidArgument("levy_laplace_exponent: need u >= 0");
    if (u == 0.0) return 0.0;
    switch (spec.kind()) {
        case LevyMeasureSpec::Kind::cpe:
            // a u / (b (b + u))
            return spec.a() * u / (spec.b() * (spec.b() + u));
        case LevyMeasureSpec::Kind::tempered_stable: {
            const double a = spec.a(), b = spec.b(), chi = spec.chi();
            if (chi == 0.0) return a * std::log1p(u / b);
            // a Gamma(-chi) (b^chi - (b+u)^chi), via Gamma(-chi) = Gamma(1-chi)/(-chi)
            const double gneg = std::tgamma(1.0 - chi) / (-chi);
            return a * gneg * (std::pow(b, chi) - std::pow(b + u, chi));
        }
        case LevyMeasureSpec::Kind::custom: {
            // int (1 - e^{-uz}) nu(dz) = u int_0^inf e^{-uz} tail(z) dz (parts)
            const double cap = 60.0 / u;
            return u * integrate([&](double z) { return std::exp(-u * z) * spec.tail(z); },
                                 1.0e-14, cap, {1.0e-13, 1.0e-10, 48, 200000});
        }
    }
    return 0.0;
}

double grid_laplace_exponent(const LevyGrid& grid, double u) {
    if (!(u >= 0.0)) throw InvalidArgument("grid_laplace_exponent: need u >= 0");
    double acc = 0.0;
    for (std::size_t k = 0; k < grid.masses.size(); ++k) {
        acc += grid.masses[k] * -std::expm1(-u * grid.epsilon * static_cast<double>(k + 1));
    }
    return acc;
}

ExpFunctionalModel approx_density(const LevyGrid& grid, const ApproxOptions& opt) {
    if (grid.masses.empty() || !(grid.total > 0.0)) {
        throw InvalidArgument("approx_density: empty grid");
    }
    std::vector<double> pz(grid.masses.size());
    for (std::size_t k = 0; k < pz.size(); ++k) pz[k] = grid.masses[k] / grid.total;

    SeriesBuildOptions series;
    series.k_max = opt.k_max > 0 ? opt.k_max
                                 : static_cast<int>(std::ceil(1.0 / grid.epsilon));
    if (opt.threshold > 0.0) {
        series.threshold = opt.threshold;
        series.allow_cap = false;
    } else {
        // fixed-budget mode: run to k_max, report the achieved criterion
        series.threshold = 1.0e-300;
        series.allow_cap = true;
    }
    series.tail_tol = opt.tail_tol;
    if (opt.tail_tol > 0.0) {
        // tail-convergence extension needs the criterion leg satisfied first
        series.threshold = opt.threshold > 0.0 ? opt.threshold : 1.0e300;
    }
    series.validation_points = 0; // unconverged budgets are legitimate here

    const Dd q = dd_exp(Dd(-grid.epsilon));
    return build_coefficients_core(q, grid.total, pz, 0.0, series);
}

RefinementReport cdf_error_bound(std::span<const ExpFunctionalModel> models,
                                 std::span<const double> rhos, std::span<const double> x_grid) {
    if (models.size() < 3 || rhos.size() != models.size()) {
        throw InvalidArgument("cdf_error_bound: need >= 3 grids with matching rho values");
    }
    RefinementReport report;
    for (std::size_t i = 0; i + 1 < models.size(); ++i) {
        double sup = 0.0;
        for (double x : x_grid) {
            sup = std::max(sup, std::abs(models[i].cdf(x) - models[i + 1].cdf(x)));
        }
        report.sup_diffs.push_back(sup);
        report.rho_ratios.push_back(rhos[i] / rhos[i + 1]);
    }
    report.monotone = true;
    for (std::size_t i = 0; i + 1 < report.sup_diffs.size(); ++i) {
        report.emp_ratios.push_back(report.sup_diffs[i] / report.sup_diffs[i + 1]);
        if (report.sup_diffs[i + 1] >= report.sup_diffs[i]) report.monotone = false;
    }
    return report;
}

} // namespace ivsfun
