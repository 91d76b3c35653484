// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ivsfun/catalog.hpp"
#include "ivsfun/drifted_density.hpp"
#include "ivsfun/general_functionals.hpp"
#include "ivsfun/levy_approx.hpp"
#include "ivsfun/mc_oracle.hpp"
#include "ivsfun/quadrature.hpp"
#include "ivsfun/rng.hpp"
#include "ivsfun/series_density.hpp"
#include "../test_support.hpp"

using namespace ivsfun;

namespace {

const double kE = std::exp(1.0);
const double kQs[4] = {0.5 / kE, 1.0 / kE, 1.5 / kE, 2.0 / kE};

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// dense cdf table for fast KS against piecewise densities
std::function<double(double)> fast_drifted_cdf(const PiecewiseDensity& pd) {
    const int cells = 16384;
    const double lo = pd.breakpoints().back();
    const double hi = pd.support_end();
    auto xs = std::make_shared<std::vector<double>>(cells + 1);
    auto fs = std::make_shared<std::vector<double>>(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        (*xs)[i] = lo + (hi - lo) * i / cells;
    }
    // one quadrature per cell, accumulated
    double acc = 0.0;
    (*fs)[0] = 0.0;
    for (int i = 1; i <= cells; ++i) {
        acc += integrate([&](double x) { return pd.density(x); }, (*xs)[i - 1], (*xs)[i],
                         {1.0e-12, 1.0e-9, 32, 40000});
        (*fs)[i] = acc;
    }
    const double total = acc;
    return [xs, fs, lo, hi, total](double x) {
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        const double t = (x - lo) / (hi - lo) * static_cast<double>(xs->size() - 1);
        const int i = std::min(static_cast<int>(t), static_cast<int>(xs->size()) - 2);
        const double w = t - i;
        return ((1.0 - w) * (*fs)[i] + w * (*fs)[i + 1]) / total;
    };
}

// ---------------------------------------------------------------------------
// 1. Poisson closed form
Outcome criterion1() {
    Outcome out;
    for (double q : {0.2, 1.0 / kE, 0.6}) {
        SeriesBuildOptions opt;
        opt.threshold = 1.0e-300;
        opt.k_max = 30;
        opt.allow_cap = true;
        const auto model = build_coefficients(poisson_process(1.0), q, opt);
        double worst = 0.0;
        for (int j = 0; j <= 30; ++j) {
            const long double expect = test_support::poisson_coefficient(q, j);
            worst = std::max(worst, std::abs(static_cast<double>(
                                        (model.coefficient(j) - expect) / expect)));
        }
        out.require(worst < 1.0e-10, "coefficient mismatch " + num(worst) + " at q=" + num(q));
        const double denom_err =
            std::abs(model.denom() - static_cast<double>(test_support::q_pochhammer_inf(q)));
        out.require(denom_err < 1.0e-8, "denominator error " + num(denom_err) + " at q=" + num(q));
    }
    if (out.pass) out.detail = "c_j and (q;q)_inf match at q in {0.2, 1/e, 0.6}";
    return out;
}

// 2. Table 1 reproduction
Outcome criterion2() {
    Outcome out;
    const struct {
        const char* name;
        IvsSpec spec;
        int expect;
    } rows[] = {{"mipp", mipp_process(2, 1.0), 8},
                {"space_fractional", space_fractional_process(1.0, 0.9), 177},
                {"negative_binomial", negative_binomial_process(2.0, 0.5), 8}};
    std::string got;
    for (const auto& row : rows) {
        int k = 0;
        for (double q : kQs) {
            k = std::max(k, build_coefficients(row.spec, q).truncation_index());
        }
        out.require(k == row.expect, std::string(row.name) + " K=" + std::to_string(k) +
                                         " expected " + std::to_string(row.expect));
        got += (got.empty() ? "" : ", ") + std::string(row.name) + " K=" + std::to_string(k);
    }
    if (out.pass) out.detail = got;
    return out;
}

// 3. Normalization and moments
Outcome criterion3() {
    Outcome out;
    const struct {
        const char* name;
        IvsSpec spec;
    } rows[] = {{"mipp", mipp_process(2, 1.0)},
                {"space_fractional", space_fractional_process(1.0, 0.9)},
                {"negative_binomial", negative_binomial_process(2.0, 0.5)}};
    for (const auto& row : rows) {
        for (double q : kQs) {
            const auto model = build_coefficients(row.spec, q, {1.0e-8, 10000});
            const double upper = model.quantile(1.0 - 1.0e-9);
            const double mass = integrate([&](double x) { return model.density(x); }, 1.0e-13,
                                          upper, {1.0e-10, 1.0e-9, 48, 400000});
            out.require(std::abs(mass - 1.0) < 1.0e-6, std::string(row.name) + " q=" + num(q) +
                                                           " mass " + num(mass));
            for (int m = 1; m <= 4; ++m) {
                const double quad_m = integrate(
                    [&](double x) { return std::pow(x, m) * model.density(x); }, 1.0e-13,
                    model.quantile(1.0 - 1.0e-11), {1.0e-11, 1.0e-9, 48, 400000});
                const double exact = exp_functional_moment(row.spec, q, m);
                out.require(std::abs(quad_m - exact) < 1.0e-4 * exact,
                            std::string(row.name) + " q=" + num(q) + " m=" +
                                std::to_string(m) + " rel " + num((quad_m - exact) / exact));
            }
        }
    }
    if (out.pass) out.detail = "integral 1 +- 1e-6 and moments m=1..4 to 1e-4, 3 processes x 4 q";
    return out;
}

// 4. Drifted closed-form oracle and Table 2
Outcome criterion4() {
    Outcome out;
    {
        const auto pd = build_piecewise(poisson_process(1.0, 1.0), 1.0 / kE);
        double h0_err = 0.0, h1_err = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double x0 = 0.01 + 0.97 * i / 19.0;
            h0_err = std::max(h0_err, std::abs(pd.basis(0, x0) - 1.0));
            const double x1 = 1.0e-3 + (1.0 / kE - 2.0e-3) * i / 19.0;
            const double expect =
                -kE * std::log(1.0 - x1) + 1.0 + kE * (std::log(kE - 1.0) - 1.0);
            h1_err = std::max(h1_err, std::abs(pd.basis(1, x1) - expect));
        }
        out.require(h0_err < 1.0e-8, "h0 error " + num(h0_err));
        out.require(h1_err < 1.0e-8, "h1 error " + num(h1_err));
    }
    {
        const auto pd = build_piecewise(poisson_process(1.0, 2.0), 1.0 / kE);
        double err = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double x = 0.01 + (0.49 - 0.01) * i / 19.0;
            err = std::max(err, std::abs(pd.basis(0, x) - 1.0 / std::sqrt(1.0 - 2.0 * x)));
        }
        out.require(err < 1.0e-8, "mu=2 h0 error " + num(err));
    }
    int k_poisson = 0, k_mipp = 0;
    for (double mu : {1.0 / 3.0, 0.5, 1.0, 2.0}) {
        k_poisson = std::max(
            k_poisson, build_piecewise(poisson_process(1.0, mu), 1.0 / kE).truncation_index());
        k_mipp = std::max(k_mipp,
                          build_piecewise(mipp_process(2, 1.0, mu), 1.0 / kE).truncation_index());
    }
    out.require(k_poisson == 4, "table 2 Poisson K=" + std::to_string(k_poisson));
    out.require(k_mipp == 5, "table 2 MIPP K=" + std::to_string(k_mipp));
    if (out.pass) out.detail = "h0/h1 oracles to 1e-8; Table 2 K = 4 (Poisson), 5 (MIPP)";
    return out;
}

// 5. Oracle equivalence
Outcome criterion5() {
    Outcome out;
    std::string got;
    McConfig cfg;
    cfg.n_samples = 100000;

    const struct {
        const char* name;
        IvsSpec spec;
    } driftless[] = {{"mipp", mipp_process(2, 1.0)},
                     {"space_fractional", space_fractional_process(1.0, 0.9)},
                     {"negative_binomial", negative_binomial_process(2.0, 0.5)}};
    cfg.seed = 1001;
    for (const auto& row : driftless) {
        const auto model = build_coefficients(row.spec, 1.0 / kE, {1.0e-6, 10000});
        auto samples = sample_exp_functional(row.spec, 1.0 / kE, cfg);
        const double ks = ks_statistic(std::move(samples), [&](double x) { return model.cdf(x); });
        out.require(ks < 0.01, std::string(row.name) + " driftless KS " + num(ks));
        got += (got.empty() ? "" : ", ") + std::string(row.name) + " " + num(ks);
        ++cfg.seed;
    }
    for (const auto& [name, spec] :
         {std::pair{"poisson mu=1", poisson_process(1.0, 1.0)},
          std::pair{"mipp mu=1", mipp_process(2, 1.0, 1.0)}}) {
        const auto pd = build_piecewise(spec, 1.0 / kE);
        auto samples = sample_exp_functional(spec, 1.0 / kE, cfg);
        const double ks = ks_statistic(std::move(samples), fast_drifted_cdf(pd));
        out.require(ks < 0.015, std::string(name) + " drifted KS " + num(ks));
        got += ", " + std::string(name) + " " + num(ks);
        ++cfg.seed;
    }
    const IvsSpec mipp = mipp_process(2, 1.0);
    for (double p : {2.0, 3.0, 4.0, 5.0}) {
        const auto model = build_inverse_power(mipp, p, 10, 5);
        auto samples = sample_inverse_power(mipp, p, cfg);
        const double ks = ks_statistic(std::move(samples), [&](double x) { return model.cdf(x); });
        out.require(ks < 0.02, "inverse-power p=" + num(p) + " KS " + num(ks));
        got += ", J_p p=" + num(p) + " " + num(ks);
        ++cfg.seed;
    }
    out.detail = got;
    return out;
}

// 6. Gamma benchmark (compound Poisson-exponential, Appendix Case 1)
Outcome criterion6() {
    Outcome out;
    const auto measure = LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0);
    double prev = 1.0e300;
    std::string got;
    for (double eps : {0.02, 0.01, 0.005}) {
        const auto grid = discretize(measure, eps);
        const auto model = approx_density(grid); // budget = ceil(1/eps)
        double sup = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double x = 0.05 + (6.0 - 0.05) * i / 400.0;
            sup = std::max(sup, std::abs(model.density(x) - x * std::exp(-x)));
        }
        if (eps == 0.01) {
            out.require(sup < 0.05, "sup error " + num(sup) + " at eps=0.01");
        }
        out.require(sup < prev, "error not decreasing at eps=" + num(eps));
        prev = sup;
        got += (got.empty() ? "sup err " : ", ") + num(sup);
    }
    {
        const auto grid = discretize(measure, 1.0e-3);
        ApproxOptions opt;
        opt.k_max = 10;
        const auto model = approx_density(grid, opt);
        double worst = std::abs(model.coefficient(0) - 1.0);
        worst = std::max(worst, std::abs(model.coefficient(1) + 1.0));
        for (int j = 2; j <= 10; ++j) worst = std::max(worst, std::abs(model.coefficient(j)));
        out.require(worst < 1.0e-2, "limit coefficient error " + num(worst));
        got += ", limit coeff err " + num(worst);
    }
    out.detail = got;
    return out;
}

// 7. Convergence-rate property
Outcome criterion7() {
    Outcome out;
    std::string got;
    const struct {
        const char* name;
        LevyMeasureSpec measure;
        double eps0;
        ApproxOptions opt;
    } rows[] = {
        {"cpe", LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0), 0.04, {}},
        {"gamma", LevyMeasureSpec::tempered_stable(1.0, 1.0, 0.0), 0.032,
         {6000, 0.0, 1.0e-10}},
    };
    for (const auto& row : rows) {
        std::vector<ExpFunctionalModel> models;
        std::vector<double> rhos;
        for (double eps : {row.eps0, row.eps0 / 2.0, row.eps0 / 4.0}) {
            const auto grid = discretize(row.measure, eps);
            models.push_back(approx_density(grid, row.opt));
            rhos.push_back(grid.rho);
        }
        std::vector<double> xs;
        for (int i = 1; i <= 160; ++i) xs.push_back(0.02 + (10.0 - 0.02) * i / 160.0);
        const auto report = cdf_error_bound(models, rhos, xs);
        out.require(report.monotone, std::string(row.name) + " refinement not monotone");
        const double ratio = report.emp_ratios[0] / report.rho_ratios[0];
        out.require(ratio < 4.0 && ratio > 0.25,
                    std::string(row.name) + " ratio/rho-ratio " + num(ratio));
        got += (got.empty() ? "" : "; ") + std::string(row.name) + " sup diffs " +
               num(report.sup_diffs[0]) + " -> " + num(report.sup_diffs[1]) + ", ratio vs rho " +
               num(ratio);
    }
    out.detail = got;
    return out;
}

// 8. Hypoexponential unit mass over random index vectors
Outcome criterion8() {
    Outcome out;
    RngStream rng(271828, 0);
    const double lambda = 1.0 - std::exp(-1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const double p = 2.0 + static_cast<double>(rng.next_below(4));
        const int K = 2 + static_cast<int>(rng.next_below(9));
        std::vector<double> rates;
        double s = 1.0;
        for (int k = 0; k < K; ++k) {
            rates.push_back(lambda * std::pow(s, p));
            s += 1.0 + static_cast<double>(rng.next_below(5));
        }
        std::vector<double> w(rates.size(), 1.0);
        for (std::size_t i = 0; i < rates.size(); ++i) {
            for (std::size_t j = 0; j < rates.size(); ++j) {
                if (i != j) w[i] /= (1.0 - rates[i] / rates[j]);
            }
        }
        const double mass = integrate(
            [&](double x) {
                double f = 0.0;
                for (std::size_t i = 0; i < rates.size(); ++i) {
                    const double e = rates[i] * x;
                    if (e < 700.0) f += w[i] * rates[i] * std::exp(-e);
                }
                return f;
            },
            1.0e-13, 40.0 / rates.front(), {1.0e-12, 1.0e-11, 48, 400000});
        worst = std::max(worst, std::abs(mass - 1.0));
    }
    out.require(worst < 1.0e-8, "worst |mass - 1| = " + num(worst));
    if (out.pass) out.detail = "50 random index vectors, worst |mass - 1| = " + num(worst);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    const struct {
        int id;
        const char* name;
        Outcome (*run)();
    } criteria[] = {
        {1, "Poisson closed form", criterion1},
        {2, "Table 1 truncation thresholds", criterion2},
        {3, "normalization and moments", criterion3},
        {4, "drifted closed forms and Table 2", criterion4},
        {5, "Monte Carlo oracle equivalence", criterion5},
        {6, "Gamma(2,1) benchmark", criterion6},
        {7, "refinement convergence rate", criterion7},
        {8, "hypoexponential unit mass", criterion8},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        if (argc > 1) {
            bool selected = false;
            for (int i = 1; i < argc; ++i) {
                if (std::atoi(argv[i]) == c.id) selected = true;
            }
            if (!selected) continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %d (%s): %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", c.id,
                    c.name, out.detail.c_str(), secs);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures;
}
