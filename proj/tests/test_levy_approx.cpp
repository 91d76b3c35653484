#include <cmath>

#include <doctest.h>

#include "ivsfun/catalog.hpp"
#include "ivsfun/errors.hpp"
#include "ivsfun/levy_approx.hpp"
#include "ivsfun/mc_oracle.hpp"
#include "ivsfun/special_functions.hpp"
#include "test_support.hpp"

using namespace ivsfun;
using test_support::quad;

TEST_CASE("cpe grid: closed-form masses and total") {
    const double a = 1.0, b = 1.0, eps = 0.01;
    const auto spec = LevyMeasureSpec::compound_poisson_exponential(a, b);
    const auto grid = discretize(spec, eps);
    CHECK(grid.total == doctest::Approx(a / b * std::exp(-b * eps)).epsilon(1e-14));
    const double coef = a / b * (1.0 - std::exp(-b * eps));
    for (std::size_t k = 1; k <= grid.k_cut; k += 97) {
        CHECK(grid.masses[k - 1] ==
              doctest::Approx(coef * std::exp(-b * eps * static_cast<double>(k))).epsilon(1e-12));
    }
    double sum = 0.0;
    for (double m : grid.masses) sum += m;
    CHECK(sum <= spec.tail(eps) * (1.0 + 1e-12));
    CHECK(sum == doctest::Approx(grid.total).epsilon(1e-9));
}

TEST_CASE("gamma-subordinator grid: masses are E1 differences") {
    const auto spec = LevyMeasureSpec::tempered_stable(1.0, 1.0, 0.0);
    const double eps = 0.02;
    const auto grid = discretize(spec, eps);
    for (std::size_t k = 1; k <= 5; ++k) {
        const double expect = exponential_integral_e1(eps * static_cast<double>(k)) -
                              exponential_integral_e1(eps * static_cast<double>(k + 1));
        CHECK(grid.masses[k - 1] == doctest::Approx(expect).epsilon(1e-11));
        // independent oracle: quadrature of the Levy density over the cell
        const double direct = quad(
            [](double z) { return std::exp(-z) / z; }, eps * static_cast<double>(k),
            eps * static_cast<double>(k + 1), 1.0e-13);
        CHECK(grid.masses[k - 1] == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("rho: closed forms, decay, monotonicity") {
    const auto cpe = LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0);
    // O(sqrt(eps)) for a finite measure
    double prev_ratio = 0.0;
    for (int i = 2; i <= 10; ++i) {
        const double eps = std::pow(2.0, -i);
        const double ratio = rho(cpe, eps) / std::sqrt(eps);
        CHECK(ratio < 1.1);
        CHECK(ratio > 0.5);
        prev_ratio = ratio;
    }
    (void)prev_ratio;
    // rho -> 0 and nondecreasing in eps, infinite-activity kind included
    const auto gamma = LevyMeasureSpec::tempered_stable(1.0, 1.0, 0.0);
    double prev = 0.0;
    for (double eps : {1.0e-5, 1.0e-4, 1.0e-3, 1.0e-2, 0.1}) {
        const double r = rho(gamma, eps);
        CHECK(r > prev);
        prev = r;
    }
    CHECK(rho(gamma, 1.0e-5) < 1.0e-2);
    // tempered stable chi = 0.5 against direct (substituted) quadrature
    const auto ig = LevyMeasureSpec::tempered_stable(1.3, 0.8, 0.5);
    for (double eps : {0.01, 0.2}) {
        const double direct = quad(
            [&](double u) { return ig.tail(eps * u * u) * 2.0 * u * eps; }, 1.0e-9, 1.0, 1.0e-11);
        CHECK(rho(ig, eps) == doctest::Approx(std::sqrt(direct)).epsilon(1e-7));
    }
}

TEST_CASE("custom tails run through the quadrature path") {
    const auto cpe = LevyMeasureSpec::compound_poisson_exponential(2.0, 3.0);
    const auto custom = LevyMeasureSpec::custom([](double z) { return 2.0 / 3.0 * std::exp(-3.0 * z); });
    for (double eps : {0.01, 0.1}) {
        CHECK(rho(custom, eps) == doctest::Approx(rho(cpe, eps)).epsilon(1e-8));
        const auto g1 = discretize(custom, eps);
        const auto g2 = discretize(cpe, eps);
        CHECK(g1.total == doctest::Approx(g2.total).epsilon(1e-12));
        CHECK(g1.masses[0] == doctest::Approx(g2.masses[0]).epsilon(1e-10));
    }
    const auto bad = LevyMeasureSpec::custom([](double z) { return z; }); // increasing
    CHECK_THROWS_AS(discretize(bad, 0.1), InvalidTail);
}

TEST_CASE("limit coefficients approach (-1)^j binom(b, j) for cpe(1, b)") {
    const double eps = 1.0e-3;
    const auto grid = discretize(LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0), eps);
    ApproxOptions opt;
    opt.k_max = 10;
    const auto model = approx_density(grid, opt);
    // b = 1: coefficients 1, -1, 0, 0, ...
    CHECK(std::abs(model.coefficient(0) - 1.0) < 1.0e-2);
    CHECK(std::abs(model.coefficient(1) + 1.0) < 1.0e-2);
    for (int j = 2; j <= 10; ++j) CHECK(std::abs(model.coefficient(j)) < 1.0e-2);
}

TEST_CASE("grid laplace exponent: telescoping identity and convergence rate") {
    const auto cpe = LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0);
    for (double u : {1.0, 2.0, 3.0, 4.0}) {
        const double exact = levy_laplace_exponent(cpe, u);
        double prev_gap = 1.0e300;
        for (double eps : {4.0e-3, 2.0e-3, 1.0e-3}) {
            const auto grid = discretize(cpe, eps);
            const double approx = grid_laplace_exponent(grid, u);
            CHECK(approx <= exact * (1.0 + 1e-12)); // Psi^(eps) increases to Psi
            const double gap = exact - approx;
            CHECK(gap < 0.62 * prev_gap); // first-order in eps
            prev_gap = gap;
        }
        // at eps = 1e-3 the grid exponent is within ~eps of the exact one
        CHECK(prev_gap < 2.0 * 1.0e-3 * exact);
    }
}

TEST_CASE("moments of the discretized functional increase toward the exact ones") {
    const auto kinds = {LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0),
                        LevyMeasureSpec::tempered_stable(1.0, 1.0, 0.0)};
    for (const auto& measure : kinds) {
        for (int m : {1, 2, 3, 4}) {
            double prev = 0.0;
            double exact = 1.0;
            for (int j = 1; j <= m; ++j) exact *= static_cast<double>(j) / levy_laplace_exponent(measure, j);
            for (double eps : {0.04, 0.02, 0.01}) {
                const auto grid = discretize(measure, eps);
                double moment = 1.0;
                for (int j = 1; j <= m; ++j) {
                    moment *= static_cast<double>(j) / grid_laplace_exponent(grid, j);
                }
                CHECK(moment >= prev);        // increasing along refinement
                CHECK(moment >= exact * (1.0 - 1e-12)); // bounded below by the exact moment
                prev = moment;
            }
            // closes in on the exact value
            CHECK(std::abs(prev - exact) < 0.15 * exact);
        }
    }
}

TEST_CASE("gamma benchmark: cpe(1,1) vs the Gamma(2,1) density") {
    // unit-level version of the acceptance run at eps = 0.01 only
    const auto grid = discretize(LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0), 0.01);
    const auto model = approx_density(grid);
    CHECK(model.truncation_index() == 100);
    double sup = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double x = 0.05 + (6.0 - 0.05) * i / 200.0;
        sup = std::max(sup, std::abs(model.density(x) - x * std::exp(-x)));
    }
    CHECK(sup < 0.05);
}

TEST_CASE("identical grids have zero cdf distance") {
    const auto grid = discretize(LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0), 0.02);
    const auto m = approx_density(grid);
    std::vector<ExpFunctionalModel> models;
    models.push_back(m);
    models.push_back(m);
    models.push_back(m);
    const std::vector<double> rhos{1.0, 1.0, 1.0};
    std::vector<double> xs;
    for (int i = 1; i <= 50; ++i) xs.push_back(0.2 * i);
    const auto report = cdf_error_bound(models, rhos, xs);
    CHECK(report.sup_diffs[0] == 0.0);
    CHECK(report.sup_diffs[1] == 0.0);
}

TEST_CASE("deep infinite-activity budgets are flagged as unconverged") {
    // the eps = 4e-4 / 5000-term gamma-subordinator configuration: the
    // normalizer tail has not begun to decay there, and the evaluator must
    // say so rather than return a silently wrong curve
    const auto gamma = LevyMeasureSpec::tempered_stable(1.0, 1.0, 0.0);
    const auto grid = discretize(gamma, 4.0e-4);
    ApproxOptions opt;
    opt.k_max = 5000;
    const auto model = approx_density(grid, opt);
    CHECK(model.normalizer_tail_ratio() > 1.0e-2);
    CHECK_FALSE(model.criterion_met());
}

TEST_CASE("gamma subordinator at eps = 0.016: series matches MC of the grid process") {
    const auto gamma = LevyMeasureSpec::tempered_stable(1.0, 1.0, 0.0);
    const auto grid = discretize(gamma, 0.016);
    ApproxOptions opt;
    opt.k_max = 4000;
    opt.tail_tol = 1.0e-10;
    const auto model = approx_density(grid, opt);
    CHECK(model.normalizer_tail_ratio() < 1.0e-6);

    std::vector<double> pz(grid.masses);
    for (double& v : pz) v /= grid.total;
    const IvsSpec spec(grid.total,
                       JumpPmf(std::move(pz), 0.0, 0.0, JumpPmf::Support::truncated_infinite));
    McConfig cfg;
    cfg.n_samples = 20000;
    cfg.seed = 1616;
    auto samples = sample_exp_functional(spec, std::exp(-0.016), cfg);
    const double ks = ks_statistic(std::move(samples), [&](double x) { return model.cdf(x); });
    CHECK(ks < 0.02);
}
