#pragma once

// Driftless exponential functional I_q = int_0^inf q^{S_t} dt: the
// generalized Dirichlet series density
//
//   phi_q(x) = a / (sum_j c_j q^j) * sum_j c_j exp(-a q^{-j} x),
//   a = lambda P{Z >= 1},
//   c_0 = 1,  c_j = sum_{k=1}^{j} q^{-k} P{Z=k} c_{j-k} / ((1-q^{-j}) P{Z>=1}),
//
// with the truncation criterion |a sum_j c_j / sum_j c_j q^j| < threshold.
// All coefficient arithmetic and series evaluation run in double-double: the
// Levy-discretization regime (q -> 1) cancels up to ~24 decimal digits.

#include <atomic>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ivsfun/dd.hpp"
#include "ivsfun/ivs_spec.hpp"

namespace ivsfun {

struct SeriesBuildOptions {
    double threshold = 1.0e-3; // criterion bound
    int k_max = 10000;         // hard cap on the truncation index
    bool allow_cap = false;    // accept K = k_max with the criterion unmet
                               // (fixed-budget builds; default errors out)
    // > 0: after the stop index, keep extending until |c_j q^j| stays below
    // tail_tol * |sum c_j q^j| for 32 consecutive terms (Levy refinement runs)
    double tail_tol = 0.0;
    int validation_points = 257; // build-time sign check grid; 0 disables
};

class ExpFunctionalModel {
public:
    double q() const { return q_; }
    double scale_a() const { return static_cast<double>(a_); }
    // truncation index: coefficients 0..K are summed by the evaluators
    int truncation_index() const { return static_cast<int>(coeff_.size()) - 1; }
    bool criterion_met() const { return criterion_met_; }
    double criterion_value() const { return criterion_; }
    double denom() const { return static_cast<double>(denom_); }
    double coefficient(int j) const { return static_cast<double>(coeff_[j]); }
    double coefficient_q(int j) const { return static_cast<double>(coeff_q_[j]); }

    // largest |c_j q^j| over the last 10% of terms, relative to |denom|;
    // O(1) when the series has truly converged, O(1e-2)+ flags an
    // unconverged normalizer (deep infinite-activity discretizations)
    double normalizer_tail_ratio() const { return tail_ratio_; }

    double density(double x) const;     // clamped at 0
    double density_raw(double x) const; // unclamped
    // first-omitted-term magnitude at x (asymptotic remainder heuristic)
    double density_error_estimate(double x) const;
    double cdf(double x) const;
    std::complex<double> laplace(std::complex<double> u) const;
    double mean() const { return mean_; }
    // smallest x with cdf(x) >= p, by bisection
    double quantile(double p) const;

    std::uint64_t clamp_count() const { return clamp_count_.load(std::memory_order_relaxed); }

    // JSON text with q, scale_a, coefficients, K, criterion_value (fixture storage)
    std::string serialize() const;

    ExpFunctionalModel(const ExpFunctionalModel& other);
    ExpFunctionalModel& operator=(const ExpFunctionalModel&) = delete;
    ExpFunctionalModel(ExpFunctionalModel&&) = default;

private:
    ExpFunctionalModel() = default;
    friend ExpFunctionalModel build_coefficients_core(Dd q, double scale_a,
                                                      const std::vector<double>& masses,
                                                      double tail_mass,
                                                      const SeriesBuildOptions& opt);

    Dd density_sum(Dd x) const; // sum c_j exp(-a q^{-j} x)

    double q_ = 0.0;
    Dd qdd_;
    Dd a_;
    std::vector<Dd> coeff_;   // c_j
    std::vector<Dd> coeff_q_; // c_j q^j
    std::vector<Dd> rate_;    // a q^{-j}, stopped at the overflow guard
    Dd denom_;
    Dd c_probe_; // c_{K+1}, feeds the remainder estimate
    bool criterion_met_ = false;
    double criterion_ = 0.0;
    double tail_ratio_ = 0.0;
    double mean_ = 0.0;
    mutable std::atomic<std::uint64_t> clamp_count_{0};
};

// spec.drift() must be 0; jump law is taken from spec.positive_jumps()
ExpFunctionalModel build_coefficients(const IvsSpec& spec, double q,
                                      const SeriesBuildOptions& opt = {});

// Levy path: q supplied in double-double (q = e^{-eps}); masses must be the
// normalized positive-jump law, scale_a the effective intensity.
ExpFunctionalModel build_coefficients_core(Dd q, double scale_a,
                                           const std::vector<double>& masses, double tail_mass,
                                           const SeriesBuildOptions& opt);

// E I_q = 1 / (lambda (1 - E q^{Z_1}))
double exp_functional_mean(const IvsSpec& spec, double q);

// E I_q^m = m! / prod_{j=1}^{m} lambda (1 - E q^{j Z_1}); m = 0 gives 1
double exp_functional_moment(const IvsSpec& spec, double q, int m);

} // namespace ivsfun
