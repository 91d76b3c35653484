#pragma once

// Decreasing functionals int_0^inf g(S_t) dt: convergence certification
// (the functional exists iff sum_k g(k) converges), the Laplace limit
// representation E prod_k lambda/(lambda + g(S_k) u), and the inverse-power
// case J_p with its truncated limit-series density.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ivsfun/ivs_spec.hpp"

namespace ivsfun {

struct ConvergenceCertificate {
    enum class Kind { converges, diverges, unknown };
    Kind kind = Kind::unknown;
    double partial_sum = 0.0; // sum_{k <= probe} g(k)
    double tail_bound = 0.0;  // certified bound on the rest (converges only)
    std::string note;
};

class DecreasingFunctional {
public:
    // eventually_convex enables the condensation tail bound; without it the
    // certificate can only be {diverges, unknown}
    DecreasingFunctional(std::function<double(double)> g, bool eventually_convex = false);

    double operator()(double x) const { return g_(x); }
    double g0() const { return g0_; }
    bool eventually_convex() const { return eventually_convex_; }

private:
    std::function<double(double)> g_;
    double g0_;
    bool eventually_convex_;
};

// Three-valued and conservative: {converges} only with a tail bound from the
// dyadic condensation test (requires the convexity flag), {diverges} when
// k g(k) fails to decay along the probes, {unknown} otherwise.
ConvergenceCertificate certify_convergence(const DecreasingFunctional& g, int k_probe = 4096);

struct LaplaceLimitResult {
    std::complex<double> value;
    double std_error;
};

// MC average of prod_{k=0}^{K} lambda/(lambda + g(S_k) u) over jump paths;
// deterministic per seed, needs Re u > -lambda~/g(0).
LaplaceLimitResult laplace_limit(const DecreasingFunctional& g, const IvsSpec& spec,
                                 std::complex<double> u, int K, std::size_t n_mc,
                                 std::uint64_t seed);

// Truncated limit series for J_p of an IVS: outer depth K index vectors over
// {1..nested_depth}, collapsed into a finite exponential mixture
// sum_s A_s r_s e^{-r_s x} with rates r_s = lambda~ s^p on the reachable
// partial sums s; vectors below cutoff x running mass are dropped and the
// kept mass is renormalized.
class InversePowerModel {
public:
    double p() const { return p_; }
    double lambda_eff() const { return lambda_eff_; }
    int depth() const { return K_; }
    int nested_depth() const { return nested_depth_; }
    double kept_probability() const { return kept_prob_; }
    std::size_t vector_count() const { return vector_count_; }

    double density(double x) const;
    double cdf(double x) const;
    std::complex<double> laplace(std::complex<double> u) const;
    // |sum_{k > K+1} log(lambda~/(lambda~ + k^{-p} u))|, the stopping heuristic
    double laplace_tail_bound(double u_abs) const;
    double mean() const;

private:
    friend InversePowerModel build_inverse_power(const IvsSpec&, double, int, int, double,
                                                 std::size_t);
    double p_ = 0.0;
    double lambda_eff_ = 0.0;
    int K_ = 0;
    int nested_depth_ = 0;
    double kept_prob_ = 0.0;
    std::size_t vector_count_ = 0;
    std::vector<double> rate_;   // lambda~ s^p
    std::vector<double> weight_; // A_s, sums to 1
};

InversePowerModel build_inverse_power(const IvsSpec& spec, double p, int K = 10,
                                      int nested_depth = 0 /* auto: cover 1 - 1e-3 */,
                                      double cutoff = 1.0e-10,
                                      std::size_t max_vectors = 100000000);

} // namespace ivsfun
