#pragma once

// Drifted exponential functional I_q = int_0^inf q^{S_t + mu t} dt, mu > 0.
// The density has bounded support (0, 1/mu_q], mu_q = (-log q) mu, and equals
// h_{q,j}(x)/C on (q^{j+1}/mu_q, q^j/mu_q], where the basis functions obey
//
//   h_{q,0}(x) = (1 - mu_q x)^{a/mu_q - 1},
//   h_{q,j}(x) = h_{q,0}(x) [ (1-q^j)^{1 - a/mu_q} h_{q,j-1}(q^j/mu_q)
//       - lambda sum_{k=1}^{j} q^{-k} P{Z=k}
//           int_x^{q^j/mu_q} (1 - mu_q y)^{-a/mu_q} h_{q,j-k}(q^{-k} y) dy ].
//
// Bases are tabulated at Chebyshev-Lobatto nodes on their full domain
// [0, q^j/mu_q] (later bases sample earlier ones at shifted arguments) and
// interpolated barycentrically; h_0 is evaluated in closed form. The index
// threshold K is the first j whose active-interval mass falls below mass_tol
// of the running total; the density is set to 0 on (0, q^{K+1}/mu_q].

#include <cstddef>
#include <string>
#include <vector>

#include "ivsfun/chebyshev.hpp"
#include "ivsfun/ivs_spec.hpp"

namespace ivsfun {

struct DriftedBuildOptions {
    double mass_tol = 1.0e-3;       // interval-mass stop criterion
    double quad_tol = 1.0e-9;       // quadrature tolerance per basis
    double continuity_tol = 1.0e-6; // breakpoint matching check
    std::size_t nodes = 129;        // Chebyshev nodes per basis
    int k_cap = 64;
};

class PiecewiseDensity {
public:
    double q() const { return q_; }
    double mu_q() const { return mu_q_; }
    double scale_a() const { return a_; }
    // support supremum 1/mu_q
    double support_end() const { return breakpoints_.front(); }
    int truncation_index() const { return K_; }
    // a_j = q^j / mu_q, j = 0..K+1
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    double normalizer() const { return C_; }
    // mass of h_K's active interval relative to the kept total
    double truncated_mass_ratio() const { return truncated_ratio_; }
    double interval_mass(int j) const { return interval_mass_[static_cast<std::size_t>(j)]; }

    // unnormalized basis h_{q,j}(x), x <= a_j (closed form for j = 0)
    double basis(int j, double x) const;

    double density(double x) const;
    double cdf(double x) const;

    // JSON text with breakpoints, node grids, basis values, C (fixture storage)
    std::string serialize() const;

private:
    friend PiecewiseDensity build_piecewise(const IvsSpec&, double, const DriftedBuildOptions&);

    double q_ = 0.0;
    double mu_q_ = 0.0;
    double a_ = 0.0;
    double beta_ = 0.0; // a / mu_q
    int K_ = 0;
    std::vector<double> breakpoints_;
    std::vector<ChebyshevInterpolant> bases_; // j = 1..K at [j-1]
    std::vector<double> interval_mass_;
    double C_ = 0.0;
    double truncated_ratio_ = 0.0;
    double quad_tol_ = 1.0e-9;
};

PiecewiseDensity build_piecewise(const IvsSpec& spec, double q,
                                 const DriftedBuildOptions& opt = {});

} // namespace ivsfun
