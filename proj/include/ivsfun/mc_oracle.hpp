#pragma once

// Monte Carlo ground truth for every functional in the library. Sampling is
// embarrassingly parallel with one RNG stream per sample index, so results
// are bit-identical for a fixed seed regardless of thread count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "ivsfun/ivs_spec.hpp"
#include "ivsfun/jump_pmf.hpp"
#include "ivsfun/rng.hpp"

namespace ivsfun {

struct McConfig {
    std::size_t n_samples = 100000;
    std::uint64_t seed = 0;
    double series_tol = 1.0e-10;     // per-sample tail truncation
    std::size_t max_terms = 1 << 20; // hard cap per sample
    bool strict = true;              // throw MaxTermsExceeded when the cap cuts a
                                     // sample before the tail bound; false keeps
                                     // the truncated partial sums
};

// O(1) draws from a JumpPmf via Vose's alias method; tail mass joins the
// largest stored atom (the overflow atom).
class AliasSampler {
public:
    explicit AliasSampler(const JumpPmf& pmf);
    // jump size k >= 1
    std::size_t draw(RngStream& rng) const;

private:
    std::vector<double> threshold_;
    std::vector<std::uint32_t> alias_;
};

// I_q = sum_k q^{S_k} E_{k+1} (driftless) or exact piecewise integration of
// q^{S_t + mu t} between jump times (drifted).
std::vector<double> sample_exp_functional(const IvsSpec& spec, double q, const McConfig& cfg);

// J_p = sum_k E_k / (S_{k-1} + 1)^p, p > 1
std::vector<double> sample_inverse_power(const IvsSpec& spec, double p, const McConfig& cfg);

// two-sided sup |empirical - model| over the sorted sample
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

} // namespace ivsfun
