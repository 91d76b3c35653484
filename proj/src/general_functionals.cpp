#include "ivsfun/general_functionals.hpp"

#include <algorithm>
#include <cmath>

#include "ivsfun/errors.hpp"
#include "ivsfun/mc_oracle.hpp"
#include "ivsfun/rng.hpp"

namespace ivsfun {

DecreasingFunctional::DecreasingFunctional(std::function<double(double)> g, bool eventually_convex)
    : g_(std::move(g)), g0_(g_(0.0)), eventually_convex_(eventually_convex) {
    if (!(g0_ > 0.0)) throw InvalidArgument("DecreasingFunctional: need g(0) > 0");
}

ConvergenceCertificate certify_convergence(const DecreasingFunctional& g, int k_probe) {
    if (k_probe < 10) throw InvalidArgument("certify_convergence: need k_probe >= 10");
    ConvergenceCertificate cert;

    // dyadic probes 1, 2, 4, ..., >= k_probe
    std::vector<double> ks{1.0}, gs{g(1.0)};
    while (ks.back() < static_cast<double>(k_probe)) {
        ks.push_back(ks.back() * 2.0);
        gs.push_back(g(ks.back()));
    }
    const std::size_t m = ks.size();
    double prev = g.g0();
    for (std::size_t i = 0; i < m; ++i) {
        if (gs[i] < 0.0) throw InvalidArgument("certify_convergence: g must be nonnegative");
        if (gs[i] > prev * (1.0 + 1.0e-12)) {
            throw InvalidArgument("certify_convergence: g must be nonincreasing on the probe grid");
        }
        prev = gs[i];
    }

    double partial = 0.0;
    for (double k = 1.0; k <= static_cast<double>(k_probe); k += 1.0) partial += g(k);
    cert.partial_sum = partial;

    // divergence witness: k g(k) not decaying over the last probes
    if (m >= 4) {
        const double t0 = ks[m - 4] * gs[m - 4];
        const double t1 = ks[m - 1] * gs[m - 1];
        if (t1 > 0.0 && t1 >= 0.5 * t0) {
            cert.kind = ConvergenceCertificate::Kind::diverges;
            cert.note = "k g(k) stays bounded away from 0 along dyadic probes";
            return cert;
        }
    }

    // condensation test: sum_{k > 2^i0} g(k) <= sum_{i >= i0} 2^i g(2^i),
    // geometric once 2 g(2k)/g(k) contracts; convexity flag vouches that the
    // sampled decay is structural rather than oscillation
    if (g.eventually_convex() && m >= 4) {
        double theta = 0.0;
        bool usable = true;
        for (std::size_t i = m - 4; i + 1 < m; ++i) {
            if (gs[i] <= 0.0) {
                usable = gs[i + 1] <= 0.0; // identically zero tail converges trivially
                theta = 0.0;
                continue;
            }
            theta = std::max(theta, 2.0 * gs[i + 1] / gs[i]);
        }
        if (usable && theta < 0.95) {
            const double u_last = ks[m - 1] * gs[m - 1];
            cert.kind = ConvergenceCertificate::Kind::converges;
            cert.tail_bound = theta >= 1.0e-300 ? u_last * theta / (1.0 - theta) : 0.0;
            cert.note = "condensation contraction " + std::to_string(theta);
            return cert;
        }
    }
    cert.kind = ConvergenceCertificate::Kind::unknown;
    cert.note = "no certified tail bound at this probe depth";
    return cert;
}

LaplaceLimitResult laplace_limit(const DecreasingFunctional& g, const IvsSpec& spec,
                                 std::complex<double> u, int K, std::size_t n_mc,
                                 std::uint64_t seed) {
    const auto cert = certify_convergence(g);
    if (cert.kind == ConvergenceCertificate::Kind::diverges) {
        throw DivergentFunctional("laplace_limit: sum g(k) diverges, the functional is infinite");
    }
    const double lambda = spec.effective_intensity();
    if (!(u.real() > -lambda / g.g0())) {
        throw InvalidArgument("laplace_limit: need Re u > -lambda~/g(0)");
    }
    if (K < 1 || n_mc < 2) throw InvalidArgument("laplace_limit: need K >= 1, n_mc >= 2");

    const AliasSampler jumps(spec.positive_jumps());
    std::complex<double> sum(0.0, 0.0);
    double sum_sq = 0.0; // |value|^2 accumulator for the spread
    for (std::size_t i = 0; i < n_mc; ++i) {
        RngStream rng(seed, i);
        std::complex<double> prod = lambda / (lambda + g.g0() * u); // k = 0 term
        double s = 0.0;
        for (int k = 1; k <= K; ++k) {
            s += static_cast<double>(jumps.draw(rng));
            prod *= lambda / (lambda + g(s) * u);
        }
        sum += prod;
        sum_sq += std::norm(prod);
    }
    const double n = static_cast<double>(n_mc);
    const std::complex<double> mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - std::norm(mean));
    return {mean, std::sqrt(var / n)};
}

double InversePowerModel::density(double x) const {
    if (!(x > 0.0)) throw InvalidArgument("inverse_power density: need x > 0");
    double v = 0.0;
    for (std::size_t i = 0; i < rate_.size(); ++i) {
        const double e = rate_[i] * x;
        if (e < 745.0) v += weight_[i] * rate_[i] * std::exp(-e);
    }
    return std::max(0.0, v);
}

double InversePowerModel::cdf(double x) const {
    if (!(x > 0.0)) throw InvalidArgument("inverse_power cdf: need x > 0");
    double v = 0.0;
    for (std::size_t i = 0; i < rate_.size(); ++i) {
        const double e = rate_[i] * x;
        v += weight_[i] * (e < 745.0 ? 1.0 - std::exp(-e) : 1.0);
    }
    return std::clamp(v, 0.0, 1.0);
}

std::complex<double> InversePowerModel::laplace(std::complex<double> u) const {
    if (!(u.real() > -lambda_eff_)) throw InvalidArgument("inverse_power laplace: Re u > -lambda~");
    std::complex<double> v(0.0, 0.0);
    for (std::size_t i = 0; i < rate_.size(); ++i) v += weight_[i] * (rate_[i] / (rate_[i] + u));
    return v;
}

double InversePowerModel::laplace_tail_bound(double u_abs) const {
    // sum_{k >= K+2} |log(1/(1 + k^{-p} u / lambda~))| <= (u/lambda~) sum k^{-p}
    double b = 0.0;
    const double r = u_abs / lambda_eff_;
    int k = K_ + 2;
    for (; k < K_ + 2 + 64; ++k) b += std::abs(std::log1p(r * std::pow(k, -p_)));
    // integral bound on the rest
    b += r * std::pow(static_cast<double>(k - 1), 1.0 - p_) / (p_ - 1.0);
    return b;
}

double InversePowerModel::mean() const {
    double v = 0.0;
    for (std::size_t i = 0; i < rate_.size(); ++i) v += weight_[i] / rate_[i];
    return v;
}

InversePowerModel build_inverse_power(const IvsSpec& spec, double p, int K, int nested_depth,
                                      double cutoff, std::size_t max_vectors) {
    if (!(p > 1.0)) throw InvalidArgument("build_inverse_power: need p > 1 for convergence");
    if (K < 1) throw InvalidArgument("build_inverse_power: need K >= 1");
    if (spec.drift() != 0.0) throw InvalidArgument("build_inverse_power: spec must be driftless");

    const JumpPmf& jumps = spec.positive_jumps();
    const double lambda = spec.effective_intensity();

    // per-level support {1..D}: cover at least 1 - 1e-3 of the jump law
    int depth = nested_depth;
    if (depth <= 0) {
        double cum = 0.0;
        depth = static_cast<int>(jumps.max_k());
        for (std::size_t k = 1; k <= jumps.max_k(); ++k) {
            cum += jumps.mass_at(k);
            if (cum >= 1.0 - 1.0e-3) {
                depth = static_cast<int>(k);
                break;
            }
        }
    }
    std::vector<double> pz(static_cast<std::size_t>(depth));
    for (int z = 1; z <= depth; ++z) pz[static_cast<std::size_t>(z - 1)] = jumps.mass_at(static_cast<std::size_t>(z));
    double pz_cover = 0.0;
    for (double v : pz) pz_cover += v;
    if (!(pz_cover >= 1.0 - 1.0e-3)) {
        throw TruncationBudgetExceeded("build_inverse_power: nested depth covers < 1 - 1e-3");
    }

    // rates indexed by the reachable partial sums s = 1 .. 1 + (K-1) depth;
    // only z_1..z_{K-1} enter the rates, the K-th jump never appears
    const int smax = 1 + (K - 1) * depth;
    std::vector<double> acc(static_cast<std::size_t>(smax) + 1, 0.0);
    std::vector<double> rate(static_cast<std::size_t>(smax) + 1);
    for (int s = 1; s <= smax; ++s) rate[static_cast<std::size_t>(s)] = lambda * std::pow(s, p);

    double kept = 0.0;
    std::size_t vectors = 0, visited = 0;

    // DFS over (z_1 .. z_{K-1}) in decreasing-probability order with the
    // product-mass cutoff; partial sums s_k = 1 + z_1 + ... + z_{k-1}
    std::vector<int> order(static_cast<std::size_t>(depth));
    for (int i = 0; i < depth; ++i) order[static_cast<std::size_t>(i)] = i + 1;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return pz[static_cast<std::size_t>(a - 1)] > pz[static_cast<std::size_t>(b - 1)];
    });
    const double pmax = pz[static_cast<std::size_t>(order[0] - 1)];

    std::vector<int> svec(static_cast<std::size_t>(K) + 1);
    svec[1] = 1;
    std::vector<double> weights(static_cast<std::size_t>(K) + 1);

    auto emit = [&](double prob) {
        // hypoexponential partial fractions w_k = prod_{k2 != k} 1/(1 - r_k/r_k2)
        for (int k1 = 1; k1 <= K; ++k1) {
            double w = 1.0;
            const double s1 = static_cast<double>(svec[static_cast<std::size_t>(k1)]);
            for (int k2 = 1; k2 <= K; ++k2) {
                if (k2 == k1) continue;
                const double s2 = static_cast<double>(svec[static_cast<std::size_t>(k2)]);
                const double f = 1.0 - std::pow(s1 / s2, p);
                if (f == 0.0) throw DegenerateRates("build_inverse_power: coincident rates");
                w /= f;
            }
            acc[static_cast<std::size_t>(svec[static_cast<std::size_t>(k1)])] += prob * w;
        }
        kept += prob;
        ++vectors;
    };

    // iterative DFS
    struct Frame {
        int level;    // which z index is being chosen (1-based)
        int next;     // position in `order`
        double prob;  // product so far
    };
    std::vector<Frame> stack{{1, 0, 1.0}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (++visited > max_vectors) {
            throw TruncationBudgetExceeded("build_inverse_power: enumeration budget exhausted");
        }
        if (f.level > K - 1) {
            emit(f.prob);
            continue;
        }
        if (f.next >= depth) continue;
        // siblings: try the next atom at this level later
        stack.push_back({f.level, f.next + 1, f.prob});
        const int z = order[static_cast<std::size_t>(f.next)];
        const double prob = f.prob * pz[static_cast<std::size_t>(z - 1)];
        // no completion of this prefix can pass the cutoff
        const double best = prob * std::pow(pmax, K - 1 - f.level);
        if (best < cutoff * std::max(kept, 1.0e-300)) continue;
        svec[static_cast<std::size_t>(f.level) + 1] = svec[static_cast<std::size_t>(f.level)] + z;
        stack.push_back({f.level + 1, 0, prob});
    }
    if (kept <= 0.0) throw TruncationBudgetExceeded("build_inverse_power: nothing enumerated");

    InversePowerModel model;
    model.p_ = p;
    model.lambda_eff_ = lambda;
    model.K_ = K;
    model.nested_depth_ = depth;
    model.kept_prob_ = kept;
    model.vector_count_ = vectors;
    for (int s = 1; s <= smax; ++s) {
        if (acc[static_cast<std::size_t>(s)] != 0.0) {
            model.rate_.push_back(rate[static_cast<std::size_t>(s)]);
            model.weight_.push_back(acc[static_cast<std::size_t>(s)] / kept);
        }
    }
    return model;
}

} // namespace ivsfun
