#include "ivsfun/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "ivsfun/errors.hpp"

namespace ivsfun {

namespace {

unsigned thread_count(std::size_t n) {
    unsigned hw = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("IVSFUN_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = static_cast<unsigned>(v);
    }
    if (hw == 0) hw = 1;
    const std::size_t per = 4096; // below this, spawning isn't worth it
    const std::size_t want = (n + per - 1) / per;
    return static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(1, want)));
}

// index-deterministic parallel map
template <class Fn>
void parallel_samples(std::size_t n, const Fn& fn) {
    const unsigned workers = thread_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([=]() {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

// q^k lookup for jump updates
std::vector<double> q_powers(double q, std::size_t max_k) {
    std::vector<double> p(max_k + 1, 1.0);
    for (std::size_t k = 1; k <= max_k; ++k) p[k] = p[k - 1] * q;
    return p;
}

} // namespace

AliasSampler::AliasSampler(const JumpPmf& pmf) {
    const JumpPmf norm = pmf.normalized();
    std::vector<double> prob(norm.masses());
    if (prob.empty()) throw InvalidArgument("AliasSampler: empty support");
    prob.back() += norm.tail_mass(); // overflow atom
    const std::size_t n = prob.size();

    threshold_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<std::uint32_t> small, large;
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = prob[i] * static_cast<double>(n);
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        small.pop_back();
        const std::uint32_t l = large.back();
        threshold_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (std::uint32_t i : large) threshold_[i] = 1.0;
    for (std::uint32_t i : small) threshold_[i] = 1.0; // rounding leftovers
}

std::size_t AliasSampler::draw(RngStream& rng) const {
    const std::size_t i = static_cast<std::size_t>(rng.next_below(threshold_.size()));
    const double u = rng.next_unit();
    return 1 + (u <= threshold_[i] ? i : alias_[i]);
}

std::vector<double> sample_exp_functional(const IvsSpec& spec, double q, const McConfig& cfg) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("sample_exp_functional: q must be in (0, 1)");
    if (cfg.n_samples < 1) throw InvalidArgument("sample_exp_functional: need n_samples >= 1");
    if (!(cfg.series_tol > 0.0 && cfg.series_tol < 1.0)) {
        throw InvalidArgument("sample_exp_functional: series_tol must be in (0, 1)");
    }

    const AliasSampler jumps(spec.positive_jumps());
    const double lambda = spec.effective_intensity();
    const double mu = spec.drift();
    const auto qpow = q_powers(q, spec.positive_jumps().max_k());

    std::vector<double> out(cfg.n_samples);
    std::atomic<bool> overflow{false};

    if (mu == 0.0) {
        // E[remainder | S_k] <= q^{S_k} E I_q; the factor 64 absorbs the
        // conditional spread so halving series_tol moves samples by < tol*value
        const double mean_bound = 64.0 / (lambda * (1.0 - spec.positive_jumps().pgf(q)));
        parallel_samples(cfg.n_samples, [&](std::size_t i) {
            RngStream rng(cfg.seed, i);
            double w = 1.0;
            double value = 0.0;
            std::size_t terms = 0;
            while (true) {
                value += w * rng.next_exponential(lambda);
                if (++terms >= cfg.max_terms) {
                    overflow = true;
                    break;
                }
                w *= qpow[jumps.draw(rng)];
                if (w * mean_bound < cfg.series_tol * value) break;
            }
            out[i] = value;
        });
    } else {
        const double lnq = std::log(q);
        const double mu_q = -lnq * mu;
        parallel_samples(cfg.n_samples, [&](std::size_t i) {
            RngStream rng(cfg.seed, i);
            double w = 1.0; // q^{S}
            double t = 0.0;
            double qmut = 1.0; // q^{mu t}
            double value = 0.0;
            std::size_t terms = 0;
            while (true) {
                t += rng.next_exponential(lambda);
                const double qmut2 = std::exp(mu * lnq * t);
                value += w * (qmut - qmut2) / mu_q;
                qmut = qmut2;
                if (++terms >= cfg.max_terms) {
                    overflow = true;
                    break;
                }
                w *= qpow[jumps.draw(rng)];
                // remaining integral <= q^{S} q^{mu t} / mu_q, pathwise
                if (w * qmut / mu_q < cfg.series_tol * value) break;
            }
            out[i] = value;
        });
    }
    if (overflow && cfg.strict) {
        throw MaxTermsExceeded("sample_exp_functional: max_terms hit before tail bound");
    }
    return out;
}

std::vector<double> sample_inverse_power(const IvsSpec& spec, double p, const McConfig& cfg) {
    if (!(p > 1.0)) throw InvalidArgument("sample_inverse_power: need p > 1");
    if (cfg.n_samples < 1) throw InvalidArgument("sample_inverse_power: need n_samples >= 1");

    const AliasSampler jumps(spec.positive_jumps());
    const double lambda = spec.effective_intensity();

    std::vector<double> out(cfg.n_samples);
    std::atomic<bool> overflow{false};
    parallel_samples(cfg.n_samples, [&](std::size_t i) {
        RngStream rng(cfg.seed, i);
        double s = 1.0; // S_{k-1} + 1
        double value = 0.0;
        std::size_t terms = 0;
        while (true) {
            value += rng.next_exponential(lambda) / std::pow(s, p);
            if (++terms >= cfg.max_terms) {
                overflow = true;
                break;
            }
            s += static_cast<double>(jumps.draw(rng));
            // E[tail] <= (1/lambda) sum_{m >= 0} (s + m)^{-p} <= s^{1-p}/(lambda (p-1)),
            // same 64x spread margin as the exponential sampler
            if (64.0 * std::pow(s, 1.0 - p) / (lambda * (p - 1.0)) < cfg.series_tol * value) break;
        }
        out[i] = value;
    });
    if (overflow && cfg.strict) {
        throw MaxTermsExceeded("sample_inverse_power: max_terms hit before tail bound");
    }
    return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw InvalidArgument("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

} // namespace ivsfun
