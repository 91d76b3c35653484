#include "ivsfun/drifted_density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ivsfun/errors.hpp"
#include "ivsfun/quadrature.hpp"

namespace ivsfun {

// Internally the tabulated quantity is the ratio g_j = h_j / h_0, which stays
// O(1) across the whole parameter range (h_0 and the convolution kernel span
// hundreds of orders of magnitude when a/mu_q is large, but their product
// does not). The recurrence becomes
//
//   g_0 = 1,
//   g_j(x) = g_{j-1}(a_j)
//       - lambda sum_k q^{-k} P{Z=k} int_x^{a_j} W_k(y) g_{j-k}(q^{-k} y) dy,
//   W_k(y) = (1 - mu_q y)^{-beta} (1 - mu_q q^{-k} y)^{beta - 1},
//
// where the boundary factor (1-q^j)^{1-beta} h_{q,j-1}(a_j) collapsed into
// g_{j-1}(a_j) because h_0(a_j) = (1-q^j)^{beta-1}. Breakpoint continuity
// h_j(a_j) = h_{j-1}(a_j) is exact by construction.

namespace {

struct Kernel {
    double mu_q, beta, qinv_k;
    double operator()(double y) const {
        const double t1 = std::log1p(-mu_q * y);
        const double arg = -mu_q * qinv_k * y;
        if (arg <= -1.0) return beta > 1.0 ? 0.0 : (beta == 1.0 ? std::exp(-beta * t1) : HUGE_VAL);
        return std::exp(-beta * t1 + (beta - 1.0) * std::log1p(arg));
    }
};

} // namespace

double PiecewiseDensity::basis(int j, double x) const {
    const double aj = breakpoints_[static_cast<std::size_t>(j)];
    if (!(x <= aj)) throw InvalidArgument("basis: x beyond the basis domain");
    double h0;
    if (beta_ == 1.0) {
        h0 = 1.0;
    } else {
        const double t = 1.0 - mu_q_ * x;
        h0 = t > 0.0 ? std::exp((beta_ - 1.0) * std::log(t)) : (beta_ > 1.0 ? 0.0 : HUGE_VAL);
    }
    if (j == 0) return h0;
    return h0 * bases_[static_cast<std::size_t>(j - 1)](x);
}

double PiecewiseDensity::density(double x) const {
    if (!(x > 0.0)) throw InvalidArgument("density: need x > 0");
    if (x > breakpoints_.front() || x <= breakpoints_.back()) return 0.0;
    // x in (a_{j+1}, a_j]
    int j = 0;
    while (x <= breakpoints_[static_cast<std::size_t>(j + 1)]) ++j;
    return std::max(0.0, basis(j, x) / C_);
}

double PiecewiseDensity::cdf(double x) const {
    if (!(x > 0.0)) throw InvalidArgument("cdf: need x > 0");
    if (x >= breakpoints_.front()) return 1.0;
    if (x <= breakpoints_.back()) return 0.0;
    int j = 0;
    while (x <= breakpoints_[static_cast<std::size_t>(j + 1)]) ++j;
    double above = 0.0; // int_x^{a_j} h_j
    if (j == 0) {
        above = std::exp(beta_ * std::log1p(-mu_q_ * x)) / (beta_ * mu_q_);
    } else {
        const auto& g = bases_[static_cast<std::size_t>(j - 1)];
        const double mu_q = mu_q_;
        const double beta = beta_;
        above = integrate(
            [&](double y) { return std::exp((beta - 1.0) * std::log1p(-mu_q * y)) * g(y); }, x,
            breakpoints_[static_cast<std::size_t>(j)],
            {quad_tol_, quad_tol_, 48, 200000});
    }
    for (int i = 0; i < j; ++i) above += interval_mass_[static_cast<std::size_t>(i)];
    return std::clamp(1.0 - above / C_, 0.0, 1.0);
}

std::string PiecewiseDensity::serialize() const {
    char buf[64];
    std::string out;
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out += buf;
    };
    out = "{\"q\":";
    num(q_);
    out += ",\"mu_q\":";
    num(mu_q_);
    out += ",\"scale_a\":";
    num(a_);
    out += ",\"K\":" + std::to_string(K_) + ",\"C\":";
    num(C_);
    out += ",\"breakpoints\":[";
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (i) out += ',';
        num(breakpoints_[i]);
    }
    out += "],\"bases\":[";
    for (std::size_t b = 0; b < bases_.size(); ++b) {
        if (b) out += ',';
        out += "{\"hi\":";
        num(bases_[b].hi());
        out += ",\"ratio_values\":[";
        const auto& vals = bases_[b].values();
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) out += ',';
            num(vals[i]);
        }
        out += "]}";
    }
    out += "]}";
    return out;
}

PiecewiseDensity build_piecewise(const IvsSpec& spec, double q, const DriftedBuildOptions& opt) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("build_piecewise: q must be in (0, 1)");
    if (!(spec.drift() > 0.0)) throw InvalidArgument("build_piecewise: spec must have positive drift");
    if (opt.nodes < 8) throw InvalidArgument("build_piecewise: need at least 8 nodes");

    const double mu_q = -std::log(q) * spec.drift();
    const double a = spec.effective_intensity();
    const double beta = a / mu_q;
    const JumpPmf& jumps = spec.positive_jumps();

    // tail as a pseudo-atom past the stored support, as in the series engine
    std::vector<double> atoms(jumps.masses());
    if (jumps.tail_mass() > 0.0) atoms.push_back(jumps.tail_mass());

    PiecewiseDensity pd;
    pd.q_ = q;
    pd.mu_q_ = mu_q;
    pd.a_ = a;
    pd.beta_ = beta;
    pd.quad_tol_ = opt.quad_tol;

    const double a0 = 1.0 / mu_q;
    pd.breakpoints_ = {a0, q * a0};
    pd.interval_mass_ = {std::exp(beta * std::log1p(-(1.0 - q))) / (beta * mu_q)}; // (1-q)^beta/(beta mu_q)
    double total = pd.interval_mass_[0];

    const QuadOptions seg_opt{opt.quad_tol / static_cast<double>(opt.nodes), opt.quad_tol, 48,
                              200000};

    double qk_pow = 1.0;          // q^j
    std::vector<double> qinv_pow; // q^{-k}, 1-based
    int K = -1;
    for (int j = 1; j <= opt.k_cap; ++j) {
        qk_pow *= q;
        qinv_pow.push_back(std::pow(q, -j));
        const double aj = qk_pow / mu_q;

        auto nodes = ChebyshevInterpolant::nodes(0.0, aj, opt.nodes);
        const std::size_t n = nodes.size() - 1;
        std::vector<double> acc(nodes.size(), 0.0); // lambda-weighted integral sum

        const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(j), atoms.size());
        for (std::size_t k = 1; k <= kk; ++k) {
            const double pk = atoms[k - 1];
            if (pk == 0.0) continue;
            const double weight = a * qinv_pow[k - 1] * pk;
            const Kernel w{mu_q, beta, qinv_pow[k - 1]};
            const bool self = (static_cast<std::size_t>(j) == k); // inner basis is g_0 = 1
            const ChebyshevInterpolant* inner =
                self ? nullptr : &pd.bases_[static_cast<std::size_t>(j) - k - 1];

            double run = 0.0;
            for (std::size_t i = n; i-- > 0;) {
                const double lo = nodes[i], hi = nodes[i + 1];
                double seg;
                if (self && beta < 1.0) {
                    // u = (1 - y/a_j)^beta removes the (a_j - y)^{beta-1} endpoint
                    // singularity of W_j; direct quadrature stalls there
                    const double ulo = std::exp(beta * std::log1p(-hi / aj));
                    const double uhi = std::exp(beta * std::log1p(-lo / aj));
                    seg = integrate(
                        [&](double u) {
                            const double y = aj * (1.0 - std::pow(u, 1.0 / beta));
                            return std::exp(-beta * std::log1p(-mu_q * y)) * aj / beta;
                        },
                        ulo, uhi, seg_opt);
                } else if (self) {
                    seg = integrate([&](double y) { return w(y); }, lo, hi, seg_opt);
                } else {
                    const double qinv = qinv_pow[k - 1];
                    seg = integrate([&](double y) { return w(y) * (*inner)(qinv * y); }, lo, hi,
                                    seg_opt);
                }
                run += seg;
                acc[i] += weight * run;
            }
        }

        const double boundary = (j == 1) ? 1.0 : pd.bases_.back()(aj);
        std::vector<double> gvals(nodes.size());
        for (std::size_t i = 0; i <= n; ++i) gvals[i] = boundary - acc[i];
        pd.bases_.emplace_back(0.0, aj, std::move(gvals));

        // interval mass over (a_{j+1}, a_j]
        const double aj1 = aj * q;
        const auto& g = pd.bases_.back();
        const double mass = integrate(
            [&](double y) { return std::exp((beta - 1.0) * std::log1p(-mu_q * y)) * g(y); }, aj1,
            aj, seg_opt);
        if (!(mass >= 0.0)) {
            throw QuadratureFailure("build_piecewise: negative interval mass (basis " +
                                    std::to_string(j) + ")");
        }
        pd.breakpoints_.push_back(aj1);
        pd.interval_mass_.push_back(mass);
        total += mass;

        const double ratio = mass / total;
        if (ratio < opt.mass_tol) {
            K = j;
            pd.truncated_ratio_ = ratio;
            break;
        }
    }
    if (K < 0) {
        throw CapExceeded("build_piecewise: mass criterion unmet at k_cap",
                          pd.interval_mass_.back() / total);
    }

    // continuity across breakpoints is g_j(a_j) = g_{j-1}(a_j) by construction;
    // verify the stored node values kept it within tolerance
    for (int j = 1; j <= K; ++j) {
        const double aj = pd.breakpoints_[static_cast<std::size_t>(j)];
        const double left = pd.bases_[static_cast<std::size_t>(j - 1)].values().back();
        const double right = (j == 1) ? 1.0 : pd.bases_[static_cast<std::size_t>(j - 2)](aj);
        const double scale = std::max({std::abs(left), std::abs(right), 1.0e-30});
        if (std::abs(left - right) > opt.continuity_tol * scale) {
            throw QuadratureFailure("build_piecewise: breakpoint continuity violated at j = " +
                                    std::to_string(j));
        }
    }

    pd.K_ = K;
    pd.C_ = total;
    return pd;
}

} // namespace ivsfun
