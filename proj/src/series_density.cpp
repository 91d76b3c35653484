#include "ivsfun/series_density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ivsfun/errors.hpp"

namespace ivsfun {

namespace {
constexpr double kExpCutoff = 745.0;   // exp underflow; dropped terms < 1e-323
constexpr double kRateCeiling = 1.0e290;
} // namespace

ExpFunctionalModel::ExpFunctionalModel(const ExpFunctionalModel& other)
    : q_(other.q_), qdd_(other.qdd_), a_(other.a_), coeff_(other.coeff_),
      coeff_q_(other.coeff_q_), rate_(other.rate_), denom_(other.denom_),
      c_probe_(other.c_probe_), criterion_met_(other.criterion_met_),
      criterion_(other.criterion_), tail_ratio_(other.tail_ratio_), mean_(other.mean_),
      clamp_count_(other.clamp_count_.load(std::memory_order_relaxed)) {}

Dd ExpFunctionalModel::density_sum(Dd x) const {
    Dd acc(0.0);
    const std::size_t n = std::min(coeff_.size(), rate_.size());
    for (std::size_t j = 0; j < n; ++j) {
        Dd e = rate_[j] * x;
        if (e.hi > kExpCutoff) break; // rates increase in j
        acc += coeff_[j] * dd_exp(-e);
    }
    return acc;
}

double ExpFunctionalModel::density_raw(double x) const {
    if (!(x > 0.0)) throw InvalidArgument("density: need x > 0");
    return static_cast<double>(a_ * density_sum(Dd(x)) / denom_);
}

double ExpFunctionalModel::density(double x) const {
    double v = density_raw(x);
    if (v < 0.0) {
        clamp_count_.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    return v;
}

double ExpFunctionalModel::density_error_estimate(double x) const {
    const std::size_t kp1 = coeff_.size();
    if (kp1 >= rate_.size()) {
        // next rate beyond the stored guard: term is far below underflow
        return 0.0;
    }
    Dd e = rate_[kp1] * Dd(x);
    if (e.hi > kExpCutoff) return 0.0;
    return std::abs(static_cast<double>(a_ * c_probe_ * dd_exp(-e) / denom_));
}

double ExpFunctionalModel::cdf(double x) const {
    if (!(x > 0.0)) throw InvalidArgument("cdf: need x > 0");
    Dd acc(0.0);
    const std::size_t n = std::min(coeff_q_.size(), rate_.size());
    for (std::size_t j = 0; j < n; ++j) {
        Dd e = rate_[j] * Dd(x);
        if (e.hi > kExpCutoff) break;
        acc += coeff_q_[j] * dd_exp(-e);
    }
    double v = 1.0 - static_cast<double>(acc / denom_);
    return std::clamp(v, 0.0, 1.0);
}

std::complex<double> ExpFunctionalModel::laplace(std::complex<double> u) const {
    if (u.real() < 0.0) throw InvalidArgument("laplace: need Re u >= 0");
    // a / denom * sum c_j / (u + a q^{-j}) = 1/denom * sum d_j * a / (u q^j + a)
    const double a = static_cast<double>(a_);
    std::complex<double> acc(0.0, 0.0);
    double qj = 1.0;
    for (std::size_t j = 0; j < coeff_q_.size(); ++j) {
        acc += static_cast<double>(coeff_q_[j]) * (a / (u * qj + a));
        qj *= q_;
    }
    return acc / static_cast<double>(denom_);
}

double ExpFunctionalModel::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("quantile: need p in (0, 1)");
    double hi = mean_ > 0.0 ? mean_ : 1.0;
    while (cdf(hi) < p) {
        hi *= 2.0;
        if (hi > 1.0e300) throw QuadratureFailure("quantile: cdf never reaches p");
    }
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1.0e-15 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::string ExpFunctionalModel::serialize() const {
    char buf[64];
    std::string out = "{\"q\":";
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out += buf;
    };
    num(q_);
    out += ",\"scale_a\":";
    num(static_cast<double>(a_));
    out += ",\"K\":" + std::to_string(truncation_index());
    out += ",\"criterion_value\":";
    num(criterion_);
    out += ",\"denom\":";
    num(static_cast<double>(denom_));
    out += ",\"coefficients\":[";
    for (std::size_t j = 0; j < coeff_.size(); ++j) {
        if (j) out += ',';
        num(static_cast<double>(coeff_[j]));
    }
    out += "]}";
    return out;
}

ExpFunctionalModel build_coefficients_core(Dd q, double scale_a,
                                           const std::vector<double>& masses, double tail_mass,
                                           const SeriesBuildOptions& opt) {
    if (!(q.hi > 0.0 && q.hi < 1.0)) throw InvalidArgument("build_coefficients: q must be in (0, 1)");
    if (!(opt.threshold > 0.0)) throw InvalidArgument("build_coefficients: threshold must be > 0");
    if (opt.k_max < 1) throw InvalidArgument("build_coefficients: k_max must be >= 1");

    // tail as a pseudo-atom one past the stored support
    std::vector<double> atoms = masses;
    if (tail_mass > 0.0) atoms.push_back(tail_mass);
    const std::size_t m = atoms.size();

    const Dd qinv = Dd(1.0) / q;
    const Dd a(scale_a);

    std::vector<Dd> c{Dd(1.0)}, d{Dd(1.0)};
    std::vector<Dd> qinv_pow{Dd(1.0)}; // q^{-k}
    Dd q_pow(1.0);                     // q^{j}
    Dd sum_c(1.0), sum_d(1.0);

    int stop_index = -1;
    bool criterion_met = false;
    double criterion = std::numeric_limits<double>::infinity();
    int tail_ok_run = 0;

    for (int j = 1; j <= opt.k_max; ++j) {
        Dd next_qinv = qinv_pow.back() * qinv;
        if (!(next_qinv.hi < kRateCeiling)) {
            // q^{-j} beyond double range: every later term vanishes for x > 1e-287
            stop_index = j - 1;
            criterion_met = criterion_met || criterion < opt.threshold;
            break;
        }
        qinv_pow.push_back(next_qinv);
        q_pow *= q;

        Dd s(0.0);
        const std::size_t kk = std::min<std::size_t>(j, m);
        for (std::size_t k = 1; k <= kk; ++k) {
            if (atoms[k - 1] == 0.0) continue;
            s += qinv_pow[k] * Dd(atoms[k - 1]) * c[j - k];
        }
        Dd cj = s / (Dd(1.0) - qinv_pow[static_cast<std::size_t>(j)]);
        Dd dj = cj * q_pow;
        c.push_back(cj);
        d.push_back(dj);
        sum_c += cj;
        sum_d += dj;

        criterion = std::abs(static_cast<double>(a * sum_c / sum_d));
        if (!criterion_met && criterion < opt.threshold) {
            criterion_met = true;
            if (opt.tail_tol <= 0.0) {
                stop_index = j;
                break;
            }
        }
        if (criterion_met && opt.tail_tol > 0.0) {
            if (std::abs(dj.hi) < opt.tail_tol * std::abs(sum_d.hi)) {
                if (++tail_ok_run >= 32) {
                    stop_index = j;
                    break;
                }
            } else {
                tail_ok_run = 0;
            }
        }
    }
    if (stop_index < 0) {
        if (!opt.allow_cap && !criterion_met) {
            throw CapExceeded("build_coefficients: criterion unmet at k_max (achieved " +
                                  std::to_string(criterion) + ")",
                              criterion);
        }
        stop_index = static_cast<int>(c.size()) - 1;
    }
    c.resize(static_cast<std::size_t>(stop_index) + 1);
    d.resize(static_cast<std::size_t>(stop_index) + 1);

    // recompute the sums over the kept range (extension loops may have overshot)
    sum_c = Dd(0.0);
    sum_d = Dd(0.0);
    for (const Dd& v : c) sum_c += v;
    for (const Dd& v : d) sum_d += v;
    criterion = std::abs(static_cast<double>(a * sum_c / sum_d));

    if (!std::isfinite(sum_d.hi) || std::abs(sum_d.hi) < 1.0e-280) {
        throw DegenerateDenominator("build_coefficients: normalizer sum underflowed");
    }

    // probe coefficient c_{K+1}
    Dd probe(0.0);
    {
        const int j = stop_index + 1;
        Dd next_qinv = qinv_pow.back() * qinv;
        if (next_qinv.hi < kRateCeiling && static_cast<std::size_t>(j) <= qinv_pow.size()) {
            Dd s(0.0);
            const std::size_t kk = std::min<std::size_t>(j, m);
            for (std::size_t k = 1; k <= kk; ++k) {
                if (atoms[k - 1] == 0.0) continue;
                const Dd& qk = (k < qinv_pow.size()) ? qinv_pow[k] : next_qinv;
                s += qk * Dd(atoms[k - 1]) * c[static_cast<std::size_t>(j) - k];
            }
            probe = s / (Dd(1.0) - next_qinv);
        }
    }

    ExpFunctionalModel model;
    model.q_ = static_cast<double>(q);
    model.qdd_ = q;
    model.a_ = a;
    model.denom_ = sum_d;
    model.c_probe_ = probe;
    model.criterion_met_ = criterion_met;
    model.criterion_ = criterion;

    // tail ratio diagnostic over the last 10% of terms
    double tail_max = 0.0;
    for (std::size_t j = d.size() - std::max<std::size_t>(1, d.size() / 10); j < d.size(); ++j) {
        tail_max = std::max(tail_max, std::abs(static_cast<double>(d[j])));
    }
    model.tail_ratio_ = tail_max / std::abs(static_cast<double>(sum_d));

    model.rate_.reserve(c.size() + 1);
    for (std::size_t j = 0; j < c.size() + 1; ++j) {
        const Dd qj = j < qinv_pow.size() ? qinv_pow[j] : qinv_pow.back() * qinv;
        if (!(qj.hi < kRateCeiling)) break;
        Dd r = a * qj;
        if (!(r.hi < kRateCeiling)) break;
        model.rate_.push_back(r);
    }
    model.coeff_ = std::move(c);
    model.coeff_q_ = std::move(d);

    // E I_q from the jump pgf (tail as the usual pseudo-atom)
    {
        double pgf = 0.0, qk = 1.0;
        for (double pm : masses) {
            qk *= model.q_;
            pgf += pm * qk;
        }
        pgf += tail_mass * qk * model.q_;
        model.mean_ = 1.0 / (scale_a * (1.0 - pgf));
    }

    // sign-definiteness on a validation grid; the truncated series cannot be
    // trusted below the criterion noise floor, so the tolerance scales with it
    if (opt.validation_points > 0 && criterion_met) {
        double maxv = 0.0, minv = 0.0;
        const double lo = 1.0e-4 * model.mean_;
        const double hi = 8.0 * model.mean_;
        for (int i = 0; i < opt.validation_points; ++i) {
            double x = lo + (hi - lo) * i / (opt.validation_points - 1);
            double v = model.density_raw(x);
            maxv = std::max(maxv, v);
            minv = std::min(minv, v);
        }
        // the x -> 0 limit of the truncated series is a sum_c/sum_d, i.e. the
        // criterion value itself; dips beyond that scale mean real trouble
        if (minv < -(3.0 * criterion + 1.0e-9 * maxv)) {
            throw DegenerateDenominator(
                "build_coefficients: density sign-definiteness violated (threshold too loose)");
        }
    }
    return model;
}

ExpFunctionalModel build_coefficients(const IvsSpec& spec, double q, const SeriesBuildOptions& opt) {
    if (spec.drift() != 0.0) throw InvalidArgument("build_coefficients: spec must be driftless");
    const JumpPmf& pj = spec.positive_jumps();
    return build_coefficients_core(Dd(q), spec.effective_intensity(), pj.masses(), pj.tail_mass(),
                                   opt);
}

double exp_functional_mean(const IvsSpec& spec, double q) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("exp_functional_mean: q must be in (0, 1)");
    return 1.0 / (spec.effective_intensity() * (1.0 - spec.positive_jumps().pgf(q)));
}

double exp_functional_moment(const IvsSpec& spec, double q, int m) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("exp_functional_moment: q must be in (0, 1)");
    if (m < 0) throw InvalidArgument("exp_functional_moment: need m >= 0");
    double result = 1.0;
    double qj = 1.0;
    for (int j = 1; j <= m; ++j) {
        qj *= q;
        const double psi = spec.effective_intensity() * (1.0 - spec.positive_jumps().pgf(qj));
        result *= static_cast<double>(j) / psi;
    }
    return result;
}

} // namespace ivsfun
