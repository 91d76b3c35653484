// Command-line surface: density/cdf/laplace/moments curves as CSV, Monte
// Carlo validation, Levy approximation pipeline, raw sample export.
//
// Configs are JSON documents with flat sections:
//   process:    kind in {poisson, mipp, space_fractional, negative_binomial,
//               custom} plus parameters
//   functional: kind in {exp, exp_drifted, inverse_power, general_laplace,
//               levy_approx} plus q / mu / p / epsilon / measure
//   output:     x-grid (min, max, points, spacing in {linear, log}), m_max
//   tolerances: threshold, k_max, allow_cap, mass_tol, quad_tol, series_tol,
//               max_terms, K, nested_depth, ks_tol, norm_tol, mean_sigmas
//   seed:       64-bit
// Any leaf can be overridden with --set section.key=value.
//
// Exit codes: 0 ok, 1 validation failure, 2 config error, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ivsfun/catalog.hpp"
#include "ivsfun/drifted_density.hpp"
#include "ivsfun/errors.hpp"
#include "ivsfun/general_functionals.hpp"
#include "ivsfun/levy_approx.hpp"
#include "ivsfun/mc_oracle.hpp"
#include "ivsfun/quadrature.hpp"
#include "ivsfun/series_density.hpp"
#include "ivsfun/version.hpp"

using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json load_config(const std::string& path, const std::vector<std::string>& sets) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects section.key=value: " + kv);
        std::string path_part = kv.substr(0, eq);
        std::string value_part = kv.substr(eq + 1);
        json value;
        try {
            value = json::parse(value_part);
        } catch (const json::exception&) {
            value = value_part; // plain string
        }
        json* node = &cfg;
        std::size_t pos = 0;
        while (true) {
            const auto dot = path_part.find('.', pos);
            const std::string key = path_part.substr(pos, dot - pos);
            if (key.empty()) throw ConfigError("--set: empty key segment in " + kv);
            if (dot == std::string::npos) {
                (*node)[key] = value;
                break;
            }
            node = &(*node)[key];
            pos = dot + 1;
        }
    }
    return cfg;
}

double need_number(const json& j, const std::string& section, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ConfigError("missing or non-numeric field: " + section + "." + key);
    }
    return j[key].get<double>();
}

double opt_number(const json& j, const std::string& key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number()) throw ConfigError("non-numeric field: " + key);
    return j[key].get<double>();
}

std::string need_string(const json& j, const std::string& section, const std::string& key) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw ConfigError("missing or non-string field: " + section + "." + key);
    }
    return j[key].get<std::string>();
}

ivsfun::IvsSpec make_process(const json& cfg, double drift) {
    if (!cfg.contains("process")) throw ConfigError("missing section: process");
    const json& p = cfg["process"];
    const std::string kind = need_string(p, "process", "kind");
    if (kind == "poisson") {
        return ivsfun::poisson_process(need_number(p, "process", "lambda"), drift);
    }
    if (kind == "mipp") {
        return ivsfun::mipp_process(static_cast<int>(need_number(p, "process", "n")),
                                    need_number(p, "process", "lambda"), drift);
    }
    if (kind == "space_fractional") {
        return ivsfun::space_fractional_process(need_number(p, "process", "lambda"),
                                                need_number(p, "process", "alpha"), drift);
    }
    if (kind == "negative_binomial") {
        return ivsfun::negative_binomial_process(need_number(p, "process", "r"),
                                                 need_number(p, "process", "p0"), drift);
    }
    if (kind == "custom") {
        if (!p.contains("masses") || !p["masses"].is_array()) {
            throw ConfigError("process.masses must be an array for kind=custom");
        }
        std::vector<double> masses = p["masses"].get<std::vector<double>>();
        const double zero = opt_number(p, "zero_atom", 0.0);
        const double tail = opt_number(p, "tail_mass", 0.0);
        auto kind_tag = tail > 0.0 ? ivsfun::JumpPmf::Support::truncated_infinite
                                   : ivsfun::JumpPmf::Support::finite;
        return ivsfun::IvsSpec(need_number(p, "process", "intensity"),
                               ivsfun::JumpPmf(std::move(masses), zero, tail, kind_tag), drift);
    }
    throw ConfigError("unknown process.kind: " + kind);
}

struct Grid {
    std::vector<double> x;
};

Grid make_grid(const json& cfg) {
    if (!cfg.contains("output")) throw ConfigError("missing section: output");
    const json& o = cfg["output"];
    const double lo = need_number(o, "output", "min");
    const double hi = need_number(o, "output", "max");
    const int n = static_cast<int>(opt_number(o, "points", 200));
    std::string spacing = o.contains("spacing") ? o["spacing"].get<std::string>() : "linear";
    if (!(lo < hi)) throw ConfigError("output.min must be < output.max");
    if (n < 2) throw ConfigError("output.points must be >= 2");
    Grid g;
    g.x.resize(static_cast<std::size_t>(n));
    if (spacing == "linear") {
        for (int i = 0; i < n; ++i) g.x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    } else if (spacing == "log") {
        if (!(lo > 0.0)) throw ConfigError("output.min must be > 0 for log spacing");
        const double llo = std::log(lo), lhi = std::log(hi);
        for (int i = 0; i < n; ++i) {
            g.x[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
        }
    } else {
        throw ConfigError("output.spacing must be linear or log");
    }
    return g;
}

ivsfun::SeriesBuildOptions series_options(const json& cfg) {
    ivsfun::SeriesBuildOptions opt;
    if (cfg.contains("tolerances")) {
        const json& t = cfg["tolerances"];
        opt.threshold = opt_number(t, "threshold", opt.threshold);
        opt.k_max = static_cast<int>(opt_number(t, "k_max", opt.k_max));
        if (t.contains("allow_cap")) opt.allow_cap = t["allow_cap"].get<bool>();
    }
    return opt;
}

ivsfun::DriftedBuildOptions drifted_options(const json& cfg) {
    ivsfun::DriftedBuildOptions opt;
    if (cfg.contains("tolerances")) {
        const json& t = cfg["tolerances"];
        opt.mass_tol = opt_number(t, "mass_tol", opt.mass_tol);
        opt.quad_tol = opt_number(t, "quad_tol", opt.quad_tol);
        opt.nodes = static_cast<std::size_t>(opt_number(t, "nodes", static_cast<double>(opt.nodes)));
    }
    return opt;
}

ivsfun::McConfig mc_config(const json& cfg) {
    ivsfun::McConfig mc;
    mc.seed = static_cast<std::uint64_t>(opt_number(cfg, "seed", 0.0));
    if (cfg.contains("tolerances")) {
        const json& t = cfg["tolerances"];
        mc.series_tol = opt_number(t, "series_tol", mc.series_tol);
        mc.max_terms = static_cast<std::size_t>(opt_number(t, "max_terms",
                                                           static_cast<double>(mc.max_terms)));
    }
    if (cfg.contains("validate")) {
        mc.n_samples = static_cast<std::size_t>(
            opt_number(cfg["validate"], "n_samples", static_cast<double>(mc.n_samples)));
    }
    return mc;
}

const json& functional_section(const json& cfg) {
    if (!cfg.contains("functional")) throw ConfigError("missing section: functional");
    return cfg["functional"];
}

ivsfun::LevyMeasureSpec make_measure(const json& f) {
    if (!f.contains("measure")) throw ConfigError("functional.measure required for levy_approx");
    const json& m = f["measure"];
    const std::string kind = need_string(m, "functional.measure", "kind");
    if (kind == "cpe") {
        return ivsfun::LevyMeasureSpec::compound_poisson_exponential(
            need_number(m, "measure", "a"), need_number(m, "measure", "b"));
    }
    if (kind == "tempered_stable") {
        return ivsfun::LevyMeasureSpec::tempered_stable(need_number(m, "measure", "a"),
                                                        need_number(m, "measure", "b"),
                                                        need_number(m, "measure", "chi"));
    }
    if (kind == "custom") {
        // CSV of "z,tail" rows, log-interpolated between points
        const std::string path = need_string(m, "measure", "tail_csv");
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open tail_csv: " + path);
        auto zs = std::make_shared<std::vector<double>>();
        auto ts = std::make_shared<std::vector<double>>();
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos) throw ConfigError("tail_csv: expected z,tail rows");
            zs->push_back(std::stod(line.substr(0, comma)));
            ts->push_back(std::stod(line.substr(comma + 1)));
        }
        if (zs->size() < 2) throw ConfigError("tail_csv: need at least 2 rows");
        return ivsfun::LevyMeasureSpec::custom([zs, ts](double z) {
            const auto& Z = *zs;
            const auto& T = *ts;
            if (z <= Z.front()) return T.front();
            if (z >= Z.back()) return T.back() * std::exp(-(z - Z.back())); // decaying guard
            const auto it = std::upper_bound(Z.begin(), Z.end(), z);
            const std::size_t i = static_cast<std::size_t>(it - Z.begin());
            const double w = (std::log(z) - std::log(Z[i - 1])) / (std::log(Z[i]) - std::log(Z[i - 1]));
            return std::exp((1.0 - w) * std::log(T[i - 1]) + w * std::log(T[i]));
        });
    }
    throw ConfigError("unknown measure.kind: " + kind);
}

void emit_header(std::ostream& os, const json& cfg, const std::string& extra) {
    os << "# ivsfun " << ivsfun::kVersion << "\n";
    os << "# seed=" << static_cast<std::uint64_t>(opt_number(cfg, "seed", 0.0)) << "\n";
    if (!extra.empty()) os << extra;
}

// evaluators shared by density/cdf/laplace/moments
struct Evaluators {
    std::function<double(double)> density;
    std::function<double(double)> cdf;
    std::function<std::complex<double>(std::complex<double>)> laplace;
    std::function<double(int)> moment;
    std::string metadata;
};

Evaluators build_evaluators(const json& cfg) {
    const json& f = functional_section(cfg);
    const std::string kind = need_string(f, "functional", "kind");
    Evaluators ev;
    if (kind == "exp") {
        const double q = need_number(f, "functional", "q");
        if (!(q > 0.0 && q < 1.0)) throw ConfigError("functional.q must be in (0, 1)");
        auto spec = std::make_shared<ivsfun::IvsSpec>(make_process(cfg, 0.0));
        auto model = std::make_shared<ivsfun::ExpFunctionalModel>(
            ivsfun::build_coefficients(*spec, q, series_options(cfg)));
        ev.metadata = "# K=" + std::to_string(model->truncation_index()) +
                      " criterion=" + fmt17(model->criterion_value()) +
                      " denom=" + fmt17(model->denom()) + "\n";
        ev.density = [model](double x) { return model->density(x); };
        ev.cdf = [model](double x) { return model->cdf(x); };
        ev.laplace = [model](std::complex<double> u) { return model->laplace(u); };
        ev.moment = [spec, q](int m) { return ivsfun::exp_functional_moment(*spec, q, m); };
        return ev;
    }
    if (kind == "exp_drifted") {
        const double q = need_number(f, "functional", "q");
        const double mu = need_number(f, "functional", "mu");
        if (!(mu > 0.0)) throw ConfigError("functional.mu must be > 0 for exp_drifted");
        auto spec = std::make_shared<ivsfun::IvsSpec>(make_process(cfg, mu));
        auto model = std::make_shared<ivsfun::PiecewiseDensity>(
            ivsfun::build_piecewise(*spec, q, drifted_options(cfg)));
        ev.metadata = "# K=" + std::to_string(model->truncation_index()) +
                      " C=" + fmt17(model->normalizer()) +
                      " support_end=" + fmt17(model->support_end()) + "\n";
        ev.density = [model](double x) { return model->density(x); };
        ev.cdf = [model](double x) { return model->cdf(x); };
        ev.moment = [model](int m) {
            if (m == 0) return 1.0;
            return ivsfun::integrate(
                [&](double x) { return std::pow(x, m) * model->density(x); }, 1.0e-12,
                model->support_end(), {1.0e-12, 1.0e-9, 48, 200000});
        };
        return ev;
    }
    if (kind == "inverse_power") {
        const double p = need_number(f, "functional", "p");
        int K = 10, depth = 0;
        if (cfg.contains("tolerances")) {
            K = static_cast<int>(opt_number(cfg["tolerances"], "K", 10));
            depth = static_cast<int>(opt_number(cfg["tolerances"], "nested_depth", 0));
        }
        auto spec = std::make_shared<ivsfun::IvsSpec>(make_process(cfg, 0.0));
        auto model = std::make_shared<ivsfun::InversePowerModel>(
            ivsfun::build_inverse_power(*spec, p, K, depth));
        ev.metadata = "# K=" + std::to_string(model->depth()) +
                      " nested_depth=" + std::to_string(model->nested_depth()) +
                      " kept_probability=" + fmt17(model->kept_probability()) + "\n";
        ev.density = [model](double x) { return model->density(x); };
        ev.cdf = [model](double x) { return model->cdf(x); };
        ev.laplace = [model](std::complex<double> u) { return model->laplace(u); };
        ev.moment = [model](int m) {
            if (m == 0) return 1.0;
            if (m == 1) return model->mean();
            throw ConfigError("inverse_power moments beyond m=1 are not provided");
        };
        return ev;
    }
    if (kind == "levy_approx") {
        const double eps = need_number(f, "functional", "epsilon");
        auto measure = make_measure(f);
        auto grid = std::make_shared<ivsfun::LevyGrid>(ivsfun::discretize(measure, eps));
        ivsfun::ApproxOptions opt;
        if (cfg.contains("tolerances")) {
            opt.k_max = static_cast<int>(opt_number(cfg["tolerances"], "k_max", 0));
            opt.threshold = opt_number(cfg["tolerances"], "threshold", 0.0);
            opt.tail_tol = opt_number(cfg["tolerances"], "tail_tol", 0.0);
        }
        auto model = std::make_shared<ivsfun::ExpFunctionalModel>(ivsfun::approx_density(*grid, opt));
        ev.metadata = "# epsilon=" + fmt17(eps) + " atoms=" + std::to_string(grid->k_cut) +
                      " total=" + fmt17(grid->total) + " rho=" + fmt17(grid->rho) +
                      "\n# K=" + std::to_string(model->truncation_index()) +
                      " criterion=" + fmt17(model->criterion_value()) +
                      " normalizer_tail_ratio=" + fmt17(model->normalizer_tail_ratio()) + "\n";
        ev.density = [model](double x) { return model->density(x); };
        ev.cdf = [model](double x) { return model->cdf(x); };
        ev.laplace = [model](std::complex<double> u) { return model->laplace(u); };
        return ev;
    }
    if (kind == "general_laplace") {
        const json& g = f.contains("g") ? f["g"] : throw ConfigError("functional.g required");
        const std::string gkind = need_string(g, "functional.g", "kind");
        std::function<double(double)> fn;
        if (gkind == "geometric") {
            const double q = need_number(g, "functional.g", "q");
            fn = [q](double x) { return std::pow(q, x); };
        } else if (gkind == "inverse_power") {
            const double p = need_number(g, "functional.g", "p");
            fn = [p](double x) { return std::pow(x + 1.0, -p); };
        } else {
            throw ConfigError("unknown functional.g.kind: " + gkind);
        }
        auto df = std::make_shared<ivsfun::DecreasingFunctional>(fn, true);
        auto spec = std::make_shared<ivsfun::IvsSpec>(make_process(cfg, 0.0));
        const int K = static_cast<int>(opt_number(f, "K", 64));
        const std::size_t n_mc = static_cast<std::size_t>(opt_number(f, "n_mc", 20000));
        const std::uint64_t seed = static_cast<std::uint64_t>(opt_number(cfg, "seed", 0.0));
        ev.laplace = [df, spec, K, n_mc, seed](std::complex<double> u) {
            return ivsfun::laplace_limit(*df, *spec, u, K, n_mc, seed).value;
        };
        ev.metadata = "# general_laplace K=" + std::to_string(K) + " n_mc=" + std::to_string(n_mc) + "\n";
        return ev;
    }
    throw ConfigError("unknown functional.kind: " + kind);
}

int cmd_curve(const json& cfg, std::ostream& os, const std::string& what) {
    Evaluators ev = build_evaluators(cfg);
    emit_header(os, cfg, ev.metadata);
    if (what == "density" || what == "approx") {
        if (!ev.density) throw ConfigError("density not available for this functional");
        Grid g = make_grid(cfg);
        if (what == "approx") {
            os << "x,density,cdf\n";
            for (double x : g.x) {
                os << fmt17(x) << "," << fmt17(ev.density(x)) << "," << fmt17(ev.cdf(x)) << "\n";
            }
        } else {
            os << "x,density\n";
            for (double x : g.x) os << fmt17(x) << "," << fmt17(ev.density(x)) << "\n";
        }
    } else if (what == "cdf") {
        if (!ev.cdf) throw ConfigError("cdf not available for this functional");
        Grid g = make_grid(cfg);
        os << "x,cdf\n";
        for (double x : g.x) os << fmt17(x) << "," << fmt17(ev.cdf(x)) << "\n";
    } else if (what == "laplace") {
        if (!ev.laplace) throw ConfigError("laplace not available for this functional");
        Grid g = make_grid(cfg);
        os << "u,re,im\n";
        for (double u : g.x) {
            const auto v = ev.laplace(std::complex<double>(u, 0.0));
            os << fmt17(u) << "," << fmt17(v.real()) << "," << fmt17(v.imag()) << "\n";
        }
    } else if (what == "moments") {
        if (!ev.moment) throw ConfigError("moments not available for this functional");
        int m_max = 4;
        if (cfg.contains("output")) m_max = static_cast<int>(opt_number(cfg["output"], "m_max", 4));
        os << "m,moment\n";
        for (int m = 0; m <= m_max; ++m) os << m << "," << fmt17(ev.moment(m)) << "\n";
    }
    return 0;
}

int cmd_sample(const json& cfg, std::ostream& os) {
    const json& f = functional_section(cfg);
    const std::string kind = need_string(f, "functional", "kind");
    const ivsfun::McConfig mc = mc_config(cfg);
    std::vector<double> samples;
    if (kind == "exp") {
        samples = ivsfun::sample_exp_functional(make_process(cfg, 0.0),
                                                need_number(f, "functional", "q"), mc);
    } else if (kind == "exp_drifted") {
        samples = ivsfun::sample_exp_functional(
            make_process(cfg, need_number(f, "functional", "mu")),
            need_number(f, "functional", "q"), mc);
    } else if (kind == "inverse_power") {
        samples = ivsfun::sample_inverse_power(make_process(cfg, 0.0),
                                               need_number(f, "functional", "p"), mc);
    } else if (kind == "levy_approx") {
        const auto grid = ivsfun::discretize(make_measure(f),
                                             need_number(f, "functional", "epsilon"));
        std::vector<double> pz(grid.masses);
        for (double& v : pz) v /= grid.total;
        ivsfun::IvsSpec spec(grid.total,
                             ivsfun::JumpPmf(std::move(pz), 0.0, 0.0,
                                             ivsfun::JumpPmf::Support::truncated_infinite));
        samples = ivsfun::sample_exp_functional(spec, std::exp(-grid.epsilon), mc);
    } else {
        throw ConfigError("sample: unsupported functional.kind: " + kind);
    }
    emit_header(os, cfg, "");
    os << "sample\n";
    for (double s : samples) os << fmt17(s) << "\n";
    return 0;
}

int cmd_validate(const json& cfg, std::ostream& os) {
    const json& f = functional_section(cfg);
    const std::string kind = need_string(f, "functional", "kind");
    const ivsfun::McConfig mc = mc_config(cfg);
    const json vcfg = cfg.contains("validate") ? cfg["validate"] : json::object();
    const double norm_tol = opt_number(vcfg, "norm_tol", 1.0e-5);
    const double mean_sigmas = opt_number(vcfg, "mean_sigmas", 4.0);

    Evaluators ev = build_evaluators(cfg);
    if (!ev.density || !ev.cdf) throw ConfigError("validate: functional lacks density/cdf");

    double ks_default = 0.01;
    std::vector<double> samples;
    double analytic_mean = 0.0;
    double upper = 0.0; // normalization quadrature limit
    if (kind == "exp") {
        const double q = need_number(f, "functional", "q");
        auto spec = make_process(cfg, 0.0);
        samples = ivsfun::sample_exp_functional(spec, q, mc);
        analytic_mean = ivsfun::exp_functional_mean(spec, q);
        ivsfun::ExpFunctionalModel model = ivsfun::build_coefficients(spec, q, series_options(cfg));
        upper = model.cdf(8.0 * analytic_mean) > 1.0 - 1.0e-9 ? model.quantile(1.0 - 1.0e-9)
                                                              : 64.0 * analytic_mean;
    } else if (kind == "exp_drifted") {
        ks_default = 0.015;
        const double q = need_number(f, "functional", "q");
        const double mu = need_number(f, "functional", "mu");
        auto spec = make_process(cfg, mu);
        samples = ivsfun::sample_exp_functional(spec, q, mc);
        upper = 1.0 / ((-std::log(q)) * mu);
        analytic_mean = ivsfun::integrate([&](double x) { return x * ev.density(x); }, 1.0e-12,
                                          upper, {1.0e-12, 1.0e-9, 48, 200000});
    } else if (kind == "inverse_power") {
        ks_default = 0.02;
        const double p = need_number(f, "functional", "p");
        auto spec = make_process(cfg, 0.0);
        samples = ivsfun::sample_inverse_power(spec, p, mc);
        ivsfun::InversePowerModel model = ivsfun::build_inverse_power(spec, p);
        analytic_mean = model.mean();
        upper = 64.0 / spec.effective_intensity();
    } else if (kind == "levy_approx") {
        ks_default = 0.02;
        const auto grid = ivsfun::discretize(make_measure(f),
                                             need_number(f, "functional", "epsilon"));
        std::vector<double> pz(grid.masses);
        for (double& v : pz) v /= grid.total;
        ivsfun::IvsSpec spec(grid.total,
                             ivsfun::JumpPmf(std::move(pz), 0.0, 0.0,
                                             ivsfun::JumpPmf::Support::truncated_infinite));
        const double q = std::exp(-grid.epsilon);
        samples = ivsfun::sample_exp_functional(spec, q, mc);
        analytic_mean = ivsfun::exp_functional_mean(spec, q);
        upper = 64.0 * analytic_mean;
    } else {
        throw ConfigError("validate: unsupported functional.kind: " + kind);
    }
    const double ks_tol = opt_number(vcfg, "ks_tol", ks_default);

    const double ks = ivsfun::ks_statistic(samples, ev.cdf);
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= (n - 1.0);
    const double se = std::sqrt(var / n);
    const double norm = ivsfun::integrate([&](double x) { return ev.density(x); }, 1.0e-12, upper,
                                          {1.0e-12, 1.0e-9, 48, 400000});

    const bool ks_ok = ks < ks_tol;
    const bool mean_ok = std::abs(mean - analytic_mean) < mean_sigmas * se;
    const bool norm_ok = std::abs(norm - 1.0) < norm_tol;

    emit_header(os, cfg, ev.metadata);
    os << "n_samples: " << samples.size() << "\n";
    os << "ks: " << fmt17(ks) << " (tol " << fmt17(ks_tol) << ") " << (ks_ok ? "pass" : "FAIL") << "\n";
    os << "sample_mean: " << fmt17(mean) << " analytic_mean: " << fmt17(analytic_mean) << " se: "
       << fmt17(se) << " " << (mean_ok ? "pass" : "FAIL") << "\n";
    os << "normalization: " << fmt17(norm) << " (tol " << fmt17(norm_tol) << ") "
       << (norm_ok ? "pass" : "FAIL") << "\n";
    const bool ok = ks_ok && mean_ok && norm_ok;
    os << "result: " << (ok ? "pass" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exponential and decreasing functionals of integer-valued subordinators"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string output_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "JSON config path")->required();
        sub->add_option("--set", sets, "override section.key=value");
        sub->add_option("-o,--output", output_path, "write to file instead of stdout");
    };
    for (const char* name : {"density", "cdf", "laplace", "moments", "validate", "approx", "sample"}) {
        add_common(app.add_subcommand(name));
    }

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    std::ofstream file_out;
    std::ostream* os = &std::cout;
    if (!output_path.empty()) {
        file_out.open(output_path);
        if (!file_out) {
            std::cerr << "error: cannot open output file " << output_path << "\n";
            return 2;
        }
        os = &file_out;
    }

    try {
        const json cfg = load_config(config_path, sets);
        if (sub == "validate") return cmd_validate(cfg, *os);
        if (sub == "sample") return cmd_sample(cfg, *os);
        return cmd_curve(cfg, *os, sub);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ivsfun::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
