#pragma once

// Epsilon-discretization of a pure-jump subordinator's Levy measure:
// atoms v_{eps,k} = nu([eps k, eps(k+1))) on the lattice eps k, the error
// functional rho(eps) = sqrt(int_0^eps nu([z,inf)) dz), and the exponential
// functional of the discretized process through the series engine with base
// q = e^{-eps}.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ivsfun/series_density.hpp"

namespace ivsfun {

class LevyMeasureSpec {
public:
    enum class Kind { cpe, tempered_stable, custom };

    // nu(dz) = a e^{-bz} dz (compound Poisson with Exp(b) jumps)
    static LevyMeasureSpec compound_poisson_exponential(double a, double b);
    // nu(dz) = a e^{-bz} z^{-chi-1} dz, chi in [0,1) (chi = 0: gamma subordinator)
    static LevyMeasureSpec tempered_stable(double a, double b, double chi);
    // user tail z -> nu([z, inf)), nonincreasing with z*tail(z) -> 0 at 0+
    static LevyMeasureSpec custom(std::function<double(double)> tail);

    Kind kind() const { return kind_; }
    double tail(double z) const;
    double a() const { return a_; }
    double b() const { return b_; }
    double chi() const { return chi_; }

private:
    LevyMeasureSpec() = default;
    Kind kind_ = Kind::custom;
    double a_ = 0.0, b_ = 0.0, chi_ = 0.0;
    std::function<double(double)> tail_;
};

struct LevyGrid {
    double epsilon = 0.0;
    std::vector<double> masses; // v_{eps,k}, k = 1..k_cut
    double total = 0.0;         // sum_k v_{eps,k}
    double rho = 0.0;           // sqrt(int_0^eps tail)
    std::size_t k_cut = 0;
};

// Atoms until the remaining tail drops below 1e-12 of the total.
LevyGrid discretize(const LevyMeasureSpec& spec, double epsilon);

// rho(eps); closed forms for the tagged kinds, substitution-tamed quadrature
// for custom tails.
double rho(const LevyMeasureSpec& spec, double epsilon);

// Laplace exponent int (1 - e^{-uz}) nu(dz), closed form per kind.
double levy_laplace_exponent(const LevyMeasureSpec& spec, double u);
// Grid counterpart sum_k v_k (1 - e^{-u eps k}).
double grid_laplace_exponent(const LevyGrid& grid, double u);

struct ApproxOptions {
    int k_max = 0;           // <= 0: ceil(1/eps)
    double threshold = 0.0;  // <= 0: fixed budget (stop at k_max, criterion reported)
    double tail_tol = 0.0;   // > 0: extend until |c_j q^j| < tail_tol |sum| holds
};

// Series model of I over the discretized process: q = e^{-eps} (computed in
// double-double), jump law v_k/total, scale a = total.
ExpFunctionalModel approx_density(const LevyGrid& grid, const ApproxOptions& opt = {});

struct RefinementReport {
    std::vector<double> sup_diffs;  // sup_x |F_{e_i} - F_{e_{i+1}}|
    std::vector<double> rho_ratios; // rho(e_i)/rho(e_{i+1})
    std::vector<double> emp_ratios; // sup_diffs[i]/sup_diffs[i+1]
    bool monotone = false;
};

// Successive CDF refinement distances across >= 3 grids of the same measure.
RefinementReport cdf_error_bound(std::span<const ExpFunctionalModel> models,
                                 std::span<const double> rhos, std::span<const double> x_grid);

} // namespace ivsfun
