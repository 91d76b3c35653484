#pragma once

// Jump laws and process builders for the worked examples: Poisson, multiply
// iterated Poisson (MIPP), space-fractional Poisson, negative binomial.

#include <cstddef>

#include "ivsfun/ivs_spec.hpp"
#include "ivsfun/jump_pmf.hpp"

namespace ivsfun {

// Dirac mass at 1.
JumpPmf poisson_jumps();

// Law of V_1^{(n-1)}, the jump size of the n-fold iterated Poisson process:
// the Poisson(lambda) law pushed (n-2) times through the mixing recurrence
// P{V=k} = (lambda^k / k!) sum_j j^k e^{-lambda j} P{V'=j}. Atoms are stored
// per level until cumulative mass exceeds 1 - tol; the k = 0 atom stays in
// the returned pmf's metadata for IvsSpec to normalize away.
JumpPmf mipp_jumps(int n, double lambda, double tol = 1.0e-12);

// Sibuya-type law P{Z=k} = -(-alpha)_k / k!. The tail decays like k^{-alpha},
// so the 1 - tail_tol coverage target is capped at max_atoms stored atoms
// (for alpha = 0.9 full 1e-12 coverage would need ~1.8e12 atoms); whatever
// is not stored is recorded as tail_mass.
JumpPmf space_fractional_jumps(double alpha, double tail_tol = 1.0e-12,
                               std::size_t max_atoms = std::size_t{1} << 17);

// Logarithmic law P{Z=k} = -p0^k / (k log(1-p0)). The matching compound
// intensity convention is lambda = -r log(1-p0); see negative_binomial_process.
JumpPmf negative_binomial_jumps(double p0, double tail_tol = 1.0e-12);

// Process builders with the parametrizations used throughout.
IvsSpec poisson_process(double lambda, double drift = 0.0);
IvsSpec mipp_process(int n, double lambda, double drift = 0.0, double tol = 1.0e-12);
// compound intensity lambda^alpha
IvsSpec space_fractional_process(double lambda, double alpha, double drift = 0.0);
// compound intensity -r log(1-p0)
IvsSpec negative_binomial_process(double r, double p0, double drift = 0.0);

} // namespace ivsfun
