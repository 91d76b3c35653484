#include "ivsfun/ivs_spec.hpp"

#include <cmath>

#include "ivsfun/errors.hpp"

namespace ivsfun {

IvsSpec::IvsSpec(double intensity, JumpPmf jumps, double drift)
    : intensity_(intensity),
      drift_(drift),
      jumps_(std::move(jumps)),
      positive_jumps_(jumps_.normalized()),
      effective_intensity_(intensity * jumps_.positive_mass()) {
    if (!(intensity_ > 0.0)) throw InvalidArgument("IvsSpec: intensity must be > 0");
    if (!(drift_ >= 0.0)) throw InvalidArgument("IvsSpec: drift must be >= 0");
}

double laplace_exponent(const IvsSpec& spec, double u) {
    if (!(u >= 0.0)) throw InvalidArgument("laplace_exponent: need u >= 0");
    // lambda (1 - E e^{-uZ}) = lambda (1 - pgf(e^{-u}))
    return spec.drift() * u + spec.intensity() * (1.0 - spec.jumps().pgf(std::exp(-u)));
}

} // namespace ivsfun
