#include "ivsfun/jump_pmf.hpp"

#include <cmath>
#include <numeric>

#include "ivsfun/errors.hpp"

namespace ivsfun {

JumpPmf::JumpPmf(std::vector<double> masses, double zero_atom, double tail_mass, Support kind)
    : masses_(std::move(masses)), zero_atom_(zero_atom), tail_mass_(tail_mass), kind_(kind) {
    double sum = 0.0;
    for (double m : masses_) {
        if (!(m >= 0.0) || m > 1.0) throw InvalidArgument("JumpPmf: mass outside [0, 1]");
        sum += m;
    }
    stored_mass_ = sum;
    if (!(zero_atom_ >= 0.0) || zero_atom_ > 1.0) throw InvalidArgument("JumpPmf: zero atom outside [0, 1]");
    if (!(tail_mass_ >= 0.0) || tail_mass_ > 1.0) throw InvalidArgument("JumpPmf: tail mass outside [0, 1]");
    if (kind_ == Support::finite && tail_mass_ != 0.0) {
        throw InvalidArgument("JumpPmf: finite support cannot carry tail mass");
    }
    const double total = zero_atom_ + stored_mass_ + tail_mass_;
    if (total < 1.0 - 1.0e-12 || total > 1.0 + 1.0e-12) {
        throw InvalidArgument("JumpPmf: total mass must lie in [1 - 1e-12, 1]");
    }
    if (positive_mass() <= 0.0) throw InvalidArgument("JumpPmf: no positive-jump mass");
}

double JumpPmf::pgf(double q) const {
    double acc = zero_atom_;
    double qk = 1.0;
    for (double m : masses_) {
        qk *= q;
        if (qk == 0.0) break;
        acc += m * qk;
    }
    if (tail_mass_ > 0.0 && qk > 0.0) acc += tail_mass_ * qk * q;
    return acc;
}

JumpPmf JumpPmf::normalized() const {
    if (zero_atom_ == 0.0) return *this;
    const double p = positive_mass();
    std::vector<double> scaled(masses_.size());
    for (std::size_t i = 0; i < masses_.size(); ++i) scaled[i] = masses_[i] / p;
    return JumpPmf(std::move(scaled), 0.0, tail_mass_ / p, kind_);
}

} // namespace ivsfun
