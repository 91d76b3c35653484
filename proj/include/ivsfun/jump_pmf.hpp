#pragma once

#include <cstddef>
#include <vector>

namespace ivsfun {

// Jump-size law of an integer-valued subordinator. Stored atoms live on
// k = 1, 2, ..., max_k; a zero atom (removed by IvsSpec normalization) and
// the unstored tail are carried as metadata so no probability is lost:
// zero_atom + stored + tail_mass = 1 up to 1e-12 slack.
class JumpPmf {
public:
    enum class Support { finite, truncated_infinite };

    // masses[i] = P{Z = i + 1}
    JumpPmf(std::vector<double> masses, double zero_atom = 0.0, double tail_mass = 0.0,
            Support kind = Support::finite);

    const std::vector<double>& masses() const { return masses_; }
    double mass_at(std::size_t k) const {
        return (k >= 1 && k <= masses_.size()) ? masses_[k - 1] : 0.0;
    }
    std::size_t max_k() const { return masses_.size(); }
    double zero_atom() const { return zero_atom_; }
    double tail_mass() const { return tail_mass_; }
    Support support_kind() const { return kind_; }

    double stored_mass() const { return stored_mass_; }
    // P{Z >= 1}
    double positive_mass() const { return stored_mass_ + tail_mass_; }

    // E q^Z with the tail treated as an atom at max_k + 1 (upper end of the
    // possible range under monotone decay; error <= tail_mass).
    double pgf(double q) const;

    // conditional law given Z >= 1
    JumpPmf normalized() const;

private:
    std::vector<double> masses_;
    double zero_atom_;
    double tail_mass_;
    double stored_mass_;
    Support kind_;
};

} // namespace ivsfun
