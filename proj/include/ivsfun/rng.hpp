#pragma once

// Splittable counter-style RNG: one independent stream per (seed, stream id).
// Parallel samplers assign stream id = sample index, so results are
// reproducible regardless of thread scheduling.

#include <cmath>
#include <cstdint>

namespace ivsfun {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace detail

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : state_(detail::mix64(detail::mix64(seed) ^ detail::mix64(~stream))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform on (0, 1]
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // inverse transform; monotone coupling keeps truncation tests simple
    double next_exponential(double rate) {
        return -std::log(next_unit()) / rate;
    }

    // unbiased integer in [0, n) (Lemire)
    std::uint64_t next_below(std::uint64_t n) {
        while (true) {
            std::uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * n;
            std::uint64_t l = static_cast<std::uint64_t>(m);
            if (l >= n || l >= static_cast<std::uint64_t>(-n) % n) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

private:
    std::uint64_t state_;
};

} // namespace ivsfun
