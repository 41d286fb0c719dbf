#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace subharm {

/// Counter-based generator: draw i of stream s under seed k is splitmix64(k, s, i), so any
/// draw can be reproduced in another language without replaying the sequence.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t bits(std::uint64_t counter) const { return mix(mix(mix(seed_) ^ stream_) ^ counter); }
    std::uint64_t next_bits() { return bits(counter_++); }

    /// Uniform in (0, 1), 53-bit resolution.
    double uniform() { return (double(next_bits() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (two uniforms per draw, no caching).
    double normal() {
        const double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_, stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace subharm
