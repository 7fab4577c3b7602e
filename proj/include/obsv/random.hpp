#pragma once

#include <cstdint>
#include <random>

namespace obsv {

/// Seeded integer sampler. Draws are produced by rejection on mt19937_64
/// output so sequences are identical across standard libraries.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [lo, hi].
    long uniform(long lo, long hi)
    {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return lo + static_cast<long>(x % span);
    }

    /// Uniform double in [lo, hi).
    double uniform_real(double lo, double hi)
    {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace obsv
