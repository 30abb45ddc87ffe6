#pragma once

#include <cmath>
#include <cstdint>

#include "lkms/minkowski.hpp"

namespace lkms {

/**
 * SplitMix64 generator (Steele, Lea, Flood 2014), used for every seeded
 * probe so reports are bit-reproducible across platforms.
 */
class SplitMix64
{
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform direction on the unit sphere, by rejection from the cube.
    Vec3 unit_vector()
    {
        for (;;) {
            const double x = uniform(-1, 1), y = uniform(-1, 1), z = uniform(-1, 1);
            const double n2 = x * x + y * y + z * z;
            if (n2 > 0.01 && n2 <= 1.0) {
                const double n = std::sqrt(n2);
                return {x / n, y / n, z / n};
            }
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace lkms
