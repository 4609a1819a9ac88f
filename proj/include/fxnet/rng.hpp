#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fxnet {

/// Deterministic Gaussian source used by every synthetic generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard, and normals come from an explicit Box-Muller transform over
/// 53-bit uniforms, so a given seed reproduces the same panel everywhere
/// instead of depending on the platform's std::normal_distribution.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace fxnet
