#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace primefreq {

/// Name of the generator recipe, embedded in report metadata so that a
/// report documents how its random numbers were produced.
inline constexpr const char* kGeneratorName = "mt19937_64/box-muller";

// Deterministic variate stream on top of std::mt19937_64.
//
// Uniforms are built directly from the top 53 bits of the raw engine
// words and normal variates via the Box-Muller transform, instead of
// std::uniform_real_distribution / std::normal_distribution whose output
// sequences are implementation-defined. Given a seed, the stream is the
// same on every standard-conforming platform.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Standard normal variate.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is always finite.
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace primefreq
