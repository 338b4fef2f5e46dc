#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tsr {

// Standard-normal sampler on top of mt19937_64 with an explicit Box-Muller
// step. std::normal_distribution is implementation-defined, so it would not
// give reproducible streams; this does, for a fixed seed.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * pi * u2;
        spare_ = r * std::sin(angle);
        have_spare_ = true;
        return r * std::cos(angle);
    }

private:
    static constexpr double pi = 3.14159265358979323846;

    // Uniform in (0, 1]: never 0, so log() stays finite.
    double uniform_open() {
        const std::uint64_t bits = engine_() >> 11;  // 53 random bits
        return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace tsr
