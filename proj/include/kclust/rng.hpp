#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace kclust {

// Per-trajectory normal stream. mt19937_64 output is fixed by the standard;
// the uniform and Box-Muller steps are spelled out so the normals are too.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : eng_(seed) {}

    // in (0, 1]
    double uniform() { return double((eng_() >> 11) + 1) * 0x1.0p-53; }

    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double th = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(th);
        has_spare_ = true;
        return r * std::cos(th);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace kclust
