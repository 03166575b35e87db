#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hrec {

/// Seedable Gaussian source with a platform-independent output sequence.
///
/// The engine is std::mt19937_64, whose output is fixed by the standard.
/// std::normal_distribution is implementation-defined, so normals are drawn
/// here with the Box-Muller transform on 53-bit uniforms instead.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in (0, 1], 53 bits of mantissa.
    double uniform_open0()
    {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open0();
        const double u2 = uniform_open0();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// splitmix64 finaliser; used to derive decorrelated per-trial seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for stream `stream` of trial `trial` under a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                    std::uint64_t trial) noexcept
{
    return mix_seed(mix_seed(base ^ mix_seed(stream)) + trial);
}

}  // namespace hrec
