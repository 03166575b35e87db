#pragma once

// Modular compensator: multiply the interpolated signal by
// 1 + 2 sum_{m=1}^{N} cos(2 pi m t / T) and lowpass. The mixing shifts the
// spectral replicas created by sampling back onto baseband, so the effective
// per-bin gain becomes sum_{m=-N}^{N} sinc^p(fT - m).

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "hrec/core.hpp"
#include "hrec/samplers.hpp"
#include "hrec/spectral.hpp"

namespace hrec {

/// Number of cosine harmonics in the mixer. Zero means identity.
struct ModuleCount {
    std::size_t count = 0;

    friend bool operator==(ModuleCount, ModuleCount) = default;
};

namespace detail {

class MixerCache {
public:
    static MixerCache& instance()
    {
        static MixerCache cache;
        return cache;
    }

    /// One period (ticks values) of the mixer; tick 0 is a sample position.
    std::shared_ptr<const std::vector<double>> period(std::size_t ticks, std::size_t modules)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(ticks, modules);
        auto it = tables_.find(key);
        if (it != tables_.end()) return it->second;
        auto table = std::make_shared<std::vector<double>>(ticks, 1.0);
        for (std::size_t i = 0; i < ticks; ++i)
            for (std::size_t m = 1; m <= modules; ++m) {
                // reduce m*i modulo ticks so sample ticks give exactly 1 + 2N
                const std::size_t phase = (m * i) % ticks;
                (*table)[i] += 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(phase) /
                                              static_cast<double>(ticks));
            }
        tables_.emplace(key, table);
        return table;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const std::vector<double>>> tables_;
};

}  // namespace detail

/// Mixer value m(i) = 1 + 2 sum_{m=1}^{N} cos(2 pi m i / R).
inline double mixer_value(std::size_t tick, std::size_t ticks_per_sample, ModuleCount n)
{
    const auto table = detail::MixerCache::instance().period(ticks_per_sample, n.count);
    return (*table)[tick % ticks_per_sample];
}

inline DenseSignal cosine_mix(const DenseSignal& s, ModuleCount n)
{
    if (n.count == 0) return s;
    const std::size_t r = s.grid.ticks_per_sample;
    const auto table = detail::MixerCache::instance().period(r, n.count);
    DenseSignal out = s;
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= (*table)[i % r];
    return out;
}

/// Separable 2-D mixer m_x(col) * m_y(row). For N = 1 this expands to
/// 1 + 2cos(x) + 2cos(y) + 4cos(x)cos(y).
inline DenseImage cosine_mix2d(const DenseImage& img, ModuleCount n)
{
    if (n.count == 0) return img;
    const std::size_t rx = img.grid_x.ticks_per_sample;
    const std::size_t ry = img.grid_y.ticks_per_sample;
    const auto tx = detail::MixerCache::instance().period(rx, n.count);
    const auto ty = detail::MixerCache::instance().period(ry, n.count);
    DenseImage out = img;
    for (std::size_t r = 0; r < img.height; ++r) {
        const double my = (*ty)[r % ry];
        for (std::size_t c = 0; c < img.width; ++c) out.at(r, c) *= my * (*tx)[c % rx];
    }
    return out;
}

/// lowpass(cosine_mix(interpolate(samples)))
inline DenseSignal modular_reconstruct(const CoarseSamples& samples, InterpKind kind, ModuleCount n,
                                       const LowpassSpec& lpf)
{
    return lowpass(cosine_mix(interpolate(samples, kind), n), lpf);
}

inline DenseImage modular_reconstruct2d(const CoarseImage& samples, InterpKind kind, ModuleCount n,
                                        const LowpassSpec& lpf_x, const LowpassSpec& lpf_y)
{
    return lowpass2d(cosine_mix2d(interpolate2d(samples, kind), n), lpf_x, lpf_y);
}

}  // namespace hrec
