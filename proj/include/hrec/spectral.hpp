#pragma once

// Band-limiting operator: ideal lowpass filtering through the DFT of the
// whole fine grid (circular, no zero padding).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <fftw3.h>

#include "hrec/core.hpp"

namespace hrec {

/// Ideal lowpass specification in cycles per fine tick.
struct LowpassSpec {
    double cutoff = 0.5;
    double edge_weight = 0.5;  // gain of a bin lying exactly on the cutoff

    void validate() const
    {
        if (!(cutoff > 0.0 && cutoff <= 0.5))
            throw ConfigError("lowpass: cutoff must lie in (0, 0.5], got " +
                              std::to_string(cutoff));
    }

    /// Passband matching the signal band of `grid`.
    static LowpassSpec for_grid(const GridSpec& grid) { return LowpassSpec{grid.band_edge(), 0.5}; }
};

namespace detail {

struct FftPlans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

// FFTW planning is not thread-safe; execution with the new-array interface
// is. Plans are built once per length under a lock and never mutated.
class FftPlanCache {
public:
    static FftPlanCache& instance()
    {
        static FftPlanCache cache;
        return cache;
    }

    /// r2c / c2r pair for real length n.
    FftPlans real(std::size_t n)
    {
        std::lock_guard lock(mutex_);
        auto it = real_plans_.find(n);
        if (it != real_plans_.end()) return it->second;

        const int len = static_cast<int>(n);
        double* re = fftw_alloc_real(n);
        fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
        FftPlans p;
        p.forward = fftw_plan_dft_r2c_1d(len, re, cplx, FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.backward = fftw_plan_dft_c2r_1d(len, cplx, re,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
        fftw_free(re);
        fftw_free(cplx);
        real_plans_.emplace(n, p);
        return p;
    }

    /// Forward / backward complex pair for length n.
    FftPlans complex(std::size_t n)
    {
        std::lock_guard lock(mutex_);
        auto it = complex_plans_.find(n);
        if (it != complex_plans_.end()) return it->second;

        const int len = static_cast<int>(n);
        fftw_complex* a = fftw_alloc_complex(n);
        fftw_complex* b = fftw_alloc_complex(n);
        FftPlans p;
        p.forward = fftw_plan_dft_1d(len, a, b, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.backward = fftw_plan_dft_1d(len, a, b, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(a);
        fftw_free(b);
        complex_plans_.emplace(n, p);
        return p;
    }

    FftPlanCache(const FftPlanCache&) = delete;
    FftPlanCache& operator=(const FftPlanCache&) = delete;

private:
    FftPlanCache() = default;
    ~FftPlanCache()
    {
        for (auto* table : {&real_plans_, &complex_plans_})
            for (auto& [n, p] : *table) {
                fftw_destroy_plan(p.forward);
                fftw_destroy_plan(p.backward);
            }
    }

    std::mutex mutex_;
    std::map<std::size_t, FftPlans> real_plans_;
    std::map<std::size_t, FftPlans> complex_plans_;
};

}  // namespace detail

/// Forward real DFT (unnormalised), returns bins 0..n/2.
inline std::vector<std::complex<double>> real_dft(std::span<const double> x)
{
    const std::size_t n = x.size();
    std::vector<double> in(x.begin(), x.end());
    std::vector<std::complex<double>> out(n / 2 + 1);
    const auto plans = detail::FftPlanCache::instance().real(n);
    fftw_execute_dft_r2c(plans.forward, in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

/// Inverse of real_dft, including the 1/n normalisation.
inline std::vector<double> inverse_real_dft(std::vector<std::complex<double>> spectrum,
                                            std::size_t n)
{
    if (spectrum.size() != n / 2 + 1)
        throw UsageError("inverse_real_dft: spectrum has the wrong number of bins");
    std::vector<double> out(n);
    const auto plans = detail::FftPlanCache::instance().real(n);
    fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(spectrum.data()),
                         out.data());
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : out) v *= scale;
    return out;
}

/// Unnormalised complex DFT, forward (e^{-i...}) or backward.
inline std::vector<std::complex<double>> complex_dft(std::span<const std::complex<double>> x,
                                                     bool forward)
{
    const std::size_t n = x.size();
    std::vector<std::complex<double>> in(x.begin(), x.end());
    std::vector<std::complex<double>> out(n);
    const auto plans = detail::FftPlanCache::instance().complex(n);
    fftw_execute_dft(forward ? plans.forward : plans.backward,
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

/// Per-bin gain of the ideal lowpass for a length-n real DFT (bins 0..n/2).
inline std::vector<double> lowpass_mask(std::size_t n, const LowpassSpec& spec)
{
    spec.validate();
    const double edge = spec.cutoff * static_cast<double>(n);
    const double tol = 1e-9 * std::max(1.0, edge);
    std::vector<double> mask(n / 2 + 1);
    for (std::size_t j = 0; j < mask.size(); ++j) {
        const double bin = static_cast<double>(j);
        if (std::abs(bin - edge) <= tol)
            mask[j] = spec.edge_weight;
        else
            mask[j] = bin < edge ? 1.0 : 0.0;
    }
    return mask;
}

namespace detail {

inline void lowpass_in_place(std::span<double> x, std::span<const double> mask)
{
    const std::size_t n = x.size();
    auto spectrum = real_dft(x);
    for (std::size_t j = 0; j < spectrum.size(); ++j) spectrum[j] *= mask[j];
    const auto y = inverse_real_dft(std::move(spectrum), n);
    std::copy(y.begin(), y.end(), x.begin());
}

/// Applies a real, even 2-D frequency gain to a row-major field.
/// `gain(jx, jy)` receives non-negative bin indices (|jx| <= width/2,
/// |jy| <= height/2) and must not depend on their signs.
template <class Gain>
std::vector<double> filter2d(std::span<const double> values, std::size_t width,
                             std::size_t height, Gain&& gain)
{
    const std::size_t half = width / 2 + 1;
    std::vector<std::complex<double>> spec(half * height);
    for (std::size_t r = 0; r < height; ++r) {
        const auto row = real_dft(values.subspan(r * width, width));
        std::copy(row.begin(), row.end(), spec.begin() + static_cast<std::ptrdiff_t>(r * half));
    }
    std::vector<std::complex<double>> column(height);
    for (std::size_t c = 0; c < half; ++c) {
        for (std::size_t r = 0; r < height; ++r) column[r] = spec[r * half + c];
        auto fwd = complex_dft(column, true);
        for (std::size_t r = 0; r < height; ++r) {
            const std::size_t jy = r <= height / 2 ? r : height - r;
            fwd[r] *= gain(c, jy);
        }
        const auto back = complex_dft(fwd, false);
        for (std::size_t r = 0; r < height; ++r)
            spec[r * half + c] = back[r] / static_cast<double>(height);
    }
    std::vector<double> out(width * height);
    for (std::size_t r = 0; r < height; ++r) {
        std::vector<std::complex<double>> row(spec.begin() + static_cast<std::ptrdiff_t>(r * half),
                                              spec.begin() + static_cast<std::ptrdiff_t>((r + 1) * half));
        const auto y = inverse_real_dft(std::move(row), width);
        std::copy(y.begin(), y.end(), out.begin() + static_cast<std::ptrdiff_t>(r * width));
    }
    return out;
}

}  // namespace detail

inline DenseSignal lowpass(const DenseSignal& x, const LowpassSpec& spec)
{
    DenseSignal out = x;
    const auto mask = lowpass_mask(x.size(), spec);
    detail::lowpass_in_place(out.values, mask);
    return out;
}

/// Separable ideal lowpass: rows with `spec_x`, then columns with `spec_y`.
inline DenseImage lowpass2d(const DenseImage& img, const LowpassSpec& spec_x,
                            const LowpassSpec& spec_y)
{
    DenseImage out = img;
    const auto mask_x = lowpass_mask(img.width, spec_x);
    const auto mask_y = lowpass_mask(img.height, spec_y);
    for (std::size_t r = 0; r < img.height; ++r)
        detail::lowpass_in_place(std::span<double>(out.values).subspan(r * img.width, img.width),
                                 mask_x);
    std::vector<double> column(img.height);
    for (std::size_t c = 0; c < img.width; ++c) {
        for (std::size_t r = 0; r < img.height; ++r) column[r] = out.at(r, c);
        detail::lowpass_in_place(column, mask_y);
        for (std::size_t r = 0; r < img.height; ++r) out.at(r, c) = column[r];
    }
    return out;
}

}  // namespace hrec
