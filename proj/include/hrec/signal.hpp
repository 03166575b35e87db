#pragma once

// Test-signal generation, noise injection and fidelity metrics.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hrec/core.hpp"
#include "hrec/random.hpp"
#include "hrec/spectral.hpp"

namespace hrec {

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

inline double mean_square(std::span<const double> v)
{
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

namespace detail {

inline void scale_to_power(std::vector<double>& v, double power_db)
{
    const double ms = mean_square(v);
    if (!(ms > 0.0)) throw ConfigError("band-limited generator produced an all-zero signal");
    const double s = std::sqrt(db_to_power(power_db) / ms);
    for (auto& x : v) x *= s;
}

inline void require_finite_power(double power_db)
{
    if (!std::isfinite(power_db))
        throw ConfigError("signal power must be finite, got " + std::to_string(power_db) + " dB");
}

}  // namespace detail

/// Zero-mean Gaussian signal whose DFT vanishes at and above the band edge
/// of `grid`, scaled to mean-square power 10^(power_db/10).
inline DenseSignal gen_bandlimited(std::uint64_t seed, const GridSpec& grid, double power_db)
{
    grid.validate();
    detail::require_finite_power(power_db);

    const std::size_t n = grid.fine_length();
    GaussianRng rng(seed);
    std::vector<double> white(n);
    for (auto& v : white) v = rng.normal();

    auto spectrum = real_dft(white);
    const double edge = grid.band_edge_bins();
    for (std::size_t j = 0; j < spectrum.size(); ++j)
        if (static_cast<double>(j) >= edge - 1e-9) spectrum[j] = 0.0;
    auto values = inverse_real_dft(std::move(spectrum), n);
    detail::scale_to_power(values, power_db);
    return DenseSignal(grid, std::move(values));
}

/// 2-D counterpart with an isotropic band: only bins strictly inside the
/// ellipse (jx/Bx)^2 + (jy/By)^2 < 1 are kept, B being each axis' band edge.
inline DenseImage gen_bandlimited2d(std::uint64_t seed, const GridSpec& grid_x,
                                    const GridSpec& grid_y, double power_db)
{
    grid_x.validate();
    grid_y.validate();
    detail::require_finite_power(power_db);

    DenseImage img(grid_x, grid_y);
    GaussianRng rng(seed);
    for (auto& v : img.values) v = rng.normal();

    const double bx = grid_x.band_edge_bins();
    const double by = grid_y.band_edge_bins();
    auto values = detail::filter2d(img.values, img.width, img.height,
                                   [bx, by](std::size_t jx, std::size_t jy) {
                                       const double u = static_cast<double>(jx) / bx;
                                       const double w = static_cast<double>(jy) / by;
                                       return u * u + w * w < 1.0 - 1e-12 ? 1.0 : 0.0;
                                   });
    detail::scale_to_power(values, power_db);
    img.values = std::move(values);
    return img;
}

/// x + n with n i.i.d. N(0, 10^(noise_power_db/10)).
template <class Field>
Field add_awgn(const Field& x, double noise_power_db, std::uint64_t seed)
{
    const double sd = std::sqrt(db_to_power(noise_power_db));
    GaussianRng rng(seed);
    Field out = x;
    for (auto& v : out.values) v += sd * rng.normal();
    return out;
}

namespace detail {

inline std::size_t edge_skip(std::size_t n, double frac)
{
    if (!(frac >= 0.0 && frac < 0.5))
        throw UsageError("edge-ignore fraction must lie in [0, 0.5), got " + std::to_string(frac));
    const std::size_t skip = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n) - 1e-9));
    if (2 * skip >= n) throw UsageError("edge-ignore fraction leaves no interior samples");
    return skip;
}

inline double ratio_db(double signal, double error)
{
    if (error == 0.0) return kInfiniteSnr;
    return 10.0 * std::log10(signal / error);
}

}  // namespace detail

/// Interior SNR in dB: 10 log10(sum ref^2 / sum (ref - est)^2) over
/// [ceil(frac N), N - ceil(frac N)). Returns kInfiniteSnr on zero error.
inline double snr_db(std::span<const double> reference, std::span<const double> estimate,
                     double edge_ignore_frac = kDefaultEdgeIgnore)
{
    if (reference.size() != estimate.size())
        throw UsageError("snr: length mismatch (" + std::to_string(reference.size()) + " vs " +
                         std::to_string(estimate.size()) + ")");
    const std::size_t n = reference.size();
    const std::size_t skip = detail::edge_skip(n, edge_ignore_frac);
    double sig = 0.0;
    double err = 0.0;
    for (std::size_t i = skip; i < n - skip; ++i) {
        const double d = reference[i] - estimate[i];
        sig += reference[i] * reference[i];
        err += d * d;
    }
    return detail::ratio_db(sig, err);
}

inline double snr_db(const DenseSignal& reference, const DenseSignal& estimate,
                     double edge_ignore_frac = kDefaultEdgeIgnore)
{
    return snr_db(reference.values, estimate.values, edge_ignore_frac);
}

/// 2-D interior SNR; a border frame of the given fraction is excluded on
/// every side.
inline double snr_db(const DenseImage& reference, const DenseImage& estimate,
                     double edge_ignore_frac = kDefaultEdgeIgnore)
{
    if (reference.width != estimate.width || reference.height != estimate.height)
        throw UsageError("snr: image dimension mismatch");
    const std::size_t sx = detail::edge_skip(reference.width, edge_ignore_frac);
    const std::size_t sy = detail::edge_skip(reference.height, edge_ignore_frac);
    double sig = 0.0;
    double err = 0.0;
    for (std::size_t r = sy; r < reference.height - sy; ++r)
        for (std::size_t c = sx; c < reference.width - sx; ++c) {
            const double a = reference.at(r, c);
            const double d = a - estimate.at(r, c);
            sig += a * a;
            err += d * d;
        }
    return detail::ratio_db(sig, err);
}

/// 10 log10(max_value^2 / MSE) over all pixels; kInfiniteSnr on zero MSE.
inline double psnr_db(std::span<const double> reference, std::span<const double> estimate,
                      double max_value = 255.0)
{
    if (reference.size() != estimate.size()) throw UsageError("psnr: dimension mismatch");
    if (!(max_value > 0.0)) throw UsageError("psnr: max value must be positive");
    if (reference.empty()) throw UsageError("psnr: empty image");
    double err = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double d = reference[i] - estimate[i];
        err += d * d;
    }
    const double mse = err / static_cast<double>(reference.size());
    return detail::ratio_db(max_value * max_value, mse);
}

inline double psnr_db(const DenseImage& reference, const DenseImage& estimate,
                      double max_value = 255.0)
{
    if (reference.width != estimate.width || reference.height != estimate.height)
        throw UsageError("psnr: dimension mismatch");
    return psnr_db(reference.values, estimate.values, max_value);
}

}  // namespace hrec
