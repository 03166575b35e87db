#pragma once

// Sampling operator S: coarse samples of a dense field, re-interpolated with
// Sample-and-Hold or Linear Interpolation. Both interpolators wrap circularly.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrec/core.hpp"

namespace hrec {

enum class InterpKind { SampleAndHold, LinearInterp };

/// Power p of the sinc distortion: sinc^p(fT).
constexpr int distortion_exponent(InterpKind kind) noexcept
{
    return kind == InterpKind::SampleAndHold ? 1 : 2;
}

constexpr std::string_view to_string(InterpKind kind) noexcept
{
    return kind == InterpKind::SampleAndHold ? "sh" : "li";
}

inline InterpKind parse_interp_kind(std::string_view s)
{
    if (s == "sh" || s == "s&h" || s == "SH" || s == "sample-and-hold") return InterpKind::SampleAndHold;
    if (s == "li" || s == "LI" || s == "linear") return InterpKind::LinearInterp;
    throw UsageError("unknown interpolator '" + std::string(s) + "' (expected sh or li)");
}

struct CoarseSamples {
    GridSpec grid;
    std::vector<double> values;
};

/// Lattice samples of an image: `height` rows of `width` samples.
struct CoarseImage {
    GridSpec grid_x;
    GridSpec grid_y;
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const { return values[row * width + col]; }
};

inline CoarseSamples sample(const DenseSignal& x)
{
    const std::size_t r = x.grid.ticks_per_sample;
    CoarseSamples s{x.grid, std::vector<double>(x.grid.n_coarse)};
    for (std::size_t n = 0; n < s.values.size(); ++n) s.values[n] = x.values[n * r];
    return s;
}

inline CoarseImage sample2d(const DenseImage& img)
{
    const std::size_t rx = img.grid_x.ticks_per_sample;
    const std::size_t ry = img.grid_y.ticks_per_sample;
    CoarseImage s{img.grid_x, img.grid_y, img.grid_x.n_coarse, img.grid_y.n_coarse, {}};
    s.values.resize(s.width * s.height);
    for (std::size_t r = 0; r < s.height; ++r)
        for (std::size_t c = 0; c < s.width; ++c) s.values[r * s.width + c] = img.at(r * ry, c * rx);
    return s;
}

namespace detail {

/// Interpolates `s` (circular) onto `out`, which holds s.size() * ticks values.
///
/// The hold is zero-phase: tick i takes the sample nearest to i / ticks. When
/// ticks is even the tick exactly midway between two samples takes their
/// mean, so the discrete hold kernel is symmetric about every sample.
inline void interpolate_line(std::span<const double> s, std::size_t ticks, InterpKind kind,
                             std::span<double> out)
{
    const std::size_t n = s.size();
    const bool even = ticks % 2 == 0;
    const std::size_t half = ticks / 2;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = s[k];
        const double b = s[(k + 1) % n];
        double* dst = out.data() + k * ticks;
        if (kind == InterpKind::SampleAndHold) {
            for (std::size_t o = 0; o < ticks; ++o) {
                if (even && o == half)
                    dst[o] = 0.5 * (a + b);
                else
                    dst[o] = o < half + (even ? 0 : 1) ? a : b;
            }
        } else {
            const double inv = 1.0 / static_cast<double>(ticks);
            for (std::size_t o = 0; o < ticks; ++o) {
                const double t = static_cast<double>(o) * inv;
                dst[o] = (1.0 - t) * a + t * b;
            }
        }
    }
}

}  // namespace detail

inline DenseSignal interpolate(const CoarseSamples& s, InterpKind kind)
{
    if (s.values.size() != s.grid.n_coarse)
        throw UsageError("interpolate: sample count does not match grid");
    DenseSignal out(s.grid);
    detail::interpolate_line(s.values, s.grid.ticks_per_sample, kind, out.values);
    return out;
}

enum class SeparableOrder { RowsFirst, ColumnsFirst };

/// Separable 2-D interpolation with the tensor-product kernel.
inline DenseImage interpolate2d(const CoarseImage& s, InterpKind kind,
                                SeparableOrder order = SeparableOrder::RowsFirst)
{
    if (s.values.size() != s.width * s.height)
        throw UsageError("interpolate2d: sample count does not match lattice");
    const std::size_t rx = s.grid_x.ticks_per_sample;
    const std::size_t ry = s.grid_y.ticks_per_sample;
    DenseImage out(s.grid_x, s.grid_y);
    const std::size_t fw = out.width;
    const std::size_t fh = out.height;

    if (order == SeparableOrder::RowsFirst) {
        // coarse rows -> fine rows, then along columns
        std::vector<double> tmp(s.height * fw);
        for (std::size_t r = 0; r < s.height; ++r)
            detail::interpolate_line(std::span<const double>(s.values).subspan(r * s.width, s.width),
                                     rx, kind, std::span<double>(tmp).subspan(r * fw, fw));
        std::vector<double> col(s.height);
        std::vector<double> fine(fh);
        for (std::size_t c = 0; c < fw; ++c) {
            for (std::size_t r = 0; r < s.height; ++r) col[r] = tmp[r * fw + c];
            detail::interpolate_line(col, ry, kind, fine);
            for (std::size_t r = 0; r < fh; ++r) out.at(r, c) = fine[r];
        }
    } else {
        std::vector<double> tmp(fh * s.width);  // fine rows x coarse columns
        std::vector<double> col(s.height);
        std::vector<double> fine(fh);
        for (std::size_t c = 0; c < s.width; ++c) {
            for (std::size_t r = 0; r < s.height; ++r) col[r] = s.at(r, c);
            detail::interpolate_line(col, ry, kind, fine);
            for (std::size_t r = 0; r < fh; ++r) tmp[r * s.width + c] = fine[r];
        }
        for (std::size_t r = 0; r < fh; ++r)
            detail::interpolate_line(std::span<const double>(tmp).subspan(r * s.width, s.width), rx,
                                     kind, std::span<double>(out.values).subspan(r * fw, fw));
    }
    return out;
}

}  // namespace hrec
