#pragma once

// Grid conventions and the dense signal/image containers shared by every
// other header. Continuous time is emulated by a fine uniform grid with R
// ticks per sampling interval T; signals are one period of a periodic signal.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hrec {

/// Invalid configuration (grid, relaxation parameter, frame bounds, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller passed arguments that do not fit together (length mismatch, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File or stream level failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sentinel returned by SNR/PSNR when the error energy is exactly zero.
inline constexpr double kInfiniteSnr = std::numeric_limits<double>::infinity();

/// Default fraction of samples ignored at each end when computing SNR.
inline constexpr double kDefaultEdgeIgnore = 0.10;

/// Sampling geometry along one axis.
///
/// `n_coarse` samples spaced T = `ticks_per_sample` fine ticks apart. The
/// signal band edge sits at 1/(2 k T) where k = `k_rate` is the oversampling
/// multiple relative to Nyquist.
struct GridSpec {
    std::size_t n_coarse = 128;
    std::size_t ticks_per_sample = 16;
    double k_rate = 1.0;

    std::size_t fine_length() const noexcept { return n_coarse * ticks_per_sample; }

    /// Band edge in cycles per fine tick.
    double band_edge() const noexcept
    {
        return 1.0 / (2.0 * k_rate * static_cast<double>(ticks_per_sample));
    }

    /// Band edge expressed in DFT bins of the fine grid.
    double band_edge_bins() const noexcept
    {
        return static_cast<double>(n_coarse) / (2.0 * k_rate);
    }

    void validate() const
    {
        if (ticks_per_sample < 2)
            throw ConfigError("grid: ticks per sample must be >= 2, got " +
                              std::to_string(ticks_per_sample));
        if (n_coarse < 4)
            throw ConfigError("grid: n_coarse must be >= 4, got " + std::to_string(n_coarse));
        if (!(k_rate >= 1.0) || !std::isfinite(k_rate))
            throw ConfigError("grid: k_rate must be a finite value >= 1");
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Real signal on the fine grid; one period of a periodic signal.
struct DenseSignal {
    GridSpec grid;
    std::vector<double> values;

    DenseSignal() = default;
    DenseSignal(GridSpec g, std::vector<double> v) : grid(g), values(std::move(v))
    {
        if (values.size() != grid.fine_length())
            throw UsageError("dense signal: length " + std::to_string(values.size()) +
                             " does not match grid length " +
                             std::to_string(grid.fine_length()));
    }
    explicit DenseSignal(GridSpec g, double fill = 0.0)
        : grid(g), values(g.fine_length(), fill)
    {
    }

    std::size_t size() const noexcept { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Real 2-D field on a fine rectangular grid, row-major (`height` rows of
/// `width` values). `grid_x` describes columns, `grid_y` rows.
struct DenseImage {
    GridSpec grid_x;
    GridSpec grid_y;
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;

    DenseImage() = default;
    DenseImage(GridSpec gx, GridSpec gy, double fill = 0.0)
        : grid_x(gx), grid_y(gy), width(gx.fine_length()), height(gy.fine_length()),
          values(width * height, fill)
    {
    }
    DenseImage(GridSpec gx, GridSpec gy, std::vector<double> v)
        : grid_x(gx), grid_y(gy), width(gx.fine_length()), height(gy.fine_length()),
          values(std::move(v))
    {
        if (values.size() != width * height)
            throw UsageError("dense image: value count does not match " +
                             std::to_string(width) + "x" + std::to_string(height));
    }

    std::size_t size() const noexcept { return values.size(); }
    double& at(std::size_t row, std::size_t col) { return values[row * width + col]; }
    double at(std::size_t row, std::size_t col) const { return values[row * width + col]; }
};

// Elementwise helpers used by the iteration engine. Both containers expose
// `values`, so one set of templates serves 1-D and 2-D.

template <class Field>
Field scaled(const Field& a, double s)
{
    Field out = a;
    for (auto& v : out.values) v *= s;
    return out;
}

/// out = a + s * (b - c)
template <class Field>
Field add_scaled_difference(const Field& a, double s, const Field& b, const Field& c)
{
    Field out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = a.values[i] + s * (b.values[i] - c.values[i]);
    return out;
}

template <class Field>
double l2_distance(const Field& a, const Field& b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

template <class Field>
double l2_norm(const Field& a)
{
    double acc = 0.0;
    for (double v : a.values) acc += v * v;
    return std::sqrt(acc);
}

template <class Field>
bool all_finite(const Field& a)
{
    for (double v : a.values)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace hrec
