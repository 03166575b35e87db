#pragma once

// Grayscale image I/O, decimation, enlargement by the 2-D iterative / hybrid
// method and a PSNR benchmark against bilinear interpolation.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hrec/core.hpp"
#include "hrec/csv.hpp"
#include "hrec/signal.hpp"
#include "hrec/solver.hpp"

namespace hrec {

/// 8-bit grayscale image, row-major.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(std::size_t w, std::size_t h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(w * h, fill)
    {
    }

    std::uint8_t& at(std::size_t r, std::size_t c) { return pixels[r * width + c]; }
    std::uint8_t at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }

    void validate() const
    {
        if (width < 2 || height < 2)
            throw UsageError("image must be at least 2x2, got " + std::to_string(width) + "x" +
                             std::to_string(height));
        if (pixels.size() != width * height) throw UsageError("image pixel count mismatch");
    }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

// ---------------------------------------------------------------------------
// netpbm

namespace detail {

class PgmCursor {
public:
    PgmCursor(const std::string& data, std::string where) : data_(data), where_(std::move(where)) {}

    [[noreturn]] void fail(const std::string& what) const
    {
        throw IoError(where_ + ": " + what + " at byte " + std::to_string(pos_));
    }

    void skip_space_and_comments()
    {
        while (pos_ < data_.size()) {
            const char c = data_[pos_];
            if (c == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    unsigned long number()
    {
        skip_space_and_comments();
        if (pos_ >= data_.size()) fail("unexpected end of file");
        if (!std::isdigit(static_cast<unsigned char>(data_[pos_]))) fail("expected a decimal number");
        unsigned long v = 0;
        while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
            v = v * 10 + static_cast<unsigned long>(data_[pos_] - '0');
            if (v > 1'000'000'000UL) fail("number too large");
            ++pos_;
        }
        return v;
    }

    std::size_t pos() const noexcept { return pos_; }
    void advance(std::size_t n) { pos_ += n; }
    const std::string& data() const noexcept { return data_; }

private:
    const std::string& data_;
    std::string where_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses P2 (ASCII) or P5 (binary) netpbm graymaps with maxval 255.
inline GrayImage parse_pgm(const std::string& data, const std::string& where = "<memory>")
{
    detail::PgmCursor cur(data, where);
    if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
        cur.fail("not a P2/P5 graymap");
    const bool binary = data[1] == '5';
    cur.advance(2);
    const auto w = cur.number();
    const auto h = cur.number();
    const auto maxval = cur.number();
    if (w == 0 || h == 0) cur.fail("zero image dimension");
    if (maxval != 255) cur.fail("unsupported maxval " + std::to_string(maxval) + " (only 255)");

    GrayImage img(w, h);
    if (binary) {
        // exactly one whitespace byte separates the header from the raster
        if (cur.pos() >= data.size() || !std::isspace(static_cast<unsigned char>(data[cur.pos()])))
            cur.fail("missing whitespace after maxval");
        cur.advance(1);
        if (data.size() - cur.pos() < img.pixels.size())
            cur.fail("truncated raster: need " + std::to_string(img.pixels.size()) + " bytes, have " +
                     std::to_string(data.size() - cur.pos()));
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(cur.pos()), img.pixels.size(),
                    img.pixels.begin());
    } else {
        for (auto& p : img.pixels) {
            const auto v = cur.number();
            if (v > 255) cur.fail("pixel value " + std::to_string(v) + " exceeds maxval");
            p = static_cast<std::uint8_t>(v);
        }
    }
    return img;
}

inline GrayImage read_pgm(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open for reading");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_pgm(data, path.string());
}

enum class PgmEncoding { Binary, Ascii };

inline std::string encode_pgm(const GrayImage& img, PgmEncoding enc = PgmEncoding::Binary)
{
    img.validate();
    std::string out = (enc == PgmEncoding::Binary ? "P5\n" : "P2\n") + std::to_string(img.width) +
                      " " + std::to_string(img.height) + "\n255\n";
    if (enc == PgmEncoding::Binary) {
        out.append(img.pixels.begin(), img.pixels.end());
    } else {
        for (std::size_t r = 0; r < img.height; ++r) {
            for (std::size_t c = 0; c < img.width; ++c) {
                if (c) out += ' ';
                out += std::to_string(img.at(r, c));
            }
            out += '\n';
        }
    }
    return out;
}

inline void write_pgm(const GrayImage& img, const std::filesystem::path& path,
                      PgmEncoding enc = PgmEncoding::Binary)
{
    const auto bytes = encode_pgm(img, enc);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(path.string() + ": write failed");
}

// ---------------------------------------------------------------------------
// Resampling

/// Direct subsampling, no prefilter: out(i, j) = in(i f, j f).
inline GrayImage decimate(const GrayImage& img, std::size_t factor)
{
    if (factor < 1) throw UsageError("decimation factor must be >= 1");
    if (img.width % factor || img.height % factor)
        throw UsageError("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                         " is not divisible by " + std::to_string(factor));
    GrayImage out(img.width / factor, img.height / factor);
    for (std::size_t r = 0; r < out.height; ++r)
        for (std::size_t c = 0; c < out.width; ++c) out.at(r, c) = img.at(r * factor, c * factor);
    return out;
}

inline std::uint8_t to_pixel(double v)
{
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

inline GrayImage quantize(const std::vector<double>& v, std::size_t w, std::size_t h)
{
    GrayImage img(w, h);
    for (std::size_t i = 0; i < v.size(); ++i) img.pixels[i] = to_pixel(v[i]);
    return img;
}

enum class EnlargeMethod { Bilinear, Iterative, Hybrid };

inline std::string to_string(EnlargeMethod m)
{
    switch (m) {
    case EnlargeMethod::Bilinear: return "bilinear";
    case EnlargeMethod::Iterative: return "iterative";
    case EnlargeMethod::Hybrid: return "hybrid";
    }
    return "?";
}

struct EnlargeConfig {
    EnlargeMethod method = EnlargeMethod::Hybrid;
    std::size_t factor = 2;
    std::size_t iterations = 2;
    std::size_t modules = 1;  // ignored unless Hybrid
    double lambda = 1.0;
    std::optional<Chebyshev> acceleration{};

    std::size_t effective_modules() const { return method == EnlargeMethod::Hybrid ? modules : 0; }

    void validate() const
    {
        if (factor < 2) throw ConfigError("enlargement factor must be >= 2");
        if (method != EnlargeMethod::Bilinear && iterations < 1)
            throw ConfigError("iteration count must be >= 1");
        if (method != EnlargeMethod::Bilinear && !(lambda > 0.0 && lambda < 2.0))
            throw ConfigError("relaxation parameter must lie in (0, 2)");
    }

    std::string label() const
    {
        if (method == EnlargeMethod::Bilinear) return "bilinear";
        std::string s = to_string(method) + "-" + std::to_string(iterations) + "it";
        if (method == EnlargeMethod::Hybrid) s += "-" + std::to_string(modules) + "mod";
        if (acceleration) s += "-cheb";
        return s;
    }
};

/// Bilinear enlargement; fine pixel i f coincides with coarse pixel i, and
/// positions past the last coarse pixel hold the border value.
inline std::vector<double> bilinear_field(const GrayImage& low, std::size_t factor)
{
    const std::size_t w = low.width * factor;
    const std::size_t h = low.height * factor;
    std::vector<double> out(w * h);
    const double f = static_cast<double>(factor);
    for (std::size_t r = 0; r < h; ++r) {
        const std::size_t r0 = std::min(r / factor, low.height - 1);
        const std::size_t r1 = std::min(r0 + 1, low.height - 1);
        const double ty = static_cast<double>(r % factor) / f;
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t c0 = std::min(c / factor, low.width - 1);
            const std::size_t c1 = std::min(c0 + 1, low.width - 1);
            const double tx = static_cast<double>(c % factor) / f;
            const double top = (1 - tx) * low.at(r0, c0) + tx * low.at(r0, c1);
            const double bot = (1 - tx) * low.at(r1, c0) + tx * low.at(r1, c1);
            out[r * w + c] = (1 - ty) * top + ty * bot;
        }
    }
    return out;
}

/// Unclamped floating-point enlargement by the iterative / hybrid method.
///
/// The low-res image is mirrored about its last row and column (whole-sample
/// symmetry, period 2n - 2) so the circular DFT sees no jump at the borders;
/// the reconstruction is then cropped back to factor * size.
inline std::vector<double> enlarge_field(const GrayImage& low, const EnlargeConfig& cfg)
{
    low.validate();
    cfg.validate();
    if (cfg.method == EnlargeMethod::Bilinear) return bilinear_field(low, cfg.factor);

    const std::size_t ew = 2 * low.width - 2;
    const std::size_t eh = 2 * low.height - 2;
    const auto mirror = [](std::size_t i, std::size_t n) { return i < n ? i : 2 * n - 2 - i; };

    const GridSpec gx{ew, cfg.factor, 1.0};
    const GridSpec gy{eh, cfg.factor, 1.0};
    CoarseImage samples{gx, gy, ew, eh, std::vector<double>(ew * eh)};
    for (std::size_t r = 0; r < eh; ++r)
        for (std::size_t c = 0; c < ew; ++c)
            samples.values[r * ew + c] = low.at(mirror(r, low.height), mirror(c, low.width));

    ReconConfig2d rc;
    rc.op = ReconOperator2d::make(InterpKind::SampleAndHold, ModuleCount{cfg.effective_modules()},
                                  gx, gy);
    rc.lambda = cfg.lambda;
    rc.iterations = cfg.iterations;
    rc.acceleration = cfg.acceleration;
    const auto rep = iterate2d(samples, rc);

    const std::size_t w = low.width * cfg.factor;
    const std::size_t h = low.height * cfg.factor;
    std::vector<double> out(w * h);
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c) out[r * w + c] = rep.estimate.at(r, c);
    return out;
}

/// Enlarged image; clamping and rounding happen only here.
inline GrayImage enlarge(const GrayImage& low, const EnlargeConfig& cfg)
{
    return quantize(enlarge_field(low, cfg), low.width * cfg.factor, low.height * cfg.factor);
}

inline double psnr_db(const GrayImage& reference, const GrayImage& estimate)
{
    if (reference.width != estimate.width || reference.height != estimate.height)
        throw UsageError("psnr: dimension mismatch");
    std::vector<double> a(reference.pixels.begin(), reference.pixels.end());
    std::vector<double> b(estimate.pixels.begin(), estimate.pixels.end());
    return psnr_db(std::span<const double>(a), std::span<const double>(b), 255.0);
}

inline double mean_abs_error(const GrayImage& a, const GrayImage& b)
{
    if (a.pixels.size() != b.pixels.size()) throw UsageError("mean_abs_error: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
        acc += std::abs(static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]));
    return acc / static_cast<double>(a.pixels.size());
}

/// |a - b| stretched so the largest difference maps to 255 (all zero if equal).
inline GrayImage error_image(const GrayImage& a, const GrayImage& b)
{
    if (a.pixels.size() != b.pixels.size()) throw UsageError("error_image: dimension mismatch");
    GrayImage out(a.width, a.height);
    int peak = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
        peak = std::max(peak, std::abs(int(a.pixels[i]) - int(b.pixels[i])));
    if (peak == 0) return out;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const int d = std::abs(int(a.pixels[i]) - int(b.pixels[i]));
        out.pixels[i] = to_pixel(255.0 * d / peak);
    }
    return out;
}

struct BenchRow {
    EnlargeConfig cfg;
    double psnr_db = 0.0;
    double mae = 0.0;
    GrayImage reconstruction;
};

/// decimate -> enlarge -> PSNR for each method, in the given order.
inline std::vector<BenchRow> psnr_benchmark(const GrayImage& original,
                                            const std::vector<EnlargeConfig>& methods)
{
    original.validate();
    std::vector<BenchRow> rows;
    rows.reserve(methods.size());
    for (const auto& m : methods) {
        const auto low = decimate(original, m.factor);
        BenchRow row{m, 0.0, 0.0, enlarge(low, m)};
        row.psnr_db = psnr_db(original, row.reconstruction);
        row.mae = mean_abs_error(original, row.reconstruction);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows)
{
    std::string out = "method,factor,iters,modules,lambda,psnr_db\n";
    for (const auto& r : rows) {
        const bool bil = r.cfg.method == EnlargeMethod::Bilinear;
        out += csv_line({r.cfg.label(), std::to_string(r.cfg.factor),
                         bil ? "0" : std::to_string(r.cfg.iterations),
                         std::to_string(r.cfg.effective_modules()),
                         bil ? "" : format_double(r.cfg.lambda), format_double(r.psnr_db)});
    }
    return out;
}

}  // namespace hrec
