#pragma once

// Closed-form convergence analysis of the classical and hybrid iterations.
//
// On a Nyquist-rate band-limited input the operator G acts per frequency as
// H_N(f) = sum_{m=-N}^{N} sinc^p(fT - m), p = 1 for S&H and 2 for LI, so one
// relaxed step shrinks the error at f by |1 - lambda H_N(f)|.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hrec/core.hpp"
#include "hrec/modular.hpp"
#include "hrec/samplers.hpp"

namespace hrec {

/// sin(pi u) / (pi u), sinc(0) = 1.
inline double sinc(double u)
{
    if (u == 0.0) return 1.0;
    const double x = std::numbers::pi * u;
    return std::sin(x) / x;
}

/// H_N(fT); requires |fT| <= 1/2.
inline double distortion_gain(InterpKind kind, ModuleCount n, double ft)
{
    if (!(std::abs(ft) <= 0.5))
        throw UsageError("distortion_gain: |fT| must not exceed 1/2, got " + std::to_string(ft));
    const int p = distortion_exponent(kind);
    const auto modules = static_cast<long>(n.count);
    double h = 0.0;
    for (long m = -modules; m <= modules; ++m) {
        const double s = sinc(ft - static_cast<double>(m));
        h += p == 1 ? s : s * s;
    }
    return h;
}

/// Number of interior grid points used for maxima over frequency.
inline constexpr std::size_t kFrequencyGridPoints = 20000;

namespace detail {

/// H_N sampled on [0, 1/(2k)] including both endpoints.
inline std::vector<double> gain_profile(InterpKind kind, ModuleCount n, double k_rate)
{
    if (!(k_rate >= 1.0)) throw UsageError("k_rate must be >= 1");
    const double top = 1.0 / (2.0 * k_rate);
    std::vector<double> h(kFrequencyGridPoints + 1);
    for (std::size_t i = 0; i <= kFrequencyGridPoints; ++i) {
        const double ft = top * static_cast<double>(i) / static_cast<double>(kFrequencyGridPoints);
        h[i] = distortion_gain(kind, n, ft);
    }
    return h;
}

inline double max_residual(const std::vector<double>& profile, double lambda)
{
    double r = 0.0;
    for (double h : profile) r = std::max(r, std::abs(1.0 - lambda * h));
    return r;
}

}  // namespace detail

/// r = max over fT in [0, 1/(2k)] of |1 - lambda H_N(fT)|.
inline double contraction_factor(InterpKind kind, ModuleCount n, double lambda, double k_rate = 1.0)
{
    if (!(lambda > 0.0)) throw UsageError("contraction_factor: lambda must be positive");
    return detail::max_residual(detail::gain_profile(kind, n, k_rate), lambda);
}

/// Frequency (in units of 1/T) at which the contraction maximum is attained.
inline double contraction_argmax(InterpKind kind, ModuleCount n, double lambda, double k_rate = 1.0)
{
    const auto profile = detail::gain_profile(kind, n, k_rate);
    std::size_t best = 0;
    for (std::size_t i = 0; i < profile.size(); ++i)
        if (std::abs(1.0 - lambda * profile[i]) > std::abs(1.0 - lambda * profile[best])) best = i;
    return (1.0 / (2.0 * k_rate)) * static_cast<double>(best) / static_cast<double>(kFrequencyGridPoints);
}

/// Values printed in the original derivation where they differ from the
/// recomputed ones; kept for side-by-side reporting.
struct PrintedReference {
    double contraction_lambda1 = 0.0;  // r at lambda = 1, N = 1, Nyquist rate
    double lambda_opt = 0.0;
};

inline PrintedReference printed_reference(InterpKind kind)
{
    if (kind == InterpKind::SampleAndHold) return {0.06, 0.94};
    return {0.234, 1.31};
}

struct LambdaOpt {
    double recomputed = 0.0;       // 1 / H_1(1/2)
    double printed = 0.0;
    bool agrees = false;           // |recomputed - printed| < 0.01
};

/// Band-edge optimal lambda for one module: 1 / H_1(1/2).
inline LambdaOpt lambda_opt_band_edge(InterpKind kind, ModuleCount n)
{
    if (n.count != 1)
        throw UsageError("lambda_opt_band_edge: closed form exists for one module only, got " +
                         std::to_string(n.count));
    LambdaOpt out;
    out.recomputed = 1.0 / distortion_gain(kind, n, 0.5);
    out.printed = printed_reference(kind).lambda_opt;
    out.agrees = std::abs(out.recomputed - out.printed) < 0.01;
    return out;
}

/// argmin over lambda in (0, 2) of contraction_factor, to 1e-4 or better.
inline double lambda_opt_minimax(InterpKind kind, ModuleCount n, double k_rate = 1.0)
{
    const auto profile = detail::gain_profile(kind, n, k_rate);
    double best = 1.0;
    double best_r = detail::max_residual(profile, best);
    for (int i = 1; i < 2000; ++i) {
        const double lam = 0.001 * i;
        const double r = detail::max_residual(profile, lam);
        if (r < best_r) {
            best_r = r;
            best = lam;
        }
    }
    const double lo = std::max(best - 0.001, 1e-6);
    const double hi = std::min(best + 0.001, 2.0 - 1e-6);
    for (int i = 0; i <= 400; ++i) {
        const double lam = lo + (hi - lo) * i / 400.0;
        const double r = detail::max_residual(profile, lam);
        if (r < best_r) {
            best_r = r;
            best = lam;
        }
    }
    return best;
}

struct NoiseBound {
    std::optional<double> coefficient;
    std::string note;
};

/// Noise-tolerance coefficient c * lambda^(2-k) bounding ||n|| by
/// coefficient * ||X_k - X_{k-1}||. The constants 0.318 (classical S&H) and
/// 0.531 (one-module hybrid S&H) are the published values; they are not
/// recomputed here.
inline NoiseBound noise_tolerance_coeff(InterpKind kind, ModuleCount n, double lambda,
                                        std::size_t iteration)
{
    if (kind != InterpKind::SampleAndHold)
        return {std::nullopt, "noise bound is published for S&H only"};
    double base = 0.0;
    if (n.count == 0)
        base = 0.318;
    else if (n.count == 1)
        base = 0.531;
    else
        return {std::nullopt, "noise bound is published for 0 or 1 modules only"};
    const double scale = std::pow(lambda, 2.0 - static_cast<double>(iteration));
    return {base * scale, n.count == 0 ? "classical S&H bound" : "one-module hybrid S&H bound"};
}

struct OpCounts {
    double additions = 0.0;
    double multiplications = 0.0;
};

/// Real operations per sample for M iterations with FFT block size N
/// (a power of two). Hybrid adds 2M of each for the one-module mixer.
inline OpCounts op_counts(std::uint64_t iterations, std::uint64_t fft_block, bool hybrid_one_module)
{
    if (iterations < 1) throw UsageError("op_counts: M must be >= 1");
    if (fft_block < 1 || (fft_block & (fft_block - 1)) != 0)
        throw UsageError("op_counts: FFT block size must be a power of two");
    const double m = static_cast<double>(iterations);
    const double lg = std::log2(2.0 * static_cast<double>(fft_block));
    OpCounts c{m * (4.0 * lg + 2.0), m * (2.0 * lg + 1.0)};
    if (hybrid_one_module) {
        c.additions += 2.0 * m;
        c.multiplications += 2.0 * m;
    }
    return c;
}

/// 2-D cost for a K x K image: rows then columns, i.e. the 1-D cost times 2K.
inline OpCounts op_counts_2d(std::uint64_t iterations, std::uint64_t fft_block,
                             bool hybrid_one_module, std::uint64_t image_size)
{
    auto c = op_counts(iterations, fft_block, hybrid_one_module);
    const double f = 2.0 * static_cast<double>(image_size);
    return {c.additions * f, c.multiplications * f};
}

/// Expected SNR gain per iteration for contraction factor r: -20 log10 r.
inline double predicted_gain_db(double r)
{
    if (!(r > 0.0 && r < 1.0))
        throw UsageError("predicted_gain_db: r must lie in (0, 1), got " + std::to_string(r));
    return -20.0 * std::log10(r);
}

struct AnalysisResult {
    double r = 0.0;
    double lambda_opt = 0.0;   // minimax over lambda
    double db_per_iter = 0.0;  // -20 log10 r, infinite when r == 0
    std::optional<double> noise_coeff;
};

/// Bundles the analysis for one configuration (noise coefficient at k = 2).
inline AnalysisResult analyze(InterpKind kind, ModuleCount n, double lambda, double k_rate)
{
    AnalysisResult a;
    a.r = contraction_factor(kind, n, lambda, k_rate);
    a.lambda_opt = lambda_opt_minimax(kind, n, k_rate);
    a.db_per_iter = a.r > 0.0 && a.r < 1.0 ? predicted_gain_db(a.r)
                                           : (a.r == 0.0 ? kInfiniteSnr : -20.0 * std::log10(a.r));
    a.noise_coeff = noise_tolerance_coeff(kind, n, lambda, 2).coefficient;
    return a;
}

}  // namespace hrec
