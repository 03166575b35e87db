#pragma once

// Brute-force references for the unit tests. Nothing here touches FFTW.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hrec/core.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// O(n^2) DFT, bin j of x.
inline std::complex<double> dft_bin(const std::vector<double>& x, std::size_t j)
{
    const double n = static_cast<double>(x.size());
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ph = -2.0 * pi * static_cast<double>((j * i) % x.size()) / n;
        acc += x[i] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return acc;
}

inline double sinc(double u) { return u == 0.0 ? 1.0 : std::sin(pi * u) / (pi * u); }

/// Sum_{m=-n..n} sinc^p(ft - m).
inline double gain(int p, int n, double ft)
{
    double h = 0.0;
    for (int m = -n; m <= n; ++m) h += std::pow(sinc(ft - m), p);
    return h;
}

/// cos(2 pi bin i / N_f) on a grid.
inline hrec::DenseSignal tone(const hrec::GridSpec& g, double bin, double amp = 1.0)
{
    hrec::DenseSignal s(g);
    const double n = static_cast<double>(g.fine_length());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = amp * std::cos(2.0 * pi * bin * static_cast<double>(i) / n);
    return s;
}

/// Least-squares amplitude of cos(2 pi bin i / N) in x, over all samples.
inline double cos_amplitude(const std::vector<double>& x, double bin)
{
    double num = 0.0, den = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double c = std::cos(2.0 * pi * bin * static_cast<double>(i) / n);
        num += x[i] * c;
        den += c * c;
    }
    return num / den;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace oracle
