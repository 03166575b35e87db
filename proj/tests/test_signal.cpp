#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hrec/signal.hpp"
#include "oracles.hpp"

using namespace hrec;

TEST(Generator, PowerAndBandLimit)
{
    const GridSpec g{64, 16, 1.0};
    const auto x = gen_bandlimited(1, g, 34.0);
    ASSERT_EQ(x.size(), 1024u);
    EXPECT_NEAR(mean_square(x.values) / std::pow(10.0, 3.4), 1.0, 1e-9);
    const double total = std::sqrt(mean_square(x.values) * x.size()) * std::sqrt(double(x.size()));
    for (std::size_t j = 32; j <= 512; ++j) EXPECT_LT(std::abs(oracle::dft_bin(x.values, j)), 1e-9 * total) << j;
    // something below the edge
    EXPECT_GT(std::abs(oracle::dft_bin(x.values, 5)), 1.0);
}

TEST(Generator, DoubleRateBand)
{
    const GridSpec g{64, 8, 2.0};
    const auto x = gen_bandlimited(3, g, 0.0);
    for (std::size_t j = 16; j <= 256; j += 7) EXPECT_LT(std::abs(oracle::dft_bin(x.values, j)), 1e-9);
}

TEST(Generator, Deterministic)
{
    const GridSpec g{32, 8, 1.0};
    EXPECT_EQ(gen_bandlimited(9, g, 10.0).values, gen_bandlimited(9, g, 10.0).values);
    EXPECT_NE(gen_bandlimited(9, g, 10.0).values, gen_bandlimited(10, g, 10.0).values);
}

TEST(Generator, Rejects)
{
    const GridSpec g{32, 8, 1.0};
    EXPECT_THROW(gen_bandlimited(1, g, -std::numeric_limits<double>::infinity()), ConfigError);
    EXPECT_THROW(gen_bandlimited(1, g, std::nan("")), ConfigError);
    EXPECT_THROW(gen_bandlimited(1, GridSpec{32, 1, 1.0}, 0.0), ConfigError);
    EXPECT_THROW(gen_bandlimited(1, GridSpec{3, 8, 1.0}, 0.0), ConfigError);
    EXPECT_THROW(gen_bandlimited(1, GridSpec{32, 8, 0.5}, 0.0), ConfigError);
}

TEST(Generator, RelowpassIsNoop)
{
    const GridSpec g{128, 16, 1.0};
    const auto x = gen_bandlimited(4, g, 34.0);
    const auto y = lowpass(x, LowpassSpec::for_grid(g));
    EXPECT_LT(oracle::max_abs_diff(x.values, y.values), 1e-10);
}

TEST(Generator, TwoDIsotropicBand)
{
    const GridSpec g{8, 4, 1.0};  // 32 x 32, band edge 4 bins
    const auto img = gen_bandlimited2d(2, g, g, 0.0);
    EXPECT_NEAR(mean_square(img.values), 1.0, 1e-9);
    // 2-D DFT by brute force
    for (int jy = 0; jy < 32; ++jy)
        for (int jx = 0; jx < 32; ++jx) {
            const int ax = std::min(jx, 32 - jx), ay = std::min(jy, 32 - jy);
            std::complex<double> acc = 0.0;
            for (int r = 0; r < 32; ++r)
                for (int c = 0; c < 32; ++c) {
                    const double ph = -2 * oracle::pi * (double(jx * c) + double(jy * r)) / 32.0;
                    acc += img.at(r, c) * std::complex<double>(std::cos(ph), std::sin(ph));
                }
            if (ax * ax + ay * ay >= 16) EXPECT_LT(std::abs(acc), 1e-9) << jx << "," << jy;
        }
}

TEST(Awgn, VanishingNoise)
{
    const GridSpec g{32, 8, 1.0};
    const auto x = gen_bandlimited(1, g, 34.0);
    const auto y = add_awgn(x, -300.0, 5);
    EXPECT_LT(oracle::max_abs_diff(x.values, y.values), 1e-12);
}

TEST(Awgn, EmpiricalSnr)
{
    const GridSpec g{128, 16, 1.0};
    double acc = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto x = gen_bandlimited(s, g, 34.0);
        const auto y = add_awgn(x, -20.0, 100 + s);
        acc += snr_db(x, y, 0.0);
    }
    EXPECT_NEAR(acc / 10.0, 54.0, 1.0);
}

TEST(Awgn, SeedsDifferVarianceStable)
{
    const GridSpec g{256, 16, 1.0};  // 4096
    const DenseSignal zero(g);
    const auto a = add_awgn(zero, 0.0, 1);
    const auto b = add_awgn(zero, 0.0, 2);
    EXPECT_NE(a.values, b.values);
    EXPECT_NEAR(mean_square(a.values), 1.0, 0.05);
    EXPECT_NEAR(mean_square(b.values), 1.0, 0.05);
}

TEST(Awgn, PreservesMean)
{
    const GridSpec g{8, 4, 1.0};
    DenseSignal x(g, 3.0);
    const int trials = 400;
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) acc += add_awgn(x, 0.0, 1000 + t)[5];
    EXPECT_NEAR(acc / trials, 3.0, 3.0 / std::sqrt(double(trials)));
}

TEST(Snr, Sentinels)
{
    const GridSpec g{16, 4, 1.0};
    const auto x = gen_bandlimited(1, g, 0.0);
    EXPECT_EQ(snr_db(x, x), kInfiniteSnr);
    EXPECT_NEAR(snr_db(x, DenseSignal(g)), 0.0, 1e-12);
}

TEST(Snr, OffsetAgainstDirectSum)
{
    const GridSpec g{50, 4, 1.0};  // 200 samples, skip 20 each side
    DenseSignal ref(g);
    for (std::size_t i = 0; i < ref.size(); ++i) ref[i] = std::sin(2 * oracle::pi * i / 37.0);
    DenseSignal est = ref;
    for (auto& v : est.values) v += 0.01;
    double sig = 0;
    for (std::size_t i = 20; i < 180; ++i) sig += ref[i] * ref[i];
    EXPECT_NEAR(snr_db(ref, est), 10 * std::log10(sig / (0.0001 * 160)), 1e-9);
}

TEST(Snr, EdgeFractionRounding)
{
    // ceil(0.1 * 25) = 3 samples skipped each side
    std::vector<double> ref(25, 1.0), est(25, 1.0);
    est[2] = 100.0;
    est[22] = 100.0;
    EXPECT_EQ(snr_db(ref, est), kInfiniteSnr);
    est[3] = 0.0;
    EXPECT_NEAR(snr_db(ref, est), 10 * std::log10(19.0), 1e-12);
}

TEST(Snr, MonotoneInPerturbation)
{
    const GridSpec g{32, 8, 1.0};
    const auto x = gen_bandlimited(2, g, 0.0);
    const auto w = gen_bandlimited(3, g, 0.0);
    double prev = kInfiniteSnr;
    for (double c : {1e-6, 1e-4, 1e-2, 1.0, 10.0}) {
        DenseSignal y = x;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * w[i];
        const double s = snr_db(x, y);
        EXPECT_LT(s, prev);
        prev = s;
    }
}

TEST(Snr, Errors)
{
    std::vector<double> a(10), b(11);
    EXPECT_THROW(snr_db(a, b), UsageError);
    EXPECT_THROW(snr_db(a, a, 0.5), UsageError);
    EXPECT_THROW(snr_db(a, a, -0.1), UsageError);
}

TEST(Snr, ImageFrame)
{
    const GridSpec g{5, 2, 1.0};  // 10 x 10, frame of 1
    DenseImage ref(g, g, 1.0);
    DenseImage est = ref;
    est.at(0, 4) = 50.0;  // in the frame, ignored
    EXPECT_EQ(snr_db(ref, est), kInfiniteSnr);
    est.at(5, 5) = 0.0;
    EXPECT_NEAR(snr_db(ref, est), 10 * std::log10(64.0), 1e-12);
}

TEST(Psnr, ClosedForms)
{
    std::vector<double> a(64, 100.0), b(64, 101.0);
    EXPECT_EQ(psnr_db(a, a), kInfiniteSnr);
    EXPECT_NEAR(psnr_db(a, b), 20 * std::log10(255.0), 1e-12);
    EXPECT_NEAR(20 * std::log10(255.0), 48.13, 0.01);
}

TEST(Psnr, BruteForce)
{
    GaussianRng rng(5);
    std::vector<double> a(64), b(64);
    for (auto& v : a) v = 128 + 40 * rng.normal();
    for (auto& v : b) v = 128 + 40 * rng.normal();
    double mse = 0;
    for (int i = 0; i < 64; ++i) mse += (a[i] - b[i]) * (a[i] - b[i]);
    mse /= 64;
    EXPECT_NEAR(psnr_db(a, b), 10 * std::log10(255.0 * 255.0 / mse), 1e-9);
}

TEST(Psnr, Errors)
{
    std::vector<double> a(4), b(5);
    EXPECT_THROW(psnr_db(a, b), UsageError);
    EXPECT_THROW(psnr_db(a, a, 0.0), UsageError);
    const GridSpec g{4, 2, 1.0}, h{5, 2, 1.0};
    EXPECT_THROW(psnr_db(DenseImage(g, g), DenseImage(g, h)), UsageError);
}

TEST(Rng, FixedSequence)
{
    // mt19937_64's 10000th output is fixed by the standard
    std::mt19937_64 e(5489u);
    e.discard(9999);
    EXPECT_EQ(e(), 9981545732273789042ULL);
    GaussianRng a(42), b(42);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a.normal(), b.normal());
    EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 1, 0));
    EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
}

TEST(Containers, LengthChecked)
{
    const GridSpec g{8, 4, 1.0};
    EXPECT_THROW(DenseSignal(g, std::vector<double>(31)), UsageError);
    EXPECT_THROW(DenseImage(g, g, std::vector<double>(5)), UsageError);
    EXPECT_EQ(g.fine_length(), 32u);
    EXPECT_DOUBLE_EQ(g.band_edge(), 1.0 / 8.0);
}
