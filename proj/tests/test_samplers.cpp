#include <gtest/gtest.h>

#include "hrec/samplers.hpp"
#include "hrec/signal.hpp"
#include "hrec/spectral.hpp"
#include "oracles.hpp"

using namespace hrec;

namespace {
constexpr auto SH = InterpKind::SampleAndHold;
constexpr auto LI = InterpKind::LinearInterp;
}  // namespace

TEST(Sample, IndexArithmetic)
{
    const GridSpec g{3, 4, 1.0};
    DenseSignal x(g);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = double(i);
    EXPECT_EQ(sample(x).values, (std::vector<double>{0, 4, 8}));
    EXPECT_EQ(sample(DenseSignal(g, 2.5)).values, (std::vector<double>(3, 2.5)));
}

TEST(Sample, RoundTripThroughIdealReconstruction)
{
    // at k = 2 the ideal lowpass of the impulse train returns the signal
    const GridSpec g{64, 8, 2.0};
    const auto x = gen_bandlimited(3, g, 0.0);
    const auto s = sample(x);
    DenseSignal train(g);
    for (std::size_t n = 0; n < s.values.size(); ++n) train[n * 8] = 8.0 * s.values[n];
    const auto ideal = lowpass(train, LowpassSpec{1.0 / 16.0, 1.0});
    const auto again = sample(ideal);
    EXPECT_LT(oracle::max_abs_diff(again.values, s.values), 1e-10);
}

TEST(Interpolate, DcExact)
{
    const GridSpec g{8, 6, 1.0};
    CoarseSamples s{g, std::vector<double>(8, -1.75)};
    for (auto k : {SH, LI})
        for (double v : interpolate(s, k).values) EXPECT_EQ(v, -1.75);
}

TEST(Interpolate, LinearRamp)
{
    const GridSpec g{2, 4, 1.0};
    const auto d = interpolate(CoarseSamples{g, {0, 1}}, LI);
    EXPECT_EQ(d.values, (std::vector<double>{0, .25, .5, .75, 1, .75, .5, .25}));
}

TEST(Interpolate, CenteredHold)
{
    // ticks 0,1 -> s0; tick 2 is the midpoint tie; ticks 3 -> s1 (R=4)
    const GridSpec g{2, 4, 1.0};
    const auto d = interpolate(CoarseSamples{g, {2, 6}}, SH);
    EXPECT_EQ(d.values, (std::vector<double>{2, 2, 4, 6, 6, 6, 4, 2}));
    // odd R has no ties
    const GridSpec h{2, 3, 1.0};
    EXPECT_EQ(interpolate(CoarseSamples{h, {2, 6}}, SH).values, (std::vector<double>{2, 2, 6, 6, 6, 2}));
}

TEST(Interpolate, LinearHitsSamples)
{
    const GridSpec g{16, 8, 1.0};
    const auto s = sample(gen_bandlimited(5, g, 0.0));
    const auto d = interpolate(s, LI);
    for (std::size_t n = 0; n < 16; ++n) EXPECT_EQ(d[n * 8], s.values[n]);
}

TEST(Interpolate, HoldIdempotent)
{
    const GridSpec g{16, 8, 1.0};
    const auto s = sample(gen_bandlimited(5, g, 0.0));
    const auto d = interpolate(s, SH);
    EXPECT_EQ(interpolate(sample(d), SH).values, d.values);
}

TEST(Interpolate, BandEdgeToneAttenuation)
{
    // tone one bin below the edge, fT = 0.498
    const GridSpec g{512, 16, 1.0};
    const auto x = oracle::tone(g, 255.0);
    const auto y = lowpass(interpolate(sample(x), SH), LowpassSpec::for_grid(g));
    EXPECT_NEAR(oracle::cos_amplitude(y.values, 255.0) / (2.0 / oracle::pi), 1.0, 0.01);
}

TEST(Interpolate, PerBinResponse)
{
    const GridSpec g{128, 16, 1.0};
    const auto x = gen_bandlimited(8, g, 0.0);
    for (auto kind : {SH, LI}) {
        const int p = distortion_exponent(kind);
        const auto y = lowpass(interpolate(sample(x), kind), LowpassSpec::for_grid(g));
        for (std::size_t j = 1; j <= 57; j += 4) {  // fT = j / 128 <= 0.45
            const auto ratio = oracle::dft_bin(y.values, j) / oracle::dft_bin(x.values, j);
            const double want = std::pow(oracle::sinc(j / 128.0), p);
            EXPECT_NEAR(ratio.real() / want, 1.0, 0.01) << j;
            EXPECT_NEAR(ratio.imag(), 0.0, 1e-9);
        }
    }
}

TEST(Interpolate2d, ConstantAndSeparable)
{
    const GridSpec gx{6, 4, 1.0}, gy{5, 4, 1.0};
    CoarseImage c{gx, gy, 6, 5, std::vector<double>(30, 7.0)};
    for (auto k : {SH, LI})
        for (double v : interpolate2d(c, k).values) EXPECT_EQ(v, 7.0);

    const auto u = sample(gen_bandlimited(1, gx, 0.0));
    const auto v = sample(gen_bandlimited(2, gy, 0.0));
    CoarseImage r1{gx, gy, 6, 5, std::vector<double>(30)};
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c2 = 0; c2 < 6; ++c2) r1.values[r * 6 + c2] = v.values[r] * u.values[c2];
    for (auto k : {SH, LI}) {
        const auto img = interpolate2d(r1, k);
        const auto iu = interpolate(u, k);
        const auto iv = interpolate(v, k);
        for (std::size_t r = 0; r < img.height; ++r)
            for (std::size_t c2 = 0; c2 < img.width; ++c2) EXPECT_NEAR(img.at(r, c2), iv[r] * iu[c2], 1e-12);
        const auto other = interpolate2d(r1, k, SeparableOrder::ColumnsFirst);
        EXPECT_LT(oracle::max_abs_diff(img.values, other.values), 1e-12);
    }
}

TEST(Interpolate2d, OrderCommutesOnGeneralInput)
{
    const GridSpec g{8, 4, 1.0};
    CoarseImage c{g, g, 8, 8, std::vector<double>(64)};
    GaussianRng rng(3);
    for (auto& v : c.values) v = rng.normal();
    for (auto k : {SH, LI})
        EXPECT_LT(oracle::max_abs_diff(interpolate2d(c, k).values,
                                       interpolate2d(c, k, SeparableOrder::ColumnsFirst).values),
                  1e-12);
}

TEST(InterpKindNames, Parse)
{
    EXPECT_EQ(parse_interp_kind("sh"), SH);
    EXPECT_EQ(parse_interp_kind("li"), LI);
    EXPECT_THROW(parse_interp_kind("cubic"), UsageError);
    EXPECT_EQ(to_string(SH), "sh");
}
