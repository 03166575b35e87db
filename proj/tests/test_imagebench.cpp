#include <gtest/gtest.h>

#include <filesystem>

#include "hrec/imagebench.hpp"
#include "oracles.hpp"

using namespace hrec;

namespace {
GrayImage small()
{
    GrayImage g(2, 2);
    g.pixels = {0, 255, 128, 64};
    return g;
}

std::filesystem::path tmp(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("hrec_test_" + name);
}
}  // namespace

TEST(Pgm, RoundTripBothEncodings)
{
    const auto g = small();
    for (auto enc : {PgmEncoding::Binary, PgmEncoding::Ascii}) {
        write_pgm(g, tmp("rt.pgm"), enc);
        EXPECT_EQ(read_pgm(tmp("rt.pgm")), g);
    }
    EXPECT_EQ(parse_pgm(encode_pgm(g, PgmEncoding::Ascii)), parse_pgm(encode_pgm(g, PgmEncoding::Binary)));
}

TEST(Pgm, CommentsAndWhitespace)
{
    const std::string txt = "P2\n# made by hand\n2  2 # size\n255\n0 255\n128\n64\n";
    EXPECT_EQ(parse_pgm(txt), small());
}

TEST(Pgm, Rejects)
{
    try {
        parse_pgm("P5\n2 2\n65535\n");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("maxval"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
    }
    EXPECT_THROW(parse_pgm("P5\n2 2\n255\nabc"), IoError);   // truncated raster
    EXPECT_THROW(parse_pgm("P6\n2 2\n255\n"), IoError);      // wrong magic
    EXPECT_THROW(parse_pgm("P2\n2 2\n255\n1 2 x"), IoError); // junk
    EXPECT_THROW(parse_pgm("P2\n2 2\n255\n1 2 3 300"), IoError);
    EXPECT_THROW(read_pgm("/nonexistent/dir/x.pgm"), IoError);
}

TEST(Pgm, CameraLoads)
{
    const auto img = read_pgm(std::string(HREC_TEST_DATA) + "/camera.pgm");
    EXPECT_EQ(img.width, 512u);
    EXPECT_EQ(img.height, 512u);
}

TEST(Decimate, Basics)
{
    GrayImage r(4, 4);
    for (std::size_t i = 0; i < 16; ++i) r.pixels[i] = std::uint8_t(i);
    EXPECT_EQ(decimate(r, 1), r);
    const auto d = decimate(r, 2);
    EXPECT_EQ(d.pixels, (std::vector<std::uint8_t>{0, 2, 8, 10}));
    EXPECT_THROW(decimate(GrayImage(5, 4), 2), UsageError);
}

TEST(Enlarge, ConstantStaysConstant)
{
    const GrayImage c(16, 12, 77);
    for (auto m : {EnlargeMethod::Bilinear, EnlargeMethod::Iterative, EnlargeMethod::Hybrid}) {
        EnlargeConfig cfg;
        cfg.method = m;
        const auto big = enlarge(c, cfg);
        EXPECT_EQ(big.width, 32u);
        EXPECT_EQ(big.height, 24u);
        for (auto p : big.pixels) EXPECT_EQ(p, 77);
    }
}

TEST(Enlarge, BilinearFormula)
{
    const auto big = enlarge(small(), EnlargeConfig{EnlargeMethod::Bilinear, 2, 1, 0, 1.0, std::nullopt});
    // rows: 0, mid, 1, 1 (held); columns likewise
    EXPECT_EQ(big.at(0, 0), 0);
    EXPECT_EQ(big.at(0, 1), 128);  // (0 + 255) / 2 rounds to 128
    EXPECT_EQ(big.at(0, 2), 255);
    EXPECT_EQ(big.at(0, 3), 255);
    EXPECT_EQ(big.at(2, 0), 128);
    EXPECT_EQ(big.at(1, 1), std::uint8_t(std::lround((0 + 255 + 128 + 64) / 4.0)));
}

TEST(Enlarge, RecoversBandLimitedSynthetic)
{
    // a smooth periodic-friendly image: decimate then enlarge returns the
    // coarse pixels at the lattice positions
    GrayImage img(64, 64);
    for (std::size_t r = 0; r < 64; ++r)
        for (std::size_t c = 0; c < 64; ++c)
            img.at(r, c) = std::uint8_t(std::lround(128 + 60 * std::cos(2 * oracle::pi * c / 32.0) *
                                                              std::cos(2 * oracle::pi * r / 64.0)));
    const auto low = decimate(img, 2);
    for (auto m : {EnlargeMethod::Iterative, EnlargeMethod::Hybrid}) {
        EnlargeConfig cfg{m, 2, 10, 1, 1.0, std::nullopt};
        const auto big = enlarge(low, cfg);
        EXPECT_LE(decimate(big, 2).pixels == low.pixels ? 0 : 1, 0) << to_string(m);
    }
}

TEST(Enlarge, DcPreserved)
{
    GrayImage low(32, 32);
    GaussianRng rng(2);
    for (auto& p : low.pixels) p = to_pixel(128 + 30 * rng.normal());
    double mean_low = 0;
    for (auto p : low.pixels) mean_low += p;
    mean_low /= low.pixels.size();
    const auto f = enlarge_field(low, EnlargeConfig{EnlargeMethod::Hybrid, 2, 2, 1, 1.0, std::nullopt});
    double mean = 0;
    for (double v : f) mean += v;
    mean /= f.size();
    EXPECT_NEAR(mean, mean_low, 0.5);
}

TEST(Enlarge, ClampOnlyAtOutput)
{
    // a hard 0/255 checker overshoots when band-limited
    GrayImage low(16, 16);
    for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 16; ++c) low.at(r, c) = ((r / 4 + c / 4) % 2) ? 255 : 0;
    const EnlargeConfig cfg{EnlargeMethod::Iterative, 2, 3, 0, 1.0, std::nullopt};
    const auto f = enlarge_field(low, cfg);
    EXPECT_GT(*std::max_element(f.begin(), f.end()), 255.0);
    EXPECT_LT(*std::min_element(f.begin(), f.end()), 0.0);
    const auto img = enlarge(low, cfg);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(img.pixels[i], to_pixel(f[i]));
}

TEST(Benchmark, OrderingAndSentinel)
{
    const GrayImage c(16, 16, 40);
    const std::vector<EnlargeConfig> methods{
        {EnlargeMethod::Hybrid, 2, 2, 1, 1.0, std::nullopt},
        {EnlargeMethod::Bilinear, 2, 1, 0, 1.0, std::nullopt},
        {EnlargeMethod::Iterative, 2, 4, 0, 1.0, std::nullopt},
    };
    const auto rows = psnr_benchmark(c, methods);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].cfg.method, EnlargeMethod::Hybrid);
    EXPECT_EQ(rows[1].cfg.method, EnlargeMethod::Bilinear);
    for (const auto& r : rows) EXPECT_EQ(r.psnr_db, kInfiniteSnr);
    const auto csv = bench_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,factor,iters,modules,lambda,psnr_db");
    EXPECT_NE(csv.find("bilinear,2,0,0,,inf"), std::string::npos);
    EXPECT_NE(csv.find("hybrid-2it-1mod,2,2,1,1,inf"), std::string::npos);
}

TEST(Benchmark, ErrorImage)
{
    GrayImage a(2, 2), b(2, 2);
    a.pixels = {10, 20, 30, 40};
    b.pixels = {10, 25, 20, 40};
    EXPECT_EQ(error_image(a, b).pixels, (std::vector<std::uint8_t>{0, 128, 255, 0}));
    EXPECT_EQ(error_image(a, a).pixels, (std::vector<std::uint8_t>{0, 0, 0, 0}));
    EXPECT_NEAR(mean_abs_error(a, b), 15.0 / 4, 1e-12);
}

TEST(Benchmark, Deterministic)
{
    const auto img = decimate(read_pgm(std::string(HREC_TEST_DATA) + "/camera.pgm"), 4);  // 128 x 128
    const EnlargeConfig cfg{EnlargeMethod::Hybrid, 2, 2, 1, 1.0, std::nullopt};
    EXPECT_EQ(psnr_benchmark(img, {cfg})[0].reconstruction, psnr_benchmark(img, {cfg})[0].reconstruction);
}
