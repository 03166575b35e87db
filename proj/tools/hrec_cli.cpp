// hrec: experiment harness. Every subcommand writes CSV; the default output
// directory is $HREC_OUT_DIR (or the current directory).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hrec/hrec.hpp"

namespace fs = std::filesystem;

namespace {

fs::path out_dir()
{
    const char* env = std::getenv("HREC_OUT_DIR");
    return env && *env ? fs::path(env) : fs::current_path();
}

fs::path resolve_out(const std::string& given, const std::string& fallback)
{
    // an explicit path is taken as given; otherwise land in the output dir
    return given.empty() ? out_dir() / fallback : fs::path(given);
}

void write_text(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw hrec::IoError(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw hrec::IoError(path.string() + ": write failed");
}

struct Common {
    std::string kind = "sh";
    double lambda = 1.0;
    double k_rate = 1.0;
    std::size_t iterations = 10;
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    int dims = 1;
    std::optional<std::size_t> n_coarse;
    std::optional<std::size_t> ticks;
    double power_db = 34.0;
    std::string out;

    void add(CLI::App* app, bool with_lambda = true)
    {
        app->add_option("--kind", kind, "interpolator: sh or li")->capture_default_str();
        if (with_lambda) app->add_option("--lambda", lambda, "relaxation parameter")->capture_default_str();
        app->add_option("--k-rate", k_rate, "sampling rate as a multiple of Nyquist")->capture_default_str();
        app->add_option("--iterations", iterations)->capture_default_str();
        app->add_option("--trials", trials)->capture_default_str();
        app->add_option("--seed", seed)->capture_default_str();
        app->add_option("--dims", dims, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
        app->add_option("--n-coarse", n_coarse, "coarse samples per axis (128 in 1-D, 32 in 2-D)");
        app->add_option("--ticks", ticks, "fine ticks per sample R (16 in 1-D, 8 in 2-D)");
        app->add_option("--power-db", power_db, "signal power")->capture_default_str();
        app->add_option("-o,--out", out, "output CSV path");
    }

    hrec::TrialSetup setup() const
    {
        hrec::TrialSetup s = dims == 2 ? hrec::TrialSetup::two_d() : hrec::TrialSetup{};
        if (n_coarse) s.n_coarse = *n_coarse;
        if (ticks) s.ticks = *ticks;
        s.k_rate = k_rate;
        s.power_db = power_db;
        s.validate();
        return s;
    }

    void check() const
    {
        if (trials < 1) throw hrec::ConfigError("--trials must be >= 1");
        if (iterations < 1) throw hrec::ConfigError("--iterations must be >= 1");
        if (!(lambda > 0.0 && lambda < 2.0)) throw hrec::ConfigError("--lambda must lie in (0, 2)");
    }
};

std::optional<hrec::Chebyshev> accel(bool on, double a, double b)
{
    if (!on) return std::nullopt;
    if (!(a > 0.0 && a <= b)) throw hrec::ConfigError("--A/--B need 0 < A <= B");
    return hrec::Chebyshev{a, b};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hybrid modular-iterative reconstruction experiments"};
    app.require_subcommand(1);

    // convergence
    Common conv;
    std::vector<std::size_t> conv_modules{0, 1, 2};
    bool conv_cheb = false;
    double conv_a = 1.0, conv_b = 2.0;
    auto* c_conv = app.add_subcommand("convergence", "mean SNR per iteration for each module count");
    conv.add(c_conv);
    c_conv->add_option("--modules", conv_modules, "module counts")->delimiter(',')->capture_default_str();
    c_conv->add_flag("--chebyshev", conv_cheb, "Chebyshev acceleration with frame bounds A, B");
    c_conv->add_option("--A", conv_a)->capture_default_str();
    c_conv->add_option("--B", conv_b)->capture_default_str();

    // lambda sweep
    Common sweep;
    std::size_t sweep_modules = 1;
    double l_lo = 0.1, l_hi = 1.9, l_step = 0.05;
    auto* c_sweep = app.add_subcommand("lambda-sweep", "average dB gain per iteration vs lambda");
    sweep.add(c_sweep, false);
    c_sweep->add_option("--modules", sweep_modules)->capture_default_str();
    c_sweep->add_option("--lambda-min", l_lo)->capture_default_str();
    c_sweep->add_option("--lambda-max", l_hi)->capture_default_str();
    c_sweep->add_option("--lambda-step", l_step)->capture_default_str();

    // noise
    Common noise;
    noise.iterations = 30;
    std::vector<std::size_t> noise_modules{0, 1, 2};
    double noise_db = -20.0;
    auto* c_noise = app.add_subcommand("noise", "traces with white noise added before sampling");
    noise.add(c_noise);
    c_noise->add_option("--modules", noise_modules)->delimiter(',')->capture_default_str();
    c_noise->add_option("--noise-db", noise_db, "noise power")->capture_default_str();

    // rate
    Common rate;
    std::size_t rate_modules = 1;
    std::vector<double> k_rates{1.0, 2.0};
    auto* c_rate = app.add_subcommand("rate", "traces at several sampling rates");
    rate.add(c_rate);
    c_rate->add_option("--modules", rate_modules)->capture_default_str();
    c_rate->add_option("--k-rates", k_rates)->delimiter(',')->capture_default_str();

    // analyze
    std::string an_kind = "sh";
    hrec::AnalyzeConfig an;
    bool an_csv = false;
    std::string an_out;
    auto* c_an = app.add_subcommand("analyze", "closed-form convergence constants");
    c_an->add_option("--kind", an_kind)->capture_default_str();
    c_an->add_option("--modules", an.modules)->capture_default_str();
    c_an->add_option("--lambda", an.lambda)->capture_default_str();
    c_an->add_option("--k-rate", an.k_rate)->capture_default_str();
    c_an->add_option("--iteration", an.iteration, "k in the noise bound")->capture_default_str();
    c_an->add_option("--op-iterations", an.op_iterations, "M in the op counts")->capture_default_str();
    c_an->add_option("--fft-block", an.fft_block, "N in the op counts")->capture_default_str();
    c_an->add_flag("--csv", an_csv, "print CSV instead of text");
    c_an->add_option("-o,--out", an_out, "also write the CSV here");

    // image
    std::string img_in, img_dir;
    std::size_t img_factor = 2;
    double img_lambda = 1.0;
    std::vector<std::string> img_methods{"bilinear", "iterative:2", "iterative:10", "hybrid:2:1"};
    auto* c_img = app.add_subcommand("image", "decimate, enlarge and score a PGM image");
    c_img->add_option("input", img_in, "P2/P5 graymap")->required();
    c_img->add_option("--factor", img_factor)->capture_default_str();
    c_img->add_option("--lambda", img_lambda)->capture_default_str();
    c_img->add_option("--methods", img_methods,
                      "bilinear | iterative:ITERS | hybrid:ITERS:MODULES")
        ->delimiter(',')
        ->capture_default_str();
    c_img->add_option("--out-dir", img_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (c_conv->parsed()) {
            conv.check();
            hrec::ConvergenceConfig c;
            c.setup = conv.setup();
            c.kind = hrec::parse_interp_kind(conv.kind);
            c.modules = conv_modules;
            c.lambda = conv.lambda;
            c.acceleration = accel(conv_cheb, conv_a, conv_b);
            c.iterations = conv.iterations;
            c.trials = conv.trials;
            c.seed = conv.seed;
            const auto path = resolve_out(conv.out, "convergence.csv");
            write_text(path, hrec::convergence_csv(hrec::run_convergence(c)));
            std::cout << path.string() << '\n';
        } else if (c_sweep->parsed()) {
            sweep.check();
            hrec::LambdaSweepConfig c;
            c.setup = sweep.setup();
            c.kind = hrec::parse_interp_kind(sweep.kind);
            c.modules = sweep_modules;
            c.lambdas = hrec::linspace_step(l_lo, l_hi, l_step);
            c.iterations = sweep.iterations;
            c.trials = sweep.trials;
            c.seed = sweep.seed;
            const auto rows = hrec::run_lambda_sweep(c);
            const auto path = resolve_out(sweep.out, "lambda_sweep.csv");
            write_text(path, hrec::lambda_sweep_csv(rows));
            std::cout << path.string() << "  argmax lambda = " << hrec::format_double(hrec::sweep_argmax(rows))
                      << '\n';
        } else if (c_noise->parsed()) {
            noise.check();
            if (!std::isfinite(noise_db)) throw hrec::ConfigError("--noise-db must be finite");
            hrec::ConvergenceConfig c;
            c.setup = noise.setup();
            c.setup.noise_db = noise_db;
            c.kind = hrec::parse_interp_kind(noise.kind);
            c.modules = noise_modules;
            c.lambda = noise.lambda;
            c.iterations = noise.iterations;
            c.trials = noise.trials;
            c.seed = noise.seed;
            const auto path = resolve_out(noise.out, "noise.csv");
            write_text(path, hrec::convergence_csv(hrec::run_convergence(c)));
            std::cout << path.string() << '\n';
        } else if (c_rate->parsed()) {
            rate.check();
            hrec::RateConfig c;
            c.setup = rate.setup();
            c.kind = hrec::parse_interp_kind(rate.kind);
            c.modules = rate_modules;
            c.lambda = rate.lambda;
            c.k_rates = k_rates;
            c.iterations = rate.iterations;
            c.trials = rate.trials;
            c.seed = rate.seed;
            const auto path = resolve_out(rate.out, "rate.csv");
            write_text(path, hrec::rate_csv(hrec::run_rate(c)));
            std::cout << path.string() << '\n';
        } else if (c_an->parsed()) {
            an.kind = hrec::parse_interp_kind(an_kind);
            const auto rows = hrec::run_analyze(an);
            std::cout << (an_csv ? hrec::analyze_csv(rows) : hrec::analyze_text(rows));
            if (!an_out.empty()) write_text(resolve_out(an_out, "analyze.csv"), hrec::analyze_csv(rows));
        } else if (c_img->parsed()) {
            std::vector<hrec::EnlargeConfig> methods;
            for (const auto& spec : img_methods) {
                hrec::EnlargeConfig m;
                m.factor = img_factor;
                m.lambda = img_lambda;
                std::vector<std::string> parts;
                std::stringstream ss(spec);
                for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
                const auto num = [&](std::size_t i) -> std::size_t {
                    try {
                        return std::stoul(parts.at(i));
                    } catch (const std::exception&) {
                        throw hrec::ConfigError("--methods: bad entry '" + spec + "'");
                    }
                };
                if (parts.size() == 1 && parts[0] == "bilinear") {
                    m.method = hrec::EnlargeMethod::Bilinear;
                } else if (parts.size() == 2 && parts[0] == "iterative") {
                    m.method = hrec::EnlargeMethod::Iterative;
                    m.iterations = num(1);
                    m.modules = 0;
                } else if (parts.size() == 3 && parts[0] == "hybrid") {
                    m.method = hrec::EnlargeMethod::Hybrid;
                    m.iterations = num(1);
                    m.modules = num(2);
                } else {
                    throw hrec::ConfigError("--methods: bad entry '" + spec + "'");
                }
                m.validate();
                methods.push_back(m);
            }
            const auto original = hrec::read_pgm(img_in);
            const fs::path dir = img_dir.empty() ? out_dir() : fs::path(img_dir);
            fs::create_directories(dir);
            const auto rows = hrec::psnr_benchmark(original, methods);
            hrec::write_pgm(hrec::decimate(original, img_factor), dir / "decimated.pgm");
            for (const auto& r : rows) {
                hrec::write_pgm(r.reconstruction, dir / (r.cfg.label() + ".pgm"));
                hrec::write_pgm(hrec::error_image(original, r.reconstruction), dir / (r.cfg.label() + "_error.pgm"));
            }
            write_text(dir / "psnr.csv", hrec::bench_csv(rows));
            std::cout << hrec::bench_csv(rows);
        }
    } catch (const std::exception& e) {
        std::cerr << "hrec: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
