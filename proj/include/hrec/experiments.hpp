#pragma once

// Monte-Carlo experiment runners behind the CLI: SNR-vs-iteration traces,
// relaxation sweeps, noise robustness, sampling-rate comparison and the
// analysis report. Every runner is a pure function of its config; trial t
// always uses the signal seed derive_seed(seed, 0, t), so different methods
// see identical signals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "hrec/analysis.hpp"
#include "hrec/csv.hpp"
#include "hrec/random.hpp"
#include "hrec/signal.hpp"
#include "hrec/solver.hpp"

namespace hrec {

inline constexpr std::uint64_t kSignalStream = 0;
inline constexpr std::uint64_t kNoiseStream = 1;

/// Trial geometry shared by all 1-D / 2-D experiments.
struct TrialSetup {
    int dims = 1;                  // 1 or 2
    std::size_t n_coarse = 128;    // per axis
    std::size_t ticks = 16;        // R
    double k_rate = 1.0;
    double power_db = 34.0;
    double edge_ignore = kDefaultEdgeIgnore;
    std::optional<double> noise_db{};  // AWGN added to the dense original

    GridSpec grid() const { return GridSpec{n_coarse, ticks, k_rate}; }

    void validate() const
    {
        if (dims != 1 && dims != 2) throw ConfigError("dims must be 1 or 2");
        grid().validate();
    }

    /// 2-D defaults: a 32x32 lattice with R = 8.
    static TrialSetup two_d()
    {
        TrialSetup s;
        s.dims = 2;
        s.n_coarse = 32;
        s.ticks = 8;
        return s;
    }
};

struct MethodSpec {
    InterpKind kind = InterpKind::SampleAndHold;
    std::size_t modules = 0;
    double lambda = 1.0;
    std::optional<Chebyshev> acceleration{};

    std::string name() const
    {
        std::string s(to_string(kind));
        s += modules == 0 ? "-iterative" : "-hybrid";
        if (acceleration) s += "-cheb";
        return s;
    }
};

struct TrialResult {
    double initial_snr_db = 0.0;      // x_0
    double raw_interp_snr_db = 0.0;   // plain interpolation of the observed samples
    std::vector<double> trace;        // x_1 .. x_n
};

namespace detail {

template <class Field, class Samples, class Op>
TrialResult finish_trial(const Field& clean, const Samples& observed, const Op& op,
                         const MethodSpec& m, std::size_t iterations, double edge_ignore)
{
    BasicReconConfig<Op> cfg;
    cfg.op = op;
    cfg.lambda = m.lambda;
    cfg.iterations = iterations;
    cfg.acceleration = m.acceleration;
    cfg.edge_ignore = edge_ignore;
    ReconReport<Field> rep;
    if constexpr (std::is_same_v<Field, DenseSignal>)
        rep = iterate(observed, cfg, &clean);
    else
        rep = iterate2d(observed, cfg, &clean);
    TrialResult t;
    t.initial_snr_db = *rep.initial_snr_db;
    t.trace = std::move(rep.snr_trace);
    return t;
}

}  // namespace detail

/// One reconstruction of one random signal.
inline TrialResult run_trial(const TrialSetup& setup, const MethodSpec& m, std::size_t iterations,
                             std::uint64_t base_seed, std::uint64_t trial)
{
    setup.validate();
    const auto g = setup.grid();
    const auto sig_seed = derive_seed(base_seed, kSignalStream, trial);
    const auto noise_seed = derive_seed(base_seed, kNoiseStream, trial);

    if (setup.dims == 1) {
        const auto clean = gen_bandlimited(sig_seed, g, setup.power_db);
        const auto seen = setup.noise_db ? add_awgn(clean, *setup.noise_db, noise_seed) : clean;
        const auto observed = sample(seen);
        auto t = detail::finish_trial(clean, observed, ReconOperator::make(m.kind, ModuleCount{m.modules}, g),
                                      m, iterations, setup.edge_ignore);
        t.raw_interp_snr_db = snr_db(clean, interpolate(observed, m.kind), setup.edge_ignore);
        return t;
    }
    const auto clean = gen_bandlimited2d(sig_seed, g, g, setup.power_db);
    const auto seen = setup.noise_db ? add_awgn(clean, *setup.noise_db, noise_seed) : clean;
    const auto observed = sample2d(seen);
    auto t = detail::finish_trial(clean, observed,
                                  ReconOperator2d::make(m.kind, ModuleCount{m.modules}, g, g), m,
                                  iterations, setup.edge_ignore);
    t.raw_interp_snr_db = snr_db(clean, interpolate2d(observed, m.kind), setup.edge_ignore);
    return t;
}

/// Trial-averaged results (means in dB, summed in trial order).
struct MeanTrace {
    double initial_snr_db = 0.0;
    double raw_interp_snr_db = 0.0;
    std::vector<double> trace;
};

inline MeanTrace run_trials(const TrialSetup& setup, const MethodSpec& m, std::size_t iterations,
                            std::size_t trials, std::uint64_t seed)
{
    if (trials < 1) throw ConfigError("trial count must be >= 1");
    MeanTrace acc;
    acc.trace.assign(iterations, 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto r = run_trial(setup, m, iterations, seed, t);
        acc.initial_snr_db += r.initial_snr_db;
        acc.raw_interp_snr_db += r.raw_interp_snr_db;
        for (std::size_t i = 0; i < iterations; ++i) acc.trace[i] += r.trace[i];
    }
    const double inv = 1.0 / static_cast<double>(trials);
    acc.initial_snr_db *= inv;
    acc.raw_interp_snr_db *= inv;
    for (auto& v : acc.trace) v *= inv;
    return acc;
}

// ---------------------------------------------------------------------------
// convergence / noise

struct ConvergenceConfig {
    TrialSetup setup{};
    InterpKind kind = InterpKind::SampleAndHold;
    std::vector<std::size_t> modules{0, 1, 2};
    double lambda = 1.0;
    std::optional<Chebyshev> acceleration{};
    std::size_t iterations = 10;
    std::size_t trials = 50;
    std::uint64_t seed = 1;
};

struct ConvergenceRow {
    std::string method;
    std::size_t modules = 0;
    double lambda = 1.0;
    double k_rate = 1.0;
    std::size_t iteration = 0;
    double mean_snr_db = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::optional<double> noise_db{};
    double initial_interp_snr_db = 0.0;
};

inline std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& c)
{
    c.setup.validate();
    if (c.modules.empty()) throw ConfigError("modules list is empty");
    std::vector<ConvergenceRow> rows;
    for (std::size_t n : c.modules) {
        const MethodSpec m{c.kind, n, c.lambda, c.acceleration};
        const auto mean = run_trials(c.setup, m, c.iterations, c.trials, c.seed);
        for (std::size_t i = 0; i < c.iterations; ++i)
            rows.push_back({m.name(), n, c.lambda, c.setup.k_rate, i + 1, mean.trace[i], c.trials,
                            c.seed, c.setup.noise_db, mean.raw_interp_snr_db});
    }
    return rows;
}

inline std::string convergence_csv(const std::vector<ConvergenceRow>& rows)
{
    const bool noisy = !rows.empty() && rows.front().noise_db.has_value();
    std::string out = "method,modules,lambda,k_rate,iteration,mean_snr_db,trials,seed";
    out += noisy ? ",noise_power_db,initial_interp_snr_db\n" : "\n";
    for (const auto& r : rows) {
        std::vector<std::string> f{r.method,
                                   std::to_string(r.modules),
                                   format_double(r.lambda),
                                   format_double(r.k_rate),
                                   std::to_string(r.iteration),
                                   format_double(r.mean_snr_db),
                                   std::to_string(r.trials),
                                   std::to_string(r.seed)};
        if (noisy) {
            f.push_back(format_double(*r.noise_db));
            f.push_back(format_double(r.initial_interp_snr_db));
        }
        out += csv_line(f);
    }
    return out;
}

// ---------------------------------------------------------------------------
// lambda sweep

struct LambdaSweepConfig {
    TrialSetup setup{};
    InterpKind kind = InterpKind::SampleAndHold;
    std::size_t modules = 1;
    std::vector<double> lambdas{};
    std::size_t iterations = 10;
    std::size_t trials = 50;
    std::uint64_t seed = 1;
};

struct LambdaSweepRow {
    double lambda = 0.0;
    double avg_db_per_iteration = 0.0;
};

/// (SNR after the last iteration - SNR of x_0) / iterations, averaged.
inline std::vector<LambdaSweepRow> run_lambda_sweep(const LambdaSweepConfig& c)
{
    c.setup.validate();
    if (c.lambdas.empty()) throw ConfigError("lambda grid is empty");
    for (double l : c.lambdas)
        if (!(l > 0.0 && l < 2.0)) throw ConfigError("lambda grid value " + format_double(l) + " outside (0, 2)");
    std::vector<LambdaSweepRow> rows;
    for (double l : c.lambdas) {
        const MethodSpec m{c.kind, c.modules, l, std::nullopt};
        double acc = 0.0;
        for (std::size_t t = 0; t < c.trials; ++t) {
            const auto r = run_trial(c.setup, m, c.iterations, c.seed, t);
            acc += (r.trace.back() - r.initial_snr_db) / static_cast<double>(c.iterations);
        }
        rows.push_back({l, acc / static_cast<double>(c.trials)});
    }
    return rows;
}

inline double sweep_argmax(const std::vector<LambdaSweepRow>& rows)
{
    if (rows.empty()) throw UsageError("empty sweep");
    return std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
               return a.avg_db_per_iteration < b.avg_db_per_iteration;
           })->lambda;
}

inline std::string lambda_sweep_csv(const std::vector<LambdaSweepRow>& rows)
{
    std::string out = "lambda,avg_db_per_iteration\n";
    for (const auto& r : rows) out += csv_line({format_double(r.lambda), format_double(r.avg_db_per_iteration)});
    return out;
}

/// lo, lo + step, ..., up to hi inclusive (within half a step).
inline std::vector<double> linspace_step(double lo, double hi, double step)
{
    if (!(step > 0.0)) throw ConfigError("lambda step must be positive");
    std::vector<double> v;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
    // snapped to 1e-12 so grid points print as the decimals the user typed
    for (std::size_t i = 0; i <= n; ++i)
        v.push_back(std::round((lo + step * static_cast<double>(i)) * 1e12) / 1e12);
    return v;
}

// ---------------------------------------------------------------------------
// sampling rate

struct RateConfig {
    TrialSetup setup{};
    InterpKind kind = InterpKind::SampleAndHold;
    std::size_t modules = 1;
    double lambda = 1.0;
    std::vector<double> k_rates{1.0, 2.0};
    std::size_t iterations = 10;
    std::size_t trials = 50;
    std::uint64_t seed = 1;
};

/// SNR level above which a trace is treated as round-off limited.
inline constexpr double kSaturationGuardDb = 200.0;

/// Least-squares slope (dB per iteration) of [x_0, x_1, ...] over the
/// leading points that stay below kSaturationGuardDb; needs two points.
inline double trace_slope(double initial, const std::vector<double>& trace)
{
    std::vector<double> y{initial};
    for (double v : trace) {
        if (!(v < kSaturationGuardDb)) break;
        y.push_back(v);
    }
    if (y.size() < 2) throw UsageError("trace saturates too early to estimate a slope");
    const double n = static_cast<double>(y.size());
    const double xm = (n - 1.0) / 2.0;
    double ym = 0.0;
    for (double v : y) ym += v;
    ym /= n;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double dx = static_cast<double>(i) - xm;
        num += dx * (y[i] - ym);
        den += dx * dx;
    }
    return num / den;
}

struct RateRow {
    double k_rate = 1.0;
    std::size_t iteration = 0;
    double mean_snr_db = 0.0;
    double gain_db_per_iter = 0.0;
    double gain_diff_db = 0.0;  // relative to the first rate in the list
};

inline std::vector<RateRow> run_rate(const RateConfig& c)
{
    if (c.k_rates.empty()) throw ConfigError("k_rates list is empty");
    std::vector<RateRow> rows;
    std::optional<double> first_gain;
    for (double k : c.k_rates) {
        TrialSetup s = c.setup;
        s.k_rate = k;
        const MethodSpec m{c.kind, c.modules, c.lambda, std::nullopt};
        const auto mean = run_trials(s, m, c.iterations, c.trials, c.seed);
        const double gain = trace_slope(mean.initial_snr_db, mean.trace);
        if (!first_gain) first_gain = gain;
        rows.push_back({k, 0, mean.initial_snr_db, gain, gain - *first_gain});
        for (std::size_t i = 0; i < c.iterations; ++i)
            rows.push_back({k, i + 1, mean.trace[i], gain, gain - *first_gain});
    }
    return rows;
}

inline std::string rate_csv(const std::vector<RateRow>& rows)
{
    std::string out = "k_rate,iteration,mean_snr_db,gain_db_per_iter,gain_diff_db\n";
    for (const auto& r : rows)
        out += csv_line({format_double(r.k_rate), std::to_string(r.iteration), format_double(r.mean_snr_db),
                         format_double(r.gain_db_per_iter), format_double(r.gain_diff_db)});
    return out;
}

// ---------------------------------------------------------------------------
// analysis report

struct AnalyzeConfig {
    InterpKind kind = InterpKind::SampleAndHold;
    std::size_t modules = 1;
    double lambda = 1.0;
    double k_rate = 1.0;
    std::size_t iteration = 2;       // for the noise coefficient
    std::uint64_t op_iterations = 2;  // M for op counts
    std::uint64_t fft_block = 512;    // N for op counts
};

struct AnalyzeRow {
    std::string quantity;
    std::string value;
    std::string note;
};

inline std::vector<AnalyzeRow> run_analyze(const AnalyzeConfig& c)
{
    if (!(c.lambda > 0.0 && c.lambda < 2.0)) throw ConfigError("lambda must lie in (0, 2)");
    if (!(c.k_rate >= 1.0)) throw ConfigError("k_rate must be >= 1");
    const ModuleCount n{c.modules};
    std::vector<AnalyzeRow> rows;
    const double r = contraction_factor(c.kind, n, c.lambda, c.k_rate);
    rows.push_back({"contraction_factor", format_double(r), "max |1 - lambda H| over the band"});
    rows.push_back({"contraction_argmax_fT", format_double(contraction_argmax(c.kind, n, c.lambda, c.k_rate)), ""});
    if (r > 0.0 && r < 1.0)
        rows.push_back({"predicted_db_per_iter", format_double(predicted_gain_db(r)), ""});
    else
        rows.push_back({"predicted_db_per_iter", "", "r outside (0, 1)"});
    rows.push_back({"lambda_opt_minimax", format_double(lambda_opt_minimax(c.kind, n, c.k_rate)), "grid search"});
    if (c.modules == 1) {
        const auto lo = lambda_opt_band_edge(c.kind, n);
        rows.push_back({"lambda_opt_band_edge", format_double(lo.recomputed), "1 / H(1/2)"});
        rows.push_back({"lambda_opt_printed", format_double(lo.printed),
                        lo.agrees ? "agrees with recomputed" : "differs from recomputed"});
        if (c.k_rate == 1.0) {
            const auto ref = printed_reference(c.kind);
            rows.push_back({"contraction_printed_lambda1", format_double(ref.contraction_lambda1),
                            "published value at lambda = 1"});
        }
    }
    const auto nb = noise_tolerance_coeff(c.kind, n, c.lambda, c.iteration);
    rows.push_back({"noise_coeff", nb.coefficient ? format_double(*nb.coefficient) : "", nb.note});
    for (bool hybrid : {false, true}) {
        const auto oc = op_counts(c.op_iterations, c.fft_block, hybrid);
        const std::string tag = hybrid ? "hybrid" : "conventional";
        rows.push_back({"additions_per_sample_" + tag, format_double(oc.additions),
                        "M=" + std::to_string(c.op_iterations) + " N=" + std::to_string(c.fft_block)});
        rows.push_back({"multiplications_per_sample_" + tag, format_double(oc.multiplications), ""});
    }
    return rows;
}

inline std::string analyze_csv(const std::vector<AnalyzeRow>& rows)
{
    std::string out = "quantity,value,note\n";
    for (const auto& r : rows) out += csv_line({r.quantity, r.value, r.note});
    return out;
}

inline std::string analyze_text(const std::vector<AnalyzeRow>& rows)
{
    std::string out;
    for (const auto& r : rows) {
        out += r.quantity + " = " + (r.value.empty() ? "n/a" : r.value);
        if (!r.note.empty()) out += "  (" + r.note + ")";
        out += '\n';
    }
    return out;
}

}  // namespace hrec
