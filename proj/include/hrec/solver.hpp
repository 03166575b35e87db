#pragma once

// Iterative reconstruction engine.
//
//   G = P o Mix_N o Interp o Sample
//   x_0     = lambda G x
//   x_{k+1} = lambda G x + x_k - lambda G x_k
//
// With N = 0 modules this is the classical iterative method; N >= 1 gives
// the hybrid modular-iterative method. The unknown signal x enters only
// through its coarse samples, so "G x" is always formed from the observed
// samples. A dense reference, when given, is used for SNR reporting only.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hrec/core.hpp"
#include "hrec/modular.hpp"
#include "hrec/samplers.hpp"
#include "hrec/signal.hpp"
#include "hrec/spectral.hpp"

namespace hrec {

/// The linear map x -> P(Mix_N(Interp(Sample(x)))) on a 1-D grid.
struct ReconOperator {
    InterpKind kind = InterpKind::SampleAndHold;
    ModuleCount modules{};
    LowpassSpec lpf{};
    GridSpec grid{};

    /// Operator whose lowpass matches the signal band of `grid`.
    static ReconOperator make(InterpKind kind, ModuleCount modules, const GridSpec& grid)
    {
        return ReconOperator{kind, modules, LowpassSpec::for_grid(grid), grid};
    }

    void validate() const
    {
        grid.validate();
        lpf.validate();
    }
};

/// Separable 2-D counterpart on a rectangular lattice.
struct ReconOperator2d {
    InterpKind kind = InterpKind::SampleAndHold;
    ModuleCount modules{};
    LowpassSpec lpf_x{};
    LowpassSpec lpf_y{};
    GridSpec grid_x{};
    GridSpec grid_y{};

    static ReconOperator2d make(InterpKind kind, ModuleCount modules, const GridSpec& gx,
                                const GridSpec& gy)
    {
        return ReconOperator2d{kind, modules, LowpassSpec::for_grid(gx), LowpassSpec::for_grid(gy),
                               gx, gy};
    }

    void validate() const
    {
        grid_x.validate();
        grid_y.validate();
        lpf_x.validate();
        lpf_y.validate();
    }
};

/// Frame bounds for Chebyshev acceleration.
struct Chebyshev {
    double a = 1.0;
    double b = 2.0;
};

template <class Op>
struct BasicReconConfig {
    Op op{};
    double lambda = 1.0;
    std::size_t iterations = 10;
    std::optional<Chebyshev> acceleration{};
    double edge_ignore = kDefaultEdgeIgnore;

    void validate() const
    {
        op.validate();
        if (!(lambda > 0.0 && lambda < 2.0))
            throw ConfigError("relaxation parameter must lie in (0, 2), got " + std::to_string(lambda));
        if (iterations < 1) throw ConfigError("iteration count must be >= 1");
        if (acceleration) {
            const auto& c = *acceleration;
            if (!(c.a > 0.0) || !(c.a <= c.b) || !std::isfinite(c.b))
                throw ConfigError("Chebyshev frame bounds need 0 < A <= B");
        }
    }
};

using ReconConfig = BasicReconConfig<ReconOperator>;
using ReconConfig2d = BasicReconConfig<ReconOperator2d>;

template <class Field>
struct ReconReport {
    Field estimate;
    std::optional<double> initial_snr_db;  // SNR of the starting estimate (iteration 0)
    std::vector<double> snr_trace;         // entry k-1 is the SNR after iteration k
    std::vector<double> update_norms;      // ||x_k - x_{k-1}|| for k = 1..iterations_run
    std::size_t iterations_run = 0;
    std::size_t operator_applications = 0;  // G applications, observation included
    bool non_contraction = false;           // update norm grew 3 times in a row
};

// ---------------------------------------------------------------------------
// Operator application

inline DenseSignal apply_G(const CoarseSamples& samples, const ReconOperator& op)
{
    return modular_reconstruct(samples, op.kind, op.modules, op.lpf);
}

inline DenseSignal apply_G(const DenseSignal& x, const ReconOperator& op)
{
    if (x.grid.fine_length() != op.grid.fine_length() ||
        x.grid.ticks_per_sample != op.grid.ticks_per_sample)
        throw UsageError("apply_G: signal grid does not match operator grid");
    return apply_G(sample(x), op);
}

inline DenseImage apply_G(const CoarseImage& samples, const ReconOperator2d& op)
{
    return modular_reconstruct2d(samples, op.kind, op.modules, op.lpf_x, op.lpf_y);
}

inline DenseImage apply_G(const DenseImage& x, const ReconOperator2d& op)
{
    if (x.width != op.grid_x.fine_length() || x.height != op.grid_y.fine_length())
        throw UsageError("apply_G: image grid does not match operator grid");
    return apply_G(sample2d(x), op);
}

// ---------------------------------------------------------------------------
// Chebyshev relaxation schedule

/// lambda_1 = 2, lambda_{n+1} = 1 / (1 - rho^2 lambda_n / 4), rho = (B-A)/(B+A).
/// Computed once per (A, B) and read-only afterwards.
class ChebyshevSchedule {
public:
    ChebyshevSchedule(Chebyshev bounds, std::size_t count) : bounds_(bounds)
    {
        if (!(bounds.a > 0.0) || !(bounds.a <= bounds.b))
            throw ConfigError("Chebyshev frame bounds need 0 < A <= B");
        rho_ = (bounds.b - bounds.a) / (bounds.b + bounds.a);
        lambdas_.reserve(count);
        double lam = 2.0;
        for (std::size_t n = 1; n <= count; ++n) {
            if (n > 1) lam = 1.0 / (1.0 - rho_ * rho_ * lam / 4.0);
            lambdas_.push_back(lam);
        }
    }

    double rho() const noexcept { return rho_; }
    double step() const noexcept { return 2.0 / (bounds_.a + bounds_.b); }
    std::size_t size() const noexcept { return lambdas_.size(); }

    /// lambda_n, n starting at 1.
    double lambda(std::size_t n) const { return lambdas_.at(n - 1); }

private:
    Chebyshev bounds_;
    double rho_ = 0.0;
    std::vector<double> lambdas_;
};

// ---------------------------------------------------------------------------
// Generic engines; Field is DenseSignal or DenseImage.

namespace detail {

class DivergenceMonitor {
public:
    void observe(double update_norm, double state_norm)
    {
        const double floor = 1e-12 * std::max(state_norm, 1e-300);
        if (update_norm > last_ && update_norm > floor)
            ++rising_;
        else
            rising_ = 0;
        last_ = update_norm;
        if (rising_ >= 3) tripped_ = true;
    }
    bool tripped() const noexcept { return tripped_; }

private:
    double last_ = std::numeric_limits<double>::infinity();
    int rising_ = 0;
    bool tripped_ = false;
};

template <class Field, class ApplyG>
ReconReport<Field> relaxed_iteration(const Field& observed_g, ApplyG&& apply, double lambda,
                                     std::size_t iterations, const Field* reference,
                                     double edge_ignore)
{
    ReconReport<Field> rep;
    const Field target = scaled(observed_g, lambda);
    Field x = target;
    rep.operator_applications = 1;
    if (reference) rep.initial_snr_db = snr_db(*reference, x, edge_ignore);

    DivergenceMonitor monitor;
    for (std::size_t k = 0; k < iterations; ++k) {
        const Field gx = apply(x);
        ++rep.operator_applications;
        // x + lambda * (Gx_obs - G x_k), written as lambda Gx + x_k - lambda G x_k
        Field next = x;
        for (std::size_t i = 0; i < next.values.size(); ++i)
            next.values[i] = target.values[i] + x.values[i] - lambda * gx.values[i];
        const double step = l2_distance(next, x);
        rep.update_norms.push_back(step);
        monitor.observe(step, l2_norm(next));
        x = std::move(next);
        if (reference) rep.snr_trace.push_back(snr_db(*reference, x, edge_ignore));
    }
    rep.iterations_run = iterations;
    rep.non_contraction = monitor.tripped();
    rep.estimate = std::move(x);
    return rep;
}

// Frame-algorithm form: y_0 = 0, y_1 = c Gx with c = 2/(A+B),
// y_n = lambda_n (y_{n-1} - y_{n-2} + c (Gx - G y_{n-1})) + y_{n-2}.
// Iteration k of the report is y_{k+1}, so iteration k costs k applications
// of G beyond the observation, matching the relaxed engine.
template <class Field, class ApplyG>
ReconReport<Field> chebyshev_iteration(const Field& observed_g, ApplyG&& apply,
                                       const ChebyshevSchedule& schedule, std::size_t iterations,
                                       const Field* reference, double edge_ignore)
{
    if (schedule.size() < iterations + 1)
        throw UsageError("Chebyshev schedule is shorter than the iteration count");
    ReconReport<Field> rep;
    const double c = schedule.step();
    Field prev = scaled(observed_g, 0.0);
    Field cur = scaled(observed_g, c);
    rep.operator_applications = 1;
    if (reference) rep.initial_snr_db = snr_db(*reference, cur, edge_ignore);

    DivergenceMonitor monitor;
    for (std::size_t k = 0; k < iterations; ++k) {
        const double lam = schedule.lambda(k + 2);
        const Field gx = apply(cur);
        ++rep.operator_applications;
        Field next = cur;
        for (std::size_t i = 0; i < next.values.size(); ++i)
            next.values[i] =
                lam * (cur.values[i] - prev.values[i] + c * (observed_g.values[i] - gx.values[i])) +
                prev.values[i];
        const double step = l2_distance(next, cur);
        rep.update_norms.push_back(step);
        monitor.observe(step, l2_norm(next));
        prev = std::move(cur);
        cur = std::move(next);
        if (reference) rep.snr_trace.push_back(snr_db(*reference, cur, edge_ignore));
    }
    rep.iterations_run = iterations;
    rep.non_contraction = monitor.tripped();
    rep.estimate = std::move(cur);
    return rep;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1-D

/// Chebyshev-accelerated reconstruction; cfg.acceleration must be set.
inline ReconReport<DenseSignal> chebyshev_iterate(const CoarseSamples& observed,
                                                  const ReconConfig& cfg,
                                                  const DenseSignal* reference = nullptr)
{
    cfg.validate();
    if (!cfg.acceleration) throw ConfigError("chebyshev_iterate needs frame bounds A and B");
    if (observed.values.size() != cfg.op.grid.n_coarse)
        throw UsageError("observed sample count does not match operator grid");
    const ChebyshevSchedule schedule(*cfg.acceleration, cfg.iterations + 1);
    const auto gx = apply_G(observed, cfg.op);
    return detail::chebyshev_iteration(
        gx, [&](const DenseSignal& v) { return apply_G(v, cfg.op); }, schedule, cfg.iterations,
        reference, cfg.edge_ignore);
}

/// Relaxed (classical or hybrid) reconstruction. Dispatches to
/// chebyshev_iterate when cfg.acceleration is set.
inline ReconReport<DenseSignal> iterate(const CoarseSamples& observed, const ReconConfig& cfg,
                                        const DenseSignal* reference = nullptr)
{
    if (cfg.acceleration) return chebyshev_iterate(observed, cfg, reference);
    cfg.validate();
    if (observed.values.size() != cfg.op.grid.n_coarse)
        throw UsageError("observed sample count does not match operator grid");
    const auto gx = apply_G(observed, cfg.op);
    return detail::relaxed_iteration(
        gx, [&](const DenseSignal& v) { return apply_G(v, cfg.op); }, cfg.lambda, cfg.iterations,
        reference, cfg.edge_ignore);
}

// ---------------------------------------------------------------------------
// 2-D

inline ReconReport<DenseImage> chebyshev_iterate2d(const CoarseImage& observed,
                                                   const ReconConfig2d& cfg,
                                                   const DenseImage* reference = nullptr)
{
    cfg.validate();
    if (!cfg.acceleration) throw ConfigError("chebyshev_iterate2d needs frame bounds A and B");
    if (observed.width != cfg.op.grid_x.n_coarse || observed.height != cfg.op.grid_y.n_coarse)
        throw UsageError("observed lattice does not match operator grid");
    const ChebyshevSchedule schedule(*cfg.acceleration, cfg.iterations + 1);
    const auto gx = apply_G(observed, cfg.op);
    return detail::chebyshev_iteration(
        gx, [&](const DenseImage& v) { return apply_G(v, cfg.op); }, schedule, cfg.iterations,
        reference, cfg.edge_ignore);
}

inline ReconReport<DenseImage> iterate2d(const CoarseImage& observed, const ReconConfig2d& cfg,
                                         const DenseImage* reference = nullptr)
{
    if (cfg.acceleration) return chebyshev_iterate2d(observed, cfg, reference);
    cfg.validate();
    if (observed.width != cfg.op.grid_x.n_coarse || observed.height != cfg.op.grid_y.n_coarse)
        throw UsageError("observed lattice does not match operator grid");
    const auto gx = apply_G(observed, cfg.op);
    return detail::relaxed_iteration(
        gx, [&](const DenseImage& v) { return apply_G(v, cfg.op); }, cfg.lambda, cfg.iterations,
        reference, cfg.edge_ignore);
}

// ---------------------------------------------------------------------------
// Direct solve, used to cross-check the iterations on small grids.

/// G restricted to the passband is not injective.
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kOracleMaxLength = 512;

/// Solves G y = G x_obs for y in the open passband (DFT bins strictly below
/// the lowpass cutoff) by dense least squares. This is the fixed point every
/// convergent relaxation, for any lambda, tends to.
inline DenseSignal fixed_point_oracle(const CoarseSamples& observed, const ReconOperator& op)
{
    op.validate();
    const std::size_t n = op.grid.fine_length();
    const std::size_t nc = op.grid.n_coarse;
    const std::size_t ticks = op.grid.ticks_per_sample;
    if (n > kOracleMaxLength)
        throw UsageError("fixed_point_oracle: fine length " + std::to_string(n) + " exceeds " +
                         std::to_string(kOracleMaxLength));
    if (observed.values.size() != nc) throw UsageError("observed sample count does not match grid");

    // Real Fourier basis of the open passband.
    const double edge = op.lpf.cutoff * static_cast<double>(n);
    std::vector<Eigen::VectorXd> basis;
    const double nn = static_cast<double>(n);
    basis.emplace_back(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(nn)));
    for (std::size_t j = 1; static_cast<double>(j) < edge - 1e-9 && 2 * j < n; ++j) {
        Eigen::VectorXd c(static_cast<Eigen::Index>(n));
        Eigen::VectorXd s(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>((j * i) % n) / nn;
            c[static_cast<Eigen::Index>(i)] = std::sqrt(2.0 / nn) * std::cos(phase);
            s[static_cast<Eigen::Index>(i)] = std::sqrt(2.0 / nn) * std::sin(phase);
        }
        basis.push_back(std::move(c));
        basis.push_back(std::move(s));
    }
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd q(static_cast<Eigen::Index>(n), dim);
    for (Eigen::Index k = 0; k < dim; ++k) q.col(k) = basis[static_cast<std::size_t>(k)];

    // G only reads the lattice values, so G = Gs * S with Gs of size n x nc.
    Eigen::MatrixXd gs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nc));
    for (std::size_t m = 0; m < nc; ++m) {
        CoarseSamples unit{op.grid, std::vector<double>(nc, 0.0)};
        unit.values[m] = 1.0;
        const auto col = apply_G(unit, op);
        for (std::size_t i = 0; i < n; ++i)
            gs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = col.values[i];
    }
    Eigen::MatrixXd sq(static_cast<Eigen::Index>(nc), dim);
    for (std::size_t m = 0; m < nc; ++m) sq.row(static_cast<Eigen::Index>(m)) = q.row(static_cast<Eigen::Index>(m * ticks));

    const Eigen::MatrixXd a = gs * sq;
    const auto gobs = apply_G(observed, op);
    const Eigen::Map<const Eigen::VectorXd> rhs(gobs.values.data(), static_cast<Eigen::Index>(n));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < dim)
        throw SingularSystemError("fixed_point_oracle: G is not injective on the passband (rank " +
                                  std::to_string(qr.rank()) + " < " + std::to_string(dim) + ")");
    const Eigen::VectorXd coeffs = qr.solve(rhs);
    const Eigen::VectorXd y = q * coeffs;
    return DenseSignal(op.grid, std::vector<double>(y.data(), y.data() + y.size()));
}

}  // namespace hrec
