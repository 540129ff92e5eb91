#pragma once

// Nonlinear least squares for resonance scans, Purcell maps and decay histograms,
// plus seeded synthetic data for round-trip checks.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fpcav/cqed.hpp"

namespace fpcav
{
enum class AxisUnit
{
    none,
    pm,
    nm,
    uev,
    ps,
};

const char *to_string(AxisUnit unit);

struct Trace
{
    std::vector<double> x; // strictly increasing
    std::vector<double> y;
    std::vector<double> sigma; // empty, or one positive value per sample
    AxisUnit unit = AxisUnit::none;

    bool weighted() const { return !sigma.empty(); }
    void validate() const;
};

struct DecayHistogram
{
    std::vector<double> bin_centers_ps; // uniform
    std::vector<double> counts;         // non-negative
    double bin_width_ps = 0.0;

    double total_counts() const;
    void validate() const;
};

// Timing response of the detection chain, normalised to unit area.
class InstrumentResponse
{
public:
    static InstrumentResponse gaussian_fwhm(double fwhm_ps, double center_ps);
    static InstrumentResponse gaussian_sigma(double sigma_ps, double center_ps);
    static InstrumentResponse delta(double center_ps);
    /// Explicit response sampled on the histogram grid of `grid` (same bin width, aligned bins).
    static InstrumentResponse from_histogram(const DecayHistogram &grid, std::vector<double> weights);

    /// Weight of each histogram bin; sums to one.
    std::vector<double> sampled(const DecayHistogram &grid) const;

    bool is_gaussian() const { return kind_ == Kind::gaussian; }
    double sigma_ps() const { return sigma_ps_; }
    double center_ps() const { return center_ps_; }

private:
    enum class Kind
    {
        gaussian,
        delta,
        explicit_weights,
    };
    Kind kind_ = Kind::delta;
    double sigma_ps_ = 0.0;
    double center_ps_ = 0.0;
    double first_bin_ps_ = 0.0;
    double bin_width_ps_ = 0.0;
    std::vector<double> weights_;
};

inline constexpr double default_irf_fwhm_ps = 340.0;
inline constexpr double fwhm_per_sigma = 2.355;

struct FitResult
{
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<double> sigmas;
    double residual_norm = 0.0;
    bool converged = false;
    bool near_singular = false;
    int iterations = 0;
    std::vector<std::string> warnings;

    double value(std::string_view name) const;
    double sigma(std::string_view name) const;
};

struct LeastSquaresOptions
{
    int max_iterations = 200;
    double cost_tolerance = 1e-10; // relative cost change
    double step_tolerance = 1e-12; // step norm relative to the parameter norm
    // Scale the covariance by the reduced chi-square. Off when absolute sigmas are supplied.
    bool scale_covariance = true;
};

// Row-major residual Jacobian, residual_count x parameter_count.
using ResidualFn = std::function<void(std::span<const double> params, std::span<double> residuals)>;
using JacobianFn = std::function<void(std::span<const double> params, std::span<double> jacobian)>;

struct ResidualProblem
{
    std::size_t residual_count = 0;
    std::vector<std::string> names;
    ResidualFn residuals;
    JacobianFn jacobian; // empty -> central finite differences
};

/// Damped Gauss-Newton (Levenberg-Marquardt) on a residual vector.
FitResult solve_least_squares(const ResidualProblem &problem, std::vector<double> initial,
                              const LeastSquaresOptions &options = {});

struct CurveModel
{
    std::vector<std::string> names;
    std::function<double(double x, std::span<const double> params)> value;
    // Optional analytic gradient with respect to the parameters.
    std::function<void(double x, std::span<const double> params, std::span<double> gradient)> gradient;
};

/// Fits y = model(x; p) to a trace, weighting by 1/sigma when the trace carries sigmas.
FitResult least_squares_core(const CurveModel &model, std::vector<double> initial, const Trace &trace,
                             LeastSquaresOptions options = {});

/// amplitude / (1 + 4 (x - center)^2 / fwhm^2) + offset
double lorentzian(double x, double center, double fwhm, double amplitude, double offset);

CurveModel lorentzian_model();            // center, fwhm, amplitude, offset
CurveModel purcell_map_model();           // F_P1, F_P2, Delta1, Delta2, splitting, alpha
PurcellModel to_purcell_model(const FitResult &fit);

FitResult fit_lorentzian(const Trace &trace, const LeastSquaresOptions &options = {});
FitResult fit_purcell_map(const Trace &trace, const LeastSquaresOptions &options = {});

enum class HistogramWeighting
{
    unweighted,
    poisson,
};

/// A (exp(-t/tau) Theta(t)) convolved with the IRF on the histogram grid, plus background.
std::vector<double> decay_model(const DecayHistogram &grid, std::span<const double> irf_weights, double lifetime_ps,
                                double amplitude, double background);

/// Fits lifetime (ps), amplitude and background per bin.
FitResult fit_decay(const DecayHistogram &histogram, const InstrumentResponse &irf,
                    HistogramWeighting weighting = HistogramWeighting::unweighted,
                    const LeastSquaresOptions &options = {});

inline constexpr double default_drift_factor = 2.5;

/// Explicit post-step: scales a fitted Purcell factor by the drift-broadening factor.
double drift_corrected_purcell(double fitted_purcell, double drift_factor = default_drift_factor);

// --- synthetic data ---------------------------------------------------------

enum class SynthFamily
{
    lorentzian,
    purcell,
    decay,
};

SynthFamily parse_synth_family(std::string_view name);

struct LorentzianTruth
{
    double center = 0.0;
    double fwhm = 115.0;
    double amplitude = 1.0;
    double offset = 0.0;
};

/// Gaussian noise with absolute standard deviation noise_sigma; sigma column filled when noisy.
Trace synth_lorentzian(const LorentzianTruth &truth, std::span<const double> x, double noise_sigma,
                       std::uint64_t seed, AxisUnit unit = AxisUnit::pm);

/// Gaussian noise proportional to the model value (relative_noise * y).
Trace synth_purcell_map(const PurcellModel &truth, std::span<const double> detuning_uev, double relative_noise,
                        std::uint64_t seed);

struct DecayTruth
{
    double lifetime_ps = 665.0;
    double signal_counts = 1e5; // expected counts in the decay, excluding background
    double background_per_bin = 0.0;
    double bin_width_ps = 25.0;
    double window_ps = 12500.0; // one 80 MHz repetition period
};

DecayHistogram decay_grid(double bin_width_ps, double window_ps);

struct ExpectedDecay
{
    DecayHistogram histogram;
    double amplitude = 0.0; // A of decay_model
};

ExpectedDecay expected_decay(const DecayTruth &truth, const InstrumentResponse &irf);

/// Poisson-sampled histogram (exact expectation when poisson == false).
DecayHistogram synth_decay(const DecayTruth &truth, const InstrumentResponse &irf, bool poisson, std::uint64_t seed);

/// Runs fn(seed) for seeds base_seed .. base_seed + count - 1 on worker threads.
/// Output order follows the seed index, independent of scheduling.
template <class F>
auto run_seeded(std::size_t count, std::uint64_t base_seed, F fn) -> std::vector<decltype(fn(std::uint64_t{}))>
{
    using R = decltype(fn(std::uint64_t{}));
    std::vector<R> out(count);
    std::vector<std::exception_ptr> errors(count);
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers)
            {
                try
                {
                    out[i] = fn(base_seed + i);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto &t : pool)
        t.join();
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}
} // namespace fpcav
