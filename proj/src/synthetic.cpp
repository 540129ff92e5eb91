#include <cmath>
#include <random>

#include "fpcav/errors.hpp"
#include "fpcav/fitting.hpp"

namespace fpcav
{
SynthFamily parse_synth_family(std::string_view name)
{
    if (name == "lorentzian")
        return SynthFamily::lorentzian;
    if (name == "purcell")
        return SynthFamily::purcell;
    if (name == "decay")
        return SynthFamily::decay;
    throw InvalidArgument("unknown synthetic family '" + std::string(name) + "' (lorentzian, purcell, decay)");
}

Trace synth_lorentzian(const LorentzianTruth &truth, std::span<const double> x, double noise_sigma,
                       std::uint64_t seed, AxisUnit unit)
{
    require(truth.fwhm > 0.0, "linewidth must be positive");
    require(noise_sigma >= 0.0, "noise level must be non-negative");
    Trace trace;
    trace.unit = unit;
    trace.x.assign(x.begin(), x.end());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (double xi : x)
    {
        double y = lorentzian(xi, truth.center, truth.fwhm, truth.amplitude, truth.offset);
        if (noise_sigma > 0.0)
            y += noise_sigma * noise(rng);
        trace.y.push_back(y);
    }
    if (noise_sigma > 0.0)
        trace.sigma.assign(trace.y.size(), noise_sigma);
    trace.validate();
    return trace;
}

Trace synth_purcell_map(const PurcellModel &truth, std::span<const double> detuning_uev, double relative_noise,
                        std::uint64_t seed)
{
    require(relative_noise >= 0.0, "noise level must be non-negative");
    Trace trace;
    trace.unit = AxisUnit::uev;
    trace.x.assign(detuning_uev.begin(), detuning_uev.end());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (double d : detuning_uev)
    {
        const double y = relative_decay_rate(d, truth);
        const double s = relative_noise * std::abs(y);
        trace.y.push_back(relative_noise > 0.0 ? y + s * noise(rng) : y);
        if (relative_noise > 0.0)
            trace.sigma.push_back(s);
    }
    trace.validate();
    return trace;
}

DecayHistogram decay_grid(double bin_width_ps, double window_ps)
{
    require(bin_width_ps > 0.0 && window_ps > bin_width_ps, "decay window must span several bins");
    DecayHistogram h;
    h.bin_width_ps = bin_width_ps;
    const auto n = static_cast<std::size_t>(std::floor(window_ps / bin_width_ps));
    for (std::size_t i = 0; i < n; ++i)
        h.bin_centers_ps.push_back((static_cast<double>(i) + 0.5) * bin_width_ps);
    h.counts.assign(n, 0.0);
    return h;
}

ExpectedDecay expected_decay(const DecayTruth &truth, const InstrumentResponse &irf)
{
    require(truth.lifetime_ps > 0.0, "lifetime must be positive");
    require(truth.signal_counts >= 0.0 && truth.background_per_bin >= 0.0, "counts must be non-negative");
    ExpectedDecay out;
    out.histogram = decay_grid(truth.bin_width_ps, truth.window_ps);
    const auto weights = irf.sampled(out.histogram);
    // A discrete exponential with unit peak sums to 1 / (1 - exp(-bw/tau)).
    const double per_unit = 1.0 / (1.0 - std::exp(-truth.bin_width_ps / truth.lifetime_ps));
    out.amplitude = truth.signal_counts / per_unit;
    out.histogram.counts =
        decay_model(out.histogram, weights, truth.lifetime_ps, out.amplitude, truth.background_per_bin);
    return out;
}

DecayHistogram synth_decay(const DecayTruth &truth, const InstrumentResponse &irf, bool poisson, std::uint64_t seed)
{
    auto hist = expected_decay(truth, irf).histogram;
    if (!poisson)
        return hist;
    std::mt19937_64 rng(seed);
    for (double &c : hist.counts)
    {
        std::poisson_distribution<long long> dist(c);
        c = c > 0.0 ? static_cast<double>(dist(rng)) : 0.0;
    }
    return hist;
}
} // namespace fpcav
