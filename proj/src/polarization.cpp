#include "fpcav/polarization.hpp"

#include <algorithm>
#include <cmath>

#include "fpcav/errors.hpp"

namespace fpcav
{
ModeResponse mode_response(double detuning, const CavityMode &mode)
{
    require(mode.linewidth > 0.0, "mode linewidth must be positive");
    require(mode.peak_transmission > 0.0 && mode.peak_transmission <= 1.0, "peak transmission must lie in (0, 1]");
    const double half = 0.5 * mode.linewidth;
    const double d = detuning - mode.center;
    const std::complex<double> denom(half, d);
    const std::complex<double> t = std::sqrt(mode.peak_transmission) * half / denom;
    const std::complex<double> r = std::complex<double>(half * std::sqrt(1.0 - mode.peak_transmission), d) / denom;
    return {r, t};
}

DetectedFields field_amplitudes(std::complex<double> r1, std::complex<double> r2, std::complex<double> e0,
                                double phi_rad)
{
    const double s = std::sin(2.0 * phi_rad);
    return {0.5 * r1 * e0 * s, -0.5 * r2 * e0 * s};
}

double reflected_intensity(std::complex<double> r1, std::complex<double> r2, double i0, double phi_rad)
{
    const double s = std::sin(2.0 * phi_rad);
    return 0.25 * i0 * std::norm(r1 - r2) * s * s;
}

double transmitted_intensity(std::complex<double> t1, std::complex<double> t2, double phi_rad)
{
    const double c = std::cos(phi_rad);
    const double s = std::sin(phi_rad);
    return std::norm(t1) * c * c + std::norm(t2) * s * s;
}

std::vector<DetectionSample> detection_trace(const TwoModeCavity &cavity, const DetectionGeometry &geometry,
                                             std::span<const double> detunings)
{
    require(geometry.phi_rad >= 0.0 && geometry.phi_rad < 3.14159265358979323846,
            "detection angle must lie in [0, pi)");
    std::vector<DetectionSample> out;
    out.reserve(detunings.size());
    for (double d : detunings)
    {
        const auto a = mode_response(d, cavity.mode_1);
        const auto b = mode_response(d, cavity.mode_2);
        out.push_back({d, reflected_intensity(a.r, b.r, geometry.intensity, geometry.phi_rad),
                       transmitted_intensity(a.t, b.t, geometry.phi_rad)});
    }
    return out;
}

std::vector<double> resolved_peaks(std::span<const double> x, std::span<const double> y, double rel_prominence)
{
    require(x.size() == y.size(), "trace lengths differ");
    std::vector<double> peaks;
    if (y.size() < 3)
        return peaks;
    const double top = *std::max_element(y.begin(), y.end());
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
    {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]))
            continue;
        double left_min = y[i];
        for (std::size_t j = i; j-- > 0 && y[j] <= y[i];)
            left_min = std::min(left_min, y[j]);
        double right_min = y[i];
        for (std::size_t j = i + 1; j < y.size() && y[j] <= y[i]; ++j)
            right_min = std::min(right_min, y[j]);
        const double prominence = y[i] - std::max(left_min, right_min);
        if (prominence > rel_prominence * top)
            peaks.push_back(x[i]);
    }
    return peaks;
}
} // namespace fpcav
