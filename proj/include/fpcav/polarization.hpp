#pragma once

// Cross-polarised detection of a birefringence-split mode pair.
//
// Each mode is a single Lorentzian resonance with amplitude transmission
// t = sqrt(T) (w/2) / (w/2 + i d) and reflection r = (i d + (w/2) sqrt(1 - T)) / (w/2 + i d),
// so |r|^2 + |t|^2 = 1 and r -> 1 far from resonance.

#include <complex>
#include <span>
#include <vector>

namespace fpcav
{
struct CavityMode
{
    double center = 0.0;
    double linewidth = 1.0; // FWHM, same unit as center
    double peak_transmission = 1.0;
};

struct TwoModeCavity
{
    CavityMode mode_1;
    CavityMode mode_2;
};

struct DetectionGeometry
{
    double phi_rad = 0.0;   // cavity axes vs excitation axis, [0, pi)
    double intensity = 1.0; // I0
};

struct ModeResponse
{
    std::complex<double> r;
    std::complex<double> t;
};

ModeResponse mode_response(double detuning, const CavityMode &mode);

struct DetectedFields
{
    std::complex<double> e1;
    std::complex<double> e2;
};

DetectedFields field_amplitudes(std::complex<double> r1, std::complex<double> r2, std::complex<double> e0, double phi_rad);

/// I_r = (I0/4) |r1 - r2|^2 sin^2(2 phi).
double reflected_intensity(std::complex<double> r1, std::complex<double> r2, double i0, double phi_rad);

/// I_t = |t1|^2 cos^2(phi) + |t2|^2 sin^2(phi).
double transmitted_intensity(std::complex<double> t1, std::complex<double> t2, double phi_rad);

struct DetectionSample
{
    double detuning = 0.0;
    double reflected = 0.0;
    double transmitted = 0.0;
};

std::vector<DetectionSample> detection_trace(const TwoModeCavity &cavity, const DetectionGeometry &geometry,
                                             std::span<const double> detunings);

/// Local maxima that rise above both neighbouring minima by more than rel_prominence of the global max.
std::vector<double> resolved_peaks(std::span<const double> x, std::span<const double> y,
                                   double rel_prominence = 1e-3);
} // namespace fpcav
