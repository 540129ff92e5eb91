#pragma once

// Normal-incidence characteristic-matrix solver.
//
// Each layer maps the tangential fields (E, H) at its exit face to those at its
// incident face:
//
//     (E, H)_front = M (E, H)_back,   M = [[cos d, (i/eta) sin d], [i eta sin d, cos d]]
//
// with phase thickness d = 2 pi n t / lambda and admittance eta = n in units of the
// free-space admittance. In this form a reflected wave picks up phase -2d when a
// lossless spacer is inserted in front of a mirror, so a mirror's penetration depth
// is L = +(lambda^2 / 4 pi) d(arg r)/d(lambda).

#include <optional>
#include <span>
#include <vector>

#include "fpcav/stack.hpp"

namespace fpcav
{
struct TransferMatrix
{
    complex m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};

    static TransferMatrix identity() { return {}; }
    complex determinant() const { return m11 * m22 - m12 * m21; }
    TransferMatrix operator*(const TransferMatrix &rhs) const;
};

struct ComplexResponse
{
    complex r;  // amplitude reflection, incident medium
    complex t;  // field transmission (exit field / incident field)
    double R = 0.0;
    double T = 0.0; // power transmittance, corrected by the admittance ratio
};

struct FieldProfile
{
    std::vector<double> z_nm;           // depth from the incident surface
    std::vector<complex> amplitude;     // E(z)
    std::vector<complex> index;         // n(z) at each sample
    std::vector<double> layer_boundaries_nm;
    std::vector<double> antinodes_nm;
    std::vector<double> nodes_nm;
    double wavelength_nm = 0.0;
};

struct VacuumFieldProfile
{
    FieldProfile field;            // amplitudes in V/m
    double mode_area_um2 = 0.0;
    double total_energy_j = 0.0;   // integral of eps0 n^2 |E|^2 over the mode
    double scale = 0.0;            // V/m per unit of the unnormalised profile
    std::optional<double> emitter_z_nm;
    std::optional<double> emitter_field_v_per_m;
};

struct ResonanceScan
{
    std::vector<double> gap_nm;
    std::vector<double> transmission;
    std::vector<double> resonances_nm; // refined peak positions
};

struct EffectiveLength
{
    double total_um = 0.0;
    double spacer_um = 0.0;           // optical path of the spacer layer
    double left_penetration_um = 0.0; // mirror on the incident side of the spacer
    double right_penetration_um = 0.0;
    double fsr_nm = 0.0;              // local free spectral range lambda^2 / (2 l)
};

TransferMatrix layer_matrix(complex index, double thickness_nm, double wavelength_nm);
TransferMatrix layer_matrix(const Layer &layer, double wavelength_nm);
TransferMatrix stack_matrix(const Stack &stack, double wavelength_nm);

/// Reflection and transmission of a stack. Throws NumericalFailure on a degenerate denominator.
ComplexResponse reflectance(const Stack &stack, double wavelength_nm);

inline constexpr double default_grid_step_nm = 1.0;

/// Field inside the stack for unit transmitted amplitude. margin_nm extends the grid
/// into the incident and exit media. Throws if grid_step exceeds the thinnest layer.
FieldProfile field_profile(const Stack &stack, double wavelength_nm, double grid_step_nm = default_grid_step_nm,
                           double margin_nm = 0.0);

/// E at a single depth, same normalisation as field_profile.
complex field_at(const Stack &stack, double wavelength_nm, double z_nm);

// Local maxima / minima of |E| on a sampled profile, refined by a 3-point parabola.
void locate_extrema(FieldProfile &profile);

inline constexpr double penetration_step_nm = 0.01;

/// Mirror penetration depth in um, referenced to the incident surface.
/// Requires R >= 0.5 at the wavelength.
double penetration_depth(const Stack &mirror, double wavelength_nm, double step_nm = penetration_step_nm);

/// Transmission vs spacer thickness at fixed wavelength.
ResonanceScan scan_air_gap(const CavityTemplate &cavity, double wavelength_nm, double gap_from_nm,
                           double gap_to_nm, double step_nm);

/// Peaks above half the global maximum, refined with a 3-point parabola.
std::vector<double> find_resonances(std::span<const double> x, std::span<const double> y);

/// Round-trip resonance gaps closest to guess_nm (closed form from the mirror phases).
double tune_air_gap(const CavityTemplate &cavity, double wavelength_nm, double guess_nm);

/// Effective length from the local free spectral range: l = lambda^2 / (2 FSR), with the
/// FSR taken from the wavelength derivative of the round-trip phase.
EffectiveLength effective_cavity_length(const Stack &cavity, std::size_t spacer_layer, double wavelength_nm,
                                        double step_nm = penetration_step_nm);
EffectiveLength effective_cavity_length(const CavityTemplate &cavity, double gap_nm, double wavelength_nm);

/// Resonant gap at a given wavelength found by maximising the full-stack transmission.
double resonant_gap_by_transmission(const CavityTemplate &cavity, double wavelength_nm, double guess_nm);

/// Rescales the on-resonance field so that the mode holds hbar omega / 2.
VacuumFieldProfile vacuum_field(const Stack &cavity, double wavelength_nm, double mode_area_um2,
                                double grid_step_nm = default_grid_step_nm);
} // namespace fpcav
