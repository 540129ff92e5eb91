#pragma once

// Closed-form Fabry-Perot relations between scan observables and cavity figures.

namespace fpcav
{
struct CavityFigures
{
    double wavelength_nm = 0.0;
    double finesse = 0.0;
    double mode_index = 0.0;
    double effective_length_um = 0.0;
    double quality_factor = 0.0;
    double linewidth_uev = 0.0;
    double mode_splitting_uev = 0.0;
};

/// F = lambda / (2 dd), with the displacement FWHM in pm.
double finesse_from_scan(double wavelength_nm, double fwhm_displacement_pm);

/// q = 2 dd/dlambda.
double mode_index_from_slope(double displacement_per_wavelength);

/// q = 2 l / lambda.
double mode_index_from_length(double length_um, double wavelength_nm);

/// l = q lambda / 2, in um.
double length_from_mode_index(double mode_index, double wavelength_nm);

/// Q = 2 l F / lambda.
double quality_factor(double length_um, double finesse, double wavelength_nm);

/// hbar kappa = E_photon / Q, in ueV.
double linewidth_energy(double wavelength_nm, double quality_factor);

/// Q = E_photon / (hbar kappa).
double quality_from_linewidth(double wavelength_nm, double linewidth_uev);

/// Finesse of a lossless two-mirror resonator, pi sqrt(R) / (1 - R) with R = sqrt(R1 R2).
double finesse_from_reflectances(double r1, double r2);

/// Assembles the scan-derived figures: finesse from the FWHM, Q and linewidth from the length.
CavityFigures make_cavity_figures(double wavelength_nm, double fwhm_displacement_pm, double length_um,
                                  double mode_splitting_uev = 0.0);

// Effective transverse area assigned to a Gaussian mode of waist w0.
enum class ModeAreaConvention
{
    quarter_pi_w0_squared, // pi w0^2 / 4
    half_pi_w0_squared,    // pi w0^2 / 2, intensity-weighted area of the Gaussian
    pi_w0_squared,         // pi w0^2, disk inside the 1/e^2 intensity radius
};

inline constexpr ModeAreaConvention default_mode_area = ModeAreaConvention::pi_w0_squared;

double mode_area(double waist_um, ModeAreaConvention convention = default_mode_area);
const char *to_string(ModeAreaConvention convention);

struct GaussianGeometry
{
    double radius_of_curvature_um = 0.0;
    double cavity_length_um = 0.0;
    double waist_um = 0.0;
    double mode_area_um2 = 0.0;
    double transverse_splitting_ghz = 0.0;
};

/// Plano-concave resonator. Requires 0 < L < R.
GaussianGeometry gaussian_waist(double radius_of_curvature_um, double length_um, double wavelength_nm,
                                ModeAreaConvention convention = default_mode_area);
} // namespace fpcav
