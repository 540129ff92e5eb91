#include "fpcav/cavity.hpp"

#include <cmath>

#include "fpcav/constants.hpp"
#include "fpcav/errors.hpp"

namespace fpcav
{
double finesse_from_scan(double wavelength_nm, double fwhm_displacement_pm)
{
    require(wavelength_nm > 0.0, "wavelength must be positive");
    require(fwhm_displacement_pm > 0.0, "FWHM must be positive");
    return wavelength_nm * 1e3 / (2.0 * fwhm_displacement_pm);
}

double mode_index_from_slope(double displacement_per_wavelength)
{
    require(displacement_per_wavelength > 0.0, "displacement slope must be positive");
    return 2.0 * displacement_per_wavelength;
}

double mode_index_from_length(double length_um, double wavelength_nm)
{
    require(length_um > 0.0 && wavelength_nm > 0.0, "length and wavelength must be positive");
    return 2.0 * length_um * 1e3 / wavelength_nm;
}

double length_from_mode_index(double mode_index, double wavelength_nm)
{
    require(mode_index > 0.0 && wavelength_nm > 0.0, "mode index and wavelength must be positive");
    return mode_index * wavelength_nm * 1e-3 / 2.0;
}

double quality_factor(double length_um, double finesse, double wavelength_nm)
{
    require(length_um > 0.0 && finesse > 0.0 && wavelength_nm > 0.0, "Q needs positive length, finesse, wavelength");
    return 2.0 * length_um * 1e3 * finesse / wavelength_nm;
}

double linewidth_energy(double wavelength_nm, double quality_factor)
{
    require(wavelength_nm > 0.0, "wavelength must be positive");
    require(quality_factor > 0.0, "quality factor must be positive");
    return constants::photon_energy_ev(wavelength_nm) * 1e6 / quality_factor;
}

double quality_from_linewidth(double wavelength_nm, double linewidth_uev)
{
    require(wavelength_nm > 0.0 && linewidth_uev > 0.0, "wavelength and linewidth must be positive");
    return constants::photon_energy_ev(wavelength_nm) * 1e6 / linewidth_uev;
}

double finesse_from_reflectances(double r1, double r2)
{
    require(r1 > 0.0 && r1 < 1.0 && r2 > 0.0 && r2 < 1.0, "mirror reflectances must lie in (0, 1)");
    const double r = std::sqrt(r1 * r2);
    return constants::pi * std::sqrt(r) / (1.0 - r);
}

CavityFigures make_cavity_figures(double wavelength_nm, double fwhm_displacement_pm, double length_um,
                                  double mode_splitting_uev)
{
    CavityFigures f;
    f.wavelength_nm = wavelength_nm;
    f.finesse = finesse_from_scan(wavelength_nm, fwhm_displacement_pm);
    f.effective_length_um = length_um;
    f.mode_index = mode_index_from_length(length_um, wavelength_nm);
    f.quality_factor = quality_factor(length_um, f.finesse, wavelength_nm);
    f.linewidth_uev = linewidth_energy(wavelength_nm, f.quality_factor);
    f.mode_splitting_uev = mode_splitting_uev;
    return f;
}

double mode_area(double waist_um, ModeAreaConvention convention)
{
    require(waist_um >= 0.0, "waist must be non-negative");
    const double disk = constants::pi * waist_um * waist_um;
    switch (convention)
    {
    case ModeAreaConvention::quarter_pi_w0_squared:
        return disk / 4.0;
    case ModeAreaConvention::half_pi_w0_squared:
        return disk / 2.0;
    case ModeAreaConvention::pi_w0_squared:
        return disk;
    }
    return disk;
}

const char *to_string(ModeAreaConvention convention)
{
    switch (convention)
    {
    case ModeAreaConvention::quarter_pi_w0_squared:
        return "pi*w0^2/4";
    case ModeAreaConvention::half_pi_w0_squared:
        return "pi*w0^2/2";
    case ModeAreaConvention::pi_w0_squared:
        return "pi*w0^2";
    }
    return "?";
}

GaussianGeometry gaussian_waist(double radius_of_curvature_um, double length_um, double wavelength_nm,
                                ModeAreaConvention convention)
{
    require(wavelength_nm > 0.0, "wavelength must be positive");
    require(length_um > 0.0, "cavity length must be positive");
    require(length_um < radius_of_curvature_um, "unstable geometry: cavity length must be below the radius");

    GaussianGeometry g;
    g.radius_of_curvature_um = radius_of_curvature_um;
    g.cavity_length_um = length_um;
    const double lambda_um = wavelength_nm * 1e-3;
    g.waist_um = std::sqrt(lambda_um / constants::pi * std::sqrt(length_um * (radius_of_curvature_um - length_um)));
    g.mode_area_um2 = mode_area(g.waist_um, convention);
    const double fsr_hz = constants::speed_of_light / (2.0 * length_um * constants::um);
    g.transverse_splitting_ghz =
        fsr_hz / constants::pi * std::acos(std::sqrt(1.0 - length_um / radius_of_curvature_um)) * 1e-9;
    return g;
}
} // namespace fpcav
