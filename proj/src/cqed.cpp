#include "fpcav/cqed.hpp"

#include <cmath>

#include "fpcav/constants.hpp"
#include "fpcav/errors.hpp"

namespace fpcav
{
namespace
{
constexpr double dipole_unit = constants::elementary_charge * constants::nm; // C m per e*nm
constexpr double um3 = 1e-18;
} // namespace

double dipole_from_lifetime(double gamma_free_ghz, double wavelength_nm, DipoleConvention convention,
                            double refractive_index)
{
    require(gamma_free_ghz > 0.0 && wavelength_nm > 0.0, "decay rate and wavelength must be positive");
    require(refractive_index > 0.0, "refractive index must be positive");
    using namespace constants;
    const double omega = angular_frequency(wavelength_nm);
    double mu2 = 3.0 * pi * epsilon0 * hbar * std::pow(speed_of_light, 3) * gamma_free_ghz * 1e9 / std::pow(omega, 3);
    if (convention == DipoleConvention::in_medium)
        mu2 /= refractive_index;
    return std::sqrt(mu2) / dipole_unit;
}

double rate_to_energy_uev(double rate_ghz) { return constants::joule_to_uev(constants::hbar * rate_ghz * 1e9); }

double mode_volume_from_purcell(double quality_factor, double wavelength_nm, double refractive_index,
                                double purcell_factor)
{
    require(quality_factor > 0.0 && wavelength_nm > 0.0 && refractive_index > 0.0 && purcell_factor > 0.0,
            "mode volume needs positive Q, wavelength, index and Purcell factor");
    const double lambda_um = wavelength_nm * 1e-3 / refractive_index;
    return 3.0 * quality_factor * lambda_um * lambda_um * lambda_um /
           (4.0 * constants::pi * constants::pi * purcell_factor);
}

double purcell_from_mode_volume(double quality_factor, double wavelength_nm, double refractive_index,
                                double mode_volume_um3)
{
    require(quality_factor > 0.0 && wavelength_nm > 0.0 && refractive_index > 0.0 && mode_volume_um3 > 0.0,
            "Purcell factor needs positive Q, wavelength, index and mode volume");
    const double lambda_um = wavelength_nm * 1e-3 / refractive_index;
    return 3.0 * quality_factor * lambda_um * lambda_um * lambda_um /
           (4.0 * constants::pi * constants::pi * mode_volume_um3);
}

double coupling_g(double dipole_enm, double wavelength_nm, double refractive_index, double mode_volume_um3)
{
    require(dipole_enm > 0.0 && wavelength_nm > 0.0 && refractive_index > 0.0 && mode_volume_um3 > 0.0,
            "coupling needs positive dipole, wavelength, index and mode volume");
    using namespace constants;
    const double mu = dipole_enm * dipole_unit;
    const double omega = angular_frequency(wavelength_nm);
    const double g = std::sqrt(mu * mu * omega /
                               (2.0 * epsilon0 * refractive_index * refractive_index * hbar * mode_volume_um3 * um3));
    return joule_to_uev(hbar * g);
}

double mode_volume_from_coupling(double hbar_g_uev, double dipole_enm, double wavelength_nm, double refractive_index)
{
    require(hbar_g_uev > 0.0 && dipole_enm > 0.0 && wavelength_nm > 0.0 && refractive_index > 0.0,
            "inverse coupling needs positive inputs");
    using namespace constants;
    const double g = uev_to_joule(hbar_g_uev) / hbar;
    const double mu = dipole_enm * dipole_unit;
    const double omega = angular_frequency(wavelength_nm);
    return mu * mu * omega / (2.0 * epsilon0 * refractive_index * refractive_index * hbar * g * g) / um3;
}

double implied_purcell_factor(double hbar_g_uev, double dipole_enm, double quality_factor, double wavelength_nm,
                              double refractive_index)
{
    const double v0 = mode_volume_from_coupling(hbar_g_uev, dipole_enm, wavelength_nm, refractive_index);
    return purcell_from_mode_volume(quality_factor, wavelength_nm, refractive_index, v0);
}

double vacuum_field_from_g(double hbar_g_uev, double dipole_enm)
{
    require(hbar_g_uev > 0.0 && dipole_enm > 0.0, "coupling and dipole must be positive");
    return constants::uev_to_joule(hbar_g_uev) / (dipole_enm * dipole_unit);
}

double cooperativity(double hbar_g_uev, double hbar_kappa_uev, double hbar_gamma_uev)
{
    require(hbar_kappa_uev > 0.0 && hbar_gamma_uev > 0.0, "cooperativity needs positive kappa and gamma");
    return 2.0 * hbar_g_uev * hbar_g_uev / (hbar_kappa_uev * hbar_gamma_uev);
}

StrongCouplingVerdict strong_coupling_check(double hbar_g_uev, double hbar_kappa_uev, double hbar_gamma_uev)
{
    require(hbar_g_uev >= 0.0 && hbar_kappa_uev >= 0.0 && hbar_gamma_uev >= 0.0,
            "coupling rates must be non-negative");
    const double margin = 4.0 * hbar_g_uev - std::abs(hbar_kappa_uev - hbar_gamma_uev);
    return {margin > 0.0, margin};
}

double relative_decay_rate(double detuning_1_uev, const PurcellModel &model)
{
    require(model.linewidth_1_uev > 0.0 && model.linewidth_2_uev > 0.0, "mode linewidths must be positive");
    const double d1 = detuning_1_uev;
    const double d2 = detuning_1_uev + model.mode_splitting_uev;
    const double w1 = model.linewidth_1_uev * model.linewidth_1_uev;
    const double w2 = model.linewidth_2_uev * model.linewidth_2_uev;
    return model.purcell_1 * w1 / (4.0 * d1 * d1 + w1) + model.purcell_2 * w2 / (4.0 * d2 * d2 + w2) + model.leaky;
}

double lifetime_ps(double detuning_1_uev, const PurcellModel &model, double gamma_free_ghz)
{
    require(gamma_free_ghz > 0.0, "free-space rate must be positive");
    const double ratio = relative_decay_rate(detuning_1_uev, model);
    if (!(ratio > 0.0))
        throw NumericalFailure("non-positive decay rate");
    return 1e3 / (ratio * gamma_free_ghz);
}

CouplingReport coupling_report(double gamma_free_ghz, double wavelength_nm, double quality_factor,
                               double refractive_index, double purcell_factor, double hbar_kappa_uev)
{
    CouplingReport r;
    r.wavelength_nm = wavelength_nm;
    r.quality_factor = quality_factor;
    r.refractive_index = refractive_index;
    r.purcell_factor = purcell_factor;
    r.dipole_enm = dipole_from_lifetime(gamma_free_ghz, wavelength_nm);
    r.mode_volume_um3 = mode_volume_from_purcell(quality_factor, wavelength_nm, refractive_index, purcell_factor);
    r.hbar_g_uev = coupling_g(r.dipole_enm, wavelength_nm, refractive_index, r.mode_volume_um3);
    r.vacuum_field_v_per_m = vacuum_field_from_g(r.hbar_g_uev, r.dipole_enm);
    r.hbar_kappa_uev =
        hbar_kappa_uev > 0.0 ? hbar_kappa_uev : constants::photon_energy_ev(wavelength_nm) * 1e6 / quality_factor;
    r.hbar_gamma_uev = rate_to_energy_uev(gamma_free_ghz);
    r.cooperativity = cooperativity(r.hbar_g_uev, r.hbar_kappa_uev, r.hbar_gamma_uev);
    const auto verdict = strong_coupling_check(r.hbar_g_uev, r.hbar_kappa_uev, r.hbar_gamma_uev);
    r.strong_coupling = verdict.strong;
    r.strong_coupling_margin_uev = verdict.margin_uev;
    return r;
}
} // namespace fpcav
