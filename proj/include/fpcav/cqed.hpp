#pragma once

// Emitter-cavity coupling chain: lifetime -> dipole -> mode volume -> coupling.
// Energies are in ueV, rates in GHz (1/tau), dipoles in e*nm, volumes in um^3.

namespace fpcav
{
struct EmitterParams
{
    double gamma_free_ghz = 0.0;
    double wavelength_nm = 0.0;
    double dipole_enm = 0.0;
};

// Double-Lorentzian model of the relative decay rate for a split mode pair.
struct PurcellModel
{
    double purcell_1 = 0.0;
    double purcell_2 = 0.0;
    double linewidth_1_uev = 0.0;
    double linewidth_2_uev = 0.0;
    double mode_splitting_uev = 0.0;
    double leaky = 0.0; // relative decay into non-cavity modes
};

struct CouplingReport
{
    double wavelength_nm = 0.0;
    double quality_factor = 0.0;
    double refractive_index = 0.0;
    double purcell_factor = 0.0;
    double dipole_enm = 0.0;
    double mode_volume_um3 = 0.0;
    double vacuum_field_v_per_m = 0.0;
    double hbar_g_uev = 0.0;
    double hbar_kappa_uev = 0.0;
    double hbar_gamma_uev = 0.0;
    double cooperativity = 0.0;
    bool strong_coupling = false;
    double strong_coupling_margin_uev = 0.0;
};

enum class DipoleConvention
{
    vacuum,    // mu^2 = 3 pi eps0 hbar c^3 gamma / omega^3
    in_medium, // same with an extra 1/n
};

/// Transition dipole (e*nm) from a decay rate gamma = 1/tau given in GHz.
double dipole_from_lifetime(double gamma_free_ghz, double wavelength_nm,
                            DipoleConvention convention = DipoleConvention::vacuum, double refractive_index = 1.0);

/// hbar * gamma in ueV for a rate in GHz.
double rate_to_energy_uev(double rate_ghz);

/// V0 = 3 Q (lambda/n)^3 / (4 pi^2 F_p), in um^3.
double mode_volume_from_purcell(double quality_factor, double wavelength_nm, double refractive_index,
                                double purcell_factor);

/// Exact inverse of mode_volume_from_purcell.
double purcell_from_mode_volume(double quality_factor, double wavelength_nm, double refractive_index,
                                double mode_volume_um3);

/// hbar g = hbar sqrt(mu^2 omega / (2 eps0 n^2 hbar V0)), in ueV.
double coupling_g(double dipole_enm, double wavelength_nm, double refractive_index, double mode_volume_um3);

/// Mode volume that produces a given coupling (inverse of coupling_g).
double mode_volume_from_coupling(double hbar_g_uev, double dipole_enm, double wavelength_nm, double refractive_index);

/// Purcell factor needed for a target coupling, via the mode volume.
double implied_purcell_factor(double hbar_g_uev, double dipole_enm, double quality_factor, double wavelength_nm,
                              double refractive_index);

/// E_vac = hbar g / mu12, in V/m.
double vacuum_field_from_g(double hbar_g_uev, double dipole_enm);

/// C = 2 g^2 / (kappa gamma).
double cooperativity(double hbar_g_uev, double hbar_kappa_uev, double hbar_gamma_uev);

struct StrongCouplingVerdict
{
    bool strong = false;
    double margin_uev = 0.0; // 4g - |kappa - gamma|
};

StrongCouplingVerdict strong_coupling_check(double hbar_g_uev, double hbar_kappa_uev, double hbar_gamma_uev);

/// gamma_cav / gamma_free at detuning delta1 from mode 1; delta2 = delta1 + splitting.
double relative_decay_rate(double detuning_1_uev, const PurcellModel &model);

/// Lifetime in ps implied by the relative decay rate and gamma_free.
double lifetime_ps(double detuning_1_uev, const PurcellModel &model, double gamma_free_ghz);

/// Full chain from the emitter rate and cavity figures. kappa defaults to E_photon / Q.
CouplingReport coupling_report(double gamma_free_ghz, double wavelength_nm, double quality_factor,
                               double refractive_index, double purcell_factor, double hbar_kappa_uev = 0.0);
} // namespace fpcav
