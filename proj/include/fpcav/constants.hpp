#pragma once

#include <numbers>

namespace fpcav::constants
{
inline constexpr double pi = std::numbers::pi;

inline constexpr double epsilon0 = 8.8541878128e-12;       // F/m
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double speed_of_light = 2.99792458e8;     // m/s
inline constexpr double elementary_charge = 1.602176634e-19; // C

// Photon energy in eV is this constant divided by the vacuum wavelength in nm.
inline constexpr double ev_nm = 1239.841984;

inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;

/// Photon energy (eV) at a vacuum wavelength (nm).
constexpr double photon_energy_ev(double wavelength_nm) { return ev_nm / wavelength_nm; }

/// Angular frequency (rad/s) at a vacuum wavelength (nm).
constexpr double angular_frequency(double wavelength_nm)
{
    return 2.0 * pi * speed_of_light / (wavelength_nm * nm);
}

/// Converts an energy in ueV to joules.
constexpr double uev_to_joule(double energy_uev) { return energy_uev * 1e-6 * elementary_charge; }

/// Converts an energy in joules to ueV.
constexpr double joule_to_uev(double energy_j) { return energy_j / elementary_charge * 1e6; }
} // namespace fpcav::constants
