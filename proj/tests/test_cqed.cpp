#include <doctest.h>

#include <cmath>

#include "fpcav/constants.hpp"
#include "fpcav/cqed.hpp"
#include "fpcav/errors.hpp"

using namespace fpcav;

namespace
{
const PurcellModel model{1.27, 0.79, 121.83, 106.93, 100.14, 1.12};
}

TEST_CASE("dipole from lifetime")
{
    using namespace constants;
    const double gamma = 1.25e9, w = angular_frequency(933);
    const double mu = std::sqrt(3 * pi * epsilon0 * hbar * std::pow(speed_of_light, 3) * gamma / std::pow(w, 3));
    CHECK(dipole_from_lifetime(1.25, 933) == doctest::Approx(mu / elementary_charge / nm).epsilon(1e-12));
    CHECK(dipole_from_lifetime(1.25, 933, DipoleConvention::in_medium, 3.332) ==
          doctest::Approx(dipole_from_lifetime(1.25, 933) / std::sqrt(3.332)).epsilon(1e-12));
    CHECK(rate_to_energy_uev(1.0) == doctest::Approx(hbar * 1e9 / elementary_charge * 1e6));
}

TEST_CASE("mode volume and coupling are mutual inverses")
{
    const double v = mode_volume_from_purcell(33000, 933, 3.332, 5);
    CHECK(v == doctest::Approx(3 * 33000 * std::pow(0.933 / 3.332, 3) / (4 * std::numbers::pi * std::numbers::pi * 5)));
    CHECK(purcell_from_mode_volume(33000, 933, 3.332, v) == doctest::Approx(5));
    const double g = coupling_g(1.2, 933, 3.332, v);
    CHECK(mode_volume_from_coupling(g, 1.2, 933, 3.332) == doctest::Approx(v));
    CHECK(implied_purcell_factor(g, 1.2, 33000, 933, 3.332) == doctest::Approx(5));
    // g ~ 1/sqrt(V)
    CHECK(coupling_g(1.2, 933, 3.332, 4 * v) == doctest::Approx(0.5 * g));
}

TEST_CASE("vacuum field, cooperativity and strong coupling")
{
    CHECK(vacuum_field_from_g(11.75, 1.2) == doctest::Approx(11.75e-6 / 1.2e-9));
    CHECK(cooperativity(10, 40, 1) == doctest::Approx(5));
    const auto v = strong_coupling_check(11.75, 44, 0.82);
    CHECK(v.strong);
    CHECK(v.margin_uev == doctest::Approx(47 - 43.18));
    CHECK_FALSE(strong_coupling_check(5, 44, 0.82).strong);
}

TEST_CASE("double-Lorentzian decay model")
{
    CHECK(relative_decay_rate(0, model) ==
          doctest::Approx(1.27 + 0.79 / (1 + 4 * 100.14 * 100.14 / (106.93 * 106.93)) + 1.12));
    CHECK(relative_decay_rate(1e7, model) == doctest::Approx(1.12).epsilon(1e-6));
    CHECK(lifetime_ps(0, model, 1.25) == doctest::Approx(800.0 / relative_decay_rate(0, model)));
    CHECK(lifetime_ps(0, model, 1.25) == doctest::Approx(311.86).epsilon(1e-4));
}

TEST_CASE("coupling report chain")
{
    const auto r = coupling_report(1.25, 933, 33000, 3.332, 5);
    CHECK(r.hbar_kappa_uev == doctest::Approx(1239.841984 / 933 / 33000 * 1e6));
    CHECK(r.hbar_gamma_uev == doctest::Approx(rate_to_energy_uev(1.25)));
    CHECK(r.cooperativity == doctest::Approx(cooperativity(r.hbar_g_uev, r.hbar_kappa_uev, r.hbar_gamma_uev)));
    CHECK(r.vacuum_field_v_per_m == doctest::Approx(vacuum_field_from_g(r.hbar_g_uev, r.dipole_enm)));
    CHECK(coupling_report(1.25, 933, 33000, 3.332, 5, 44).hbar_kappa_uev == 44);
    CHECK_THROWS_AS(coupling_report(1.25, 933, 33000, 3.332, -5), InvalidArgument);
}
