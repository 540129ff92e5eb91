#include <doctest.h>

#include <cmath>

#include "fpcav/cavity.hpp"
#include "fpcav/errors.hpp"

using namespace fpcav;

TEST_CASE("scan observables to cavity figures")
{
    CHECK(finesse_from_scan(940, 115) == doctest::Approx(940.0 / 0.23));
    CHECK(mode_index_from_slope(3.63) == doctest::Approx(7.26));
    CHECK(length_from_mode_index(7.26, 940) == doctest::Approx(3.4122));
    CHECK(mode_index_from_length(length_from_mode_index(7.26, 940), 940) == doctest::Approx(7.26).epsilon(1e-14));
    CHECK(quality_factor(3.4, 4100, 940) == doctest::Approx(2 * 3400.0 * 4100 / 940));
    // E = hc / lambda = 1.318980 eV at 940 nm.
    CHECK(linewidth_energy(940, 30000) == doctest::Approx(1239.841984 / 940 / 30000 * 1e6));
    CHECK(quality_from_linewidth(940, linewidth_energy(940, 12345)) == doctest::Approx(12345));
}

TEST_CASE("reflectance finesse")
{
    const double r = 0.999;
    CHECK(finesse_from_reflectances(r, r) == doctest::Approx(std::numbers::pi * std::sqrt(r) / (1 - r)));
    CHECK_THROWS_AS(finesse_from_reflectances(1.0, 0.9), InvalidArgument);
}

TEST_CASE("make_cavity_figures is the composition of the closed forms")
{
    const auto f = make_cavity_figures(940, 115, 3.4, 57.65);
    CHECK(f.finesse == doctest::Approx(finesse_from_scan(940, 115)));
    CHECK(f.quality_factor == doctest::Approx(quality_factor(3.4, f.finesse, 940)));
    CHECK(f.linewidth_uev == doctest::Approx(linewidth_energy(940, f.quality_factor)));
    CHECK(f.mode_splitting_uev == 57.65);
    CHECK_THROWS_AS(make_cavity_figures(940, -1, 3.4), InvalidArgument);
}

TEST_CASE("Gaussian waist of a plano-concave cavity")
{
    const double R = 13, L = 5, wl = 940;
    const auto g = gaussian_waist(R, L, wl);
    const double w0 = std::sqrt(wl * 1e-3 / std::numbers::pi * std::sqrt(L * (R - L)));
    CHECK(g.waist_um == doctest::Approx(w0));
    CHECK(g.mode_area_um2 == doctest::Approx(std::numbers::pi * w0 * w0));
    CHECK(mode_area(2.0, ModeAreaConvention::quarter_pi_w0_squared) == doctest::Approx(std::numbers::pi));
    CHECK(mode_area(2.0, ModeAreaConvention::half_pi_w0_squared) == doctest::Approx(2 * std::numbers::pi));
    CHECK_THROWS_AS(gaussian_waist(R, R + 1, wl), InvalidArgument);
}
