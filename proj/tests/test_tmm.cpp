#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fpcav/constants.hpp"
#include "fpcav/errors.hpp"
#include "fpcav/stack.hpp"
#include "fpcav/tmm.hpp"

using namespace fpcav;

namespace
{
Stack single_layer(double n1, double t, double ns, double k = 0.0)
{
    Stack s;
    s.incident = materials::vacuum();
    s.layers = {make_layer(make_material("film", n1, k), t)};
    s.exit = make_material("substrate", ns);
    return s;
}

double nearest(const std::vector<double> &v, double z)
{
    double best = 1e300;
    for (double x : v)
        best = std::min(best, std::abs(x - z));
    return best;
}
} // namespace

TEST_CASE("bare interface reduces to Fresnel")
{
    Stack s;
    s.incident = materials::vacuum();
    s.exit = make_material("glass", 1.5);
    const auto r = reflectance(s, 800);
    CHECK(r.r.real() == doctest::Approx(-0.2));
    CHECK(r.r.imag() == doctest::Approx(0.0));
    CHECK(r.R == doctest::Approx(0.04));
    CHECK(r.T == doctest::Approx(0.96));
}

TEST_CASE("single film matches the Airy formula")
{
    const double n0 = 1.0, n1 = 2.2, ns = 1.5;
    const double r01 = (n0 - n1) / (n0 + n1), r12 = (n1 - ns) / (n1 + ns);
    for (double wl : {500.0, 633.0, 800.0, 1064.0})
    {
        const double t = 173.0;
        const double c = std::cos(2 * 2 * std::numbers::pi * n1 * t / wl);
        const double R = (r01 * r01 + r12 * r12 + 2 * r01 * r12 * c) / (1 + r01 * r01 * r12 * r12 + 2 * r01 * r12 * c);
        const auto res = reflectance(single_layer(n1, t, ns), wl);
        CHECK(res.R == doctest::Approx(R).epsilon(1e-12));
        CHECK(res.R + res.T == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("absorbing film loses energy; thick metal-like film reflects")
{
    const auto lossy = reflectance(single_layer(2.0, 100, 1.5, 0.1), 700);
    CHECK(lossy.R + lossy.T < 1.0);
    CHECK(lossy.R > 0.0);
    const auto metal = reflectance(single_layer(0.1, 500, 1.5, 8.0), 700);
    CHECK(metal.R > 0.99);
    CHECK(metal.T < 1e-10);
}

TEST_CASE("layer matrices are unimodular")
{
    const auto m = stack_matrix(build_bottom_mirror(22), 933);
    CHECK(std::abs(m.determinant() - 1.0) < 1e-9 * std::max(1.0, std::abs(m.m11 * m.m22)));
    const auto l = layer_matrix(complex{1.7, 0.3}, 321, 900);
    CHECK(std::abs(l.determinant() - 1.0) < 1e-12);
}

TEST_CASE("field is continuous across interfaces")
{
    const Stack s = build_bottom_mirror(0);
    for (double z : s.boundaries_nm())
        CHECK(std::abs(field_at(s, 940, z - 1e-7) - field_at(s, 940, z + 1e-7)) < 1e-6 * (1 + std::abs(field_at(s, 940, z))));
}

TEST_CASE("bonded mirror: node at the interface, antinode at the emitter")
{
    const Stack s = build_bottom_mirror(0);
    FieldProfile p = field_profile(s, 940, 0.5);
    locate_extrema(p);
    CHECK(nearest(p.nodes_nm, s.layers[0].thickness_nm) < 0.05);
    CHECK(nearest(p.antinodes_nm, *s.emitter_position_nm()) < 0.05);
    CHECK_THROWS_AS(field_profile(s, 940, 500), InvalidArgument);
}

TEST_CASE("quarter-wave mirror penetration approaches lambda / (4 dn)")
{
    const Stack dbr = build_dbr(13, materials::ta2o5(), materials::sio2(), 940, true);
    CHECK(penetration_depth(dbr, 940) * 1000 == doctest::Approx(940 / (4 * (2.06 - 1.46))).epsilon(1e-3));
    CHECK_THROWS_AS(penetration_depth(single_layer(1.5, 100, 1.5), 940), InvalidArgument);
}

TEST_CASE("penetration depth tracks the reflection phase derivative")
{
    // Inserting a spacer of optical thickness d in front of the mirror must add d to L.
    Stack s = build_bottom_mirror(0);
    const double l0 = penetration_depth(s, 940);
    s.layers.insert(s.layers.begin(), make_layer(materials::vacuum(), 300));
    CHECK(penetration_depth(s, 940) == doctest::Approx(l0 + 0.3).epsilon(1e-6));
}

TEST_CASE("effective length decomposes into spacer and penetrations")
{
    const Stack cavity = build_full_cavity(build_bottom_mirror(0), 235);
    const auto l = effective_cavity_length(cavity, find_spacer_layer(cavity), 940);
    CHECK(l.total_um == doctest::Approx(l.spacer_um + l.left_penetration_um + l.right_penetration_um).epsilon(1e-9));
    CHECK(l.fsr_nm == doctest::Approx(940.0 * 940.0 / (2 * l.total_um * 1000)).epsilon(1e-9));
}

TEST_CASE("gap scan, closed-form tuning and transmission maximum agree")
{
    const CavityTemplate t = make_cavity_template(build_bottom_mirror(0));
    const double closed = tune_air_gap(t, 940, 0);
    CHECK(closed == doctest::Approx(235).epsilon(2e-3));
    CHECK(resonant_gap_by_transmission(t, 940, closed) == doctest::Approx(closed).epsilon(1e-5));
    const auto scan = scan_air_gap(t, 940, 200, 800, 0.01);
    REQUIRE(scan.resonances_nm.size() == 2);
    CHECK(scan.resonances_nm[0] == doctest::Approx(closed).epsilon(1e-4));
    CHECK(scan.resonances_nm[1] - scan.resonances_nm[0] == doctest::Approx(470).epsilon(1e-4));
}

TEST_CASE("vacuum field stores half a photon")
{
    const Stack cavity = build_full_cavity(build_bottom_mirror(0), 235);
    const auto v = vacuum_field(cavity, 940, 6.0);
    const double hw2 = 0.5 * constants::hbar * constants::angular_frequency(940);
    CHECK(v.total_energy_j == doctest::Approx(hw2).epsilon(1e-9));
    REQUIRE(v.emitter_field_v_per_m);
    // E scales as 1/sqrt(area).
    const auto v4 = vacuum_field(cavity, 940, 24.0);
    CHECK(*v4.emitter_field_v_per_m == doctest::Approx(0.5 * *v.emitter_field_v_per_m).epsilon(1e-9));
}

TEST_CASE("quarter-wave Ta2O5 between epilayer and SiO2 lowers the interface reflectance")
{
    Stack triple, pair;
    triple.incident = pair.incident = materials::elo();
    triple.exit = pair.exit = materials::sio2();
    triple.layers = {make_layer(materials::ta2o5(), quarter_wave_thickness(materials::ta2o5(), 940))};
    const double r_pair = std::pow((3.332 - 1.46) / (3.332 + 1.46), 2);
    CHECK(reflectance(pair, 940).R == doctest::Approx(r_pair));
    CHECK(reflectance(triple, 940).R < 0.5 * r_pair);
}
