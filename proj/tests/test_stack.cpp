#include <doctest.h>

#include <cmath>

#include "fpcav/errors.hpp"
#include "fpcav/stack.hpp"
#include "fpcav/tmm.hpp"

using namespace fpcav;

namespace
{
// Infinite-contrast closed form for H(LH)^N at the design wavelength.
double quarter_wave_reflectance(int pairs, double n0, double nh, double nl, double ns)
{
    const double y = std::pow(nh / nl, 2 * pairs) * nh * nh / ns;
    return std::pow((n0 - y) / (n0 + y), 2);
}
} // namespace

TEST_CASE("quarter-wave thicknesses")
{
    CHECK(quarter_wave_thickness(materials::ta2o5(), 940) == doctest::Approx(114.0777).epsilon(1e-6));
    CHECK(quarter_wave_thickness(materials::sio2(), 940) == doctest::Approx(160.9589).epsilon(1e-6));
    CHECK_THROWS_AS(quarter_wave_thickness(materials::sio2(), -1), InvalidArgument);
}

TEST_CASE("dbr matches the admittance closed form")
{
    for (int n = 1; n <= 16; ++n)
    {
        const Stack s = build_dbr(n, materials::ta2o5(), materials::sio2(), 940, true);
        CHECK(s.layers.size() == static_cast<std::size_t>(2 * n + 1));
        CHECK(reflectance(s, 940).R == doctest::Approx(quarter_wave_reflectance(n, 1.0, 2.06, 1.46, 1.46)).epsilon(1e-10));
    }
}

TEST_CASE("thirteen pairs is the smallest count reaching 0.9998")
{
    int first = 0;
    for (int n = 1; n <= 20 && first == 0; ++n)
        if (reflectance(build_dbr(n, materials::ta2o5(), materials::sio2(), 940, true), 940).R >= 0.9998)
            first = n;
    CHECK(first == default_dbr_pairs);
    CHECK(reflectance(build_dbr(13, materials::ta2o5(), materials::sio2(), 940, true), 940).R ==
          doctest::Approx(0.99982).epsilon(1e-5));
}

TEST_CASE("bottom mirror geometry")
{
    const Stack s = build_bottom_mirror(0);
    REQUIRE(s.layers.size() == 28);
    CHECK(s.layers[0].material.name == "elo");
    CHECK(s.layers[0].thickness_nm == doctest::Approx(0.75 * 940 / 3.332));
    REQUIRE(s.emitter_position_nm());
    CHECK(*s.emitter_position_nm() == doctest::Approx(0.5 * 940 / 3.332));

    const Stack g = build_bottom_mirror(22);
    CHECK(g.layers.size() == 29);
    CHECK(g.layers[1].thickness_nm == 22);
    CHECK(g.layers[1].material.name == "vacuum");

    const Stack l = build_lambda_layer_mirror();
    CHECK(l.layers[0].thickness_nm == doctest::Approx(940 / 3.332));
    CHECK(l.layers[1].material.name == "sio2");
    CHECK(l.layers.back().material.name == "ta2o5");
}

TEST_CASE("reversal and spacer split are exact inverses")
{
    const Stack bottom = build_bottom_mirror(0);
    CHECK(bottom.reversed().reversed() == bottom);
    CHECK(*bottom.reversed().emitter_position_nm() ==
          doctest::Approx(bottom.total_thickness_nm() - *bottom.emitter_position_nm()));

    const Stack cavity = build_full_cavity(bottom, 235);
    const std::size_t spacer = find_spacer_layer(cavity);
    CHECK(spacer == 27);
    const CavityTemplate t = split_at_spacer(cavity, spacer);
    CHECK(t.assemble(235) == cavity);
    CHECK(t.spacer_layer() == spacer);
    CHECK_THROWS_AS(find_spacer_layer(bottom), InvalidArgument);
    CHECK_THROWS_AS(split_at_spacer(cavity, 999), InvalidArgument);
}

TEST_CASE("invalid materials and layers are rejected")
{
    CHECK_THROWS_AS(make_material("bad", 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_material("bad", 1.5, -0.1), InvalidArgument);
    CHECK_THROWS_AS(make_layer(materials::sio2(), 0.0), InvalidArgument);
    CHECK_THROWS_AS(MaterialLibrary::standard().at("unobtainium"), InvalidArgument);
    CHECK(MaterialLibrary::standard().contains("elo"));
}
