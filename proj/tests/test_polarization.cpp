#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fpcav/polarization.hpp"

using namespace fpcav;

namespace
{
const TwoModeCavity cavity{{0.0, 38.53, 1.0}, {57.65, 40.29, 1.0}};

std::vector<double> grid()
{
    std::vector<double> x;
    for (double d = -300; d <= 300; d += 0.25)
        x.push_back(d);
    return x;
}

std::size_t peaks(double phi, bool reflected)
{
    const auto x = grid();
    const auto trace = detection_trace(cavity, {phi, 1.0}, x);
    std::vector<double> y;
    for (const auto &s : trace)
        y.push_back(reflected ? s.reflected : s.transmitted);
    return resolved_peaks(x, y).size();
}
} // namespace

TEST_CASE("single-mode response conserves energy")
{
    for (double d : {-100.0, -5.0, 0.0, 17.0, 300.0})
    {
        const auto m = mode_response(d, {0.0, 40.0, 0.8});
        CHECK(std::norm(m.r) + std::norm(m.t) == doctest::Approx(1.0));
    }
    CHECK(std::norm(mode_response(0.0, {0.0, 40.0, 1.0}).t) == doctest::Approx(1.0));
    CHECK(std::norm(mode_response(20.0, {0.0, 40.0, 1.0}).t) == doctest::Approx(0.5));
}

TEST_CASE("cross-polarised intensities")
{
    const std::complex<double> r1{0.3, 0.1}, r2{-0.2, 0.4};
    CHECK(reflected_intensity(r1, r2, 2.0, 0.0) == doctest::Approx(0.0));
    CHECK(reflected_intensity(r1, r2, 2.0, std::numbers::pi / 4) == doctest::Approx(0.5 * std::norm(r1 - r2)));
    CHECK(transmitted_intensity(r1, r2, 0.0) == doctest::Approx(std::norm(r1)));
    CHECK(transmitted_intensity(r1, r2, std::numbers::pi / 2) == doctest::Approx(std::norm(r2)));
}

TEST_CASE("field amplitudes reproduce the intensity formula")
{
    const std::complex<double> r1{0.3, 0.1}, r2{-0.2, 0.4};
    const double phi = 0.37;
    const auto f = field_amplitudes(r1, r2, 1.0, phi);
    CHECK(std::norm(f.e1 + f.e2) == doctest::Approx(reflected_intensity(r1, r2, 1.0, phi)));
}

TEST_CASE("split mode shows two reflection peaks and one transmission peak")
{
    CHECK(peaks(std::numbers::pi / 4, true) == 2);
    CHECK(peaks(0.45 * std::numbers::pi, false) == 1);
    CHECK(peaks(0.0, false) == 1);
}
