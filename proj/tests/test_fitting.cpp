#include <doctest.h>

#include <cmath>
#include <vector>

#include "fpcav/errors.hpp"
#include "fpcav/fitting.hpp"

using namespace fpcav;

namespace
{
std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> x;
    for (int i = 0; i < n; ++i)
        x.push_back(a + (b - a) * i / (n - 1));
    return x;
}

Trace lorentz_trace(double center, double fwhm, double amp, double off)
{
    Trace t;
    t.unit = AxisUnit::pm;
    t.x = linspace(-400, 400, 201);
    for (double x : t.x)
        t.y.push_back(lorentzian(x, center, fwhm, amp, off));
    return t;
}

void check_gradient(const CurveModel &m, const std::vector<double> &p, double x)
{
    std::vector<double> g(p.size());
    m.gradient(x, p, g);
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        auto q = p;
        const double h = 1e-6 * std::max(1.0, std::abs(p[i]));
        q[i] += h;
        const double up = m.value(x, q);
        q[i] -= 2 * h;
        const double fd = (up - m.value(x, q)) / (2 * h);
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6).scale(1e-8));
    }
}
} // namespace

TEST_CASE("linear model converges in at most two iterations")
{
    const auto x = linspace(0, 10, 50);
    ResidualProblem p;
    p.residual_count = x.size();
    p.names = {"a", "b"};
    p.residuals = [&](std::span<const double> q, std::span<double> r) {
        for (std::size_t i = 0; i < x.size(); ++i)
            r[i] = q[0] + q[1] * x[i] - (2.0 - 0.5 * x[i] + 0.01 * std::sin(7 * x[i]));
    };
    const auto f = solve_least_squares(p, {0, 0});
    CHECK(f.converged);
    CHECK(f.iterations <= 2);
    CHECK(f.value("a") == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(f.value("b") == doctest::Approx(-0.5).epsilon(1e-2));
}

TEST_CASE("Rosenbrock valley")
{
    ResidualProblem p;
    p.residual_count = 2;
    p.names = {"x", "y"};
    p.residuals = [](std::span<const double> q, std::span<double> r) {
        r[0] = 10 * (q[1] - q[0] * q[0]);
        r[1] = 1 - q[0];
    };
    const auto f = solve_least_squares(p, {-1.2, 1.0});
    CHECK(f.converged);
    CHECK(f.value("x") == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(f.value("y") == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(f.value("z"), InvalidArgument);
}

TEST_CASE("starting at the optimum stays there")
{
    const Trace t = lorentz_trace(3, 115, 1, 0.02);
    const auto f = least_squares_core(lorentzian_model(), {3, 115, 1, 0.02}, t);
    CHECK(f.converged);
    CHECK(f.residual_norm < 1e-10);
    CHECK(f.value("center") == doctest::Approx(3));
}

TEST_CASE("Lorentzian fit is shift and scale covariant")
{
    const auto a = fit_lorentzian(lorentz_trace(3, 115, 1, 0.02));
    Trace shifted = lorentz_trace(3, 115, 1, 0.02);
    for (auto &x : shifted.x)
        x += 50;
    for (auto &y : shifted.y)
        y *= 4;
    const auto b = fit_lorentzian(shifted);
    CHECK(b.value("center") == doctest::Approx(a.value("center") + 50).epsilon(1e-8));
    CHECK(b.value("fwhm") == doctest::Approx(a.value("fwhm")).epsilon(1e-8));
    CHECK(b.value("amplitude") == doctest::Approx(4 * a.value("amplitude")).epsilon(1e-8));
    CHECK(a.value("fwhm") == doctest::Approx(115).epsilon(1e-9));
}

TEST_CASE("analytic gradients match finite differences")
{
    check_gradient(lorentzian_model(), {3, 115, 1, 0.02}, 40);
    check_gradient(lorentzian_model(), {-7, 60, 2, 0.1}, -200);
    check_gradient(purcell_map_model(), {1.27, 0.79, 121.83, 106.93, 100.14, 1.12}, -35);
    check_gradient(purcell_map_model(), {1.27, 0.79, 121.83, 106.93, 100.14, 1.12}, 180);
}

TEST_CASE("Purcell map recovers the generating model")
{
    const PurcellModel truth{1.27, 0.79, 121.83, 106.93, 100.14, 1.12};
    const auto t = synth_purcell_map(truth, linspace(-500, 500, 51), 0.0, 1);
    const auto f = fit_purcell_map(t);
    CHECK(f.converged);
    const auto m = to_purcell_model(f);
    CHECK(m.purcell_1 == doctest::Approx(1.27).epsilon(1e-6));
    CHECK(m.mode_splitting_uev == doctest::Approx(100.14).epsilon(1e-6));
    CHECK(m.leaky == doctest::Approx(1.12).epsilon(1e-6));
    CHECK(drift_corrected_purcell(f.value("F_P1")) == doctest::Approx(2.5 * 1.27).epsilon(1e-6));
}

TEST_CASE("flat trace is flagged, not silently fitted")
{
    Trace t;
    t.x = linspace(-10, 10, 40);
    t.y.assign(40, 0.5);
    const auto f = fit_lorentzian(t);
    CHECK_FALSE(f.converged);
    CHECK_FALSE(f.warnings.empty());
}

TEST_CASE("trace validation")
{
    Trace t;
    t.x = {0, 1, 1};
    t.y = {1, 2, 3};
    CHECK_THROWS_AS(t.validate(), InvalidArgument);
    t.x = {0, 1, 2};
    t.sigma = {1, 0, 1};
    CHECK_THROWS_AS(t.validate(), InvalidArgument);
}

TEST_CASE("instrument response weights")
{
    const auto grid = decay_grid(25, 12500);
    const auto w = InstrumentResponse::gaussian_fwhm(340, 1000).sampled(grid);
    double sum = 0, mean = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        sum += w[i], mean += w[i] * grid.bin_centers_ps[i];
    CHECK(sum == doctest::Approx(1.0));
    CHECK(mean == doctest::Approx(1000).epsilon(1e-3));
    CHECK(InstrumentResponse::gaussian_fwhm(340, 0).sigma_ps() == doctest::Approx(340 / fwhm_per_sigma));
}

TEST_CASE("decay fit recovers exact expectation")
{
    DecayTruth truth;
    truth.background_per_bin = 2;
    const auto irf = InstrumentResponse::gaussian_fwhm(340, 1000);
    const auto h = synth_decay(truth, irf, false, 0);
    for (auto w : {HistogramWeighting::unweighted, HistogramWeighting::poisson})
    {
        const auto f = fit_decay(h, irf, w);
        CHECK(f.converged);
        CHECK(f.value("lifetime") == doctest::Approx(665).epsilon(1e-6));
        CHECK(f.value("background") == doctest::Approx(2).epsilon(1e-6));
    }
    const double total = h.total_counts() - 2.0 * static_cast<double>(h.counts.size());
    CHECK(total == doctest::Approx(1e5).epsilon(1e-3));
}

TEST_CASE("seeded generation is deterministic and order-stable")
{
    auto run = [] {
        return run_seeded(16, 7, [](std::uint64_t seed) {
            return synth_lorentzian({}, linspace(-100, 100, 11), 0.1, seed).y[3];
        });
    };
    const auto a = run();
    CHECK(a == run());
    CHECK(a[0] == synth_lorentzian({}, linspace(-100, 100, 11), 0.1, 7).y[3]);
    CHECK(a[0] != a[1]);
}

TEST_CASE("synth family names")
{
    CHECK(parse_synth_family("decay") == SynthFamily::decay);
    CHECK_THROWS_AS(parse_synth_family("gaussian"), InvalidArgument);
}
