#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fpcav/cli.hpp"
#include "fpcav/cqed.hpp"
#include "fpcav/errors.hpp"
#include "fpcav/fitting.hpp"
#include "fpcav/csv.hpp"
#include "fpcav/report.hpp"
#include "fpcav/stack.hpp"
#include "fpcav/tmm.hpp"

using namespace fpcav;

namespace
{
int run(std::vector<std::string> args, std::string *out = nullptr)
{
    std::ostringstream o, e;
    const int code = run_command(args, o, e);
    if (out)
        *out = o.str();
    return code;
}
} // namespace

TEST_CASE("CSV round trip preserves values bit for bit")
{
    CsvTable t;
    t.columns = {"a", "b"};
    t.comments = {"note"};
    t.add_row({0.1, -1e-300});
    t.add_row({1.0 / 3.0, 12345.678});
    std::stringstream s;
    write_csv(s, t);
    const CsvTable u = read_csv(s);
    CHECK(u.columns == t.columns);
    CHECK(u.rows == t.rows);
    CHECK(u.comments == t.comments);
}

TEST_CASE("malformed CSV is rejected")
{
    std::stringstream a("x,y\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(a), InvalidArgument);
    std::stringstream b("x,y\n1,abc\n");
    CHECK_THROWS_AS(read_csv(b), InvalidArgument);
    std::stringstream c("# only a comment\n");
    CHECK_THROWS_AS(read_csv(c), InvalidArgument);
}

TEST_CASE("synthetic trace table loads as a fit input")
{
    const Trace t = synth_lorentzian({}, std::vector<double>{-10, 0, 10, 20}, 0.1, 3);
    std::stringstream s;
    write_csv(s, trace_table(t, "displacement_pm", "signal"));
    const Trace u = trace_from_table(read_csv(s));
    CHECK(u.x == t.x);
    CHECK(u.y == t.y);
    CHECK(u.sigma == t.sigma);
    CHECK(u.unit == AxisUnit::pm);
}

TEST_CASE("histogram table round trip")
{
    const auto h = synth_decay({}, InstrumentResponse::gaussian_fwhm(340, 1000), true, 9);
    std::stringstream s;
    write_csv(s, histogram_table(h));
    const auto g = histogram_from_table(read_csv(s));
    CHECK(g.counts == h.counts);
    CHECK(g.bin_width_ps == doctest::Approx(h.bin_width_ps));
}

TEST_CASE("report rendering is deterministic")
{
    const auto a = make_report(coupling_report(1.25, 933, 33000, 3.332, 5)).render();
    CHECK(a == make_report(coupling_report(1.25, 933, 33000, 3.332, 5)).render());
    CHECK(a.find("hbar_g = 11.7471") != std::string::npos);
    CHECK(a.find("strong_coupling = true") != std::string::npos);
    Report r;
    r.add("x", 0.1, "nm");
    CHECK(r.render() == "x = 0.1 nm\n");
    CHECK(r.value("x") == "0.1");
}

TEST_CASE("command-line exit codes")
{
    CHECK(run({}) == exit_usage);
    CHECK(run({"no-such-command"}) == exit_usage);
    CHECK(run({"--help"}) == exit_ok);
    CHECK(run({"figures", "--fwhm-pm", "115"}) == exit_usage);
    CHECK(run({"figures", "--fwhm-pm", "-1", "--length-um", "3.4"}) == exit_usage);
    std::string out;
    CHECK(run({"figures", "--fwhm-pm", "115", "--length-um", "3.4"}, &out) == exit_ok);
    CHECK(out.find("finesse = 4086.956522") != std::string::npos);
    CHECK(run({"cqed-report", "--gamma", "1.25", "--wavelength", "933", "--q", "33000", "--n", "3.332", "--fp", "5"},
              &out) == exit_ok);
    CHECK(out.find("cooperativity = 8.3299") != std::string::npos);
}

TEST_CASE("command-line synth output feeds the fitter")
{
    std::string csv;
    REQUIRE(run({"synth", "purcell", "--seed", "2", "--noise", "0.01", "--from", "-500", "--to", "500", "--step", "20"},
                &csv) == exit_ok);
    {
        std::ofstream("io_test_tmp.csv") << csv;
    }
    std::string out;
    CHECK(run({"fit", "purcell", "io_test_tmp.csv"}, &out) == exit_ok);
    CHECK(out.find("converged = true") != std::string::npos);
    {
        std::ofstream("io_test_tmp.csv") << "time_ps,counts\n0,4\n25,-3\n50,1\n";
    }
    CHECK(run({"fit", "decay", "io_test_tmp.csv"}) == exit_usage);
    std::remove("io_test_tmp.csv");
}
