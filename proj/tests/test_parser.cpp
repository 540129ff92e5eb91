#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "fpcav/errors.hpp"
#include "fpcav/reproduction.hpp"
#include "fpcav/stack_parser.hpp"

using namespace fpcav;

namespace
{
bool has_code(const ParseResult &r, DiagnosticCode code)
{
    return std::any_of(r.diagnostics.begin(), r.diagnostics.end(), [&](const auto &d) { return d.code == code; });
}
} // namespace

TEST_CASE("quarter-wave pair document expands to four layers")
{
    const auto r = parse_stack("wavelength 940 nm\nstack from vacuum to silica {\n  repeat 2 { qw ta2o5 qw sio2 }\n}\n");
    REQUIRE(r.ok());
    const Stack s = to_stack(*r.document);
    REQUIRE(s.layers.size() == 4);
    CHECK(s.layers[0].thickness_nm == doctest::Approx(114.08).epsilon(1e-4));
    CHECK(s.layers[1].thickness_nm == doctest::Approx(160.96).epsilon(1e-4));
    CHECK(s.layers[2].material.name == "ta2o5");
    CHECK(s.exit.name == "silica");
}

TEST_CASE("bottom-mirror document matches the builder")
{
    const auto r = parse_stack("# bonded mirror\nwavelength 940nm\nstack from vacuum to silica {\n"
                               "    layer elo 211.5846 nm\n    qw ta2o5\n    repeat 13 { qw sio2 qw ta2o5 }\n}\n");
    REQUIRE(r.ok());
    CHECK(stacks_equivalent(to_stack(*r.document), build_bottom_mirror(0), 1e-6));
    CHECK_FALSE(stacks_equivalent(to_stack(*r.document), build_bottom_mirror(22), 1e-6));
}

TEST_CASE("custom materials override the library")
{
    const auto r = parse_stack("wavelength 1550 nm\nmaterial si n=3.48\nmaterial sio2 n=1.444 k=0\n"
                               "stack from air to si { qw si qw sio2 }\n");
    REQUIRE(r.ok());
    const Stack s = to_stack(*r.document);
    CHECK(s.layers[0].thickness_nm == doctest::Approx(1550 / (4 * 3.48)));
    CHECK(s.layers[1].material.index.real() == doctest::Approx(1.444));
}

TEST_CASE("negative thickness is reported at its line")
{
    const auto r = parse_stack("wavelength 940 nm\nstack from vacuum to silica {\n  layer gaas -5 nm\n}\n");
    CHECK_FALSE(r.ok());
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].code == DiagnosticCode::non_positive_thickness);
    CHECK(r.diagnostics[0].pos.line == 3);
    const std::string text = format_diagnostic(r.diagnostics[0], "m.stack");
    CHECK(text.find("m.stack:3:") == 0);
    CHECK(text.find("[non-positive-thickness]") != std::string::npos);
}

TEST_CASE("every diagnostic code has a triggering document")
{
    std::set<DiagnosticCode> seen;
    for (const auto &doc : parser_error_catalogue())
    {
        CAPTURE(doc.source);
        const auto r = parse_stack(doc.source);
        CHECK_FALSE(r.ok());
        CHECK(has_code(r, doc.code));
        seen.insert(doc.code);
    }
    CHECK(seen.size() == all_diagnostic_codes().size());
}

TEST_CASE("errors are collected, not stopped at the first")
{
    const auto r = parse_stack("wavelength 940 nm\nstack from vacuum to silica {\n  layer sio2 -1 nm\n  qw nothing\n"
                               "  slab x\n  repeat 0 { qw sio2 }\n}\n");
    CHECK(has_code(r, DiagnosticCode::non_positive_thickness));
    CHECK(has_code(r, DiagnosticCode::unknown_material));
    CHECK(has_code(r, DiagnosticCode::unknown_directive));
    CHECK(has_code(r, DiagnosticCode::invalid_repeat_count));
}

TEST_CASE("print and parse are a fixed point")
{
    const char *src = "wavelength 940 nm\nmaterial x n=1.7 k=0.001\nstack from vacuum to water {\n"
                      "  layer x 12.5 nm  repeat 3 { qw sio2 repeat 2 { layer ta2o5 1e-1 nm } }\n}\n";
    const auto a = parse_stack(src);
    REQUIRE(a.ok());
    const std::string printed = print_stack(*a.document);
    const auto b = parse_stack(printed);
    REQUIRE(b.ok());
    CHECK(*b.document == *a.document);
    CHECK(print_stack(*b.document) == printed);

    const auto checks = parser_checks(200, 5);
    CHECK(checks.fixed_points == checks.documents);
    CHECK(checks.codes_covered == checks.codes);
}

TEST_CASE("from_stack round trip")
{
    const Stack s = build_lambda_layer_mirror();
    const auto r = parse_stack(print_stack(from_stack(s, 940)));
    REQUIRE(r.ok());
    CHECK(stacks_equivalent(to_stack(*r.document), s, 1e-12));
}

TEST_CASE("load_stack_file")
{
    const std::string path = "parser_test_tmp.stack";
    {
        std::ofstream("parser_test_tmp.stack") << "wavelength 933 nm\nstack from vacuum to silica { qw sio2 }\n";
    }
    double wl = 0;
    const Stack s = load_stack_file(path, &wl);
    CHECK(wl == 933);
    CHECK(s.layers.size() == 1);
    {
        std::ofstream("parser_test_tmp.stack") << "wavelength 933 nm\nstack from vacuum to silica { qw foo }\n";
    }
    CHECK_THROWS_AS(load_stack_file(path), InvalidArgument);
    CHECK_THROWS_AS(load_stack_file("does/not/exist.stack"), InvalidArgument);
    std::remove(path.c_str());
}
