#pragma once

// Plain-text stack documents:
//
//   wavelength 940 nm
//   material ta2o5 n=2.06
//   material gold n=0.2 k=6.1
//   stack from vacuum to silica {
//       layer elo 211.59 nm
//       repeat 13 { qw ta2o5 qw sio2 }
//       qw ta2o5
//   }
//
// '#' starts a comment. Media not defined in the document fall back to the
// standard material library. Errors are collected, never fatal.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpcav/stack.hpp"

namespace fpcav
{
struct SourcePos
{
    int line = 1;
    int column = 1;
};

enum class Severity
{
    error,
    warning,
};

enum class DiagnosticCode
{
    invalid_character,
    malformed_number,
    missing_header,
    malformed_header,
    malformed_material,
    duplicate_material,
    invalid_index,
    missing_stack,
    duplicate_stack,
    malformed_stack_header,
    unknown_material,
    malformed_layer,
    non_positive_thickness,
    invalid_repeat_count,
    unknown_directive,
    unbalanced_braces,
    unexpected_token,
};

const char *to_string(DiagnosticCode code);
const std::vector<DiagnosticCode> &all_diagnostic_codes();

struct Diagnostic
{
    Severity severity = Severity::error;
    DiagnosticCode code = DiagnosticCode::unexpected_token;
    SourcePos pos;
    std::string message;
};

/// "line:col: error: message"
std::string format_diagnostic(const Diagnostic &diagnostic, std::string_view source_name = {});

struct MaterialDefinition
{
    std::string name;
    double n = 1.0;
    double k = 0.0;
    SourcePos pos;

    bool operator==(const MaterialDefinition &o) const { return name == o.name && n == o.n && k == o.k; }
};

struct StackItem
{
    enum class Kind
    {
        layer,
        quarter_wave,
        repeat,
    };
    Kind kind = Kind::layer;
    std::string material;          // layer, quarter_wave
    double thickness_nm = 0.0;     // layer
    int count = 0;                 // repeat
    std::vector<StackItem> items;  // repeat
    SourcePos pos;

    bool operator==(const StackItem &o) const
    {
        return kind == o.kind && material == o.material && thickness_nm == o.thickness_nm && count == o.count &&
               items == o.items;
    }
};

struct StackDocument
{
    double wavelength_nm = 0.0;
    std::vector<MaterialDefinition> materials;
    std::string incident;
    std::string exit;
    std::vector<StackItem> items;

    // Structural equality; source positions are ignored.
    bool operator==(const StackDocument &o) const
    {
        return wavelength_nm == o.wavelength_nm && materials == o.materials && incident == o.incident &&
               exit == o.exit && items == o.items;
    }
};

struct ParseResult
{
    std::optional<StackDocument> document; // set when there are no errors
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return document.has_value(); }
};

ParseResult parse_stack(std::string_view source, const MaterialLibrary &library = MaterialLibrary::standard());

/// Canonical text form; parse(print(doc)) == doc.
std::string print_stack(const StackDocument &document);

/// Resolves materials and expands repeats and quarter-wave layers.
Stack to_stack(const StackDocument &document, const MaterialLibrary &library = MaterialLibrary::standard());

/// Document describing an existing stack with explicit layer thicknesses.
StackDocument from_stack(const Stack &stack, double wavelength_nm);

/// Same media and layer sequence, thicknesses equal within rel_tol. Emitter planes are ignored.
bool stacks_equivalent(const Stack &a, const Stack &b, double rel_tol);

/// Reads and parses a file; throws InvalidArgument with all diagnostics on failure.
Stack load_stack_file(const std::string &path, double *wavelength_nm = nullptr);
} // namespace fpcav
