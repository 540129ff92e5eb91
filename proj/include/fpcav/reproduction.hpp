#pragma once

// Reference-number table for the bonded-mirror microcavity, and the routines that
// recompute every entry. The targets are plain data so the table can be audited
// on its own; `fpcav reproduce-paper` and the acceptance binary both render it.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpcav/cavity.hpp"
#include "fpcav/stack.hpp"
#include "fpcav/stack_parser.hpp"

namespace fpcav
{
enum class Check
{
    relative, // |value - target| <= tolerance * |target|
    absolute, // |value - target| <= tolerance
    at_most,  // value <= target
    at_least, // value >= target
};

struct Target
{
    int criterion;
    std::string_view key;
    std::string_view quantity;
    double target;
    double tolerance;
    Check check;
    std::string_view unit;
};

std::span<const Target> reproduction_targets();

struct CriterionInfo
{
    int criterion;
    std::string_view title;
    std::string_view note; // printed with the verdict, may be empty
};

std::span<const CriterionInfo> reproduction_criteria();

bool passes(const Target &target, double value);

struct RowOutcome
{
    Target target;
    double value = 0.0;
    bool pass = false;
};

struct CriterionOutcome
{
    int criterion = 0;
    std::string title;
    std::string note;
    bool pass = false;
    std::vector<RowOutcome> rows;
};

struct ReproductionOptions
{
    std::size_t monte_carlo_seeds = 100;
    std::uint64_t base_seed = 1;
};

std::vector<CriterionOutcome> run_reproduction(const ReproductionOptions &options = {});

/// One verdict line per criterion followed by indented rows.
std::string format_reproduction(const std::vector<CriterionOutcome> &outcomes);

// --- building blocks, also used by the command-line tool ------------------------

inline constexpr double top_mirror_radius_um = 13.0;

struct DesignField
{
    double air_gap_nm = 0.0;
    double effective_length_um = 0.0;
    double waist_um = 0.0;
    double mode_area_um2 = 0.0;
    double vacuum_field_v_per_m = 0.0; // at the emitter plane
};

/// Shortest resonant cavity on a bottom mirror, with the Gaussian waist of a
/// plano-concave cavity whose length is the TMM effective length.
DesignField design_vacuum_field(const Stack &bottom, double wavelength_nm = design_wavelength_nm,
                                double radius_um = top_mirror_radius_um,
                                ModeAreaConvention convention = default_mode_area);

struct PropertyErrors
{
    double determinant = 0.0;     // max |det M - 1| / max(1, |m11 m22|, |m12 m21|)
    double energy = 0.0;          // max |R + T - 1| (lossless stacks)
    double subdivision = 0.0;     // max |dr| + |dt| after splitting every layer
    double half_wave = 0.0;       // max |dr| + |dt + t| after inserting a half-wave layer
};

/// Seeded random stacks checked against the exact matrix identities.
PropertyErrors stack_property_errors(std::size_t stacks, std::uint64_t seed);

/// Max relative mismatch between analytic and central-difference model gradients.
double model_gradient_error(std::size_t points, std::uint64_t seed);

struct ParserChecks
{
    std::size_t documents = 0;
    std::size_t fixed_points = 0;     // parse(print(doc)) == doc
    std::size_t codes = 0;
    std::size_t codes_covered = 0;    // diagnostic codes triggered by the error catalogue
};

ParserChecks parser_checks(std::size_t random_documents, std::uint64_t seed);

struct BrokenDocument
{
    DiagnosticCode code;
    std::string_view source;
};

/// One malformed document per diagnostic code.
std::span<const BrokenDocument> parser_error_catalogue();
} // namespace fpcav
