#pragma once

// Numeric CSV tables: one header row of column names, then rows of numbers.
// Lines starting with '#' are annotations and are skipped on input.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpcav/fitting.hpp"
#include "fpcav/polarization.hpp"
#include "fpcav/tmm.hpp"

namespace fpcav
{
struct CsvTable
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> comments; // without the leading '#'

    std::size_t column_index(std::string_view name) const; // throws InvalidArgument
    std::vector<double> column(std::size_t index) const;
    void add_row(std::vector<double> row);
};

/// Shortest text that reads back to the same double.
std::string format_number(double value);

void write_csv(std::ostream &out, const CsvTable &table);
CsvTable read_csv(std::istream &in);
CsvTable read_csv_file(const std::string &path);
void write_csv_file(const std::string &path, const CsvTable &table);

/// wavelength_nm, R, T, r_re, r_im, t_re, t_im
CsvTable spectrum_table(std::span<const double> wavelength_nm, std::span<const ComplexResponse> responses);
/// z_nm, E_re, E_im, E_abs2, n_re; nodes and antinodes as annotations.
CsvTable field_table(const FieldProfile &profile);
/// gap_nm, T; resonances as annotations.
CsvTable scan_table(const ResonanceScan &scan);
/// detuning_ueV, I_r, I_t
CsvTable detection_table(std::span<const DetectionSample> samples);

/// Column name carrying a unit suffix, e.g. "x_pm".
AxisUnit unit_from_column(std::string_view name);

/// x, y and optional sigma columns of a trace. Empty names select columns 0 and 1, and a
/// column named "sigma" if present. Rows are sorted by x.
Trace trace_from_table(const CsvTable &table, std::string_view x_column = {}, std::string_view y_column = {},
                       std::string_view sigma_column = {});
CsvTable trace_table(const Trace &trace, std::string_view x_name, std::string_view y_name);

/// time_ps, counts
DecayHistogram histogram_from_table(const CsvTable &table);
CsvTable histogram_table(const DecayHistogram &histogram);

/// Single row: each parameter and its sigma, then residual_norm, converged, iterations.
CsvTable fit_table(const FitResult &fit);
} // namespace fpcav
