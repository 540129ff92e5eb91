#include "fpcav/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "fpcav/errors.hpp"

namespace fpcav
{
namespace
{
std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos)
            return out;
        start = comma + 1;
    }
}

double parse_cell(const std::string &cell, int line)
{
    if (cell == "nan" || cell == "NaN")
        return std::numeric_limits<double>::quiet_NaN();
    if (cell == "inf" || cell == "-inf")
        return cell[0] == '-' ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    if (cell == "true")
        return 1.0;
    if (cell == "false")
        return 0.0;
    double v = 0.0;
    std::string_view s = cell;
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InvalidArgument("CSV line " + std::to_string(line) + ": '" + cell + "' is not a number");
    return v;
}
} // namespace

std::size_t CsvTable::column_index(std::string_view name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name)
            return i;
    throw InvalidArgument("CSV has no column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::column(std::size_t index) const
{
    require(index < columns.size(), "CSV column index out of range");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto &row : rows)
        out.push_back(row[index]);
    return out;
}

void CsvTable::add_row(std::vector<double> row)
{
    require(row.size() == columns.size(), "CSV row width differs from the header");
    rows.push_back(std::move(row));
}

std::string format_number(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream &out, const CsvTable &table)
{
    for (const auto &c : table.comments)
        out << '#' << (c.empty() ? "" : " ") << c << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto &row : table.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

CsvTable read_csv(std::istream &in)
{
    CsvTable table;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line))
    {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty())
            continue;
        if (t.front() == '#')
        {
            table.comments.push_back(trim(std::string_view(t).substr(1)));
            continue;
        }
        auto cells = split(t);
        if (!have_header)
        {
            table.columns = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.columns.size())
            throw InvalidArgument("CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                  " fields, header has " + std::to_string(table.columns.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto &c : cells)
            row.push_back(parse_cell(c, line_no));
        table.rows.push_back(std::move(row));
    }
    if (!have_header)
        throw InvalidArgument("CSV input has no header row");
    return table;
}

CsvTable read_csv_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open '" + path + "'");
    return read_csv(in);
}

void write_csv_file(const std::string &path, const CsvTable &table)
{
    std::ofstream out(path);
    if (!out)
        throw InvalidArgument("cannot write '" + path + "'");
    write_csv(out, table);
}

CsvTable spectrum_table(std::span<const double> wavelength_nm, std::span<const ComplexResponse> responses)
{
    require(wavelength_nm.size() == responses.size(), "spectrum lengths differ");
    CsvTable t;
    t.columns = {"wavelength_nm", "R", "T", "r_re", "r_im", "t_re", "t_im"};
    for (std::size_t i = 0; i < responses.size(); ++i)
    {
        const auto &r = responses[i];
        t.add_row({wavelength_nm[i], r.R, r.T, r.r.real(), r.r.imag(), r.t.real(), r.t.imag()});
    }
    return t;
}

CsvTable field_table(const FieldProfile &profile)
{
    CsvTable t;
    t.columns = {"z_nm", "E_re", "E_im", "E_abs2", "n_re"};
    t.comments.push_back("wavelength_nm = " + format_number(profile.wavelength_nm));
    for (double z : profile.layer_boundaries_nm)
        t.comments.push_back("boundary z_nm = " + format_number(z));
    for (double z : profile.nodes_nm)
        t.comments.push_back("node z_nm = " + format_number(z));
    for (double z : profile.antinodes_nm)
        t.comments.push_back("antinode z_nm = " + format_number(z));
    for (std::size_t i = 0; i < profile.z_nm.size(); ++i)
    {
        const auto e = profile.amplitude[i];
        t.add_row({profile.z_nm[i], e.real(), e.imag(), std::norm(e), profile.index[i].real()});
    }
    return t;
}

CsvTable scan_table(const ResonanceScan &scan)
{
    CsvTable t;
    t.columns = {"gap_nm", "T"};
    for (double g : scan.resonances_nm)
        t.comments.push_back("resonance gap_nm = " + format_number(g));
    for (std::size_t i = 0; i < scan.gap_nm.size(); ++i)
        t.add_row({scan.gap_nm[i], scan.transmission[i]});
    return t;
}

CsvTable detection_table(std::span<const DetectionSample> samples)
{
    CsvTable t;
    t.columns = {"detuning_ueV", "I_r", "I_t"};
    for (const auto &s : samples)
        t.add_row({s.detuning, s.reflected, s.transmitted});
    return t;
}

AxisUnit unit_from_column(std::string_view name)
{
    auto ends = [&](std::string_view suffix) {
        return name.size() >= suffix.size() && name.substr(name.size() - suffix.size()) == suffix;
    };
    if (ends("_pm"))
        return AxisUnit::pm;
    if (ends("_nm"))
        return AxisUnit::nm;
    if (ends("_ueV") || ends("_uev"))
        return AxisUnit::uev;
    if (ends("_ps"))
        return AxisUnit::ps;
    return AxisUnit::none;
}

Trace trace_from_table(const CsvTable &table, std::string_view x_column, std::string_view y_column,
                       std::string_view sigma_column)
{
    require(table.columns.size() >= 2, "a trace needs at least two columns");
    const std::size_t xi = x_column.empty() ? 0 : table.column_index(x_column);
    const std::size_t yi = y_column.empty() ? 1 : table.column_index(y_column);
    std::optional<std::size_t> si;
    if (!sigma_column.empty())
        si = table.column_index(sigma_column);
    else if (std::find(table.columns.begin(), table.columns.end(), "sigma") != table.columns.end())
        si = table.column_index("sigma");

    std::vector<std::size_t> order(table.rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return table.rows[a][xi] < table.rows[b][xi]; });
    Trace trace;
    trace.unit = unit_from_column(table.columns[xi]);
    for (std::size_t i : order)
    {
        trace.x.push_back(table.rows[i][xi]);
        trace.y.push_back(table.rows[i][yi]);
        if (si)
            trace.sigma.push_back(table.rows[i][*si]);
    }
    trace.validate();
    return trace;
}

CsvTable trace_table(const Trace &trace, std::string_view x_name, std::string_view y_name)
{
    trace.validate();
    CsvTable t;
    t.columns = {std::string(x_name), std::string(y_name)};
    if (trace.weighted())
        t.columns.push_back("sigma");
    for (std::size_t i = 0; i < trace.x.size(); ++i)
    {
        std::vector<double> row{trace.x[i], trace.y[i]};
        if (trace.weighted())
            row.push_back(trace.sigma[i]);
        t.add_row(std::move(row));
    }
    return t;
}

DecayHistogram histogram_from_table(const CsvTable &table)
{
    require(table.columns.size() >= 2, "a histogram needs time and count columns");
    require(table.rows.size() >= 2, "a histogram needs at least two bins");
    const auto has = [&](const char *name) {
        return std::find(table.columns.begin(), table.columns.end(), name) != table.columns.end();
    };
    const std::size_t ti = has("time_ps") ? table.column_index("time_ps") : 0;
    const std::size_t ci = has("counts") ? table.column_index("counts") : 1;
    DecayHistogram h;
    h.bin_centers_ps = table.column(ti);
    h.counts = table.column(ci);
    h.bin_width_ps = (h.bin_centers_ps.back() - h.bin_centers_ps.front()) /
                     static_cast<double>(h.bin_centers_ps.size() - 1);
    h.validate();
    return h;
}

CsvTable histogram_table(const DecayHistogram &histogram)
{
    CsvTable t;
    t.columns = {"time_ps", "counts"};
    for (std::size_t i = 0; i < histogram.counts.size(); ++i)
        t.add_row({histogram.bin_centers_ps[i], histogram.counts[i]});
    return t;
}

CsvTable fit_table(const FitResult &fit)
{
    CsvTable t;
    std::vector<double> row;
    for (std::size_t i = 0; i < fit.names.size(); ++i)
    {
        t.columns.push_back(fit.names[i]);
        t.columns.push_back(fit.names[i] + "_sigma");
        row.push_back(fit.values[i]);
        row.push_back(fit.sigmas[i]);
    }
    t.columns.insert(t.columns.end(), {"residual_norm", "converged", "near_singular", "iterations"});
    row.insert(row.end(), {fit.residual_norm, fit.converged ? 1.0 : 0.0, fit.near_singular ? 1.0 : 0.0,
                           static_cast<double>(fit.iterations)});
    t.add_row(std::move(row));
    return t;
}
} // namespace fpcav
