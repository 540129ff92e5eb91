#include "fpcav/report.hpp"

#include <cstdio>

#include "fpcav/errors.hpp"

namespace fpcav
{
std::string report_number(double value)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

void Report::add(std::string key, double value, std::string unit)
{
    lines_.push_back({std::move(key), report_number(value), std::move(unit)});
}

void Report::add(std::string key, bool value) { lines_.push_back({std::move(key), value ? "true" : "false", {}}); }

void Report::add(std::string key, int value) { lines_.push_back({std::move(key), std::to_string(value), {}}); }

void Report::add_text(std::string key, std::string text) { lines_.push_back({std::move(key), std::move(text), {}}); }

std::string Report::render() const
{
    std::string out;
    for (const auto &l : lines_)
    {
        out += l.key + " = " + l.value;
        if (!l.unit.empty())
            out += ' ' + l.unit;
        out += '\n';
    }
    return out;
}

const std::string &Report::value(std::string_view key) const
{
    for (const auto &l : lines_)
        if (l.key == key)
            return l.value;
    throw InvalidArgument("report has no key '" + std::string(key) + "'");
}

Report make_report(const CouplingReport &r)
{
    Report out;
    out.add("wavelength", r.wavelength_nm, "nm");
    out.add("q_factor", r.quality_factor);
    out.add("refractive_index", r.refractive_index);
    out.add("purcell_factor", r.purcell_factor);
    out.add("dipole", r.dipole_enm, "e*nm");
    out.add("mode_volume", r.mode_volume_um3, "um^3");
    out.add("vacuum_field", r.vacuum_field_v_per_m, "V/m");
    out.add("hbar_g", r.hbar_g_uev, "ueV");
    out.add("hbar_kappa", r.hbar_kappa_uev, "ueV");
    out.add("hbar_gamma", r.hbar_gamma_uev, "ueV");
    out.add("cooperativity", r.cooperativity);
    out.add("strong_coupling", r.strong_coupling);
    out.add("strong_coupling_margin", r.strong_coupling_margin_uev, "ueV");
    return out;
}

Report make_report(const CavityFigures &f)
{
    Report out;
    out.add("wavelength", f.wavelength_nm, "nm");
    out.add("finesse", f.finesse);
    out.add("mode_index", f.mode_index);
    out.add("effective_length", f.effective_length_um, "um");
    out.add("q_factor", f.quality_factor);
    out.add("linewidth", f.linewidth_uev, "ueV");
    out.add("mode_splitting", f.mode_splitting_uev, "ueV");
    return out;
}

Report make_report(const EffectiveLength &l)
{
    Report out;
    out.add("effective_length", l.total_um, "um");
    out.add("spacer_optical_length", l.spacer_um, "um");
    out.add("penetration_left", l.left_penetration_um, "um");
    out.add("penetration_right", l.right_penetration_um, "um");
    out.add("free_spectral_range", l.fsr_nm, "nm");
    return out;
}

Report make_report(const FitResult &fit, const std::vector<std::string> &units)
{
    Report out;
    for (std::size_t i = 0; i < fit.names.size(); ++i)
    {
        const std::string unit = i < units.size() ? units[i] : std::string{};
        out.add(fit.names[i], fit.values[i], unit);
        out.add(fit.names[i] + "_sigma", fit.sigmas[i], unit);
    }
    out.add("residual_norm", fit.residual_norm);
    out.add("converged", fit.converged);
    out.add("near_singular", fit.near_singular);
    out.add("iterations", fit.iterations);
    for (const auto &w : fit.warnings)
        out.add_text("warning", w);
    return out;
}
} // namespace fpcav
