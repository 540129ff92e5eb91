#include "fpcav/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

#include "fpcav/cavity.hpp"
#include "fpcav/constants.hpp"
#include "fpcav/cqed.hpp"
#include "fpcav/csv.hpp"
#include "fpcav/errors.hpp"
#include "fpcav/fitting.hpp"
#include "fpcav/polarization.hpp"
#include "fpcav/report.hpp"
#include "fpcav/reproduction.hpp"
#include "fpcav/stack_parser.hpp"
#include "fpcav/tmm.hpp"

namespace fpcav
{
namespace
{
struct Output
{
    std::string path;

    void write(std::ostream &out, const CsvTable &table) const
    {
        if (path.empty() || path == "-")
            write_csv(out, table);
        else
            write_csv_file(path, table);
    }
};

std::vector<double> sweep(double from, double to, double step)
{
    require(step > 0.0, "step must be positive");
    require(to >= from, "sweep end must not precede its start");
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(from + step * static_cast<double>(i));
    return out;
}

// Full width at half maximum of the peak nearest to x0, by linear interpolation.
std::optional<double> peak_fwhm(const std::vector<double> &x, const std::vector<double> &y, double x0)
{
    std::size_t i = 0;
    for (std::size_t k = 1; k < x.size(); ++k)
        if (std::abs(x[k] - x0) < std::abs(x[i] - x0))
            i = k;
    const double half = 0.5 * y[i];
    std::size_t l = i, r = i;
    while (l > 0 && y[l] > half)
        --l;
    while (r + 1 < y.size() && y[r] > half)
        ++r;
    if (y[l] > half || y[r] > half || r - l < 3)
        return std::nullopt;
    const double xl = x[l] + (half - y[l]) * (x[l + 1] - x[l]) / (y[l + 1] - y[l]);
    const double xr = x[r - 1] + (y[r - 1] - half) * (x[r] - x[r - 1]) / (y[r - 1] - y[r]);
    return std::abs(xr - xl);
}

struct StackInput
{
    std::string path;
    double wavelength = 0.0; // 0 = document wavelength
};

Stack load(const StackInput &in, double &wavelength)
{
    double doc_wavelength = 0.0;
    Stack stack = load_stack_file(in.path, &doc_wavelength);
    wavelength = in.wavelength > 0.0 ? in.wavelength : doc_wavelength;
    return stack;
}

// Rising-edge half-height time, a first guess for the IRF centre.
double half_rise_time(const DecayHistogram &h)
{
    const std::size_t tail = std::max<std::size_t>(h.counts.size() / 10, 1);
    double bg = 0.0;
    for (std::size_t i = h.counts.size() - tail; i < h.counts.size(); ++i)
        bg += h.counts[i];
    bg /= static_cast<double>(tail);
    const auto peak = static_cast<std::size_t>(std::max_element(h.counts.begin(), h.counts.end()) - h.counts.begin());
    const double half = bg + 0.5 * (h.counts[peak] - bg);
    for (std::size_t i = 1; i <= peak; ++i)
        if (h.counts[i] >= half)
        {
            const double f = (half - h.counts[i - 1]) / (h.counts[i] - h.counts[i - 1]);
            return h.bin_centers_ps[i - 1] + f * h.bin_width_ps;
        }
    return h.bin_centers_ps[peak];
}

// IRF centre minimising the decay-fit residual: a grid around the half-rise time,
// then golden-section refinement.
double estimate_irf_center(const DecayHistogram &h, double fwhm_ps, HistogramWeighting weighting)
{
    auto cost = [&](double c) {
        const FitResult f = fit_decay(h, InstrumentResponse::gaussian_fwhm(fwhm_ps, c), weighting);
        return f.converged ? f.residual_norm : std::numeric_limits<double>::infinity();
    };
    const double guess = half_rise_time(h);
    const double span = std::max(2.0 * fwhm_ps, 10.0 * h.bin_width_ps);
    const double step = h.bin_width_ps;
    double best = guess, best_cost = cost(guess);
    for (double c = guess - span; c <= guess + span; c += step)
        if (const double v = cost(c); v < best_cost)
            best = c, best_cost = v;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = best - step, b = best + step;
    double x1 = b - g * (b - a), x2 = a + g * (b - a), f1 = cost(x1), f2 = cost(x2);
    while (b - a > 1e-3 * step)
    {
        if (f1 < f2)
            b = x2, x2 = x1, f2 = f1, x1 = b - g * (b - a), f1 = cost(x1);
        else
            a = x1, x1 = x2, f1 = f2, x2 = a + g * (b - a), f2 = cost(x2);
    }
    return 0.5 * (a + b);
}

PurcellModel reference_purcell_model() { return PurcellModel{1.27, 0.79, 121.83, 106.93, 100.14, 1.12}; }
} // namespace

int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Fabry-Perot microcavity toolkit: thin-film transfer matrices, cavity QED figures, fits.", "fpcav"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    // spectrum
    StackInput spectrum_in;
    double spec_from = 0, spec_to = 0, spec_step = 0;
    Output spectrum_out;
    auto *spectrum = app.add_subcommand("spectrum", "Reflectance/transmittance vs wavelength (CSV)");
    spectrum->add_option("stack", spectrum_in.path, "Stack document")->required()->check(CLI::ExistingFile);
    spectrum->add_option("--from", spec_from, "First wavelength (nm)")->required();
    spectrum->add_option("--to", spec_to, "Last wavelength (nm)")->required();
    spectrum->add_option("--step", spec_step, "Wavelength step (nm)")->required();
    spectrum->add_option("-o,--output", spectrum_out.path, "CSV file (default stdout)");

    // field
    StackInput field_in;
    double field_step = default_grid_step_nm, field_margin = 0.0;
    Output field_out;
    auto *field = app.add_subcommand("field", "Field profile |E(z)| with nodes and antinodes (CSV)");
    field->add_option("stack", field_in.path, "Stack document")->required()->check(CLI::ExistingFile);
    field->add_option("--wavelength", field_in.wavelength, "Wavelength (nm), default: document wavelength");
    field->add_option("--step", field_step, "Grid step (nm)")->capture_default_str();
    field->add_option("--margin", field_margin, "Extend the grid into the outer media (nm)");
    field->add_option("-o,--output", field_out.path, "CSV file (default stdout)");

    // scan
    StackInput scan_in;
    double gap_from = 0, gap_to = 0, gap_step = 0;
    int spacer_index = -1;
    Output scan_out;
    auto *scan = app.add_subcommand("scan", "Transmission vs spacer thickness, resonances and finesse (CSV)");
    scan->add_option("stack", scan_in.path, "Cavity stack document")->required()->check(CLI::ExistingFile);
    scan->add_option("--gap-from", gap_from, "First spacer thickness (nm)")->required();
    scan->add_option("--gap-to", gap_to, "Last spacer thickness (nm)")->required();
    scan->add_option("--step", gap_step, "Spacer step (nm)")->required();
    scan->add_option("--wavelength", scan_in.wavelength, "Wavelength (nm), default: document wavelength");
    scan->add_option("--spacer-layer", spacer_index, "0-based spacer layer, default: the vacuum/air layer");
    scan->add_option("-o,--output", scan_out.path, "CSV file (default stdout)");

    // penetration
    StackInput pen_in;
    double pen_step = penetration_step_nm;
    auto *penetration = app.add_subcommand("penetration", "Mirror penetration depth (report)");
    penetration->add_option("stack", pen_in.path, "Mirror stack document")->required()->check(CLI::ExistingFile);
    penetration->add_option("--wavelength", pen_in.wavelength, "Wavelength (nm), default: document wavelength");
    penetration->add_option("--step", pen_step, "Finite-difference step (nm)")->capture_default_str();

    // cavity length
    StackInput len_in;
    int len_spacer = -1;
    auto *length = app.add_subcommand("length", "Effective length of a cavity stack from its round-trip phase");
    length->add_option("stack", len_in.path, "Cavity stack document")->required()->check(CLI::ExistingFile);
    length->add_option("--wavelength", len_in.wavelength, "Wavelength (nm), default: document wavelength");
    length->add_option("--spacer-layer", len_spacer, "0-based spacer layer, default: the vacuum/air layer");

    // figures
    double fig_wavelength = design_wavelength_nm, fig_fwhm = 0, fig_length = 0, fig_splitting = 0;
    auto *figures = app.add_subcommand("figures", "Finesse, mode index, Q and linewidth from scan observables");
    figures->add_option("--wavelength", fig_wavelength, "Wavelength (nm)")->capture_default_str();
    figures->add_option("--fwhm-pm", fig_fwhm, "Displacement FWHM of a resonance (pm)")->required();
    figures->add_option("--length-um", fig_length, "Effective cavity length (um)")->required();
    figures->add_option("--splitting", fig_splitting, "Polarisation mode splitting (ueV)");

    // cqed-report
    double cq_gamma = 0, cq_wavelength = 0, cq_q = 0, cq_n = 0, cq_fp = 0, cq_kappa = 0;
    auto *cqed = app.add_subcommand("cqed-report", "Dipole, mode volume, coupling, cooperativity (report)");
    cqed->add_option("--gamma", cq_gamma, "Free-space decay rate 1/tau (GHz)")->required();
    cqed->add_option("--wavelength", cq_wavelength, "Emitter wavelength (nm)")->required();
    cqed->add_option("--q", cq_q, "Cavity quality factor")->required();
    cqed->add_option("--n", cq_n, "Refractive index at the emitter")->required();
    cqed->add_option("--fp", cq_fp, "Purcell factor")->required();
    cqed->add_option("--kappa", cq_kappa, "Cavity linewidth (ueV), default: photon energy / Q");

    // polarization
    double pol_split = 57.65, pol_w1 = 38.53, pol_w2 = 40.29, pol_phi = 45.0, pol_from = -300, pol_to = 300,
           pol_step = 0.5;
    Output pol_out;
    auto *pol = app.add_subcommand("polarization", "Cross-polarised reflection and transmission of a split mode (CSV)");
    pol->add_option("--splitting", pol_split, "Mode splitting (ueV)")->capture_default_str();
    pol->add_option("--width1", pol_w1, "Mode 1 FWHM (ueV)")->capture_default_str();
    pol->add_option("--width2", pol_w2, "Mode 2 FWHM (ueV)")->capture_default_str();
    pol->add_option("--phi", pol_phi, "Cavity axis vs excitation axis (degrees, [0, 180))")->capture_default_str();
    pol->add_option("--from", pol_from, "First detuning (ueV)")->capture_default_str();
    pol->add_option("--to", pol_to, "Last detuning (ueV)")->capture_default_str();
    pol->add_option("--step", pol_step, "Detuning step (ueV)")->capture_default_str();
    pol->add_option("-o,--output", pol_out.path, "CSV file (default stdout)");

    // fit
    std::string fit_family, fit_csv, fit_x, fit_y, fit_sigma, fit_weighting = "unweighted", fit_irf_csv;
    double irf_fwhm = default_irf_fwhm_ps, drift = 0.0;
    std::optional<double> irf_center;
    Output fit_out;
    auto *fit = app.add_subcommand("fit", "Least-squares fit of a trace or decay histogram (report + CSV)");
    fit->add_option("family", fit_family, "lorentzian | purcell | decay")
        ->required()
        ->check(CLI::IsMember({"lorentzian", "purcell", "decay"}));
    fit->add_option("csv", fit_csv, "Input CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--x-column", fit_x, "Abscissa column (default: first)");
    fit->add_option("--y-column", fit_y, "Ordinate column (default: second)");
    fit->add_option("--sigma-column", fit_sigma, "Per-point sigma column (default: 'sigma' if present)");
    fit->add_option("--irf-fwhm", irf_fwhm, "Gaussian IRF FWHM (ps)")->capture_default_str();
    fit->add_option("--irf-center", irf_center, "Gaussian IRF centre (ps), default: best-fit centre");
    fit->add_option("--irf-csv", fit_irf_csv, "Measured IRF histogram on the same bins (time_ps, counts)");
    fit->add_option("--weighting", fit_weighting, "Decay weighting")
        ->check(CLI::IsMember({"unweighted", "poisson"}))
        ->capture_default_str();
    fit->add_option("--drift-factor", drift, "Purcell fits: also report F_P1, F_P2 scaled by this factor");
    fit->add_option("-o,--output", fit_out.path, "Write the fit as a one-row CSV");

    // synth
    std::string synth_family;
    std::uint64_t seed = 1;
    double noise = 0.0, sx_from = -400, sx_to = 400, sx_step = 4;
    LorentzianTruth lt;
    DecayTruth dt;
    bool poisson = true;
    double synth_irf_fwhm = default_irf_fwhm_ps, synth_irf_center = 1000.0;
    Output synth_out;
    auto *synth = app.add_subcommand("synth", "Seeded synthetic data for the fit families (CSV)");
    synth->add_option("family", synth_family, "lorentzian | purcell | decay")
        ->required()
        ->check(CLI::IsMember({"lorentzian", "purcell", "decay"}));
    synth->add_option("--seed", seed, "Random seed")->capture_default_str();
    synth->add_option("--noise", noise, "Lorentzian: absolute sigma; purcell: relative sigma");
    synth->add_option("--from", sx_from, "First abscissa (pm or ueV)")->capture_default_str();
    synth->add_option("--to", sx_to, "Last abscissa")->capture_default_str();
    synth->add_option("--step", sx_step, "Abscissa step")->capture_default_str();
    synth->add_option("--center", lt.center, "Lorentzian centre (pm)")->capture_default_str();
    synth->add_option("--fwhm", lt.fwhm, "Lorentzian FWHM (pm)")->capture_default_str();
    synth->add_option("--amplitude", lt.amplitude, "Lorentzian amplitude")->capture_default_str();
    synth->add_option("--offset", lt.offset, "Lorentzian offset")->capture_default_str();
    synth->add_option("--lifetime", dt.lifetime_ps, "Decay lifetime (ps)")->capture_default_str();
    synth->add_option("--counts", dt.signal_counts, "Expected signal counts")->capture_default_str();
    synth->add_option("--background", dt.background_per_bin, "Background counts per bin")->capture_default_str();
    synth->add_option("--bin-width", dt.bin_width_ps, "Histogram bin width (ps)")->capture_default_str();
    synth->add_option("--window", dt.window_ps, "Histogram window (ps)")->capture_default_str();
    synth->add_option("--irf-fwhm", synth_irf_fwhm, "Gaussian IRF FWHM (ps)")->capture_default_str();
    synth->add_option("--irf-center", synth_irf_center, "Gaussian IRF centre (ps)")->capture_default_str();
    synth->add_flag("!--expected", poisson, "Decay: write the expected counts instead of a Poisson sample");
    synth->add_option("-o,--output", synth_out.path, "CSV file (default stdout)");

    // reproduce-paper
    ReproductionOptions repro;
    auto *reproduce = app.add_subcommand("reproduce-paper", "Recompute the reference table and check every row");
    reproduce->add_option("--seeds", repro.monte_carlo_seeds, "Monte-Carlo repetitions")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &e)
    {
        app.exit(e, out, err);
        return exit_ok;
    }
    catch (const CLI::CallForAllHelp &e)
    {
        app.exit(e, out, err);
        return exit_ok;
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e, err, err);
        err << app.help();
        return exit_usage;
    }

    try
    {
        if (spectrum->parsed())
        {
            double wavelength = 0.0;
            const Stack stack = load(spectrum_in, wavelength);
            const auto grid = sweep(spec_from, spec_to, spec_step);
            std::vector<ComplexResponse> responses;
            for (double w : grid)
                responses.push_back(reflectance(stack, w));
            spectrum_out.write(out, spectrum_table(grid, responses));
        }
        else if (field->parsed())
        {
            double wavelength = 0.0;
            const Stack stack = load(field_in, wavelength);
            FieldProfile profile = field_profile(stack, wavelength, field_step, field_margin);
            locate_extrema(profile);
            CsvTable table = field_table(profile);
            if (const auto z = stack.emitter_position_nm())
                table.comments.push_back("emitter z_nm = " + format_number(*z));
            field_out.write(out, table);
        }
        else if (scan->parsed())
        {
            double wavelength = 0.0;
            const Stack stack = load(scan_in, wavelength);
            const std::size_t spacer =
                spacer_index >= 0 ? static_cast<std::size_t>(spacer_index) : find_spacer_layer(stack);
            const CavityTemplate cavity = split_at_spacer(stack, spacer);
            const ResonanceScan result = scan_air_gap(cavity, wavelength, gap_from, gap_to, gap_step);
            CsvTable table = scan_table(result);
            table.comments.insert(table.comments.begin(), "wavelength_nm = " + format_number(wavelength));
            const double n = cavity.spacer.index.real();
            for (double g : result.resonances_nm)
            {
                auto fwhm = peak_fwhm(result.gap_nm, result.transmission, g);
                table.comments.push_back(fwhm ? "finesse at gap_nm " + format_number(g) + " = " +
                                                    format_number(wavelength / (2.0 * n * *fwhm))
                                              : "finesse at gap_nm " + format_number(g) +
                                                    " = unresolved (step too coarse)");
            }
            scan_out.write(out, table);
            if (!scan_out.path.empty() && scan_out.path != "-")
                for (const auto &c : table.comments)
                    out << c << '\n';
        }
        else if (penetration->parsed())
        {
            double wavelength = 0.0;
            const Stack stack = load(pen_in, wavelength);
            const ComplexResponse r = reflectance(stack, wavelength);
            Report report;
            report.add("wavelength", wavelength, "nm");
            report.add("reflectance", r.R);
            report.add("reflection_phase", std::arg(r.r), "rad");
            report.add("penetration_depth", penetration_depth(stack, wavelength, pen_step), "um");
            out << report.render();
        }
        else if (length->parsed())
        {
            double wavelength = 0.0;
            const Stack stack = load(len_in, wavelength);
            const std::size_t spacer = len_spacer >= 0 ? static_cast<std::size_t>(len_spacer) : find_spacer_layer(stack);
            const EffectiveLength l = effective_cavity_length(stack, spacer, wavelength);
            Report report = make_report(l);
            report.add("mode_index", mode_index_from_length(l.total_um, wavelength));
            out << report.render();
        }
        else if (figures->parsed())
        {
            out << make_report(make_cavity_figures(fig_wavelength, fig_fwhm, fig_length, fig_splitting)).render();
        }
        else if (cqed->parsed())
        {
            const CouplingReport r = coupling_report(cq_gamma, cq_wavelength, cq_q, cq_n, cq_fp, cq_kappa);
            out << make_report(r).render();
        }
        else if (pol->parsed())
        {
            const TwoModeCavity cavity{{0.0, pol_w1, 1.0}, {pol_split, pol_w2, 1.0}};
            const auto grid = sweep(pol_from, pol_to, pol_step);
            pol_out.write(out, detection_table(detection_trace(cavity, {pol_phi * constants::pi / 180.0, 1.0}, grid)));
        }
        else if (fit->parsed())
        {
            const CsvTable table = read_csv_file(fit_csv);
            FitResult result;
            std::vector<std::string> units;
            if (fit_family == "decay")
            {
                const DecayHistogram h = histogram_from_table(table);
                const auto weighting =
                    fit_weighting == "poisson" ? HistogramWeighting::poisson : HistogramWeighting::unweighted;
                InstrumentResponse irf = InstrumentResponse::delta(0.0);
                if (!fit_irf_csv.empty())
                    irf = InstrumentResponse::from_histogram(h, histogram_from_table(read_csv_file(fit_irf_csv)).counts);
                else
                    irf = InstrumentResponse::gaussian_fwhm(irf_fwhm, irf_center ? *irf_center : estimate_irf_center(h, irf_fwhm, weighting));
                result = fit_decay(h, irf, weighting);
                units = {"ps", "", ""};
                if (irf.is_gaussian())
                    out << "irf_center = " << report_number(irf.center_ps()) << " ps\n";
            }
            else
            {
                const Trace trace = trace_from_table(table, fit_x, fit_y, fit_sigma);
                const std::string u = to_string(trace.unit);
                if (fit_family == "lorentzian")
                {
                    result = fit_lorentzian(trace);
                    units = {u, u, "", ""};
                }
                else
                {
                    result = fit_purcell_map(trace);
                    units = {"", "", u, u, u, ""};
                }
            }
            Report report = make_report(result, units);
            if (fit_family == "purcell" && drift > 0.0)
            {
                report.add("drift_factor", drift);
                report.add("F_P1_corrected", drift_corrected_purcell(result.value("F_P1"), drift));
                report.add("F_P2_corrected", drift_corrected_purcell(result.value("F_P2"), drift));
            }
            out << report.render();
            if (!fit_out.path.empty())
                fit_out.write(out, fit_table(result));
            if (!result.converged)
                return exit_failure;
        }
        else if (synth->parsed())
        {
            switch (parse_synth_family(synth_family))
            {
            case SynthFamily::lorentzian:
                synth_out.write(out, trace_table(synth_lorentzian(lt, sweep(sx_from, sx_to, sx_step), noise, seed),
                                                 "displacement_pm", "signal"));
                break;
            case SynthFamily::purcell:
                synth_out.write(out, trace_table(synth_purcell_map(reference_purcell_model(),
                                                                   sweep(sx_from, sx_to, sx_step), noise, seed),
                                                 "detuning_ueV", "relative_rate"));
                break;
            case SynthFamily::decay:
                synth_out.write(out, histogram_table(synth_decay(
                                         dt, InstrumentResponse::gaussian_fwhm(synth_irf_fwhm, synth_irf_center),
                                         poisson, seed)));
                break;
            }
        }
        else if (reproduce->parsed())
        {
            const auto outcomes = run_reproduction(repro);
            out << format_reproduction(outcomes);
            const bool all = std::all_of(outcomes.begin(), outcomes.end(), [](const auto &c) { return c.pass; });
            return all ? exit_ok : exit_failure;
        }
    }
    catch (const InvalidArgument &e)
    {
        err << "fpcav: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception &e)
    {
        err << "fpcav: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_ok;
}
} // namespace fpcav
