#include "fpcav/reproduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "fpcav/constants.hpp"
#include "fpcav/cqed.hpp"
#include "fpcav/errors.hpp"
#include "fpcav/fitting.hpp"
#include "fpcav/polarization.hpp"
#include "fpcav/report.hpp"
#include "fpcav/tmm.hpp"

namespace fpcav
{
namespace
{
// clang-format off
constexpr std::array targets{
    Target{1, "penetration_gap_free", "bottom-mirror penetration depth, bonded without gap", 6.70, 0.05, Check::relative, "um"},
    Target{2, "penetration_gap_22nm", "bottom-mirror penetration depth, 22 nm vacuum gap", 2.06, 0.05, Check::relative, "um"},
    Target{2, "length_gap_22nm", "effective cavity length, 22 nm gap, ~0.5 um air gap", 3.00, 0.05, Check::relative, "um"},
    Target{3, "length_gap_free", "minimal effective cavity length, no gap", 7.32, 0.05, Check::relative, "um"},
    Target{4, "penetration_lambda_layer", "penetration depth, one-wavelength epilayer on SiO2-terminated mirror", 4.30, 0.05, Check::relative, "um"},
    Target{4, "field_gain_lambda_layer", "vacuum-field amplitude gain of that variant", 1.4, 0.10, Check::relative, ""},
    Target{5, "node_offset", "distance from epilayer/mirror interface to nearest field node", 0.0, 2.0, Check::absolute, "nm"},
    Target{5, "antinode_offset", "distance from emitter plane to nearest field antinode", 0.0, 5.0, Check::absolute, "nm"},
    Target{6, "finesse", "finesse from 115 pm displacement linewidth at 940 nm", 4087.0, 0.5, Check::absolute, ""},
    Target{6, "q_factor", "quality factor for l = 3.4 um, F = 4100, 940 nm", 29660.0, 1.0, Check::absolute, ""},
    Target{6, "linewidth", "cavity linewidth for Q = 30000 at 940 nm", 44.0, 0.1, Check::absolute, "ueV"},
    Target{6, "length_from_mode_index", "effective length for mode index 7.26 at 940 nm", 3.41, 0.005, Check::absolute, "um"},
    Target{6, "mode_index_round_trip", "mode index recovered from that length", 7.26, 1e-12, Check::absolute, ""},
    Target{7, "dipole", "transition dipole from 1.25 GHz at 933 nm", 1.2, 0.02, Check::relative, "e*nm"},
    Target{7, "vacuum_field_from_g", "vacuum field hbar g / mu for hbar g = 11.75 ueV", 1.0e4, 0.10, Check::relative, "V/m"},
    Target{7, "implied_purcell", "Purcell factor implied by hbar g = 11.75 ueV (Q 33000, n 3.332, 933 nm)", 5.0, 0.15, Check::relative, ""},
    Target{7, "hbar_g_forward", "hbar g from the chain at Purcell factor 5", 11.75, 0.15, Check::relative, "ueV"},
    Target{7, "vacuum_field_tmm", "TMM vacuum field at the emitter, shortest gap-free cavity", 2.5e4, 0.25, Check::relative, "V/m"},
    Target{8, "lifetime_on_resonance", "double-Lorentzian lifetime at zero detuning", 311.0, 0.01, Check::relative, "ps"},
    Target{8, "lifetime_detuned", "double-Lorentzian lifetime at 300 ueV detuning", 674.0, 0.01, Check::relative, "ps"},
    Target{8, "lifetime_on_resonance_vs_measured", "same, against the measured 318 +- 70 ps", 318.0, 70.0, Check::absolute, "ps"},
    Target{8, "lifetime_detuned_vs_measured", "same, against the measured 665 +- 10 ps", 665.0, 10.0, Check::absolute, "ps"},
    Target{9, "round_trip_lorentzian", "noiseless Lorentzian fit, max relative parameter error", 1e-6, 0.0, Check::at_most, ""},
    Target{9, "round_trip_purcell", "noiseless Purcell-map fit, max relative parameter error", 1e-6, 0.0, Check::at_most, ""},
    Target{9, "round_trip_decay", "noiseless decay fit, max relative parameter error", 1e-6, 0.0, Check::at_most, ""},
    Target{9, "coverage_lorentzian", "Lorentzian fits: fraction of truths inside +-2 sigma", 0.9, 0.0, Check::at_least, ""},
    Target{9, "coverage_purcell", "Purcell-map fits: fraction of truths inside +-2 sigma", 0.9, 0.0, Check::at_least, ""},
    Target{9, "coverage_decay", "decay fits: fraction of truths inside +-2 sigma", 0.9, 0.0, Check::at_least, ""},
    Target{9, "purcell_noisy_recovery", "noisy Purcell map: max |fit - truth| / sigma over F_P1, F_P2, alpha", 2.0, 0.0, Check::at_most, ""},
    Target{10, "reflection_peaks", "resolved peaks, cross-polarised reflection at phi = pi/4", 2.0, 0.0, Check::absolute, ""},
    Target{10, "transmission_peaks", "resolved peaks, transmission at phi = 0.45 pi", 1.0, 0.0, Check::absolute, ""},
    Target{11, "determinant", "max |det M - 1|, relative to the matrix products, over random stacks", 1e-9, 0.0, Check::at_most, ""},
    Target{11, "energy_balance", "max |R + T - 1| over random lossless stacks", 1e-9, 0.0, Check::at_most, ""},
    Target{11, "subdivision", "max response change after splitting every layer", 1e-9, 0.0, Check::at_most, ""},
    Target{11, "half_wave_insertion", "max response change after inserting a half-wave layer", 1e-9, 0.0, Check::at_most, ""},
    Target{11, "parser_fixed_point", "fraction of documents with parse(print(doc)) == doc", 1.0, 0.0, Check::at_least, ""},
    Target{11, "diagnostic_coverage", "fraction of diagnostic codes produced by the error catalogue", 1.0, 0.0, Check::at_least, ""},
    Target{11, "gradient_vs_finite_difference", "max relative model-gradient mismatch", 1e-6, 0.0, Check::at_most, ""},
    Target{12, "strong_coupling_margin", "4g - |kappa - gamma| for (11.75, 40, 0.823) ueV", 7.8, 0.05, Check::absolute, "ueV"},
    Target{12, "cooperativity", "2 g^2 / (kappa gamma) for the same rates", 8.4, 0.05, Check::absolute, ""},
};

constexpr std::array criteria{
    CriterionInfo{1, "penetration depth, gap-free bonded mirror", ""},
    CriterionInfo{2, "22 nm bonding gap: penetration depth and cavity length", ""},
    CriterionInfo{3, "minimal cavity length without gap", ""},
    CriterionInfo{4, "one-wavelength epilayer variant", ""},
    CriterionInfo{5, "field node at the interface, antinode at the emitter", ""},
    CriterionInfo{6, "closed-form cavity figures", ""},
    CriterionInfo{7, "coupling chain", ""},
    CriterionInfo{8, "detuning-dependent lifetime model", ""},
    CriterionInfo{9, "fit round trips and coverage", ""},
    CriterionInfo{10, "cross-polarised detection of the split mode", ""},
    CriterionInfo{11, "property suites", ""},
    CriterionInfo{12, "strong-coupling verdict",
                  "the numbers satisfy 4g > |kappa - gamma|, yet the measured system is only close to strong coupling"},
};

constexpr std::array<BrokenDocument, 17> broken_documents{
    BrokenDocument{DiagnosticCode::invalid_character, "wavelength 940 nm\nstack from vacuum to silica { qw ta2o5 ; }\n"},
    BrokenDocument{DiagnosticCode::malformed_number, "wavelength 940 nm\nstack from vacuum to silica { layer sio2 1.2.3 nm }\n"},
    BrokenDocument{DiagnosticCode::missing_header, "stack from vacuum to silica { qw ta2o5 }\n"},
    BrokenDocument{DiagnosticCode::malformed_header, "wavelength nm\nstack from vacuum to silica { qw ta2o5 }\n"},
    BrokenDocument{DiagnosticCode::malformed_material, "wavelength 940 nm\nmaterial foo 2.0\nstack from vacuum to silica { qw foo }\n"},
    BrokenDocument{DiagnosticCode::duplicate_material, "wavelength 940 nm\nmaterial a n=2\nmaterial a n=3\nstack from vacuum to silica { qw a }\n"},
    BrokenDocument{DiagnosticCode::invalid_index, "wavelength 940 nm\nmaterial a n=-2\nstack from vacuum to silica { qw a }\n"},
    BrokenDocument{DiagnosticCode::missing_stack, "wavelength 940 nm\nmaterial a n=2\n"},
    BrokenDocument{DiagnosticCode::duplicate_stack, "wavelength 940 nm\nstack from vacuum to silica { qw ta2o5 }\nstack from vacuum to silica { qw sio2 }\n"},
    BrokenDocument{DiagnosticCode::malformed_stack_header, "wavelength 940 nm\nstack vacuum to silica { qw ta2o5 }\n"},
    BrokenDocument{DiagnosticCode::unknown_material, "wavelength 940 nm\nstack from vacuum to silica { qw unobtainium }\n"},
    BrokenDocument{DiagnosticCode::malformed_layer, "wavelength 940 nm\nstack from vacuum to silica { layer sio2 nm }\n"},
    BrokenDocument{DiagnosticCode::non_positive_thickness, "wavelength 940 nm\nstack from vacuum to silica {\n  layer gaas -5 nm\n}\n"},
    BrokenDocument{DiagnosticCode::invalid_repeat_count, "wavelength 940 nm\nstack from vacuum to silica { repeat 2.5 { qw sio2 } }\n"},
    BrokenDocument{DiagnosticCode::unknown_directive, "wavelength 940 nm\nstack from vacuum to silica { slab sio2 }\n"},
    BrokenDocument{DiagnosticCode::unbalanced_braces, "wavelength 940 nm\nstack from vacuum to silica { repeat 2 { qw sio2 }\n"},
    BrokenDocument{DiagnosticCode::unexpected_token, "wavelength 940 nm\nstack from vacuum to silica { qw sio2 }\nextra\n"},
};
// clang-format on

// Detuning-dependent decay parameters of the measured dot.
constexpr double gamma_free_ghz = 1.25;
constexpr double qd_wavelength_nm = 933.0;
constexpr double qd_q_factor = 33000.0;
constexpr double elo_index = 3.332;
constexpr double quoted_hbar_g_uev = 11.75;

PurcellModel fitted_lifetime_model() { return PurcellModel{1.27, 0.79, 121.83, 106.93, 100.14, 1.12}; }

double max_relative_error(const std::vector<double> &fit, const std::vector<double> &truth)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        worst = std::max(worst, std::abs(fit[i] - truth[i]) / std::max(std::abs(truth[i]), 1e-12));
    return worst;
}

std::size_t inside_two_sigma(const FitResult &fit, const std::vector<double> &truth)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (std::abs(fit.values[i] - truth[i]) <= 2.0 * fit.sigmas[i])
            ++n;
    return n;
}

std::vector<double> linspace(double from, double to, std::size_t count)
{
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

LorentzianTruth lorentzian_truth() { return LorentzianTruth{3.0, 115.0, 1.0, 0.02}; }
std::vector<double> lorentzian_axis() { return linspace(-400.0, 400.0, 201); }
constexpr double lorentzian_noise = 0.02;

std::vector<double> purcell_axis() { return linspace(-500.0, 500.0, 51); }
constexpr double purcell_noise = 0.01;

InstrumentResponse decay_irf() { return InstrumentResponse::gaussian_fwhm(default_irf_fwhm_ps, 1000.0); }
DecayTruth decay_truth()
{
    DecayTruth t;
    t.background_per_bin = 2.0;
    return t;
}

std::vector<double> purcell_values(const PurcellModel &m)
{
    return {m.purcell_1, m.purcell_2, m.linewidth_1_uev, m.linewidth_2_uev, m.mode_splitting_uev, m.leaky};
}

double coverage(const std::vector<std::size_t> &inside, std::size_t per_fit)
{
    std::size_t total = 0;
    for (auto k : inside)
        total += k;
    return static_cast<double>(total) / static_cast<double>(inside.size() * per_fit);
}

void tmm_quantities(std::map<std::string, double> &q)
{
    const Stack gap_free = build_bottom_mirror(0.0);
    const Stack gap_22 = build_bottom_mirror(22.0);
    const Stack lambda_layer = build_lambda_layer_mirror();

    q["penetration_gap_free"] = penetration_depth(gap_free, design_wavelength_nm);
    q["penetration_gap_22nm"] = penetration_depth(gap_22, design_wavelength_nm);
    q["penetration_lambda_layer"] = penetration_depth(lambda_layer, design_wavelength_nm);

    const CavityTemplate cavity_22 = make_cavity_template(gap_22);
    const double gap = tune_air_gap(cavity_22, design_wavelength_nm, 500.0);
    q["length_gap_22nm"] = effective_cavity_length(cavity_22, gap, design_wavelength_nm).total_um;

    const DesignField field = design_vacuum_field(gap_free);
    const DesignField field_lambda = design_vacuum_field(lambda_layer);
    q["length_gap_free"] = field.effective_length_um;
    q["vacuum_field_tmm"] = field.vacuum_field_v_per_m;
    q["field_gain_lambda_layer"] = field_lambda.vacuum_field_v_per_m / field.vacuum_field_v_per_m;

    FieldProfile profile = field_profile(gap_free, design_wavelength_nm, 0.05);
    locate_extrema(profile);
    const double interface = gap_free.layers.front().thickness_nm;
    const double emitter = *gap_free.emitter_position_nm();
    auto nearest = [](const std::vector<double> &zs, double z) {
        double best = std::numeric_limits<double>::infinity();
        for (double v : zs)
            best = std::min(best, std::abs(v - z));
        return best;
    };
    q["node_offset"] = nearest(profile.nodes_nm, interface);
    q["antinode_offset"] = nearest(profile.antinodes_nm, emitter);
}

void closed_form_quantities(std::map<std::string, double> &q)
{
    q["finesse"] = finesse_from_scan(940.0, 115.0);
    q["q_factor"] = quality_factor(3.4, 4100.0, 940.0);
    q["linewidth"] = linewidth_energy(940.0, 30000.0);
    const double l = length_from_mode_index(7.26, 940.0);
    q["length_from_mode_index"] = l;
    q["mode_index_round_trip"] = mode_index_from_length(l, 940.0);

    const double mu = dipole_from_lifetime(gamma_free_ghz, qd_wavelength_nm);
    q["dipole"] = mu;
    q["vacuum_field_from_g"] = vacuum_field_from_g(quoted_hbar_g_uev, mu);
    q["implied_purcell"] = implied_purcell_factor(quoted_hbar_g_uev, mu, qd_q_factor, qd_wavelength_nm, elo_index);
    const double v0 = mode_volume_from_purcell(qd_q_factor, qd_wavelength_nm, elo_index, 5.0);
    q["hbar_g_forward"] = coupling_g(mu, qd_wavelength_nm, elo_index, v0);

    const PurcellModel model = fitted_lifetime_model();
    q["lifetime_on_resonance"] = lifetime_ps(0.0, model, gamma_free_ghz);
    q["lifetime_detuned"] = lifetime_ps(300.0, model, gamma_free_ghz);
    q["lifetime_on_resonance_vs_measured"] = q["lifetime_on_resonance"];
    q["lifetime_detuned_vs_measured"] = q["lifetime_detuned"];

    const double g = 11.75, kappa = 40.0, gamma = 0.823;
    q["strong_coupling_margin"] = strong_coupling_check(g, kappa, gamma).margin_uev;
    q["cooperativity"] = cooperativity(g, kappa, gamma);
}

void fitting_quantities(std::map<std::string, double> &q, const ReproductionOptions &options)
{
    const auto x = lorentzian_axis();
    const auto lt = lorentzian_truth();
    const std::vector<double> l_truth{lt.center, lt.fwhm, lt.amplitude, lt.offset};
    q["round_trip_lorentzian"] =
        max_relative_error(fit_lorentzian(synth_lorentzian(lt, x, 0.0, 0)).values, l_truth);

    const auto d = purcell_axis();
    const PurcellModel pt = fitted_lifetime_model();
    const auto p_truth = purcell_values(pt);
    q["round_trip_purcell"] = max_relative_error(fit_purcell_map(synth_purcell_map(pt, d, 0.0, 0)).values, p_truth);

    const auto irf = decay_irf();
    const auto dt = decay_truth();
    const std::vector<double> d_truth{dt.lifetime_ps, expected_decay(dt, irf).amplitude, dt.background_per_bin};
    q["round_trip_decay"] = max_relative_error(fit_decay(synth_decay(dt, irf, false, 0), irf).values, d_truth);

    const std::size_t seeds = options.monte_carlo_seeds;
    q["coverage_lorentzian"] = coverage(run_seeded(seeds, options.base_seed, [&](std::uint64_t s) {
                                            return inside_two_sigma(
                                                fit_lorentzian(synth_lorentzian(lt, x, lorentzian_noise, s)), l_truth);
                                        }),
                                        l_truth.size());
    q["coverage_purcell"] = coverage(run_seeded(seeds, options.base_seed, [&](std::uint64_t s) {
                                         return inside_two_sigma(
                                             fit_purcell_map(synth_purcell_map(pt, d, purcell_noise, s)), p_truth);
                                     }),
                                     p_truth.size());
    q["coverage_decay"] = coverage(run_seeded(seeds, options.base_seed, [&](std::uint64_t s) {
                                       return inside_two_sigma(
                                           fit_decay(synth_decay(dt, irf, true, s), irf, HistogramWeighting::poisson),
                                           d_truth);
                                   }),
                                   d_truth.size());

    const FitResult noisy = fit_purcell_map(synth_purcell_map(pt, d, purcell_noise, options.base_seed));
    double worst = 0.0;
    for (const char *name : {"F_P1", "F_P2", "alpha"})
    {
        const std::size_t i = static_cast<std::size_t>(
            std::find(noisy.names.begin(), noisy.names.end(), name) - noisy.names.begin());
        worst = std::max(worst, std::abs(noisy.values[i] - p_truth[i]) / noisy.sigmas[i]);
    }
    q["purcell_noisy_recovery"] = worst;
}

void polarization_quantities(std::map<std::string, double> &q)
{
    const TwoModeCavity cavity{{0.0, 38.53, 1.0}, {57.65, 40.29, 1.0}};
    const auto detuning = linspace(-300.0, 300.0, 6001);
    auto peaks = [&](double phi, bool reflected) {
        std::vector<double> y;
        for (const auto &s : detection_trace(cavity, {phi, 1.0}, detuning))
            y.push_back(reflected ? s.reflected : s.transmitted);
        return static_cast<double>(resolved_peaks(detuning, y).size());
    };
    q["reflection_peaks"] = peaks(constants::pi / 4.0, true);
    q["transmission_peaks"] = peaks(0.45 * constants::pi, false);
}

void property_quantities(std::map<std::string, double> &q, const ReproductionOptions &options)
{
    const PropertyErrors e = stack_property_errors(200, options.base_seed);
    q["determinant"] = e.determinant;
    q["energy_balance"] = e.energy;
    q["subdivision"] = e.subdivision;
    q["half_wave_insertion"] = e.half_wave;
    const ParserChecks p = parser_checks(200, options.base_seed);
    q["parser_fixed_point"] = static_cast<double>(p.fixed_points) / static_cast<double>(p.documents);
    q["diagnostic_coverage"] = static_cast<double>(p.codes_covered) / static_cast<double>(p.codes);
    q["gradient_vs_finite_difference"] = model_gradient_error(100, options.base_seed);
}

// Random document tree for the printer/parser round trip.
StackItem random_item(std::mt19937_64 &rng, int depth)
{
    static const std::array<const char *, 5> names{"ta2o5", "sio2", "elo", "gaas", "mat0"};
    std::uniform_int_distribution<int> kind(0, depth < 2 ? 2 : 1);
    std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
    std::uniform_real_distribution<double> thick(0.5, 900.0);
    StackItem item;
    switch (kind(rng))
    {
    case 0:
        item.kind = StackItem::Kind::layer;
        item.material = names[pick(rng)];
        item.thickness_nm = thick(rng);
        break;
    case 1:
        item.kind = StackItem::Kind::quarter_wave;
        item.material = names[pick(rng)];
        break;
    default:
        item.kind = StackItem::Kind::repeat;
        item.count = std::uniform_int_distribution<int>(1, 20)(rng);
        for (int i = std::uniform_int_distribution<int>(0, 3)(rng); i > 0; --i)
            item.items.push_back(random_item(rng, depth + 1));
    }
    return item;
}
} // namespace

std::span<const Target> reproduction_targets() { return targets; }
std::span<const CriterionInfo> reproduction_criteria() { return criteria; }
std::span<const BrokenDocument> parser_error_catalogue() { return broken_documents; }

bool passes(const Target &t, double value)
{
    if (!std::isfinite(value))
        return false;
    switch (t.check)
    {
    case Check::relative:
        return std::abs(value - t.target) <= t.tolerance * std::abs(t.target);
    case Check::absolute:
        return std::abs(value - t.target) <= t.tolerance;
    case Check::at_most:
        return value <= t.target;
    case Check::at_least:
        return value >= t.target;
    }
    return false;
}

DesignField design_vacuum_field(const Stack &bottom, double wavelength_nm, double radius_um,
                                ModeAreaConvention convention)
{
    const CavityTemplate cavity = make_cavity_template(bottom, default_dbr_pairs, wavelength_nm);
    DesignField f;
    f.air_gap_nm = tune_air_gap(cavity, wavelength_nm, 0.0);
    f.effective_length_um = effective_cavity_length(cavity, f.air_gap_nm, wavelength_nm).total_um;
    const GaussianGeometry geometry = gaussian_waist(radius_um, f.effective_length_um, wavelength_nm, convention);
    f.waist_um = geometry.waist_um;
    f.mode_area_um2 = geometry.mode_area_um2;
    const VacuumFieldProfile v = vacuum_field(cavity.assemble(f.air_gap_nm), wavelength_nm, f.mode_area_um2);
    if (!v.emitter_field_v_per_m)
        throw InvalidArgument("bottom mirror has no emitter plane");
    f.vacuum_field_v_per_m = *v.emitter_field_v_per_m;
    return f;
}

PropertyErrors stack_property_errors(std::size_t stacks, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> index(1.2, 3.6), loss(0.0, 0.2), thick(5.0, 400.0), medium(1.0, 1.6),
        wavelength(450.0, 1600.0), split(0.05, 0.95);
    std::uniform_int_distribution<int> count(1, 40);
    PropertyErrors e;
    auto response_change = [](const ComplexResponse &a, const ComplexResponse &b) {
        return std::abs(a.r - b.r) + std::abs(a.t - b.t);
    };
    for (std::size_t s = 0; s < stacks; ++s)
    {
        const double lambda = wavelength(rng);
        const bool lossy = s % 2 == 1;
        Stack stack;
        stack.incident = make_material("in", medium(rng));
        stack.exit = make_material("out", medium(rng));
        const int layers = count(rng);
        for (int i = 0; i < layers; ++i)
            stack.layers.push_back(
                make_layer(make_material("m" + std::to_string(i), index(rng), lossy ? loss(rng) : 0.0), thick(rng)));

        const TransferMatrix m = stack_matrix(stack, lambda);
        const double magnitude = std::max({1.0, std::abs(m.m11 * m.m22), std::abs(m.m12 * m.m21)});
        e.determinant = std::max(e.determinant, std::abs(m.determinant() - 1.0) / magnitude);
        const ComplexResponse base = reflectance(stack, lambda);
        if (!lossy)
            e.energy = std::max(e.energy, std::abs(base.R + base.T - 1.0));

        Stack split_stack = stack;
        split_stack.layers.clear();
        for (const auto &layer : stack.layers)
        {
            const double f = split(rng);
            split_stack.layers.push_back(make_layer(layer.material, f * layer.thickness_nm));
            split_stack.layers.push_back(make_layer(layer.material, (1.0 - f) * layer.thickness_nm));
        }
        e.subdivision = std::max(e.subdivision, response_change(base, reflectance(split_stack, lambda)));

        // A half-wave layer has M = -I: r and T are unchanged, t changes sign.
        Stack inserted = stack;
        const auto at = std::uniform_int_distribution<std::size_t>(0, stack.layers.size())(rng);
        const Material absentee = make_material("half", index(rng));
        inserted.layers.insert(inserted.layers.begin() + static_cast<std::ptrdiff_t>(at),
                               make_layer(absentee, lambda / (2.0 * absentee.index.real())));
        const ComplexResponse after = reflectance(inserted, lambda);
        e.half_wave = std::max(e.half_wave, std::abs(after.r - base.r) + std::abs(after.t + base.t));
    }
    return e;
}

double model_gradient_error(std::size_t points, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    auto check = [&](const CurveModel &model, const std::vector<double> &p, double x) {
        std::vector<double> g(p.size()), q = p;
        model.gradient(x, p, g);
        double scale = 0.0;
        for (double v : g)
            scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k < p.size(); ++k)
        {
            const double h = 1e-5 * std::max(std::abs(p[k]), 1e-2);
            q[k] = p[k] + h;
            const double up = model.value(x, q);
            q[k] = p[k] - h;
            const double down = model.value(x, q);
            q[k] = p[k];
            const double fd = (up - down) / (2.0 * h);
            worst = std::max(worst, std::abs(g[k] - fd) / std::max({std::abs(g[k]), std::abs(fd), 1e-3 * scale}));
        }
    };
    const CurveModel lorentz = lorentzian_model();
    const CurveModel purcell = purcell_map_model();
    for (std::size_t i = 0; i < points; ++i)
    {
        const std::vector<double> lp{200.0 * u(rng) - 100.0, 20.0 + 200.0 * u(rng), 0.1 + 5.0 * u(rng),
                                     u(rng) - 0.5};
        const std::vector<double> pp{0.1 + 5.0 * u(rng), 0.1 + 5.0 * u(rng), 20.0 + 150.0 * u(rng),
                                     20.0 + 150.0 * u(rng), 200.0 * u(rng) - 100.0, 2.0 * u(rng)};
        for (int j = 0; j < 5; ++j)
        {
            check(lorentz, lp, 600.0 * u(rng) - 300.0);
            check(purcell, pp, 600.0 * u(rng) - 300.0);
        }
    }
    return worst;
}

ParserChecks parser_checks(std::size_t random_documents, std::uint64_t seed)
{
    ParserChecks c;
    auto round_trip = [&](const StackDocument &doc) {
        ++c.documents;
        const ParseResult again = parse_stack(print_stack(doc));
        if (again.ok() && *again.document == doc)
            ++c.fixed_points;
    };
    for (double gap : {0.0, 22.0})
        round_trip(from_stack(build_bottom_mirror(gap), design_wavelength_nm));
    round_trip(from_stack(build_lambda_layer_mirror(), design_wavelength_nm));
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < random_documents; ++i)
    {
        StackDocument doc;
        doc.wavelength_nm = std::uniform_real_distribution<double>(300.0, 2000.0)(rng);
        doc.materials.push_back({"mat0", std::uniform_real_distribution<double>(1.0, 4.0)(rng),
                                 i % 3 == 0 ? std::uniform_real_distribution<double>(0.0, 1.0)(rng) : 0.0, {}});
        doc.incident = "vacuum";
        doc.exit = i % 2 ? "silica" : "mat0";
        for (int k = std::uniform_int_distribution<int>(0, 6)(rng); k > 0; --k)
            doc.items.push_back(random_item(rng, 0));
        round_trip(doc);
    }
    const auto &codes = all_diagnostic_codes();
    c.codes = codes.size();
    for (DiagnosticCode code : codes)
    {
        for (const auto &broken : broken_documents)
        {
            if (broken.code != code)
                continue;
            const ParseResult r = parse_stack(broken.source);
            const bool hit = std::any_of(r.diagnostics.begin(), r.diagnostics.end(),
                                         [&](const Diagnostic &d) { return d.code == code; });
            if (hit && !r.ok())
            {
                ++c.codes_covered;
                break;
            }
        }
    }
    return c;
}

std::vector<CriterionOutcome> run_reproduction(const ReproductionOptions &options)
{
    std::map<std::string, double> q;
    tmm_quantities(q);
    closed_form_quantities(q);
    fitting_quantities(q, options);
    polarization_quantities(q);
    property_quantities(q, options);

    std::vector<CriterionOutcome> out;
    for (const auto &info : criteria)
    {
        CriterionOutcome c;
        c.criterion = info.criterion;
        c.title = info.title;
        c.note = info.note;
        c.pass = true;
        for (const auto &t : targets)
        {
            if (t.criterion != info.criterion)
                continue;
            const auto it = q.find(std::string(t.key));
            const double value = it == q.end() ? std::nan("") : it->second;
            const bool ok = passes(t, value);
            c.rows.push_back({t, value, ok});
            c.pass = c.pass && ok;
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::string format_reproduction(const std::vector<CriterionOutcome> &outcomes)
{
    std::ostringstream out;
    for (const auto &c : outcomes)
    {
        out << "criterion " << c.criterion << ": " << (c.pass ? "PASS" : "FAIL") << "  " << c.title << '\n';
        for (const auto &r : c.rows)
        {
            std::string bound;
            switch (r.target.check)
            {
            case Check::relative:
                bound = report_number(r.target.target) + " +- " + report_number(100.0 * r.target.tolerance) + "%";
                break;
            case Check::absolute:
                bound = report_number(r.target.target) + " +- " + report_number(r.target.tolerance);
                break;
            case Check::at_most:
                bound = "<= " + report_number(r.target.target);
                break;
            case Check::at_least:
                bound = ">= " + report_number(r.target.target);
                break;
            }
            out << "    [" << (r.pass ? "ok" : "miss") << "] " << r.target.key << " = " << report_number(r.value);
            if (!r.target.unit.empty())
                out << ' ' << r.target.unit;
            out << "  (target " << bound << ")  " << r.target.quantity << '\n';
        }
        if (!c.note.empty())
            out << "    note: " << c.note << '\n';
    }
    return out.str();
}
} // namespace fpcav
