#include "fpcav/tmm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fpcav/constants.hpp"
#include "fpcav/errors.hpp"

namespace fpcav
{
namespace
{
using FieldPair = std::array<complex, 2>; // (E, H)

// Materials store n + ik with k >= 0 for loss; the matrix form above needs N = n - ik.
complex optical_admittance(complex index) { return std::conj(index); }

FieldPair propagate(const TransferMatrix &m, const FieldPair &v)
{
    return {m.m11 * v[0] + m.m12 * v[1], m.m21 * v[0] + m.m22 * v[1]};
}

// Fields at the exit face of every layer, for unit transmitted amplitude.
std::vector<FieldPair> exit_face_fields(const Stack &stack, double wavelength_nm)
{
    std::vector<FieldPair> back(stack.layers.size());
    FieldPair v{complex(1.0), optical_admittance(stack.exit.index)};
    for (std::size_t j = stack.layers.size(); j-- > 0;)
    {
        back[j] = v;
        v = propagate(layer_matrix(stack.layers[j], wavelength_nm), v);
    }
    return back;
}

FieldPair front_field(const Stack &stack, const std::vector<FieldPair> &back, double wavelength_nm)
{
    if (stack.layers.empty())
        return {complex(1.0), optical_admittance(stack.exit.index)};
    return propagate(layer_matrix(stack.layers.front(), wavelength_nm), back.front());
}

double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2)
{
    const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    if (denom == 0.0)
        return x1;
    const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b))
        return x1;
    return std::clamp(-b / (2.0 * a), std::min(x0, x2), std::max(x0, x2));
}

// Wavelength derivative of the phase of a complex function, central difference.
template <class F> double phase_length_nm(F &&value, double wavelength_nm, double step_nm)
{
    const complex plus = value(wavelength_nm + step_nm);
    const complex minus = value(wavelength_nm - step_nm);
    if (std::abs(plus) == 0.0 || std::abs(minus) == 0.0)
        throw NumericalFailure("reflection vanishes; phase undefined");
    const double dphi = std::arg(plus / minus) / (2.0 * step_nm);
    return wavelength_nm * wavelength_nm / (4.0 * constants::pi) * dphi;
}

Stack sub_mirror(const Stack &cavity, std::size_t first, std::size_t last, const Material &incident,
                 const Material &exit)
{
    Stack out{incident, {cavity.layers.begin() + first, cavity.layers.begin() + last}, exit, std::nullopt};
    return out;
}
} // namespace

TransferMatrix TransferMatrix::operator*(const TransferMatrix &rhs) const
{
    return {m11 * rhs.m11 + m12 * rhs.m21, m11 * rhs.m12 + m12 * rhs.m22, m21 * rhs.m11 + m22 * rhs.m21,
            m21 * rhs.m12 + m22 * rhs.m22};
}

TransferMatrix layer_matrix(complex index, double thickness_nm, double wavelength_nm)
{
    require(wavelength_nm > 0.0, "wavelength must be positive");
    const complex n = optical_admittance(index);
    const complex delta = 2.0 * constants::pi * n * thickness_nm / wavelength_nm;
    const complex i(0.0, 1.0);
    const complex c = std::cos(delta);
    const complex s = std::sin(delta);
    return {c, i * s / n, i * n * s, c};
}

TransferMatrix layer_matrix(const Layer &layer, double wavelength_nm)
{
    return layer_matrix(layer.material.index, layer.thickness_nm, wavelength_nm);
}

TransferMatrix stack_matrix(const Stack &stack, double wavelength_nm)
{
    require(wavelength_nm > 0.0, "wavelength must be positive");
    TransferMatrix m = TransferMatrix::identity();
    for (const auto &layer : stack.layers)
        m = m * layer_matrix(layer, wavelength_nm);
    return m;
}

ComplexResponse reflectance(const Stack &stack, double wavelength_nm)
{
    const TransferMatrix m = stack_matrix(stack, wavelength_nm);
    const complex eta_in = optical_admittance(stack.incident.index);
    const complex eta_out = optical_admittance(stack.exit.index);
    const complex b = m.m11 + m.m12 * eta_out;
    const complex c = m.m21 + m.m22 * eta_out;
    const complex denom = eta_in * b + c;
    if (std::abs(denom) < std::numeric_limits<double>::min() || !std::isfinite(std::abs(denom)))
        throw NumericalFailure("degenerate transfer-matrix denominator");

    ComplexResponse out;
    out.r = (eta_in * b - c) / denom;
    out.t = 2.0 * eta_in / denom;
    out.R = std::norm(out.r);
    out.T = eta_out.real() / eta_in.real() * std::norm(out.t);
    return out;
}

FieldProfile field_profile(const Stack &stack, double wavelength_nm, double grid_step_nm, double margin_nm)
{
    require(wavelength_nm > 0.0, "wavelength must be positive");
    require(grid_step_nm > 0.0, "grid step must be positive");
    require(margin_nm >= 0.0, "margin must be non-negative");
    require(stack.layers.empty() || grid_step_nm <= stack.thinnest_layer_nm(),
            "grid step exceeds the thinnest layer");

    const auto back = exit_face_fields(stack, wavelength_nm);
    const FieldPair front = front_field(stack, back, wavelength_nm);

    FieldProfile p;
    p.wavelength_nm = wavelength_nm;
    p.layer_boundaries_nm = stack.boundaries_nm();
    auto push = [&p](double z, complex e, complex n) {
        p.z_nm.push_back(z);
        p.amplitude.push_back(e);
        p.index.push_back(n);
    };

    if (margin_nm > 0.0)
    {
        const auto k = static_cast<std::size_t>(std::ceil(margin_nm / grid_step_nm));
        for (std::size_t i = k; i > 0; --i)
        {
            const double s = margin_nm * static_cast<double>(i) / static_cast<double>(k);
            push(-s, propagate(layer_matrix(stack.incident.index, s, wavelength_nm), front)[0], stack.incident.index);
        }
    }

    double z0 = 0.0;
    for (std::size_t j = 0; j < stack.layers.size(); ++j)
    {
        const Layer &layer = stack.layers[j];
        const auto k = static_cast<std::size_t>(std::ceil(layer.thickness_nm / grid_step_nm));
        for (std::size_t i = 0; i < k; ++i)
        {
            const double s = layer.thickness_nm * static_cast<double>(i) / static_cast<double>(k);
            const auto m = layer_matrix(layer.material.index, layer.thickness_nm - s, wavelength_nm);
            push(z0 + s, propagate(m, back[j])[0], layer.material.index);
        }
        z0 += layer.thickness_nm;
    }
    // Exit face.
    push(z0, complex(1.0), stack.exit.index);

    if (margin_nm > 0.0)
    {
        const auto k = static_cast<std::size_t>(std::ceil(margin_nm / grid_step_nm));
        const FieldPair out{complex(1.0), optical_admittance(stack.exit.index)};
        for (std::size_t i = 1; i <= k; ++i)
        {
            const double s = margin_nm * static_cast<double>(i) / static_cast<double>(k);
            push(z0 + s, propagate(layer_matrix(stack.exit.index, -s, wavelength_nm), out)[0], stack.exit.index);
        }
    }

    locate_extrema(p);
    return p;
}

complex field_at(const Stack &stack, double wavelength_nm, double z_nm)
{
    const auto back = exit_face_fields(stack, wavelength_nm);
    if (z_nm < 0.0)
    {
        const FieldPair front = front_field(stack, back, wavelength_nm);
        return propagate(layer_matrix(stack.incident.index, -z_nm, wavelength_nm), front)[0];
    }
    double z0 = 0.0;
    for (std::size_t j = 0; j < stack.layers.size(); ++j)
    {
        const double d = stack.layers[j].thickness_nm;
        if (z_nm <= z0 + d)
        {
            const auto m = layer_matrix(stack.layers[j].material.index, z0 + d - z_nm, wavelength_nm);
            return propagate(m, back[j])[0];
        }
        z0 += d;
    }
    const FieldPair out{complex(1.0), optical_admittance(stack.exit.index)};
    return propagate(layer_matrix(stack.exit.index, z0 - z_nm, wavelength_nm), out)[0];
}

void locate_extrema(FieldProfile &profile)
{
    profile.antinodes_nm.clear();
    profile.nodes_nm.clear();
    const auto &z = profile.z_nm;
    const std::size_t n = z.size();
    if (n < 3)
        return;

    std::vector<double> intensity(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        intensity[i] = std::norm(profile.amplitude[i]);
        peak = std::max(peak, intensity[i]);
    }
    // Ignore round-off ripple on flat profiles.
    const double tol = 1e-12 * peak;

    for (std::size_t i = 1; i + 1 < n; ++i)
    {
        const double a = intensity[i - 1], b = intensity[i], c = intensity[i + 1];
        const bool is_max = b > a + tol && b >= c + tol;
        const bool is_min = b < a - tol && b <= c - tol;
        if (!is_max && !is_min)
            continue;
        const double pos = parabola_vertex(z[i - 1], a, z[i], b, z[i + 1], c);
        (is_max ? profile.antinodes_nm : profile.nodes_nm).push_back(pos);
    }
}

double penetration_depth(const Stack &mirror, double wavelength_nm, double step_nm)
{
    require(step_nm > 0.0 && step_nm < wavelength_nm, "finite-difference step out of range");
    const ComplexResponse resp = reflectance(mirror, wavelength_nm);
    require(resp.R >= 0.5, "stack is not a mirror at this wavelength (R < 0.5)");
    const double l_nm = phase_length_nm([&](double wl) { return reflectance(mirror, wl).r; }, wavelength_nm, step_nm);
    return l_nm * 1e-3;
}

std::vector<double> find_resonances(std::span<const double> x, std::span<const double> y)
{
    require(x.size() == y.size(), "scan abscissa and ordinate lengths differ");
    std::vector<double> out;
    if (y.size() < 3)
        return out;
    const double threshold = 0.5 * *std::max_element(y.begin(), y.end());
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
    {
        if (y[i] > threshold && y[i] > y[i - 1] && y[i] >= y[i + 1])
            out.push_back(parabola_vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]));
    }
    std::sort(out.begin(), out.end());
    return out;
}

ResonanceScan scan_air_gap(const CavityTemplate &cavity, double wavelength_nm, double gap_from_nm, double gap_to_nm,
                           double step_nm)
{
    require(step_nm > 0.0, "scan step must be positive");
    require(gap_from_nm != gap_to_nm, "scan range is empty");
    require(std::min(gap_from_nm, gap_to_nm) >= 0.0, "gap range must be non-negative");

    const double span = std::abs(gap_to_nm - gap_from_nm);
    const double direction = gap_to_nm > gap_from_nm ? 1.0 : -1.0;
    const auto count = static_cast<std::size_t>(std::floor(span / step_nm + 1e-9)) + 1;

    ResonanceScan scan;
    scan.gap_nm.resize(count);
    scan.transmission.resize(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        const double g = gap_from_nm + direction * step_nm * static_cast<double>(i);
        scan.gap_nm[i] = g;
        scan.transmission[i] = reflectance(cavity.assemble(g), wavelength_nm).T;
    }
    scan.resonances_nm = find_resonances(scan.gap_nm, scan.transmission);
    return scan;
}

double tune_air_gap(const CavityTemplate &cavity, double wavelength_nm, double guess_nm)
{
    require(wavelength_nm > 0.0, "wavelength must be positive");
    const double n = cavity.spacer.index.real();
    const double phase = std::arg(reflectance(cavity.top, wavelength_nm).r) +
                         std::arg(reflectance(cavity.bottom, wavelength_nm).r);
    const double half_wave = wavelength_nm / (2.0 * n);
    // Gaps satisfying the round-trip condition: base + q * lambda / 2n.
    const double base = wavelength_nm * phase / (4.0 * constants::pi * n);
    double q = std::round((guess_nm - base) / half_wave);
    double gap = base + q * half_wave;
    while (gap < 0.0)
        gap += half_wave;
    return gap;
}

double resonant_gap_by_transmission(const CavityTemplate &cavity, double wavelength_nm, double guess_nm)
{
    auto t = [&](double g) { return reflectance(cavity.assemble(g), wavelength_nm).T; };
    const double window = wavelength_nm / 8.0;
    double a = std::max(0.0, guess_nm - window);
    double b = guess_nm + window;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = t(c), fd = t(d);
    while (b - a > 1e-7)
    {
        if (fc > fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = t(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = t(d);
        }
    }
    return 0.5 * (a + b);
}

EffectiveLength effective_cavity_length(const Stack &cavity, std::size_t spacer_layer, double wavelength_nm,
                                        double step_nm)
{
    require(spacer_layer < cavity.layers.size(), "spacer layer index out of range");
    require(step_nm > 0.0 && step_nm < wavelength_nm, "finite-difference step out of range");
    const Layer &spacer = cavity.layers[spacer_layer];
    Stack left_seen = sub_mirror(cavity, 0, spacer_layer, spacer.material, cavity.incident);
    std::reverse(left_seen.layers.begin(), left_seen.layers.end());
    const Stack right =
        sub_mirror(cavity, spacer_layer + 1, cavity.layers.size(), spacer.material, cavity.exit);

    auto round_trip = [&](double wl) {
        const complex delta = 2.0 * constants::pi * optical_admittance(spacer.material.index) * spacer.thickness_nm / wl;
        return reflectance(left_seen, wl).r * reflectance(right, wl).r * std::exp(complex(0.0, -2.0) * delta);
    };

    EffectiveLength out;
    const double total_nm = phase_length_nm(round_trip, wavelength_nm, step_nm);
    if (!(total_nm > 0.0))
        throw NumericalFailure("non-positive round-trip phase slope");
    out.total_um = total_nm * 1e-3;
    out.spacer_um = spacer.material.index.real() * spacer.thickness_nm * 1e-3;
    out.left_penetration_um =
        phase_length_nm([&](double wl) { return reflectance(left_seen, wl).r; }, wavelength_nm, step_nm) * 1e-3;
    out.right_penetration_um =
        phase_length_nm([&](double wl) { return reflectance(right, wl).r; }, wavelength_nm, step_nm) * 1e-3;
    out.fsr_nm = wavelength_nm * wavelength_nm / (2.0 * total_nm);
    return out;
}

EffectiveLength effective_cavity_length(const CavityTemplate &cavity, double gap_nm, double wavelength_nm)
{
    require(gap_nm > 0.0, "effective length needs a spacer of positive thickness");
    return effective_cavity_length(cavity.assemble(gap_nm), cavity.spacer_layer(), wavelength_nm);
}

VacuumFieldProfile vacuum_field(const Stack &cavity, double wavelength_nm, double mode_area_um2, double grid_step_nm)
{
    require(mode_area_um2 > 0.0, "mode area must be positive");
    VacuumFieldProfile out;
    out.field = field_profile(cavity, wavelength_nm, grid_step_nm);
    out.mode_area_um2 = mode_area_um2;

    // Composite Simpson per layer of Re(n^2)|E|^2.
    const auto back = exit_face_fields(cavity, wavelength_nm);
    double integral_nm = 0.0;
    for (std::size_t j = 0; j < cavity.layers.size(); ++j)
    {
        const Layer &layer = cavity.layers[j];
        auto k = static_cast<std::size_t>(std::ceil(layer.thickness_nm / grid_step_nm));
        k += k % 2;
        const double h = layer.thickness_nm / static_cast<double>(k);
        const double eps = (layer.material.index * layer.material.index).real();
        double acc = 0.0;
        for (std::size_t i = 0; i <= k; ++i)
        {
            const double s = h * static_cast<double>(i);
            const auto m = layer_matrix(layer.material.index, layer.thickness_nm - s, wavelength_nm);
            const double w = (i == 0 || i == k) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += w * std::norm(propagate(m, back[j])[0]);
        }
        integral_nm += eps * acc * h / 3.0;
    }
    if (!(integral_nm > 0.0))
        throw NumericalFailure("zero field norm; cannot normalise vacuum field");

    const double target = 0.5 * constants::hbar * constants::angular_frequency(wavelength_nm);
    const double unnormalised = constants::epsilon0 * integral_nm * constants::nm * mode_area_um2 * 1e-12;
    out.scale = std::sqrt(target / unnormalised);
    out.total_energy_j = unnormalised * out.scale * out.scale;
    for (auto &e : out.field.amplitude)
        e *= out.scale;

    out.emitter_z_nm = cavity.emitter_position_nm();
    if (out.emitter_z_nm)
        out.emitter_field_v_per_m = std::abs(field_at(cavity, wavelength_nm, *out.emitter_z_nm)) * out.scale;
    return out;
}
} // namespace fpcav
