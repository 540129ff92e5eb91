#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fpcav
{
using complex = std::complex<double>;

// Non-dispersive optical material. Index n + ik with n > 0, k >= 0.
struct Material
{
    std::string name;
    complex index{1.0, 0.0};

    bool operator==(const Material &) const = default;
};

Material make_material(std::string name, double n, double k = 0.0);

struct Layer
{
    Material material;
    double thickness_nm = 0.0;

    bool operator==(const Layer &) const = default;
};

Layer make_layer(const Material &material, double thickness_nm);

// Marks the emitter plane: a depth measured from the incident-side face of one layer.
struct EmitterPlane
{
    std::size_t layer = 0;
    double depth_nm = 0.0;

    bool operator==(const EmitterPlane &) const = default;
};

// Layers are ordered from the incident side to the exit side.
struct Stack
{
    Material incident;
    std::vector<Layer> layers;
    Material exit;
    std::optional<EmitterPlane> emitter;

    double total_thickness_nm() const;
    // Depth of the emitter plane from the incident surface, if one is marked.
    std::optional<double> emitter_position_nm() const;
    // Layer boundary positions, starting at 0 and ending at the total thickness.
    std::vector<double> boundaries_nm() const;
    double thinnest_layer_nm() const;
    // Same layers in reverse order with the two outer media swapped.
    Stack reversed() const;

    bool operator==(const Stack &) const = default;
};

// Name -> material table. Lookups are exact and case-sensitive.
class MaterialLibrary
{
public:
    MaterialLibrary() = default;

    // Vacuum, air, water, Ta2O5, SiO2, silica, the averaged epilayer, GaAs and AlGaAs.
    static const MaterialLibrary &standard();

    void add(const Material &material);
    bool contains(const std::string &name) const;
    const Material &at(const std::string &name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, Material> materials_;
};

namespace materials
{
Material vacuum();
Material air();
Material water();
Material ta2o5();
Material sio2();
Material silica();
Material elo();
Material gaas();
Material algaas();
} // namespace materials

inline constexpr double design_wavelength_nm = 940.0;

// Smallest pair count whose high-terminated Ta2O5/SiO2 mirror on silica reaches
// R >= 0.9998 at 940 nm from vacuum. Pinned by the sweep in test_stack.cpp.
inline constexpr int default_dbr_pairs = 13;

/// Physical thickness of a quarter-wave layer: lambda / (4 Re n).
double quarter_wave_thickness(const Material &material, double wavelength_nm);

/// Quarter-wave mirror. Without termination the layers are (high, low) x pairs from the
/// incident side. With terminate_high the stack reads high, (low, high) x pairs, so both
/// faces are the high-index material.
Stack build_dbr(int pairs, const Material &high, const Material &low, double wavelength_nm,
                bool terminate_high, const Material &incident = materials::vacuum(),
                const Material &exit = materials::silica());

/// Bonded bottom mirror, ELO surface first: vacuum | 3/4-wave epilayer | optional gap | DBR | silica.
/// The emitter plane sits half a wavelength of optical depth below the epilayer surface.
Stack build_bottom_mirror(double gap_thickness_nm, const Material &gap_material = materials::vacuum(),
                          int dbr_pairs = default_dbr_pairs, double wavelength_nm = design_wavelength_nm);

/// Alternative bottom mirror: a one-wavelength epilayer on a SiO2-terminated DBR.
Stack build_lambda_layer_mirror(int dbr_pairs = default_dbr_pairs, double wavelength_nm = design_wavelength_nm);

// Two mirrors facing each other across an adjustable spacer.
// Both mirror stacks are described as seen from the spacer (spacer material = incident medium).
struct CavityTemplate
{
    Stack bottom;
    Stack top;
    Material spacer = materials::vacuum();

    // silica | top (reversed) | spacer | bottom | silica. The spacer layer is omitted at zero gap.
    Stack assemble(double gap_nm) const;
    // Index of the spacer layer in assemble(gap) for gap > 0.
    std::size_t spacer_layer() const { return top.layers.size(); }
};

/// Splits a full cavity stack at its spacer layer; assemble(spacer thickness) returns the input.
CavityTemplate split_at_spacer(const Stack &cavity, std::size_t spacer_layer);

/// Index of the only vacuum or air layer; throws if there is none or more than one.
std::size_t find_spacer_layer(const Stack &cavity);

CavityTemplate make_cavity_template(const Stack &bottom, int top_dbr_pairs = default_dbr_pairs,
                                    double wavelength_nm = design_wavelength_nm);

/// Bottom mirror + air gap + planar top DBR of the same design, silica on both outer sides.
Stack build_full_cavity(const Stack &bottom, double air_gap_nm, int top_dbr_pairs = default_dbr_pairs);
} // namespace fpcav
