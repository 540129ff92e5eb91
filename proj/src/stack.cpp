#include "fpcav/stack.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "fpcav/errors.hpp"

namespace fpcav
{
Material make_material(std::string name, double n, double k)
{
    require(!name.empty(), "material name must not be empty");
    require(n > 0.0, "material '" + name + "': refractive index must be positive");
    require(k >= 0.0, "material '" + name + "': extinction coefficient must be non-negative");
    return Material{std::move(name), complex(n, k)};
}

Layer make_layer(const Material &material, double thickness_nm)
{
    require(thickness_nm > 0.0, "layer of '" + material.name + "': thickness must be positive");
    return Layer{material, thickness_nm};
}

double Stack::total_thickness_nm() const
{
    return std::accumulate(layers.begin(), layers.end(), 0.0,
                           [](double acc, const Layer &l) { return acc + l.thickness_nm; });
}

std::optional<double> Stack::emitter_position_nm() const
{
    if (!emitter || emitter->layer >= layers.size())
        return std::nullopt;
    double z = 0.0;
    for (std::size_t i = 0; i < emitter->layer; ++i)
        z += layers[i].thickness_nm;
    return z + emitter->depth_nm;
}

std::vector<double> Stack::boundaries_nm() const
{
    std::vector<double> out{0.0};
    double z = 0.0;
    for (const auto &layer : layers)
    {
        z += layer.thickness_nm;
        out.push_back(z);
    }
    return out;
}

double Stack::thinnest_layer_nm() const
{
    double thinnest = std::numeric_limits<double>::infinity();
    for (const auto &layer : layers)
        thinnest = std::min(thinnest, layer.thickness_nm);
    return thinnest;
}

Stack Stack::reversed() const
{
    Stack out{exit, {layers.rbegin(), layers.rend()}, incident, std::nullopt};
    if (emitter && emitter->layer < layers.size())
    {
        const auto idx = layers.size() - 1 - emitter->layer;
        out.emitter = EmitterPlane{idx, layers[emitter->layer].thickness_nm - emitter->depth_nm};
    }
    return out;
}

namespace materials
{
Material vacuum() { return make_material("vacuum", 1.0); }
Material air() { return make_material("air", 1.0); }
Material water() { return make_material("water", 1.33); }
Material ta2o5() { return make_material("ta2o5", 2.06); }
Material sio2() { return make_material("sio2", 1.46); }
Material silica() { return make_material("silica", 1.46); }
Material elo() { return make_material("elo", 3.332); }
Material gaas() { return make_material("gaas", 3.54); }
Material algaas() { return make_material("algaas", 3.009); }
} // namespace materials

const MaterialLibrary &MaterialLibrary::standard()
{
    static const MaterialLibrary library = [] {
        MaterialLibrary lib;
        for (const auto &m : {materials::vacuum(), materials::air(), materials::water(), materials::ta2o5(),
                              materials::sio2(), materials::silica(), materials::elo(), materials::gaas(),
                              materials::algaas()})
            lib.add(m);
        return lib;
    }();
    return library;
}

void MaterialLibrary::add(const Material &material) { materials_[material.name] = material; }

bool MaterialLibrary::contains(const std::string &name) const { return materials_.count(name) != 0; }

const Material &MaterialLibrary::at(const std::string &name) const
{
    const auto it = materials_.find(name);
    if (it == materials_.end())
        throw InvalidArgument("unknown material '" + name + "'");
    return it->second;
}

std::vector<std::string> MaterialLibrary::names() const
{
    std::vector<std::string> out;
    for (const auto &[name, _] : materials_)
        out.push_back(name);
    return out;
}

double quarter_wave_thickness(const Material &material, double wavelength_nm)
{
    require(wavelength_nm > 0.0, "design wavelength must be positive");
    return wavelength_nm / (4.0 * material.index.real());
}

Stack build_dbr(int pairs, const Material &high, const Material &low, double wavelength_nm, bool terminate_high,
                const Material &incident, const Material &exit)
{
    require(pairs >= 1, "a Bragg mirror needs at least one pair");
    const Layer h = make_layer(high, quarter_wave_thickness(high, wavelength_nm));
    const Layer l = make_layer(low, quarter_wave_thickness(low, wavelength_nm));

    Stack stack{incident, {}, exit, std::nullopt};
    stack.layers.reserve(2 * static_cast<std::size_t>(pairs) + 1);
    if (terminate_high)
    {
        stack.layers.push_back(h);
        for (int i = 0; i < pairs; ++i)
        {
            stack.layers.push_back(l);
            stack.layers.push_back(h);
        }
    }
    else
    {
        for (int i = 0; i < pairs; ++i)
        {
            stack.layers.push_back(h);
            stack.layers.push_back(l);
        }
    }
    return stack;
}

Stack build_bottom_mirror(double gap_thickness_nm, const Material &gap_material, int dbr_pairs, double wavelength_nm)
{
    require(gap_thickness_nm >= 0.0, "bonding gap must be non-negative");
    const Material elo = materials::elo();
    const Stack dbr = build_dbr(dbr_pairs, materials::ta2o5(), materials::sio2(), wavelength_nm, true);

    Stack stack{materials::vacuum(), {}, materials::silica(), std::nullopt};
    stack.layers.push_back(make_layer(elo, 3.0 * quarter_wave_thickness(elo, wavelength_nm)));
    if (gap_thickness_nm > 0.0)
        stack.layers.push_back(make_layer(gap_material, gap_thickness_nm));
    stack.layers.insert(stack.layers.end(), dbr.layers.begin(), dbr.layers.end());
    stack.emitter = EmitterPlane{0, 0.5 * wavelength_nm / elo.index.real()};
    return stack;
}

Stack build_lambda_layer_mirror(int dbr_pairs, double wavelength_nm)
{
    const Material elo = materials::elo();
    const Material sio2 = materials::sio2();
    const Stack dbr = build_dbr(dbr_pairs, materials::ta2o5(), sio2, wavelength_nm, true);

    Stack stack{materials::vacuum(), {}, materials::silica(), std::nullopt};
    stack.layers.push_back(make_layer(elo, 4.0 * quarter_wave_thickness(elo, wavelength_nm)));
    stack.layers.push_back(make_layer(sio2, quarter_wave_thickness(sio2, wavelength_nm)));
    stack.layers.insert(stack.layers.end(), dbr.layers.begin(), dbr.layers.end());
    stack.emitter = EmitterPlane{0, 0.5 * wavelength_nm / elo.index.real()};
    return stack;
}

Stack CavityTemplate::assemble(double gap_nm) const
{
    require(gap_nm >= 0.0, "air gap must be non-negative");
    require(top.incident == spacer && bottom.incident == spacer,
            "cavity mirrors must both be described from the spacer medium");

    Stack out{top.exit, {}, bottom.exit, std::nullopt};
    out.layers.assign(top.layers.rbegin(), top.layers.rend());
    const std::size_t offset = out.layers.size() + (gap_nm > 0.0 ? 1 : 0);
    if (gap_nm > 0.0)
        out.layers.push_back(make_layer(spacer, gap_nm));
    out.layers.insert(out.layers.end(), bottom.layers.begin(), bottom.layers.end());
    if (bottom.emitter)
        out.emitter = EmitterPlane{bottom.emitter->layer + offset, bottom.emitter->depth_nm};
    return out;
}

CavityTemplate split_at_spacer(const Stack &cavity, std::size_t spacer_layer)
{
    require(spacer_layer < cavity.layers.size(), "spacer layer index out of range");
    const Material &spacer = cavity.layers[spacer_layer].material;
    const auto split = cavity.layers.begin() + static_cast<std::ptrdiff_t>(spacer_layer);
    Stack top{spacer, std::vector<Layer>(cavity.layers.begin(), split), cavity.incident, std::nullopt};
    std::reverse(top.layers.begin(), top.layers.end());
    Stack bottom{spacer, std::vector<Layer>(split + 1, cavity.layers.end()), cavity.exit, std::nullopt};
    if (cavity.emitter && cavity.emitter->layer > spacer_layer)
        bottom.emitter = EmitterPlane{cavity.emitter->layer - spacer_layer - 1, cavity.emitter->depth_nm};
    return CavityTemplate{std::move(bottom), std::move(top), spacer};
}

std::size_t find_spacer_layer(const Stack &cavity)
{
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < cavity.layers.size(); ++i)
    {
        const auto &name = cavity.layers[i].material.name;
        if (name == "vacuum" || name == "air")
        {
            require(!found, "stack has more than one vacuum/air layer; choose the spacer explicitly");
            found = i;
        }
    }
    require(found.has_value(), "stack has no vacuum/air spacer layer");
    return *found;
}

CavityTemplate make_cavity_template(const Stack &bottom, int top_dbr_pairs, double wavelength_nm)
{
    Stack top = build_dbr(top_dbr_pairs, materials::ta2o5(), materials::sio2(), wavelength_nm, true,
                          bottom.incident, materials::silica());
    return CavityTemplate{bottom, std::move(top), bottom.incident};
}

Stack build_full_cavity(const Stack &bottom, double air_gap_nm, int top_dbr_pairs)
{
    require(air_gap_nm >= 0.0, "air gap must be non-negative");
    return make_cavity_template(bottom, top_dbr_pairs).assemble(air_gap_nm);
}
} // namespace fpcav
