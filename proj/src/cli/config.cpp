#include "krf/cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "krf/cohomology/json_io.hpp"
#include "krf/error.hpp"

namespace krf::cli {

json parse_json_text(const std::string& text, const std::string& origin)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
        {
            if (text[i] == '\n')
            {
                ++line;
                column = 1;
            }
            else
                ++column;
        }
        throw Error(ErrorCode::ConfigError, origin + ":" + std::to_string(line) + ":" + std::to_string(column) +
                                                ": malformed JSON (" + e.what() + ")");
    }
}

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ConfigError, "cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_json_text(text.str(), path);
}

namespace {

template <typename T>
T get(const json& j, const char* key, T fallback)
{
    if (!j.contains(key))
        return fallback;
    try
    {
        return j.at(key).get<T>();
    }
    catch (const json::exception&)
    {
        throw Error(ErrorCode::ConfigError, std::string("bad value for \"") + key + "\": " + j.at(key).dump());
    }
}

geometry::EndCondition end_from(const json& j, double c)
{
    const std::string kind = j.get<std::string>();
    if (kind == "cusp")
        return geometry::EndCondition::cusp(c);
    if (kind == "cap")
        return geometry::EndCondition::cap();
    if (kind == "flat")
        return geometry::EndCondition::flat();
    throw Error(ErrorCode::ConfigError, "unknown end kind '" + kind + "' (cusp, cap or flat)");
}

/** Default ends: cap + cusp for one puncture, cusp + cusp for two. */
std::pair<std::string, std::string> default_ends(geometry::Topology t)
{
    switch (t)
    {
        case geometry::Topology::OnePuncture: return {"cap", "cusp"};
        case geometry::Topology::TwoPuncture: return {"cusp", "cusp"};
        case geometry::Topology::Sphere:      return {"cap", "cap"};
    }
    return {"cap", "cusp"};
}

RunSpec parse_run(const json& j)
{
    if (!j.is_object())
        throw Error(ErrorCode::ConfigError, "\"run\" must be an object");
    RunSpec spec;

    const json initial = j.value("initial", json::object());
    InitialSpec& in = spec.initial;
    in.kind = get<std::string>(initial, "kind", in.kind);
    in.c = get<double>(initial, "c", in.c);
    const json bump = initial.value("bump", json::object());
    in.bump.volume = get<double>(bump, "volume", in.bump.volume);
    in.bump.center = get<double>(bump, "center", in.bump.center);
    in.bump.cap_scale = get<double>(bump, "cap_scale", in.bump.cap_scale);
    in.amplitude = get<double>(initial, "amplitude", in.amplitude);
    in.width = get<double>(initial, "width", in.width);
    in.noise = get<double>(initial, "noise", in.noise);
    in.noise_modes = get<int>(initial, "noise_modes", in.noise_modes);

    const auto topology = geometry::topology_from_string(get<std::string>(j, "topology", "OnePuncture"));
    const json grid = j.value("grid", json::object());
    const auto [dl, dr] = default_ends(topology);
    const json ends = j.value("ends", json::object());
    const auto left = end_from(ends.value("left", json(dl)), in.c);
    const auto right = end_from(ends.value("right", json(dr)), in.c);
    spec.model = geometry::SurfaceModel::create(topology, get<double>(grid, "x_min", -2.0), get<double>(grid, "x_max", 60.0),
                                                get<std::size_t>(grid, "N", 512), left, right);

    flow::RunConfig& f = spec.flow;
    f.mode = flow::flow_mode_from_string(get<std::string>(j, "mode", "unnormalized"));
    spec.t_end_given = j.contains("t_end");
    f.t_end = get<double>(j, "t_end", 0.0);
    spec.t_end_factor = get<double>(j, "t_end_factor", spec.t_end_factor);
    f.cfl = get<double>(j, "cfl", f.cfl);
    const json tol = j.value("tolerances", json::object());
    f.tol = get<double>(tol, "solver", f.tol);
    f.far_field_tolerance = get<double>(tol, "far_field", f.far_field_tolerance);
    f.resolution_limit = get<double>(tol, "resolution", f.resolution_limit);
    const std::string boundary = get<std::string>(j, "potential_boundary", "neumann");
    if (boundary != "neumann" && boundary != "dirichlet")
        throw Error(ErrorCode::ConfigError, "potential_boundary must be neumann or dirichlet");
    f.boundary = boundary == "dirichlet" ? geometry::PotentialBoundary::Dirichlet : geometry::PotentialBoundary::Neumann;
    const int order = get<int>(j, "stencil_order", 4);
    if (order != 2 && order != 4)
        throw Error(ErrorCode::ConfigError, "stencil_order must be 2 or 4");
    f.order = order == 2 ? flow::StencilOrder::Second : flow::StencilOrder::Fourth;
    const std::string rule = get<std::string>(j, "resolution_rule", "geodesic");
    if (rule != "geodesic" && rule != "coordinate")
        throw Error(ErrorCode::ConfigError, "resolution_rule must be geodesic or coordinate");
    f.resolution_rule = rule == "coordinate" ? flow::ResolutionRule::Coordinate : flow::ResolutionRule::Geodesic;
    f.record_interval = get<double>(j, "record_interval", f.record_interval);
    f.sample_times = get<std::vector<double>>(j, "sample_times", {});
    f.trim_fraction = get<double>(j, "trim_fraction", f.trim_fraction);
    f.max_steps = get<std::size_t>(j, "max_steps", f.max_steps);
    f.keep_snapshots = get<bool>(j, "snapshots", true);

    const json classify = j.value("classify", json::object());
    spec.classify.growth_factor = get<double>(classify, "G", spec.classify.growth_factor);
    spec.classify.band = get<double>(classify, "B", spec.classify.band);
    return spec;
}

}   // namespace

ExperimentConfig parse_config(const json& j)
{
    if (!j.is_object())
        throw Error(ErrorCode::ConfigError, "config must be a JSON object");
    ExperimentConfig config;
    if (j.contains("manifold"))
        config.manifold = cohomology::manifold_from_json(j.at("manifold"));
    if (j.contains("omega0"))
        config.omega0 = cohomology::class_from_json(j.at("omega0"));
    if (j.contains("run") && !j.at("run").is_null())
        config.run = parse_run(j.at("run"));
    config.output_dir = get<std::string>(j, "output_dir", config.output_dir);
    config.seed = get<std::uint64_t>(j, "seed", config.seed);
    return config;
}

std::string effective_output_dir(const ExperimentConfig& config)
{
    if (const char* env = std::getenv("KRF_OUTPUT_DIR"); env && *env)
        return env;
    return config.output_dir;
}

geometry::ConformalMetric build_initial(const RunSpec& spec, std::uint64_t seed)
{
    const InitialSpec& in = spec.initial;
    const geometry::SurfaceModel& model = spec.model;
    if (in.kind == "carlson_griffiths")
        return geometry::carlson_griffiths_initial(model, in.bump).metric;
    if (in.kind == "poincare")
        return geometry::poincare_cusp(in.c, model);
    if (in.kind == "round")
        return geometry::round_sphere(in.bump.volume / (4.0 * M_PI), in.bump.center, model);
    if (in.kind == "flat_perturbed")
    {
        // Mode amplitudes from a fixed-algorithm generator so output is reproducible everywhere.
        std::mt19937_64 rng(seed);
        auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        std::vector<double> gains(static_cast<std::size_t>(std::max(0, in.noise_modes)));
        for (double& g : gains)
            g = 2.0 * uniform() - 1.0;
        const geometry::Grid& grid = model.grid();
        const double length = grid.x_end() - grid.x0;
        geometry::ConformalMetric g;
        for (double x : grid.nodes())
        {
            double v = 1.0 + in.amplitude * std::exp(-x * x / (2.0 * in.width * in.width));
            for (std::size_t k = 0; k < gains.size(); ++k)
                v *= 1.0 + in.noise * gains[k] * std::cos(static_cast<double>(k + 1) * M_PI * (x - grid.x0) / length);
            g.f.push_back(v);
        }
        geometry::require_positive(g.f);
        return g;
    }
    throw Error(ErrorCode::ConfigError, "unknown initial kind '" + in.kind + "'");
}

void set_path(json& j, const std::string& dotted, const json& value)
{
    json* node = &j;
    std::size_t start = 0;
    while (true)
    {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty())
            throw Error(ErrorCode::ConfigError, "bad parameter path '" + dotted + "'");
        if (!node->is_object())
            *node = json::object();
        if (dot == std::string::npos)
        {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

}   // namespace krf::cli
