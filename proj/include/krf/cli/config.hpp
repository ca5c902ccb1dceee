#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "krf/cohomology/cohomology.hpp"
#include "krf/diagnostics/diagnostics.hpp"
#include "krf/flow/run.hpp"
#include "krf/geometry/metric.hpp"

namespace krf::cli {

using nlohmann::json;

struct InitialSpec
{
    std::string kind = "carlson_griffiths";   // carlson_griffiths | poincare | round | flat_perturbed
    double c = 1.0;                           // cusp constant of every cusp end
    geometry::BumpParameters bump;
    // flat_perturbed: f = (1 + amplitude e^{-x^2 / (2 width^2)}) * prod_k (1 + noise g_k cos(k pi (x - x_min)/L))
    double amplitude = 0.3;
    double width = 1.0;
    double noise = 0.01;
    int noise_modes = 4;
};

struct RunSpec
{
    geometry::SurfaceModel model;
    InitialSpec initial;
    flow::RunConfig flow;
    bool t_end_given = false;
    double t_end_factor = 1.0;   // without t_end: run to factor * predicted singularity time
    diagnostics::ClassifyConfig classify;
};

struct ExperimentConfig
{
    std::optional<cohomology::ManifoldDescription> manifold;
    std::optional<cohomology::CohomologyClass> omega0;
    std::optional<RunSpec> run;
    std::string output_dir = "krf_out";
    std::uint64_t seed = 0;
};

/** Parse JSON text; malformed input throws ConfigError naming line and column. */
json parse_json_text(const std::string& text, const std::string& origin);
json load_json_file(const std::string& path);

ExperimentConfig parse_config(const json& j);

/** Output directory after the KRF_OUTPUT_DIR override. */
std::string effective_output_dir(const ExperimentConfig& config);

geometry::ConformalMetric build_initial(const RunSpec& spec, std::uint64_t seed);

/** Set the value at a dotted path ("run.initial.c"), creating objects on the way. */
void set_path(json& j, const std::string& dotted, const json& value);

}   // namespace krf::cli
