#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "krf/flow/state.hpp"

namespace krf::flow {

enum class FlowMode
{
    Normalized,     // d omega/dt = -Ric - omega, time t
    Unnormalized,   // d omega/ds = -Ric, time s = e^t - 1
    FlatLongtime,   // unnormalized, on a two-puncture model with flat ends
};

std::string to_string(FlowMode m);
FlowMode flow_mode_from_string(const std::string& text);

/** How the resolution stop measures under-resolution. */
enum class ResolutionRule
{
    Geodesic,     // max |K| (sqrt(f) h)^2 = max |ric| h^2 > limit
    Coordinate,   // sup |K| h^2 > limit
};

struct RunConfig
{
    FlowMode mode = FlowMode::Normalized;
    double t_end = 1.0;                    // in the mode's own time
    double cfl = 0.2;
    double tol = 1e-5;                     // monitor slack is 10 x tol
    StencilOrder order = StencilOrder::Fourth;
    geometry::PotentialBoundary boundary = geometry::PotentialBoundary::Neumann;

    double record_interval = 0.01;         // mode time between records
    double record_dlogK = 0.02;            // also record when log sup|K| moved this much
    std::vector<double> sample_times;      // mode times that are hit exactly and recorded
    std::size_t check_every = 8;           // steps between curvature checks
    bool keep_snapshots = false;

    double trim_fraction = 0.02;           // drop cap samples with ftilde < fraction * max ftilde
    std::size_t min_intervals = 64;        // below this the grid is exhausted
    double rebase_ratio = 1e3;             // rebase when ftilde/f0 leaves [1/r, r]

    ResolutionRule resolution_rule = ResolutionRule::Geodesic;
    double resolution_limit = 0.1;
    double curvature_cap = 1e8;
    double far_field_tolerance = 0.05;     // |ric x^2 + 1| at a cusp end
    std::size_t max_steps = 50'000'000;
    int max_halvings = 12;
};

struct Record
{
    double t = 0.0;             // mode time
    double t_normalized = 0.0;
    double volume = 0.0;
    double sup_abs_K = 0.0;
    double cusp_c_fit = 0.0;    // NaN without a cusp end
    double margin_uupper = 0.0;
    double margin_uprime = 0.0;
    double margin_voldec = 0.0;
    double voleqn_residual = 0.0;
    double min_ratio = 0.0;     // ftilde / f_initial on surviving samples
    double max_ratio = 0.0;
    double resolution = 0.0;    // value compared against resolution_limit
    double x_peak = 0.0;        // where |K| is largest
};

struct Snapshot
{
    double t = 0.0;             // mode time
    double x0 = 0.0;
    double h = 0.0;
    std::vector<double> f;      // mode-scaled metric coefficient
};

struct MonitorSummary
{
    double worst_uupper = 0.0;
    double worst_uprime = 0.0;
    double worst_voldec = 0.0;
    double worst_voleqn = 0.0;
    double slack = 0.0;
    std::size_t violations = 0;
    double first_violation_t = 0.0;
    std::size_t steps_checked = 0;

    bool ok() const { return violations == 0; }
};

enum class StopReason
{
    Completed,
    ResolutionLimit,
    KahlerLost,
    FarFieldLost,
    GridExhausted,
    CurvatureCap,
    StepBudget,
    NonFinite,
};

std::string to_string(StopReason r);

struct RunReport
{
    FlowMode mode = FlowMode::Normalized;
    std::vector<Record> series;
    std::vector<Snapshot> snapshots;
    MonitorSummary monitors;
    StopReason stop = StopReason::Completed;
    std::string stop_detail;
    FlowState final_state;      // last accepted state
    std::size_t steps = 0;
    std::size_t rebases = 0;
    std::size_t trims = 0;

    /** The run ended at a singularity-like stop rather than t_end. */
    bool singular_stop() const;
};

RunReport run(const geometry::SurfaceModel& model, const geometry::ConformalMetric& initial, const RunConfig& config);

/** Unnormalized run on a two-puncture model with flat ends; throws InvalidModel otherwise. */
RunReport run_longtime_flat(const geometry::SurfaceModel& model, const geometry::ConformalMetric& initial,
                            RunConfig config);

/** Mode-scaled records for one state. */
Record make_record(const FlowState& state, FlowMode mode, const std::vector<double>& f_initial, std::size_t offset,
                   const RunConfig& config);

/** t,volume,sup_abs_K,cusp_c_fit,margin_uupper,margin_uprime,margin_voldec,min_ratio,max_ratio */
void write_series_csv(std::ostream& out, const std::vector<Record>& series);

}   // namespace krf::flow
