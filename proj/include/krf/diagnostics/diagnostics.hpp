#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "krf/cohomology/cohomology.hpp"
#include "krf/flow/run.hpp"

namespace krf::diagnostics {

struct Prediction
{
    cohomology::SingularityVerdict verdict;
    double t_pred = 0.0;   // unnormalized; +inf when no singularity is predicted
};

Prediction predict(const cohomology::ManifoldDescription& m, const cohomology::CohomologyClass& omega0);

/**
 * Prediction for a surface run: a one-puncture model is S^2 minus a point
 * with [omega0] = Vol [S^2]; a two-puncture model is C*, for which K + D = 0.
 * The measured volume is converted to an exact rational.
 */
Prediction predict_for_model(geometry::Topology topology, double volume);

enum class RunVerdict
{
    TypeILike,
    TypeIILike,
    NoSingularity,
    Unresolved,
};

std::string to_string(RunVerdict v);

struct ClassifyConfig
{
    double growth_factor = 5.0;   // G
    double band = 3.0;            // B
    std::size_t min_samples = 10;
};

struct IndicatorSample
{
    double s = 0.0;          // unnormalized time
    double tau = 0.0;        // T_pred - s
    double sup_abs_K = 0.0;  // unnormalized curvature
    double indicator = 0.0;  // tau * sup|K|
};

struct RunClassification
{
    RunVerdict verdict = RunVerdict::Unresolved;
    double growth = 0.0;          // indicator growth across the last decade of tau (from a log-log fit)
    double decade_lo = 0.0;       // tau range of the last decade
    double decade_hi = 0.0;
    std::size_t decade_samples = 0;
    std::vector<IndicatorSample> indicator;
};

/**
 * Type classification from (s, sup|K|) samples of an unnormalized flow.
 * NoSingularity when t_pred is infinite. Throws InsufficientResolution when
 * the samples do not cover the last decade [tau_min, 10 tau_min] with at
 * least min_samples points.
 */
RunClassification classify_indicator(const std::vector<double>& s, const std::vector<double>& sup_abs_K,
                                     double t_pred, const ClassifyConfig& config = {});

/** As classify_indicator, reading the run series (normalized runs are converted to s and unnormalized curvature). */
RunClassification classify_run(const flow::RunReport& report, double t_pred, const ClassifyConfig& config = {});

struct TimeEstimate
{
    double from_volume = 0.0;      // root of the least-squares line Vol(s)
    double volume_slope = 0.0;
    double volume_intercept = 0.0;
    double from_curvature = 0.0;   // root of a line through 1/sup|K| over the last samples (NaN if unavailable)
    std::size_t samples = 0;
};

/** Throws NonDecreasingVolume with fewer than 10 samples or a nonnegative fitted slope. */
TimeEstimate empirical_t_sing(const std::vector<double>& s, const std::vector<double>& volume,
                              const std::vector<double>& sup_abs_K = {});
TimeEstimate empirical_t_sing(const flow::RunReport& report);

/**
 * RMS distance, over 0 <= sigma <= 3, between the curvature profile of the
 * snapshot rescaled to max K = 1 (against geodesic distance from the maximum)
 * and the cigar soliton's sech^2(sigma / sqrt 2). Throws ProfileUndefined if
 * the maximum curvature is not positive or too few samples fall in range.
 */
double cigar_profile_distance(const flow::Snapshot& snapshot);

/** Closed-form cigar profile: K / K_max against geodesic distance from the tip. */
double cigar_profile(double sigma);

void write_indicator_csv(std::ostream& out, const std::vector<IndicatorSample>& indicator);

}   // namespace krf::diagnostics
