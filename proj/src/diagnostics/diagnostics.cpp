#include "krf/diagnostics/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "krf/cohomology/builtins.hpp"
#include "krf/error.hpp"

namespace krf::diagnostics {

Prediction predict(const cohomology::ManifoldDescription& m, const cohomology::CohomologyClass& omega0)
{
    Prediction p;
    p.verdict = cohomology::classify(m, omega0);
    p.t_pred = p.verdict.t_sing_unnormalized.to_double();
    return p;
}

Prediction predict_for_model(geometry::Topology topology, double volume)
{
    if (!std::isfinite(volume))
        throw Error(ErrorCode::InvalidInput, "volume must be finite");
    // Every double is a dyadic rational, so this conversion is exact.
    const cohomology::CohomologyClass omega0{cohomology::ExactReal(cohomology::Rational(volume))};
    switch (topology)
    {
        case geometry::Topology::OnePuncture: return predict(cohomology::s2_one_point(), omega0);
        case geometry::Topology::TwoPuncture: return predict(cohomology::cstar(), omega0);
        case geometry::Topology::Sphere:      return predict(cohomology::cpn_hyperplanes(1, 0), omega0);
    }
    throw Error(ErrorCode::InvalidModel, "unknown topology");
}

std::string to_string(RunVerdict v)
{
    switch (v)
    {
        case RunVerdict::TypeILike:     return "TypeI-like";
        case RunVerdict::TypeIILike:    return "TypeII-like";
        case RunVerdict::NoSingularity: return "NoSingularity";
        case RunVerdict::Unresolved:    return "Unresolved";
    }
    return "Unknown";
}

namespace {

struct Line
{
    double slope = 0.0;
    double intercept = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    return {slope, my - slope * mx};
}

}   // namespace

RunClassification classify_indicator(const std::vector<double>& s, const std::vector<double>& sup_abs_K,
                                     double t_pred, const ClassifyConfig& config)
{
    if (s.size() != sup_abs_K.size())
        throw Error(ErrorCode::InvalidInput, "time and curvature series differ in length");
    if (s.empty())
        throw Error(ErrorCode::InvalidInput, "empty series");
    RunClassification out;
    if (std::isinf(t_pred))
    {
        out.verdict = RunVerdict::NoSingularity;
        return out;
    }

    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] < t_pred && sup_abs_K[i] > 0)
            out.indicator.push_back({s[i], t_pred - s[i], sup_abs_K[i], (t_pred - s[i]) * sup_abs_K[i]});
    if (out.indicator.empty())
        throw Error(ErrorCode::InsufficientResolution, "no samples before the predicted singularity time");

    double tau_min = INFINITY, tau_max = 0.0;
    for (const auto& p : out.indicator)
    {
        tau_min = std::min(tau_min, p.tau);
        tau_max = std::max(tau_max, p.tau);
    }
    out.decade_lo = tau_min;
    out.decade_hi = 10.0 * tau_min;
    if (out.decade_hi > tau_max * (1.0 + 1e-12))
        throw Error(ErrorCode::InsufficientResolution, "the series does not span a decade of T - s");

    std::vector<double> log_tau, log_i;
    for (const auto& p : out.indicator)
        if (p.tau <= out.decade_hi)
        {
            log_tau.push_back(std::log(p.tau));
            log_i.push_back(std::log(p.indicator));
        }
    out.decade_samples = log_tau.size();
    if (out.decade_samples < config.min_samples)
        throw Error(ErrorCode::InsufficientResolution,
                    "only " + std::to_string(out.decade_samples) + " samples in the last decade of T - s");

    // Growth of the indicator as T - s shrinks by a factor of 10.
    out.growth = std::pow(10.0, -least_squares(log_tau, log_i).slope);

    double mean = 0.0;
    for (double v : log_i)
        mean += v;
    mean /= static_cast<double>(log_i.size());
    const double log_band = std::log(config.band);
    const bool banded = std::all_of(log_i.begin(), log_i.end(), [&](double v) { return std::abs(v - mean) <= log_band; });

    if (out.growth >= config.growth_factor)
        out.verdict = RunVerdict::TypeIILike;
    else if (banded)
        out.verdict = RunVerdict::TypeILike;
    else
        out.verdict = RunVerdict::Unresolved;
    return out;
}

namespace {

void unnormalized_series(const flow::RunReport& report, std::vector<double>& s, std::vector<double>& K,
                         std::vector<double>& vol)
{
    for (const auto& r : report.series)
    {
        if (report.mode == flow::FlowMode::Normalized)
        {
            const double scale = std::exp(r.t);
            s.push_back(std::expm1(r.t));
            K.push_back(r.sup_abs_K / scale);
            vol.push_back(r.volume * scale);
        }
        else
        {
            s.push_back(r.t);
            K.push_back(r.sup_abs_K);
            vol.push_back(r.volume);
        }
    }
}

}   // namespace

RunClassification classify_run(const flow::RunReport& report, double t_pred, const ClassifyConfig& config)
{
    std::vector<double> s, K, vol;
    unnormalized_series(report, s, K, vol);
    return classify_indicator(s, K, t_pred, config);
}

TimeEstimate empirical_t_sing(const std::vector<double>& s, const std::vector<double>& volume,
                              const std::vector<double>& sup_abs_K)
{
    if (s.size() != volume.size())
        throw Error(ErrorCode::InvalidInput, "time and volume series differ in length");
    if (s.size() < 10)
        throw Error(ErrorCode::NonDecreasingVolume, "fewer than 10 volume samples");
    const Line line = least_squares(s, volume);
    if (!(line.slope < 0))
        throw Error(ErrorCode::NonDecreasingVolume, "fitted volume slope is not negative");

    TimeEstimate est;
    est.samples = s.size();
    est.volume_slope = line.slope;
    est.volume_intercept = line.intercept;
    est.from_volume = -line.intercept / line.slope;
    est.from_curvature = std::numeric_limits<double>::quiet_NaN();

    // 1/sup|K| -> 0: line through the last ten samples.
    if (sup_abs_K.size() == s.size())
    {
        std::vector<double> xs, ys;
        for (std::size_t i = s.size() - 10; i < s.size(); ++i)
            if (sup_abs_K[i] > 0)
            {
                xs.push_back(s[i]);
                ys.push_back(1.0 / sup_abs_K[i]);
            }
        if (xs.size() >= 2)
        {
            const Line k = least_squares(xs, ys);
            if (k.slope < 0)
                est.from_curvature = -k.intercept / k.slope;
        }
    }
    return est;
}

TimeEstimate empirical_t_sing(const flow::RunReport& report)
{
    std::vector<double> s, K, vol;
    unnormalized_series(report, s, K, vol);
    return empirical_t_sing(s, vol, K);
}

double cigar_profile(double sigma)
{
    const double c = std::cosh(sigma / std::sqrt(2.0));
    return 1.0 / (c * c);
}

double cigar_profile_distance(const flow::Snapshot& snap)
{
    const std::vector<double>& f = snap.f;
    const std::size_t n = f.size();
    if (n < 5)
        throw Error(ErrorCode::ProfileUndefined, "snapshot too short");
    for (double v : f)
        if (!(v > 0) || !std::isfinite(v))
            throw Error(ErrorCode::ProfileUndefined, "snapshot metric is not positive");

    // Deep in a cap f is tiny and the second difference of log f is all
    // roundoff; start where f is a fair fraction of its maximum.
    const double f_max = *std::max_element(f.begin(), f.end());
    std::size_t first = 0;
    while (first + 4 < n && f[first] < 1e-4 * f_max)
        ++first;
    const std::size_t lo = std::max<std::size_t>(first, 1);

    // Interior curvature from centred differences of log f.
    std::vector<double> K(n, 0.0);
    std::size_t peak = lo;
    for (std::size_t i = lo; i + 1 < n; ++i)
    {
        const double d2 = (std::log(f[i - 1]) - 2.0 * std::log(f[i]) + std::log(f[i + 1])) / (snap.h * snap.h);
        K[i] = -0.5 * d2 / f[i];
        if (K[i] > K[peak])
            peak = i;
    }
    const double kmax = K[peak];
    if (!(kmax > 0) || !std::isfinite(kmax))
        throw Error(ErrorCode::ProfileUndefined, "maximum curvature is not positive");
    // Near-ties (a flat curvature plateau) resolve toward the start of the grid.
    for (std::size_t i = lo; i < peak; ++i)
        if (K[i] >= (1.0 - 1e-3) * kmax)
        {
            peak = i;
            break;
        }

    // When the maximum sits at the first usable sample the tip lies beyond it;
    // a cap tail f ~ A e^{2x} contributes sqrt(f) of geodesic length.
    const double scale = std::sqrt(kmax);
    double sigma = peak == lo ? scale * std::sqrt(f[lo]) : 0.0;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = peak; i + 1 < n; ++i)
    {
        if (i > peak)
            sigma += scale * 0.5 * snap.h * (std::sqrt(f[i - 1]) + std::sqrt(f[i]));
        if (sigma > 3.0)
            break;
        const double d = K[i] / kmax - cigar_profile(sigma);
        sum += d * d;
        ++count;
    }
    if (count < 8)
        throw Error(ErrorCode::ProfileUndefined, "fewer than 8 samples within three curvature radii of the peak");
    return std::sqrt(sum / static_cast<double>(count));
}

void write_indicator_csv(std::ostream& out, const std::vector<IndicatorSample>& indicator)
{
    out << "s,tau,sup_abs_K,indicator\n";
    char buf[256];
    for (const auto& p : indicator)
    {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.s, p.tau, p.sup_abs_K, p.indicator);
        out << buf;
    }
}

}   // namespace krf::diagnostics
