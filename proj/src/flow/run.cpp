#include "krf/flow/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "krf/error.hpp"

namespace krf::flow {

using geometry::EndKind;

std::string to_string(FlowMode m)
{
    switch (m)
    {
        case FlowMode::Normalized:   return "normalized";
        case FlowMode::Unnormalized: return "unnormalized";
        case FlowMode::FlatLongtime: return "flat_longtime";
    }
    return "unknown";
}

FlowMode flow_mode_from_string(const std::string& text)
{
    for (auto m : {FlowMode::Normalized, FlowMode::Unnormalized, FlowMode::FlatLongtime})
        if (to_string(m) == text)
            return m;
    throw Error(ErrorCode::ConfigError, "unknown mode '" + text + "'");
}

std::string to_string(StopReason r)
{
    switch (r)
    {
        case StopReason::Completed:       return "Completed";
        case StopReason::ResolutionLimit: return "ResolutionLimit";
        case StopReason::KahlerLost:      return "KahlerLost";
        case StopReason::FarFieldLost:    return "FarFieldLost";
        case StopReason::GridExhausted:   return "GridExhausted";
        case StopReason::CurvatureCap:    return "CurvatureCap";
        case StopReason::StepBudget:      return "StepBudget";
        case StopReason::NonFinite:       return "NonFinite";
    }
    return "Unknown";
}

bool RunReport::singular_stop() const
{
    return stop == StopReason::ResolutionLimit || stop == StopReason::CurvatureCap ||
           stop == StopReason::GridExhausted || stop == StopReason::KahlerLost;
}

namespace {

bool normalized_mode(FlowMode m)
{
    return m == FlowMode::Normalized;
}

double mode_time(FlowMode m, double t)
{
    return normalized_mode(m) ? t : std::expm1(t);
}

double normalized_time(FlowMode m, double mode_t)
{
    return normalized_mode(m) ? mode_t : std::log1p(mode_t);
}

/** Does this cusp end point away from x = 0 (a genuine puncture, not a cut)? */
bool outward_cusp(const geometry::EndCondition& end, double x, bool left)
{
    return end.kind == EndKind::CuspMatch && (left == (x < 0));
}

struct Probe
{
    double sup_abs_K = 0.0;     // normalized-flow curvature
    double x_peak = 0.0;
    double max_abs_ric = 0.0;
    double far_field_error = 0.0;
    double cusp_c = std::numeric_limits<double>::quiet_NaN();
};

Probe probe(const FlowState& s)
{
    const geometry::Grid& g = s.model.grid();
    const std::vector<double> ric = ricci_coefficient(s.ftilde, s.model, s.options.order);
    Probe p;
    for (std::size_t i = 0; i < ric.size(); ++i)
    {
        const double K = std::abs(ric[i] / s.ftilde[i]);
        if (K > p.sup_abs_K || std::isnan(K))
        {
            p.sup_abs_K = K;
            p.x_peak = g.x(static_cast<std::ptrdiff_t>(i));
        }
        p.max_abs_ric = std::max(p.max_abs_ric, std::abs(ric[i]));
    }

    const std::size_t n = ric.size();
    const std::size_t k = std::min<std::size_t>(4, n);
    auto far = [&](bool left) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j)
        {
            const std::size_t i = left ? j : n - 1 - j;
            const double x = g.x(static_cast<std::ptrdiff_t>(i));
            sum += ric[i] * x * x;
        }
        return std::abs(sum / static_cast<double>(k) + 1.0);
    };
    if (outward_cusp(s.model.left(), g.x0, true))
        p.far_field_error = std::max(p.far_field_error, far(true));
    if (outward_cusp(s.model.right(), g.x_end(), false))
    {
        p.far_field_error = std::max(p.far_field_error, far(false));
        // Cusp constant from ftilde x^2 on the far field (x >= 20 when available).
        const double from = g.x_end() >= 25.0 ? 20.0 : g.x_end() - 0.1 * (g.x_end() - g.x0);
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double x = g.x(static_cast<std::ptrdiff_t>(i));
            if (x >= from)
            {
                sum += s.ftilde[i] * x * x;
                ++count;
            }
        }
        if (count > 0)
            p.cusp_c = sum / static_cast<double>(count);
    }
    return p;
}

bool has_flat_end(const geometry::SurfaceModel& m)
{
    return m.left().kind == EndKind::FlatEnd || m.right().kind == EndKind::FlatEnd;
}

Record record_from(const FlowState& s, const Probe& p, FlowMode mode, const std::vector<double>& f_initial,
                   std::size_t offset, const RunConfig& config)
{
    const double scale = normalized_mode(mode) ? 1.0 : std::exp(s.t);   // 1 + s
    const double h = s.model.grid().h;
    Record r;
    r.t = mode_time(mode, s.t);
    r.t_normalized = s.t;
    const geometry::ConformalMetric metric = s.metric();
    r.volume = scale * (has_flat_end(s.model) ? geometry::window_volume(metric, s.model)
                                              : geometry::volume(metric, s.model));
    r.sup_abs_K = p.sup_abs_K / scale;
    r.cusp_c_fit = p.cusp_c * scale;
    r.margin_uupper = s.margins.uupper;
    r.margin_uprime = s.margins.uprime;
    r.margin_voldec = s.margins.voldec;
    r.voleqn_residual = s.margins.voleqn;
    r.min_ratio = std::numeric_limits<double>::infinity();
    r.max_ratio = 0.0;
    for (std::size_t i = 0; i < s.ftilde.size(); ++i)
    {
        const double ratio = scale * s.ftilde[i] / f_initial[offset + i];
        r.min_ratio = std::min(r.min_ratio, ratio);
        r.max_ratio = std::max(r.max_ratio, ratio);
    }
    r.resolution = config.resolution_rule == ResolutionRule::Geodesic ? p.max_abs_ric * h * h : r.sup_abs_K * h * h;
    r.x_peak = p.x_peak;
    return r;
}

Snapshot snapshot_of(const FlowState& s, FlowMode mode)
{
    const double scale = normalized_mode(mode) ? 1.0 : std::exp(s.t);
    Snapshot snap{mode_time(mode, s.t), s.model.grid().x0, s.model.grid().h, s.ftilde};
    for (double& v : snap.f)
        v *= scale;
    return snap;
}

void note_margins(MonitorSummary& m, const FlowState& s, FlowMode mode)
{
    m.worst_uupper = std::min(m.worst_uupper, s.margins.uupper);
    m.worst_uprime = std::min(m.worst_uprime, s.margins.uprime);
    m.worst_voldec = std::min(m.worst_voldec, s.margins.voldec);
    m.worst_voleqn = std::max(m.worst_voleqn, s.margins.voleqn);
    ++m.steps_checked;
    if (s.margins.violated(m.slack))
    {
        if (m.violations == 0)
            m.first_violation_t = mode_time(mode, s.t);
        ++m.violations;
    }
}

bool finite_margins(const MonitorMargins& m)
{
    return std::isfinite(m.uupper) && std::isfinite(m.uprime) && std::isfinite(m.voldec) && std::isfinite(m.voleqn);
}

std::string describe_stop(const char* what, double value, double t)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s = %.6g at t = %.9g", what, value, t);
    return buf;
}

}   // namespace

Record make_record(const FlowState& state, FlowMode mode, const std::vector<double>& f_initial, std::size_t offset,
                   const RunConfig& config)
{
    return record_from(state, probe(state), mode, f_initial, offset, config);
}

RunReport run(const geometry::SurfaceModel& model, const geometry::ConformalMetric& initial, const RunConfig& config)
{
    if (!(config.t_end > 0))
        throw Error(ErrorCode::ConfigError, "t_end must be positive");
    if (!(config.cfl > 0) || !(config.tol > 0))
        throw Error(ErrorCode::ConfigError, "cfl and tol must be positive");

    const FlowMode mode = config.mode;
    RunReport rep;
    rep.mode = mode;
    FlowState s = initial_state(model, initial, {config.order, config.boundary, config.tol});
    const std::vector<double>& f_initial = initial.f;
    std::size_t offset = 0;

    std::vector<double> targets;
    for (double t : config.sample_times)
        if (t > 0 && t < config.t_end)
            targets.push_back(t);
    targets.push_back(config.t_end);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    rep.monitors.slack = s.monitors.slack;
    note_margins(rep.monitors, s, mode);
    Record last = make_record(s, mode, f_initial, offset, config);
    rep.series.push_back(last);
    if (config.keep_snapshots)
        rep.snapshots.push_back(snapshot_of(s, mode));

    const double log_bound = std::log(config.rebase_ratio);
    std::size_t next_target = 0;
    while (true)
    {
        if (rep.steps >= config.max_steps)
        {
            rep.stop = StopReason::StepBudget;
            rep.stop_detail = "step budget exhausted";
            break;
        }
        const double target = normalized_time(mode, targets[next_target]);
        double dt = std::min(max_stable_dt(s, config.cfl), target - s.t);
        bool hit = dt >= target - s.t;

        bool accepted = false;
        for (int halvings = 0; !accepted;)
        {
            try
            {
                advance_normalized(s, dt, config.cfl);
                accepted = true;
            }
            catch (const StepRejected& e)
            {
                if (e.reason() != StepRejection::KahlerLost || halvings == config.max_halvings)
                {
                    rep.stop = StopReason::KahlerLost;
                    rep.stop_detail = e.what();
                    break;
                }
                dt *= 0.5;
                hit = false;
                ++halvings;
            }
        }
        if (!accepted)
            break;
        if (hit)
            s.t = target;
        ++rep.steps;

        if (!finite_margins(s.margins))
        {
            rep.stop = StopReason::NonFinite;
            rep.stop_detail = describe_stop("non-finite monitor", 0.0, mode_time(mode, s.t));
            break;
        }
        note_margins(rep.monitors, s, mode);

        // Keep the potential representation well conditioned: ftilde/f0 = e^{u_t + u}.
        double lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < s.u.size(); ++i)
        {
            lo = std::min(lo, s.u[i] + s.u_t[i]);
            hi = std::max(hi, s.u[i] + s.u_t[i]);
        }
        if (lo < -log_bound || hi > log_bound)
        {
            s = rebase(s);
            ++rep.rebases;
        }

        if (!hit && rep.steps % config.check_every != 0)
            continue;

        if (config.trim_fraction > 0)
        {
            const double fmax = *std::max_element(s.ftilde.begin(), s.ftilde.end());
            std::size_t first = 0, last_i = s.ftilde.size() - 1;
            if (s.model.left().kind == EndKind::SmoothCap)
                while (first < last_i && s.ftilde[first] < config.trim_fraction * fmax)
                    ++first;
            if (s.model.right().kind == EndKind::SmoothCap)
                while (last_i > first && s.ftilde[last_i] < config.trim_fraction * fmax)
                    --last_i;
            if (first > 0 || last_i + 1 < s.ftilde.size())
            {
                if (last_i - first < config.min_intervals)
                {
                    rep.stop = StopReason::GridExhausted;
                    rep.stop_detail = describe_stop("surviving intervals", static_cast<double>(last_i - first),
                                                    mode_time(mode, s.t));
                    break;
                }
                s = trim(s, first, last_i);
                offset += first;
                ++rep.trims;
            }
        }

        const Probe p = probe(s);
        const Record r = record_from(s, p, mode, f_initial, offset, config);
        bool stop = false;
        if (!std::isfinite(r.sup_abs_K))
        {
            rep.stop = StopReason::NonFinite;
            rep.stop_detail = describe_stop("sup|K|", r.sup_abs_K, r.t);
            stop = true;
        }
        else if (r.resolution > config.resolution_limit)
        {
            rep.stop = StopReason::ResolutionLimit;
            rep.stop_detail = describe_stop("resolution", r.resolution, r.t);
            stop = true;
        }
        else if (r.sup_abs_K > config.curvature_cap)
        {
            rep.stop = StopReason::CurvatureCap;
            rep.stop_detail = describe_stop("sup|K|", r.sup_abs_K, r.t);
            stop = true;
        }
        else if (p.far_field_error > config.far_field_tolerance)
        {
            rep.stop = StopReason::FarFieldLost;
            rep.stop_detail = describe_stop("|ric x^2 + 1|", p.far_field_error, r.t);
            stop = true;
        }

        const bool due = hit || stop || r.t - last.t >= config.record_interval ||
                         std::abs(std::log(r.sup_abs_K / last.sup_abs_K)) >= config.record_dlogK;
        if (due && r.t > last.t)
        {
            rep.series.push_back(r);
            last = r;
            if (config.keep_snapshots)
                rep.snapshots.push_back(snapshot_of(s, mode));
        }
        if (stop)
            break;
        if (hit && ++next_target == targets.size())
        {
            rep.stop = StopReason::Completed;
            break;
        }
    }

    if (mode_time(mode, s.t) > last.t)
    {
        rep.series.push_back(make_record(s, mode, f_initial, offset, config));
        if (config.keep_snapshots)
            rep.snapshots.push_back(snapshot_of(s, mode));
    }
    rep.final_state = std::move(s);
    return rep;
}

RunReport run_longtime_flat(const geometry::SurfaceModel& model, const geometry::ConformalMetric& initial,
                            RunConfig config)
{
    if (model.topology() != geometry::Topology::TwoPuncture || model.left().kind != EndKind::FlatEnd ||
        model.right().kind != EndKind::FlatEnd)
        throw Error(ErrorCode::InvalidModel, "the flat long-time mode needs a two-puncture model with flat ends");
    config.mode = FlowMode::FlatLongtime;
    return run(model, initial, config);
}

void write_series_csv(std::ostream& out, const std::vector<Record>& series)
{
    out << "t,volume,sup_abs_K,cusp_c_fit,margin_uupper,margin_uprime,margin_voldec,min_ratio,max_ratio\n";
    char buf[512];
    for (const Record& r : series)
    {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.volume,
                      r.sup_abs_K, r.cusp_c_fit, r.margin_uupper, r.margin_uprime, r.margin_voldec, r.min_ratio,
                      r.max_ratio);
        out << buf;
    }
}

}   // namespace krf::flow
