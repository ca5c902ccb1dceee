#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "krf/flow/stencil.hpp"
#include "krf/geometry/metric.hpp"

namespace krf::flow {

/** f_t = -r0 + e^{-t} (f0 + r0): the explicit reference family of the potential flow. */
struct ReferenceFamily
{
    std::vector<double> f0;
    std::vector<double> r0;

    static ReferenceFamily from(const std::vector<double>& f0, const geometry::SurfaceModel& model, StencilOrder order);

    double at(std::size_t i, double t) const { return f0[i] + std::expm1(-t) * (f0[i] + r0[i]); }
    std::vector<double> at(double t) const;
};

/**
 * Constants of the maximum-principle bounds, fixed by the data at the start
 * of the potential flow (tau = 0):
 *   v = u_tt + u_t <= C e^{-tau},  u_t <= C tau e^{-tau},  u <= C (1 - (1 + tau) e^{-tau}),
 * with C = sup v(0) = sup(-(1 + K0)).
 */
struct MonitorConstants
{
    double C = 0.0;
    double slack = 1e-4;   // 10 x solver tolerance
};

/** Slack left in each bound (bound - value; negative means violated) and the discrete identity residual. */
struct MonitorMargins
{
    double uupper = 0.0;
    double uprime = 0.0;
    double voldec = 0.0;
    double voleqn = 0.0;   // residual, >= 0

    bool violated(double slack) const
    {
        return uupper < -slack || uprime < -slack || voldec < -slack || voleqn > slack;
    }
};

struct StateOptions
{
    StencilOrder order = StencilOrder::Fourth;
    geometry::PotentialBoundary boundary = geometry::PotentialBoundary::Neumann;
    double tol = 1e-5;
};

/**
 * Normalized potential flow u_t = log(ftilde / f0) - u with
 * ftilde = f_tau + kappa2 u''. `t` is the total normalized time; the potential
 * and reference family are measured from `t_base` (tau = t - t_base), which
 * moves when the run rebases onto the current metric.
 */
struct FlowState
{
    double t = 0.0;
    double t_base = 0.0;
    geometry::SurfaceModel model;
    ReferenceFamily reference;
    std::vector<double> log_f0;
    std::vector<double> u;
    std::vector<double> u_t;
    std::vector<double> ftilde;
    MonitorConstants monitors;
    MonitorMargins margins;
    StateOptions options;

    double tau() const { return t - t_base; }
    geometry::ConformalMetric metric() const { return {ftilde}; }
};

/** Start the potential flow (u = 0) at normalized time t from the metric f. */
FlowState initial_state(const geometry::SurfaceModel& model, const geometry::ConformalMetric& f,
                        const StateOptions& options, double t = 0.0);

/** Restart the potential flow on the current metric; valid because the normalized flow is autonomous. */
FlowState rebase(const FlowState& state);

/** Restrict to samples [first, last] and rebase. */
FlowState trim(const FlowState& state, std::size_t first, std::size_t last);

enum class StepRejection
{
    KahlerLost,
    CFL,
};

class StepRejected : public std::runtime_error
{
    public:
        StepRejected(StepRejection reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
        StepRejection reason() const noexcept { return reason_; }

    private:
        StepRejection reason_;
};

/** Largest dt allowed by dt <= cfl h^2 min(ftilde). */
double max_stable_dt(const FlowState& state, double cfl);

/**
 * One classical RK4 step of size dt; updates ftilde, u_t and the monitor
 * margins. Throws StepRejected on a stage with ftilde <= 0 or when dt
 * exceeds the CFL bound.
 */
FlowState step_normalized(const FlowState& state, double dt, double cfl = 0.2);

/** In-place form of step_normalized; leaves the state untouched when it throws. */
void advance_normalized(FlowState& state, double dt, double cfl = 0.2);

/**
 * Advance the unnormalized flow from s to s + ds: the same step in normalized
 * time dt = log(1 + ds/(1 + s)); the unnormalized metric is (1 + s) ftilde.
 */
FlowState step_unnormalized(const FlowState& state, double ds, double cfl = 0.2);

/** s = e^t - 1 for a state. */
inline double unnormalized_time(const FlowState& state) { return std::expm1(state.t); }

/** Right-hand side log(ftilde/f0) - u for a trial potential at tau; also returns ftilde. */
void potential_rhs(const FlowState& state, const std::vector<double>& u, double tau, std::vector<double>& ftilde,
                   std::vector<double>& rhs);

}   // namespace krf::flow
