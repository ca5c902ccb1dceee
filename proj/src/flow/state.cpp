#include "krf/flow/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "krf/error.hpp"

namespace krf::flow {

using geometry::EndKind;
using geometry::Field;
using geometry::PotentialBoundary;

ReferenceFamily ReferenceFamily::from(const std::vector<double>& f0, const geometry::SurfaceModel& model,
                                      StencilOrder order)
{
    return {f0, ricci_coefficient(f0, model, order)};
}

std::vector<double> ReferenceFamily::at(double t) const
{
    std::vector<double> out(f0.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = at(i, t);
    return out;
}

namespace {

/** Potential-field second derivative into a per-thread buffer (valid until the next call). */
const std::vector<double>& second_derivative_of(const FlowState& s, const std::vector<double>& v)
{
    thread_local std::vector<double> extended, d2;
    geometry::extend_with_ghosts(v, s.model, Field::Potential, ghost_layers(s.options.order), s.options.boundary,
                                 extended);
    second_derivative(extended, s.model.grid().h, s.options.order, d2);
    return d2;
}

bool pinned(const geometry::EndCondition& end, const StateOptions& options)
{
    return options.boundary == PotentialBoundary::Dirichlet && end.kind != EndKind::SmoothCap;
}

/** Margins of the three bounds at the state's current tau; voleqn is left untouched. */
void update_bound_margins(FlowState& s)
{
    const double tau = s.tau();
    const double decay = std::exp(-tau);
    const std::vector<double>& d2 = second_derivative_of(s, s.u_t);
    double v_max = -INFINITY, ut_max = -INFINITY, u_max = -INFINITY;
    for (std::size_t i = 0; i < s.u.size(); ++i)
    {
        // u_tt + u_t = (d/dt ftilde) / ftilde, exactly for the semi-discrete system.
        const double v = (-decay * (s.reference.f0[i] + s.reference.r0[i]) + geometry::kappa2 * d2[i]) / s.ftilde[i];
        v_max = std::max(v_max, v);
        ut_max = std::max(ut_max, s.u_t[i]);
        u_max = std::max(u_max, s.u[i]);
    }
    if (tau == 0.0)
        s.monitors.C = v_max;
    const double C = s.monitors.C;
    s.margins.voldec = C * decay - v_max;
    s.margins.uprime = C * tau * decay - ut_max;
    s.margins.uupper = C * (1.0 - (1.0 + tau) * decay) - u_max;
}

}   // namespace

void potential_rhs(const FlowState& s, const std::vector<double>& u, double tau, std::vector<double>& ftilde,
                   std::vector<double>& rhs)
{
    const std::vector<double>& d2 = second_derivative_of(s, u);
    const double shift = std::expm1(-tau);   // e^{-tau} - 1, so f_tau = f0 exactly at tau = 0
    const std::size_t n = u.size();
    ftilde.resize(n);
    rhs.resize(n);
    const auto& f0 = s.reference.f0;
    const auto& r0 = s.reference.r0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double ft = f0[i] + shift * (f0[i] + r0[i]) + geometry::kappa2 * d2[i];
        if (!(ft > 0))
        {
            char buf[160];
            std::snprintf(buf, sizeof buf, "ftilde = %.3g at x = %.6g, t = %.9g", ft,
                          s.model.grid().x(static_cast<std::ptrdiff_t>(i)), s.t_base + tau);
            throw StepRejected(StepRejection::KahlerLost, buf);
        }
        ftilde[i] = ft;
        rhs[i] = std::log(ft) - s.log_f0[i] - u[i];
    }
    if (pinned(s.model.left(), s.options))
        rhs.front() = 0.0;
    if (pinned(s.model.right(), s.options))
        rhs.back() = 0.0;
}

FlowState initial_state(const geometry::SurfaceModel& model, const geometry::ConformalMetric& f,
                        const StateOptions& options, double t)
{
    if (f.f.size() != model.grid().points())
        throw Error(ErrorCode::InvalidInput, "metric samples do not match the grid");
    FlowState s;
    s.t = t;
    s.t_base = t;
    s.model = model;
    s.options = options;
    s.reference = ReferenceFamily::from(f.f, model, options.order);
    s.log_f0.resize(f.f.size());
    for (std::size_t i = 0; i < f.f.size(); ++i)
        s.log_f0[i] = std::log(f.f[i]);
    s.u.assign(f.f.size(), 0.0);
    s.monitors.slack = 10.0 * options.tol;
    try
    {
        potential_rhs(s, s.u, 0.0, s.ftilde, s.u_t);
    }
    catch (const StepRejected& e)
    {
        throw Error(ErrorCode::NonPositiveMetric, e.what());
    }
    update_bound_margins(s);
    return s;
}

FlowState rebase(const FlowState& state)
{
    return initial_state(state.model, state.metric(), state.options, state.t);
}

FlowState trim(const FlowState& state, std::size_t first, std::size_t last)
{
    const geometry::SurfaceModel model = state.model.trimmed(first, last);
    const auto begin = state.ftilde.begin() + static_cast<std::ptrdiff_t>(first);
    const geometry::ConformalMetric f{std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(last - first + 1))};
    return initial_state(model, f, state.options, state.t);
}

double max_stable_dt(const FlowState& state, double cfl)
{
    const double h = state.model.grid().h;
    return cfl * h * h * *std::min_element(state.ftilde.begin(), state.ftilde.end());
}

void advance_normalized(FlowState& state, double dt, double cfl)
{
    if (!(dt > 0))
        throw Error(ErrorCode::InvalidInput, "time step must be positive");
    if (dt > max_stable_dt(state, cfl) * (1.0 + 1e-12))
        throw StepRejected(StepRejection::CFL, "dt exceeds cfl * h^2 * min(ftilde)");

    const std::size_t n = state.u.size();
    const double tau = state.tau();
    thread_local std::vector<double> ftilde, k2, k3, k4, trial, u_new, ut_new;
    trial.resize(n);
    u_new.resize(n);
    const std::vector<double>& k1 = state.u_t;

    for (std::size_t i = 0; i < n; ++i)
        trial[i] = state.u[i] + 0.5 * dt * k1[i];
    potential_rhs(state, trial, tau + 0.5 * dt, ftilde, k2);
    for (std::size_t i = 0; i < n; ++i)
        trial[i] = state.u[i] + 0.5 * dt * k2[i];
    potential_rhs(state, trial, tau + 0.5 * dt, ftilde, k3);
    for (std::size_t i = 0; i < n; ++i)
        trial[i] = state.u[i] + dt * k3[i];
    potential_rhs(state, trial, tau + dt, ftilde, k4);

    for (std::size_t i = 0; i < n; ++i)
        u_new[i] = state.u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    potential_rhs(state, u_new, tau + dt, ftilde, ut_new);

    // Accept: (u_{n+1} - u_n)/dt against the trapezoid average of the right-hand side.
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        residual = std::max(residual, std::abs((u_new[i] - state.u[i]) / dt - 0.5 * (state.u_t[i] + ut_new[i])));
    std::swap(state.u, u_new);
    std::swap(state.u_t, ut_new);
    std::swap(state.ftilde, ftilde);
    state.t += dt;
    state.margins.voleqn = residual;
    update_bound_margins(state);
}

FlowState step_normalized(const FlowState& state, double dt, double cfl)
{
    FlowState next = state;
    advance_normalized(next, dt, cfl);
    return next;
}

FlowState step_unnormalized(const FlowState& state, double ds, double cfl)
{
    if (!(ds > 0))
        throw Error(ErrorCode::InvalidInput, "time step must be positive");
    const double s = unnormalized_time(state);
    return step_normalized(state, std::log1p(ds / (1.0 + s)), cfl);
}

}   // namespace krf::flow
