// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "krf/cli/commands.hpp"
#include "krf/cli/config.hpp"
#include "krf/cohomology/builtins.hpp"
#include "krf/diagnostics/diagnostics.hpp"
#include "krf/error.hpp"
#include "krf/flow/run.hpp"
#include "krf/flow/state.hpp"
#include "krf/geometry/metric.hpp"

#include "../support/oracles.hpp"

using namespace krf;
using geometry::EndCondition;
using geometry::SurfaceModel;
using geometry::Topology;

namespace {

struct Outcome
{
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok)
        {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
        }
    }
    void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

/** Monitor results carried from criteria 2-5 into criterion 6. */
struct MonitorLog
{
    std::string run;
    std::size_t steps = 0;
    std::size_t checked = 0;
    std::size_t violations = 0;
    double worst_uupper = 0, worst_uprime = 0, worst_voldec = 0, worst_voleqn = 0, slack = 0;
};

std::vector<MonitorLog> monitor_logs;

void log_monitors(const std::string& name, const flow::RunReport& r)
{
    monitor_logs.push_back({name, r.steps, r.monitors.steps_checked, r.monitors.violations, r.monitors.worst_uupper,
                            r.monitors.worst_uprime, r.monitors.worst_voldec, r.monitors.worst_voleqn, r.monitors.slack});
}

// 1. Golden cohomology suite.
Outcome criterion1()
{
    Outcome o;
    using namespace cohomology;
    const ExactReal two_pi = ExactReal::monomial(Rational(2), 1);
    const auto start = std::chrono::steady_clock::now();

    std::ostringstream log;
    for (const auto& id : cli::reproduce_ids())
        o.require(cli::cmd_reproduce(id, log) == cli::ExitOk, "golden " + id);

    for (int v : {1, 7, 10, 100})
    {
        const auto verdict = classify(s2_one_point(), CohomologyClass{ExactReal(v)});
        o.require(verdict.t_sing_unnormalized == TimeBound::finite(ExactReal(v) / two_pi) &&
                      verdict.classification == Classification::TypeIIGuaranteed,
                  "S^2 - pt with area " + std::to_string(v));
    }
    for (int a1 = 1; a1 <= 12; ++a1)
        for (int a2 = 1; a2 <= 6; ++a2)
        {
            const CohomologyClass w{ExactReal::monomial(Rational(a1), 1), ExactReal::monomial(Rational(a2), 1)};
            const auto v = classify(s2_times_s2(), w);
            const Rational t1(a1, 4), t2(a2, 2);
            const bool equal = t1 == t2;
            o.require(v.t_sing_unnormalized == TimeBound::finite(ExactReal(std::min(t1, t2))) &&
                          (v.classification == Classification::TypeIIGuaranteed) == equal,
                      "S^2 x S^2 (" + std::to_string(a1) + "pi, " + std::to_string(a2) + "pi)");
        }
    for (int n = 1; n <= 5; ++n)
        for (int k = 0; k <= n + 3; ++k)
        {
            const ExactReal area = ExactReal::monomial(Rational(3), 1) + ExactReal(Rational(1, 2));
            const auto v = classify(cpn_hyperplanes(n, k), CohomologyClass{area});
            const bool finite = k < n + 1;
            bool ok = v.t_sing_unnormalized.infinite == !finite;
            if (finite)
                ok = ok && v.t_sing_unnormalized.value == area / (two_pi * ExactReal(n + 1 - k));
            ok = ok && ((v.classification == Classification::TypeIIGuaranteed) == (k >= 1 && k < n + 1));
            o.require(ok, "CP^" + std::to_string(n) + " with " + std::to_string(k) + " hyperplanes");
        }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    o.note(fmt("%.1f ms", ms));
    return o;
}

// 2. Poincare cusp is static under the normalized flow; checked on every accepted step.
Outcome criterion2()
{
    Outcome o;
    const auto model = SurfaceModel::create(Topology::TwoPuncture, 1.0, 40.0, 512, EndCondition::cusp(1), EndCondition::cusp(1));
    flow::StateOptions opts;
    opts.boundary = geometry::PotentialBoundary::Dirichlet;
    flow::FlowState s = flow::initial_state(model, geometry::poincare_cusp(1.0, model), opts);
    const auto xs = model.grid().nodes();

    MonitorLog mon{"C2 Poincare", 0, 0, 0, INFINITY, INFINITY, INFINITY, 0.0, s.monitors.slack};
    double sup_u = 0.0, sup_c = 0.0;
    const double cfl = 0.2;
    while (s.t < 1.0)
    {
        double dt = std::min(flow::max_stable_dt(s, cfl), 1.0 - s.t);
        int halvings = 0;
        while (true)
        {
            try
            {
                flow::advance_normalized(s, dt, cfl);
                break;
            }
            catch (const flow::StepRejected&)
            {
                if (++halvings > 12)
                {
                    o.require(false, "step rejected 12 times");
                    return o;
                }
                dt *= 0.5;
            }
        }
        ++mon.steps;
        ++mon.checked;
        if (s.margins.violated(s.monitors.slack))
            ++mon.violations;
        mon.worst_uupper = std::min(mon.worst_uupper, s.margins.uupper);
        mon.worst_uprime = std::min(mon.worst_uprime, s.margins.uprime);
        mon.worst_voldec = std::min(mon.worst_voldec, s.margins.voldec);
        mon.worst_voleqn = std::max(mon.worst_voleqn, s.margins.voleqn);
        for (std::size_t i = 0; i < xs.size(); ++i)
        {
            sup_u = std::max(sup_u, std::abs(s.u[i]));
            sup_c = std::max(sup_c, std::abs(s.ftilde[i] * xs[i] * xs[i] - 1.0));
        }
        if (!std::isfinite(sup_u) || !std::isfinite(sup_c))
        {
            o.require(false, "non-finite state");
            return o;
        }
    }
    monitor_logs.push_back(mon);
    o.require(sup_u < 1e-4, "sup|u| < 1e-4");
    o.require(sup_c < 1e-3, "sup|f x^2 - 1| < 1e-3");
    o.note("sup|u| = " + fmt("%.3g", sup_u) + ", sup|f x^2 - 1| = " + fmt("%.3g", sup_c) + ", " +
           std::to_string(mon.steps) + " steps");
    return o;
}

// 3. Cusp constant relaxes as 1 + (c - 1) e^{-t}.
Outcome criterion3()
{
    Outcome o;
    const auto model = SurfaceModel::create(Topology::OnePuncture, -2.0, 60.0, 512, EndCondition::cap(), EndCondition::cusp(2));
    const auto init = geometry::carlson_griffiths_initial(model, {30.0, 1.0, 1.0}).metric;
    flow::RunConfig cfg;
    cfg.mode = flow::FlowMode::Normalized;
    cfg.t_end = 1.0;
    cfg.sample_times = {0.25, 0.5, 1.0};
    const auto rep = flow::run(model, init, cfg);
    log_monitors("C3 cusp law", rep);
    o.require(rep.stop == flow::StopReason::Completed, "run completed (" + flow::to_string(rep.stop) + ")");
    for (double t : cfg.sample_times)
    {
        const flow::Record* rec = nullptr;
        for (const auto& r : rep.series)
            if (r.t == t)
                rec = &r;
        if (!rec)
        {
            o.require(false, "record at t = " + fmt("%g", t));
            continue;
        }
        const double want = 1.0 + std::exp(-t);
        const double rel = std::abs(rec->cusp_c_fit - want) / want;
        o.require(rel < 0.01, "c(" + fmt("%g", t) + ") within 1%");
        o.note("c(" + fmt("%g", t) + ") = " + fmt("%.6f", rec->cusp_c_fit) + " (rel err " + fmt("%.2g", rel) + ")");
    }
    return o;
}

// 4. One-puncture singularity: volume law, empirical time, type II.
Outcome criterion4()
{
    Outcome o;
    const auto model = SurfaceModel::create(Topology::OnePuncture, -2.0, 60.0, 1024, EndCondition::cap(), EndCondition::cusp(1));
    const auto init = geometry::carlson_griffiths_initial(model, {10.0, 1.0, 1.0}).metric;
    const double v0 = geometry::volume(init, model);
    const auto prediction = diagnostics::predict_for_model(Topology::OnePuncture, v0);
    const double T = v0 / (2.0 * M_PI);
    o.require(std::abs(prediction.t_pred - T) < 1e-12 * T, "prediction equals Vol(0)/(2 pi)");

    flow::RunConfig cfg;
    cfg.mode = flow::FlowMode::Unnormalized;
    cfg.t_end = T;
    const auto start = std::chrono::steady_clock::now();
    const auto rep = flow::run(model, init, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log_monitors("C4 one puncture", rep);
    o.require(rep.stop != flow::StopReason::NonFinite && rep.stop != flow::StopReason::StepBudget,
              "run ended cleanly (" + flow::to_string(rep.stop) + ")");

    try
    {
        const auto est = diagnostics::empirical_t_sing(rep);
        const double slope_err = std::abs(est.volume_slope + 2.0 * M_PI) / (2.0 * M_PI);
        const double t_err = std::abs(est.from_volume - T) / T;
        o.require(slope_err < 0.02, "volume slope within 2% of -2 pi");
        o.require(t_err < 0.05, "empirical T within 5%");
        o.note("Vol(0) = " + fmt("%.6f", v0) + ", slope = " + fmt("%.5f", est.volume_slope) + ", T_emp = " +
               fmt("%.5f", est.from_volume) + " vs " + fmt("%.5f", T));
    }
    catch (const Error& e)
    {
        o.require(false, std::string("empirical T: ") + e.what());
    }
    try
    {
        const auto cls = diagnostics::classify_run(rep, T);
        o.require(cls.verdict == diagnostics::RunVerdict::TypeIILike, "verdict TypeII-like");
        o.require(cls.growth >= 5.0, "indicator growth >= 5");
        o.note("verdict " + diagnostics::to_string(cls.verdict) + ", growth " + fmt("%.2f", cls.growth));
    }
    catch (const Error& e)
    {
        o.require(false, std::string("classification: ") + e.what());
    }
    o.note("stop " + flow::to_string(rep.stop) + " at s = " + fmt("%.4f", rep.series.back().t) + ", " + fmt("%.0f s", secs));
    return o;
}

// 5. Ricci-flat sector: perturbed flat cylinder.
Outcome criterion5()
{
    Outcome o;
    const auto config = cli::parse_config(cli::json::parse(R"({
      "seed": 17,
      "run": {"topology": "TwoPuncture", "grid": {"x_min": -30, "x_max": 30, "N": 256},
              "ends": {"left": "flat", "right": "flat"},
              "initial": {"kind": "flat_perturbed", "amplitude": 0.3, "width": 1.0, "noise": 0.01, "noise_modes": 4},
              "mode": "flat_longtime", "t_end": 15.915494309189533}})"));
    const auto& spec = *config.run;
    const auto init = cli::build_initial(spec, config.seed);
    const auto rep = flow::run_longtime_flat(spec.model, init, spec.flow);
    log_monitors("C5 flat cylinder", rep);
    o.require(rep.stop == flow::StopReason::Completed, "run completed (" + flow::to_string(rep.stop) + ")");
    const auto& first = rep.series.front();
    const auto& last = rep.series.back();
    const double drift = std::abs(last.volume - first.volume) / first.volume;
    const double reduction = first.sup_abs_K / last.sup_abs_K;
    o.require(drift < 0.01, "volume drift < 1%");
    o.require(reduction >= 10.0, "sup|K| reduced 10x");
    const auto prediction =
        diagnostics::predict(cohomology::cstar(), cohomology::CohomologyClass{cohomology::ExactReal(cohomology::Rational(first.volume))});
    const auto cls = diagnostics::classify_run(rep, prediction.t_pred);
    o.require(cls.verdict == diagnostics::RunVerdict::NoSingularity, "no singularity declared");
    o.require(!rep.singular_stop(), "no singular stop");
    o.note("volume drift " + fmt("%.2g", drift) + ", sup|K| " + fmt("%.3g", first.sup_abs_K) + " -> " +
           fmt("%.3g", last.sup_abs_K) + " (" + fmt("%.1fx", reduction) + ")");
    return o;
}

// 6. Monitors on every accepted step of criteria 2-5.
Outcome criterion6()
{
    Outcome o;
    if (monitor_logs.size() != 4)
        o.require(false, "monitor records from all four runs");
    for (const auto& m : monitor_logs)
    {
        o.require(m.checked >= m.steps && m.steps > 0, m.run + ": every step checked");
        o.require(m.violations == 0, m.run + ": no violations");
        o.note(m.run + " " + std::to_string(m.steps) + " steps, worst uupper " + fmt("%.2g", m.worst_uupper) + " uprime " +
               fmt("%.2g", m.worst_uprime) + " voldec " + fmt("%.2g", m.worst_voldec) + " voleqn " +
               fmt("%.2g", m.worst_voleqn) + " (slack " + fmt("%.0e", m.slack) + ")");
    }
    return o;
}

// 7. Property suite.
Outcome criterion7()
{
    Outcome o;
    using oracle::ClosedForm;
    for (auto [form, name] : {std::pair{ClosedForm::Poincare, "1/x^2"}, std::pair{ClosedForm::Poincare2, "2/x^2"},
                              std::pair{ClosedForm::RoundSphere, "sech^2"}})
    {
        const auto r = oracle::curvature_convergence_ratios(form);
        const bool ok = r[0] >= 3.5 && r[0] <= 4.5 && r[1] >= 3.5 && r[1] <= 4.5;
        o.require(ok, std::string("O(h^2) on ") + name);
        o.note(std::string(name) + " ratios " + fmt("%.3f", r[0]) + "/" + fmt("%.3f", r[1]));
    }

    std::mt19937_64 rng(20240611);
    std::size_t homogeneous = 0, agree = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial)
    {
        const auto inst = oracle::random_instance(rng);
        const cohomology::Rational lambda(trial + 2, 3);
        const auto t1 = cohomology::singularity_time(inst.manifold, inst.omega0);
        const auto t2 = cohomology::singularity_time(inst.manifold, cohomology::ExactReal(lambda) * inst.omega0);
        if (t1.infinite == t2.infinite && (t1.infinite || t2.value == cohomology::ExactReal(lambda) * t1.value))
            ++homogeneous;
        const double exact = t1.to_double();
        const double bisect = oracle::bisection_exit_time(inst.manifold, inst.omega0);
        if (std::isinf(exact) ? std::isinf(bisect) : std::abs(exact - bisect) <= 1e-12 * std::max(1.0, exact))
            ++agree;
        if (std::isfinite(exact))
            worst = std::max(worst, std::abs(exact - bisect) / std::max(1.0, exact));
    }
    o.require(homogeneous == 100, "scaling homogeneity on 100 instances");
    o.require(agree == 100, "bisection oracle on 100 instances");
    o.note("homogeneous " + std::to_string(homogeneous) + "/100, oracle " + std::to_string(agree) + "/100 (worst " +
           fmt("%.1e", worst) + ")");

    // Normalized run versus a hand-stepped unnormalized flow at s = 0.5.
    const auto model = SurfaceModel::create(Topology::OnePuncture, -2.0, 60.0, 256, EndCondition::cap(), EndCondition::cusp(1));
    const auto init = geometry::carlson_griffiths_initial(model, {10.0, 1.0, 1.0}).metric;
    const double s_star = 0.5;
    flow::RunConfig cfg;
    cfg.mode = flow::FlowMode::Normalized;
    cfg.t_end = std::log1p(s_star);
    cfg.trim_fraction = 0.0;
    cfg.rebase_ratio = 1e300;
    const auto rep = flow::run(model, init, cfg);
    o.require(rep.stop == flow::StopReason::Completed && rep.trims == 0, "normalized run completed untrimmed");

    flow::FlowState u = flow::initial_state(model, init, {cfg.order, cfg.boundary, cfg.tol});
    double s = 0.0;
    const double cfl = 0.1;
    while (s < s_star)
    {
        // Step in s directly: dt = log(1 + ds/(1+s)) stays under the CFL bound.
        double ds = std::min(flow::max_stable_dt(u, cfl) * (1.0 + s), s_star - s);
        u = flow::step_unnormalized(u, ds, cfl);
        s = (s_star - s - ds <= 0.0) ? s_star : s + ds;
    }
    double diff = 0.0;
    const auto& fn = rep.final_state.ftilde;
    for (std::size_t i = 0; i < fn.size(); ++i)
        diff = std::max(diff, std::abs((1.0 + s_star) * fn[i] - (1.0 + unnormalized_time(u)) * u.ftilde[i]) /
                                  ((1.0 + s_star) * fn[i]));
    o.require(std::abs(unnormalized_time(u) - s_star) < 1e-12, "matched times");
    o.require(diff <= 3.0 * cfg.tol, "normalized/unnormalized within 3 tol");
    o.note("norm/unnorm max rel diff " + fmt("%.2g", diff));
    return o;
}

}   // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 golden cohomology suite", criterion1},
        {"2 Poincare static test", criterion2},
        {"3 cusp coefficient law", criterion3},
        {"4 one-puncture end-to-end", criterion4},
        {"5 Ricci-flat sector", criterion5},
        {"6 monitor suite", criterion6},
        {"7 property suite", criterion7},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria)
    {
        Outcome o;
        try
        {
            o = check();
        }
        catch (const std::exception& e)
        {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
