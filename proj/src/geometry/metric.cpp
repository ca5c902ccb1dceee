#include "krf/geometry/metric.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "krf/error.hpp"

namespace krf::geometry {

void require_positive(const std::vector<double>& f)
{
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!(f[i] > 0) || !std::isfinite(f[i]))
            throw Error(ErrorCode::NonPositiveMetric, "metric coefficient is not positive at sample " + std::to_string(i));
}

namespace {

void require_size(const ConformalMetric& g, const SurfaceModel& model)
{
    if (g.f.size() != model.grid().points())
        throw Error(ErrorCode::InvalidInput, "metric samples do not match the grid");
}

}   // namespace

ConformalMetric poincare_cusp(double c, const SurfaceModel& model)
{
    if (!(c > 0))
        throw Error(ErrorCode::InvalidInput, "cusp constant must be positive");
    const Grid& grid = model.grid();
    if (grid.x0 <= 0)
        throw Error(ErrorCode::DomainContainsZero, "Poincare cusp needs x > 0 on the whole grid");
    ConformalMetric g;
    for (double x : grid.nodes())
        g.f.push_back(c / (x * x));
    return g;
}

ConformalMetric round_sphere(double a, double x_s, const SurfaceModel& model)
{
    ConformalMetric g;
    for (double x : model.grid().nodes())
    {
        const double s = 1.0 / std::cosh(x - x_s);
        g.f.push_back(a * s * s);
    }
    return g;
}

CurvatureProfile gauss_curvature(const ConformalMetric& g, const SurfaceModel& model)
{
    require_size(g, model);
    require_positive(g.f);
    std::vector<double> logf(g.f.size());
    for (std::size_t i = 0; i < logf.size(); ++i)
        logf[i] = std::log(g.f[i]);
    const std::vector<double> e = extend_with_ghosts(logf, model, Field::LogMetric, 1);
    const double inv_h2 = 1.0 / (model.grid().h * model.grid().h);

    CurvatureProfile out;
    out.K.resize(g.f.size());
    out.ric.resize(g.f.size());
    for (std::size_t i = 0; i < g.f.size(); ++i)
    {
        const double d2 = (e[i] - 2.0 * e[i + 1] + e[i + 2]) * inv_h2;
        out.ric[i] = -kappa2 * d2;
        out.K[i] = out.ric[i] / g.f[i];
        out.sup_abs_K = std::max(out.sup_abs_K, std::abs(out.K[i]));
    }
    return out;
}

double calibrate_kappa2(const SurfaceModel& model)
{
    const Grid& grid = model.grid();
    if (grid.x0 <= 0)
        throw Error(ErrorCode::DomainContainsZero, "calibration needs x > 0");
    // -k D(log f) = -f  with f = 1/x^2, log f = -2 log x.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i + 1 < grid.points(); ++i)
    {
        const auto ii = static_cast<std::ptrdiff_t>(i);
        const double lm = -2.0 * std::log(grid.x(ii - 1));
        const double l0 = -2.0 * std::log(grid.x(ii));
        const double lp = -2.0 * std::log(grid.x(ii + 1));
        const double d2 = (lm - 2.0 * l0 + lp) / (grid.h * grid.h);
        const double f = 1.0 / (grid.x(ii) * grid.x(ii));
        // Relative weighting so every sample counts equally.
        num += (d2 / f);
        den += (d2 / f) * (d2 / f);
    }
    return num / den;
}

double window_volume(const ConformalMetric& g, const SurfaceModel& model)
{
    require_size(g, model);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < g.f.size(); ++i)
        sum += 0.5 * (g.f[i] + g.f[i + 1]);
    return 2.0 * std::numbers::pi * sum * model.grid().h;
}

double volume(const ConformalMetric& g, const SurfaceModel& model)
{
    double v = window_volume(g, model);
    const Grid& grid = model.grid();
    const std::pair<const EndCondition*, std::pair<double, double>> ends[] = {
        {&model.left(), {grid.x0, g.f.front()}}, {&model.right(), {grid.x_end(), g.f.back()}}};
    for (const auto& [end, sample] : ends)
    {
        const auto [x, f] = sample;
        switch (end->kind)
        {
            case EndKind::CuspMatch:
                // f ~ c/x^2 with c fitted at the boundary sample. A cusp end
                // facing x = 0 is a cut through the cusp, not its tail.
                if ((end == &model.left()) == (x < 0))
                    v += 2.0 * std::numbers::pi * f * x * x / std::abs(x);
                break;
            case EndKind::SmoothCap:
                // f ~ f_end e^{-2|x - x_end|}.
                v += std::numbers::pi * f;
                break;
            case EndKind::FlatEnd:
                throw Error(ErrorCode::DivergentTail, "a flat end has infinite area");
        }
    }
    return v;
}

double geodesic_length(const ConformalMetric& g, const SurfaceModel& model)
{
    require_size(g, model);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < g.f.size(); ++i)
        sum += 0.5 * (std::sqrt(g.f[i]) + std::sqrt(g.f[i + 1]));
    return sum * model.grid().h;
}

namespace {

/** Coefficient of -i ddbar log(log^2 |sigma|^-2) for a cusp at x -> +infinity. */
double cusp_correction(double x, double xc)
{
    // L = log(e^{2x} + e^{2xc}) computed without overflow.
    const double a = 2.0 * x, b = 2.0 * xc;
    const double L = std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
    const double p = 1.0 / (1.0 + std::exp(b - a));
    const double q = 1.0 / (1.0 + std::exp(a - b));   // 1 - p, accurate for either sign
    return (4.0 * p * p - 4.0 * p * q * L) / (L * L);
}

}   // namespace

CarlsonGriffithsResult carlson_griffiths_initial(const SurfaceModel& model, const BumpParameters& bump)
{
    if (!(bump.volume > 0))
        throw Error(ErrorCode::InvalidInput, "initial volume must be positive");
    if (!(bump.cap_scale > 0))
        throw Error(ErrorCode::InvalidInput, "cap_scale must be positive");
    const double R = bump.volume / (4.0 * std::numbers::pi);
    const std::vector<double> xs = model.grid().nodes();

    double xc = bump.cap_scale;
    double bad_x = 0.0;
    for (int attempt = 0; attempt < 80; ++attempt, xc += 0.25)
    {
        ConformalMetric g;
        g.f.reserve(xs.size());
        bool ok = true;
        for (double x : xs)
        {
            const double s = 1.0 / std::cosh(x - bump.center);
            double f = R * s * s;
            if (model.right().kind == EndKind::CuspMatch)
                f += model.right().c * cusp_correction(x, xc);
            if (model.left().kind == EndKind::CuspMatch)
                f += model.left().c * cusp_correction(-x, xc);
            if (!(f > 0) && ok)
            {
                ok = false;
                bad_x = x;
            }
            g.f.push_back(f);
        }
        if (ok)
            return {std::move(g), xc};
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", bad_x);
    throw Error(ErrorCode::PositivityFailure, std::string("initial metric is not positive at x = ") + buf);
}

void write_snapshot(std::ostream& out, const ConformalMetric& g, const SurfaceModel& model)
{
    const CurvatureProfile k = gauss_curvature(g, model);
    out << "# " << model.describe() << "\n";
    out << "x,f,K,ric\n";
    const Grid& grid = model.grid();
    char buf[128];
    for (std::size_t i = 0; i < g.f.size(); ++i)
    {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", grid.x(static_cast<std::ptrdiff_t>(i)), g.f[i],
                      k.K[i], k.ric[i]);
        out << buf;
    }
}

}   // namespace krf::geometry
