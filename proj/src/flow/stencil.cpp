#include "krf/flow/stencil.hpp"

#include <cmath>

#include "krf/error.hpp"
#include "krf/geometry/metric.hpp"

namespace krf::flow {

std::size_t ghost_layers(StencilOrder order)
{
    return order == StencilOrder::Fourth ? 2 : 1;
}

void second_derivative(const std::vector<double>& extended, double h, StencilOrder order, std::vector<double>& out)
{
    const std::size_t g = ghost_layers(order);
    if (extended.size() < 2 * g + 1)
        throw Error(ErrorCode::InvalidInput, "too few samples for the stencil");
    const std::size_t n = extended.size() - 2 * g;
    out.resize(n);
    const double* e = extended.data() + g;
    if (order == StencilOrder::Second)
    {
        const double s = 1.0 / (h * h);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = (e[i - 1] - 2.0 * e[i] + e[i + 1]) * s;
    }
    else
    {
        const double s = 1.0 / (12.0 * h * h);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = (-e[i - 2] + 16.0 * e[i - 1] - 30.0 * e[i] + 16.0 * e[i + 1] - e[i + 2]) * s;
    }
}

std::vector<double> ricci_coefficient(const std::vector<double>& f, const geometry::SurfaceModel& model,
                                      StencilOrder order)
{
    geometry::require_positive(f);
    std::vector<double> logf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        logf[i] = std::log(f[i]);
    std::vector<double> d2;
    second_derivative(geometry::extend_with_ghosts(logf, model, geometry::Field::LogMetric, ghost_layers(order)),
                      model.grid().h, order, d2);
    for (double& v : d2)
        v *= -geometry::kappa2;
    return d2;
}

}   // namespace krf::flow
