#pragma once

#include <cstddef>
#include <vector>

#include "krf/geometry/surface.hpp"

namespace krf::flow {

enum class StencilOrder
{
    Second,   // (1, -2, 1) / h^2
    Fourth,   // (-1, 16, -30, 16, -1) / (12 h^2)
};

std::size_t ghost_layers(StencilOrder order);

/**
 * out[i] = d^2/dx^2 at sample i, from `extended` = samples padded with
 * ghost_layers(order) values on each side.
 */
void second_derivative(const std::vector<double>& extended, double h, StencilOrder order, std::vector<double>& out);

/** r = -kappa2 (log f)'' with ghost values from the model's end conditions. Throws NonPositiveMetric. */
std::vector<double> ricci_coefficient(const std::vector<double>& f, const geometry::SurfaceModel& model,
                                      StencilOrder order = StencilOrder::Fourth);

}   // namespace krf::flow
