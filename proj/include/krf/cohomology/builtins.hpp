#pragma once

#include <string>
#include <vector>

#include "krf/cohomology/cohomology.hpp"

namespace krf::cohomology {

/** S^2 minus one point: basis {[S^2]}, [K] = -2, [D] = 1. */
ManifoldDescription s2_one_point();

/**
 * S^2 x S^2 with D = {pt} x S^2. Coordinates are the areas of the two
 * ruling curves, so [K] = (-2, -2) and D pairs only with the second factor.
 */
ManifoldDescription s2_times_s2();

/** CP^n with k hyperplanes: basis {H}, [K] = -(n+1)H, each D_i = H. */
ManifoldDescription cpn_hyperplanes(int n, int k);

/** C* = S^2 minus two points; K + D = 0. */
ManifoldDescription cstar();

/** Look up "s2-1pt", "s2xs2", "cpn-k" (uses n, k) or "cstar". */
ManifoldDescription builtin_manifold(const std::string& name, int n = 1, int k = 1);

std::vector<std::string> builtin_names();

}   // namespace krf::cohomology
