#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "krf/cohomology/cohomology.hpp"

namespace krf::cohomology {

using nlohmann::json;

/** A number or an expression string such as "8pi", "5/2", "pi/3". */
ExactReal exact_from_json(const json& j);
/** As exact_from_json, but rejects anything involving pi. */
Rational rational_from_json(const json& j);

CohomologyClass class_from_json(const json& j);
json class_to_json(const CohomologyClass& c);

/**
 * Either a builtin name ("s2xs2"), an object {"builtin": "cpn-k", "n": 2, "k": 3},
 * or a full description {basis, canonical, divisors:[{name, class}], cone, dim, witness?}.
 */
ManifoldDescription manifold_from_json(const json& j);
json manifold_to_json(const ManifoldDescription& m);

json verdict_to_json(const SingularityVerdict& v);

/** Human-readable differences between a golden verdict and a computed one; empty when they agree. */
std::vector<std::string> verdict_diff(const json& golden, const json& actual);

}   // namespace krf::cohomology
