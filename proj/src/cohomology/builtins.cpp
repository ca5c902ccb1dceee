#include "krf/cohomology/builtins.hpp"

#include "krf/error.hpp"

namespace krf::cohomology {

ManifoldDescription s2_one_point()
{
    return cpn_hyperplanes(1, 1);
}

ManifoldDescription s2_times_s2()
{
    // Example 9.3: the first factor shrinks at rate 4 pi, the second
    // (which meets D) at rate 2 pi.
    ManifoldDescription m;
    m.basis_names = {"S2_first", "S2_second"};
    m.canonical = {-2, -2};
    m.divisors = {{"pt x S2", {0, 1}}};
    m.cone.functionals = {{1, 0}, {0, 1}};
    m.cone.witness = CohomologyClass{1, 1};
    m.complex_dim = 2;
    return m;
}

ManifoldDescription cpn_hyperplanes(int n, int k)
{
    if (n < 1 || k < 0)
        throw Error(ErrorCode::InvalidInput, "cpn-k needs n >= 1 and k >= 0");
    // Example 9.4: T = (area of a line) / (2 pi (n + 1 - k)).
    ManifoldDescription m;
    m.basis_names = {"H"};
    m.canonical = {-(n + 1)};
    for (int i = 0; i < k; ++i)
        m.divisors.push_back({"H" + std::to_string(i + 1), {1}});
    m.cone.functionals = {{1}};
    m.cone.witness = CohomologyClass{1};
    m.complex_dim = n;
    return m;
}

ManifoldDescription cstar()
{
    ManifoldDescription m = cpn_hyperplanes(1, 2);
    m.divisors[0].name = "0";
    m.divisors[1].name = "inf";
    return m;
}

ManifoldDescription builtin_manifold(const std::string& name, int n, int k)
{
    if (name == "s2-1pt")
        return s2_one_point();
    if (name == "s2xs2")
        return s2_times_s2();
    if (name == "cpn-k")
        return cpn_hyperplanes(n, k);
    if (name == "cstar")
        return cstar();
    throw Error(ErrorCode::ConfigError, "unknown builtin manifold '" + name + "'");
}

std::vector<std::string> builtin_names()
{
    return {"s2-1pt", "s2xs2", "cpn-k", "cstar"};
}

}   // namespace krf::cohomology
