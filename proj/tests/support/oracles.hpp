#pragma once

// Independent reference computations shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "krf/cohomology/cohomology.hpp"
#include "krf/geometry/metric.hpp"

namespace krf::oracle {

using cohomology::CohomologyClass;
using cohomology::ExactReal;
using cohomology::ManifoldDescription;
using cohomology::Rational;

/** Random rational p/q with |p| <= pmax, 1 <= q <= qmax. */
inline Rational random_rational(std::mt19937_64& rng, int pmax, int qmax)
{
    std::uniform_int_distribution<int> p(-pmax, pmax), q(1, qmax);
    return Rational(p(rng), q(rng));
}

struct RandomInstance
{
    ManifoldDescription manifold;
    CohomologyClass omega0;
};

/**
 * A random manifold description on a basis of size 1..3: integer cone
 * functionals oriented so that a random initial class (rational multiples of
 * pi plus rational parts) lies strictly inside, and random canonical and
 * divisor classes.
 */
inline RandomInstance random_instance(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> basis(1, 3), rows(1, 3), coef(-3, 3);
    RandomInstance out;
    const int n = basis(rng);
    std::vector<ExactReal> w;
    for (int i = 0; i < n; ++i)
        w.push_back(ExactReal::monomial(random_rational(rng, 9, 4), 1) + ExactReal(random_rational(rng, 5, 3)));
    out.omega0 = CohomologyClass(w);

    ManifoldDescription& m = out.manifold;
    for (int i = 0; i < n; ++i)
        m.basis_names.push_back("e" + std::to_string(i));
    const int m_rows = rows(rng);
    while (static_cast<int>(m.cone.functionals.size()) < m_rows)
    {
        cohomology::Functional l;
        for (int i = 0; i < n; ++i)
            l.push_back(Rational(coef(rng)));
        ExactReal value;
        for (int i = 0; i < n; ++i)
            value += ExactReal(l[static_cast<std::size_t>(i)]) * w[static_cast<std::size_t>(i)];
        if (value.sign() == 0)
            continue;
        if (value.sign() < 0)
            for (auto& c : l)
                c = -c;
        m.cone.functionals.push_back(l);
    }
    m.cone.witness = out.omega0;
    std::vector<ExactReal> k, d;
    for (int i = 0; i < n; ++i)
    {
        k.push_back(ExactReal(Rational(coef(rng))));
        d.push_back(ExactReal(Rational(coef(rng) / 2)));
    }
    m.canonical = CohomologyClass(k);
    m.divisors.push_back({"D", CohomologyClass(d)});
    m.complex_dim = 1;
    return out;
}

/**
 * Exit time of [omega0] + 2 pi t [K + D] from the cone, found by bisection on
 * the floating-point minimum of the functionals. +inf if no functional decreases.
 */
inline double bisection_exit_time(const ManifoldDescription& m, const CohomologyClass& omega0)
{
    const std::size_t n = m.basis_size();
    std::vector<double> w(n), kappa(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        w[i] = omega0[i].to_double();
        double kd = m.canonical[i].to_double();
        for (const auto& d : m.divisors)
            kd += d.cls[i].to_double();
        kappa[i] = kd;
    }
    auto min_value = [&](double t) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& l : m.cone.functionals)
        {
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                v += l[i].convert_to<double>() * (w[i] + 2.0 * M_PI * t * kappa[i]);
            best = std::min(best, v);
        }
        return best;
    };
    double hi = 1.0;
    while (min_value(hi) > 0)
    {
        hi *= 2.0;
        if (hi > 1e12)
            return std::numeric_limits<double>::infinity();
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        (min_value(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

enum class ClosedForm
{
    Poincare,      // 1/x^2, K = -1
    Poincare2,     // 2/x^2, K = -1/2
    RoundSphere,   // sech^2 x, K = 1
};

/** Max |K_h - K_exact| for the discrete curvature operator on N intervals. */
inline double curvature_error(ClosedForm form, std::size_t N)
{
    using namespace geometry;
    if (form == ClosedForm::RoundSphere)
    {
        const auto model = SurfaceModel::create(Topology::Sphere, -6.0, 6.0, N, EndCondition::cap(), EndCondition::cap());
        const auto prof = gauss_curvature(round_sphere(1.0, 0.0, model), model);
        double err = 0.0;
        for (double k : prof.K)
            err = std::max(err, std::abs(k - 1.0));
        return err;
    }
    const double c = form == ClosedForm::Poincare ? 1.0 : 2.0;
    const auto model =
        SurfaceModel::create(Topology::TwoPuncture, 1.0, 10.0, N, EndCondition::cusp(c), EndCondition::cusp(c));
    const auto prof = gauss_curvature(poincare_cusp(c, model), model);
    double err = 0.0;
    for (double k : prof.K)
        err = std::max(err, std::abs(k + 1.0 / c));
    return err;
}

/** Error ratios e(N)/e(2N), e(2N)/e(4N) from N = 64. */
inline std::array<double, 2> curvature_convergence_ratios(ClosedForm form)
{
    const double e1 = curvature_error(form, 64), e2 = curvature_error(form, 128), e3 = curvature_error(form, 256);
    return {e1 / e2, e2 / e3};
}

}   // namespace krf::oracle
