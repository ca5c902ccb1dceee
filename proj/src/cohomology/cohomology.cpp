#include "krf/cohomology/cohomology.hpp"

#include <cmath>
#include <limits>

#include "krf/error.hpp"

namespace krf::cohomology {

namespace {

void require_size(const CohomologyClass& c, std::size_t n, const char* what)
{
    if (c.size() != n)
        throw Error(ErrorCode::BasisMismatch, std::string(what) + " has " + std::to_string(c.size()) +
                                                  " coefficients, basis has " + std::to_string(n));
}

}   // namespace

bool CohomologyClass::is_zero() const
{
    for (const auto& c : coeffs_)
        if (!c.is_zero())
            return false;
    return true;
}

std::vector<std::string> CohomologyClass::to_strings() const
{
    std::vector<std::string> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_)
        out.push_back(c.to_string());
    return out;
}

CohomologyClass& CohomologyClass::operator+=(const CohomologyClass& other)
{
    if (other.size() != size())
        throw Error(ErrorCode::BasisMismatch, "adding classes of different lengths");
    for (std::size_t i = 0; i < size(); ++i)
        coeffs_[i] += other.coeffs_[i];
    return *this;
}

CohomologyClass& CohomologyClass::operator-=(const CohomologyClass& other)
{
    if (other.size() != size())
        throw Error(ErrorCode::BasisMismatch, "subtracting classes of different lengths");
    for (std::size_t i = 0; i < size(); ++i)
        coeffs_[i] -= other.coeffs_[i];
    return *this;
}

CohomologyClass& CohomologyClass::operator*=(const ExactReal& scale)
{
    for (auto& c : coeffs_)
        c *= scale;
    return *this;
}

ExactReal KahlerCone::pair(std::size_t j, const CohomologyClass& c) const
{
    const Functional& l = functionals.at(j);
    if (l.size() != c.size())
        throw Error(ErrorCode::BasisMismatch, "cone functional " + std::to_string(j) + " has length " +
                                                  std::to_string(l.size()) + ", class has " + std::to_string(c.size()));
    ExactReal sum;
    for (std::size_t i = 0; i < l.size(); ++i)
        sum += ExactReal(l[i]) * c[i];
    return sum;
}

bool KahlerCone::contains(const CohomologyClass& c) const
{
    for (std::size_t j = 0; j < functionals.size(); ++j)
        if (pair(j, c).sign() <= 0)
            return false;
    return true;
}

CohomologyClass ManifoldDescription::log_canonical() const
{
    CohomologyClass kappa = canonical;
    for (const auto& d : divisors)
        kappa += d.cls;
    return kappa;
}

void ManifoldDescription::validate() const
{
    const std::size_t n = basis_size();
    if (n == 0)
        throw Error(ErrorCode::InvalidInput, "empty basis");
    if (complex_dim < 1)
        throw Error(ErrorCode::InvalidInput, "complex dimension must be positive");
    require_size(canonical, n, "canonical class");
    for (const auto& d : divisors)
        require_size(d.cls, n, ("divisor '" + d.name + "'").c_str());
    if (cone.functionals.empty())
        throw Error(ErrorCode::InvalidInput, "Kahler cone has no functionals");
    for (std::size_t j = 0; j < cone.functionals.size(); ++j)
        if (cone.functionals[j].size() != n)
            throw Error(ErrorCode::BasisMismatch, "cone functional " + std::to_string(j) + " has wrong length");
    if (cone.witness)
    {
        require_size(*cone.witness, n, "cone witness");
        if (!cone.contains(*cone.witness))
            throw Error(ErrorCode::InvalidInput, "cone witness does not lie in the declared cone");
    }
}

double TimeBound::to_double() const
{
    return infinite ? std::numeric_limits<double>::infinity() : value.to_double();
}

std::string TimeBound::to_string() const
{
    return infinite ? "inf" : value.to_string();
}

std::string to_string(Classification c)
{
    switch (c)
    {
        case Classification::TypeIIGuaranteed: return "TypeIIGuaranteed";
        case Classification::Inconclusive:     return "Inconclusive";
        case Classification::NoSingularity:    return "NoSingularity";
    }
    return "Unknown";
}

Classification classification_from_string(const std::string& text)
{
    for (auto c : {Classification::TypeIIGuaranteed, Classification::Inconclusive, Classification::NoSingularity})
        if (to_string(c) == text)
            return c;
    throw Error(ErrorCode::InvalidInput, "unknown classification '" + text + "'");
}

namespace {

struct TimeAndBinding
{
    TimeBound time;
    std::vector<std::size_t> binding;
};

TimeAndBinding solve(const ManifoldDescription& m, const CohomologyClass& omega0)
{
    m.validate();
    require_size(omega0, m.basis_size(), "initial class");
    for (std::size_t j = 0; j < m.cone.functionals.size(); ++j)
        if (m.cone.pair(j, omega0).sign() <= 0)
            throw Error(ErrorCode::NotKahler, "initial class fails cone functional " + std::to_string(j) + " (value " +
                                                  m.cone.pair(j, omega0).to_string() + ")");

    // Each condition l_j(omega0) + 2 pi T l_j(kappa) > 0 is affine in T.
    const CohomologyClass kappa = m.log_canonical();
    const ExactReal two_pi = ExactReal(2) * ExactReal::pi();
    TimeAndBinding out{TimeBound::infinity(), {}};
    for (std::size_t j = 0; j < m.cone.functionals.size(); ++j)
    {
        const ExactReal slope = m.cone.pair(j, kappa);
        if (slope.sign() >= 0)
            continue;
        if (!slope.is_monomial())
            throw Error(ErrorCode::InvalidInput, "log-canonical pairing must be a multiple of a power of pi");
        const ExactReal tj = m.cone.pair(j, omega0) / (-(two_pi * slope));
        if (out.time.infinite || tj < out.time.value)
        {
            out.time = TimeBound::finite(tj);
            out.binding = {j};
        }
        else if (tj == out.time.value)
            out.binding.push_back(j);
    }
    return out;
}

}   // namespace

TimeBound singularity_time(const ManifoldDescription& m, const CohomologyClass& omega0)
{
    return solve(m, omega0).time;
}

SingularityVerdict classify(const ManifoldDescription& m, const CohomologyClass& omega0)
{
    TimeAndBinding tb = solve(m, omega0);
    SingularityVerdict v;
    v.t_sing_unnormalized = tb.time;
    v.t_sing_normalized = normalized_time_of(tb.time);
    v.binding_functionals = std::move(tb.binding);
    if (tb.time.infinite)
    {
        v.classification = Classification::NoSingularity;
        return v;
    }
    v.residual_class = class_at_unnormalized_time(m, omega0, tb.time.value);
    v.classification = (v.residual_class->is_zero() && !m.divisors.empty()) ? Classification::TypeIIGuaranteed
                                                                            : Classification::Inconclusive;
    return v;
}

double normalized_time_of(double t_unnorm)
{
    if (std::isnan(t_unnorm) || t_unnorm < 0)
        throw Error(ErrorCode::NegativeTime, "unnormalized time must be nonnegative");
    return std::log1p(t_unnorm);
}

double normalized_time_of(const TimeBound& t_unnorm)
{
    if (t_unnorm.infinite)
        return std::numeric_limits<double>::infinity();
    if (t_unnorm.value.sign() < 0)
        throw Error(ErrorCode::NegativeTime, "unnormalized time must be nonnegative");
    return static_cast<double>(std::log1p(t_unnorm.value.to_long_double()));
}

std::vector<long double> class_at_time(const ManifoldDescription& m, const CohomologyClass& omega0, double t)
{
    if (!(t >= 0))
        throw Error(ErrorCode::NegativeTime, "normalized time must be nonnegative");
    require_size(omega0, m.basis_size(), "initial class");
    const CohomologyClass kappa = m.log_canonical();
    const long double decay = std::exp(-static_cast<long double>(t));
    const long double two_pi = 2.0L * ExactReal::pi().to_long_double();
    std::vector<long double> out(omega0.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = decay * omega0[i].to_long_double() + two_pi * (1.0L - decay) * kappa[i].to_long_double();
    return out;
}

CohomologyClass class_at_unnormalized_time(const ManifoldDescription& m, const CohomologyClass& omega0,
                                           const ExactReal& s)
{
    if (s.sign() < 0)
        throw Error(ErrorCode::NegativeTime, "unnormalized time must be nonnegative");
    require_size(omega0, m.basis_size(), "initial class");
    return omega0 + (ExactReal(2) * ExactReal::pi() * s) * m.log_canonical();
}

}   // namespace krf::cohomology
