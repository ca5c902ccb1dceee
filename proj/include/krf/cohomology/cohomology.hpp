#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "krf/cohomology/exact_real.hpp"

namespace krf::cohomology {

/** Coefficients of a real (1,1)-class over a declared basis. */
class CohomologyClass
{
    public:
        CohomologyClass() = default;
        explicit CohomologyClass(std::vector<ExactReal> coeffs) : coeffs_(std::move(coeffs)) {}
        CohomologyClass(std::initializer_list<ExactReal> coeffs) : coeffs_(coeffs) {}

        static CohomologyClass zero(std::size_t n) { return CohomologyClass(std::vector<ExactReal>(n)); }

        std::size_t size() const { return coeffs_.size(); }
        const ExactReal& operator[](std::size_t i) const { return coeffs_[i]; }
        ExactReal& operator[](std::size_t i) { return coeffs_[i]; }
        const std::vector<ExactReal>& coeffs() const { return coeffs_; }

        bool is_zero() const;
        std::vector<std::string> to_strings() const;

        CohomologyClass& operator+=(const CohomologyClass& other);
        CohomologyClass& operator-=(const CohomologyClass& other);
        CohomologyClass& operator*=(const ExactReal& scale);

        friend CohomologyClass operator+(CohomologyClass a, const CohomologyClass& b) { return a += b; }
        friend CohomologyClass operator-(CohomologyClass a, const CohomologyClass& b) { return a -= b; }
        friend CohomologyClass operator*(const ExactReal& s, CohomologyClass a) { return a *= s; }
        friend bool operator==(const CohomologyClass&, const CohomologyClass&) = default;

    private:
        std::vector<ExactReal> coeffs_;
};

using Functional = std::vector<Rational>;

/** Open polyhedral cone { c : l_j(c) > 0 for every j }. */
struct KahlerCone
{
    std::vector<Functional> functionals;
    /** A class known to lie in the cone; proves the cone is nonempty. */
    std::optional<CohomologyClass> witness;

    ExactReal pair(std::size_t j, const CohomologyClass& c) const;
    bool contains(const CohomologyClass& c) const;
};

struct Divisor
{
    std::string name;
    CohomologyClass cls;
};

struct ManifoldDescription
{
    std::vector<std::string> basis_names;
    CohomologyClass canonical;
    std::vector<Divisor> divisors;
    KahlerCone cone;
    int complex_dim = 1;

    std::size_t basis_size() const { return basis_names.size(); }
    /** [K] + [D]. */
    CohomologyClass log_canonical() const;
    /** Throws BasisMismatch / InvalidInput when the description is inconsistent. */
    void validate() const;
};

/** A nonnegative exact time, or +infinity. */
struct TimeBound
{
    bool infinite = false;
    ExactReal value;

    static TimeBound infinity() { return {true, ExactReal()}; }
    static TimeBound finite(ExactReal v) { return {false, std::move(v)}; }

    double to_double() const;
    std::string to_string() const;
    friend bool operator==(const TimeBound&, const TimeBound&) = default;
};

enum class Classification
{
    TypeIIGuaranteed,
    Inconclusive,
    NoSingularity,
};

std::string to_string(Classification c);
Classification classification_from_string(const std::string& text);

struct SingularityVerdict
{
    TimeBound t_sing_unnormalized;
    double t_sing_normalized = 0.0;
    std::vector<std::size_t> binding_functionals;
    std::optional<CohomologyClass> residual_class;
    Classification classification = Classification::Inconclusive;
};

TimeBound singularity_time(const ManifoldDescription& m, const CohomologyClass& omega0);
SingularityVerdict classify(const ManifoldDescription& m, const CohomologyClass& omega0);

/** log(1 + t); +infinity maps to +infinity. */
double normalized_time_of(const TimeBound& t_unnorm);
double normalized_time_of(double t_unnorm);

/** e^-t [omega0] + 2 pi (1 - e^-t) kappa, evaluated in long double. */
std::vector<long double> class_at_time(const ManifoldDescription& m, const CohomologyClass& omega0, double t);

/** Exact unnormalized class [omega0] + 2 pi s kappa; a positive multiple of class_at_time at t = log(1+s). */
CohomologyClass class_at_unnormalized_time(const ManifoldDescription& m, const CohomologyClass& omega0,
                                           const ExactReal& s);

}   // namespace krf::cohomology
