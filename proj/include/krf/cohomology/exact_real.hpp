#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/gmp.hpp>

namespace krf::cohomology {

using Rational = boost::multiprecision::mpq_rational;

/**
 * Exact real number of the form  sum_k q_k * pi^k  with rational q_k and
 * integer k (a Laurent polynomial in pi).
 *
 * Cohomology classes of metrics are naturally quoted in multiples of pi
 * (e.g. [omega_0] = (8 pi, 2 pi)) and singularity times pick up a factor
 * 1/(2 pi), so carrying pi as a transcendental unit keeps every closed form
 * exact. Ring operations are closed; division is provided only by nonzero
 * monomials q * pi^k. Ordering is decided exactly: since pi is
 * transcendental, a nonzero Laurent polynomial never vanishes at pi, and its
 * sign is found by interval evaluation on rigorous rational enclosures of pi.
 */
class ExactReal
{
    public:
        ExactReal() = default;
        ExactReal(const Rational& q);           // NOLINT: implicit by design of the number tower
        ExactReal(long long n) : ExactReal(Rational(n)) {}   // NOLINT

        static ExactReal monomial(const Rational& q, int power);
        static ExactReal pi() { return monomial(Rational(1), 1); }

        /**
         * Parse an arithmetic expression over integers, decimals and `pi`,
         * e.g. "10", "5/2", "8*pi", "2pi", "pi/2", "5/(2*pi)", "1 + pi^2".
         * Throws krf::Error(InvalidInput) on malformed text or a division by
         * a non-monomial.
         */
        static ExactReal parse(std::string_view text);

        bool is_zero() const { return terms_.empty(); }
        bool is_monomial() const { return terms_.size() == 1; }
        bool is_rational() const;
        /** -1, 0 or +1. */
        int sign() const;

        long double to_long_double() const;
        double to_double() const { return static_cast<double>(to_long_double()); }
        /** Canonical text that parse() maps back to the same value. */
        std::string to_string() const;

        /** Nonzero coefficients keyed by power of pi. */
        const std::map<int, Rational>& terms() const { return terms_; }

        ExactReal operator-() const;
        ExactReal& operator+=(const ExactReal& other);
        ExactReal& operator-=(const ExactReal& other);
        ExactReal& operator*=(const ExactReal& other);
        /** Only monomial divisors are supported; throws std::domain_error otherwise. */
        ExactReal& operator/=(const ExactReal& other);

        friend ExactReal operator+(ExactReal a, const ExactReal& b) { return a += b; }
        friend ExactReal operator-(ExactReal a, const ExactReal& b) { return a -= b; }
        friend ExactReal operator*(ExactReal a, const ExactReal& b) { return a *= b; }
        friend ExactReal operator/(ExactReal a, const ExactReal& b) { return a /= b; }

        friend bool operator==(const ExactReal& a, const ExactReal& b) { return a.terms_ == b.terms_; }
        friend std::strong_ordering operator<=>(const ExactReal& a, const ExactReal& b);

    private:
        std::map<int, Rational> terms_;
};

/**
 * Rigorous rational enclosure lo < pi < hi with hi - lo <= 10^-digits,
 * from Machin's formula with alternating-series error bounds.
 */
std::pair<Rational, Rational> pi_enclosure(unsigned digits);

}   // namespace krf::cohomology
