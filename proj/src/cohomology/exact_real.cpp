#include "krf/cohomology/exact_real.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "krf/error.hpp"

namespace krf::cohomology {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

Rational ten_to_minus(unsigned digits)
{
    boost::multiprecision::mpz_int denom = 1;
    for (unsigned i = 0; i < digits; ++i)
        denom *= 10;
    return Rational(boost::multiprecision::mpz_int(1), denom);
}

/** atan(1/m) enclosed as [sum - tail, sum + tail] with tail <= bound. */
std::pair<Rational, Rational> atan_inverse(long m, const Rational& bound)
{
    Rational sum = 0;
    Rational power(boost::multiprecision::mpz_int(1), boost::multiprecision::mpz_int(m));   // m^-(2k+1)
    const Rational m2 = Rational(m) * m;
    for (long k = 0;; ++k)
    {
        Rational term = power / (2 * k + 1);
        if (term <= bound)
            return {sum - term, sum + term};
        sum += (k % 2 == 0) ? term : Rational(-term);
        power /= m2;
    }
}

struct Interval
{
    Rational lo, hi;
};

Interval times_positive(const Interval& a, const Interval& p)
{
    if (a.lo >= 0)
        return {a.lo * p.lo, a.hi * p.hi};
    if (a.hi <= 0)
        return {a.lo * p.hi, a.hi * p.lo};
    return {a.lo * p.hi, a.hi * p.hi};
}

const std::pair<Rational, Rational>& cached_enclosure()
{
    static const std::pair<Rational, Rational> value = pi_enclosure(60);
    return value;
}

std::string rational_text(const Rational& q)
{
    std::ostringstream out;
    out << numerator(q);
    if (denominator(q) != 1)
        out << "/" << denominator(q);
    return out.str();
}

std::string pi_power_text(int k)
{
    return k == 1 ? std::string("pi") : "pi^" + std::to_string(k);
}

/** Text of q * pi^k for q > 0. */
std::string monomial_text(const Rational& q, int k)
{
    const auto num = numerator(q);
    const auto den = denominator(q);
    std::ostringstream out;
    if (k == 0)
        out << rational_text(q);
    else if (k > 0)
    {
        if (num != 1)
            out << num << "*";
        out << pi_power_text(k);
        if (den != 1)
            out << "/" << den;
    }
    else
    {
        out << num << "/";
        if (den != 1)
            out << "(" << den << "*" << pi_power_text(-k) << ")";
        else
            out << pi_power_text(-k);
    }
    return out.str();
}

/** Recursive-descent parser over the grammar documented on ExactReal::parse. */
class Parser
{
    public:
        explicit Parser(std::string_view text) : text_(text) {}

        ExactReal parse()
        {
            ExactReal value = expression();
            skip_space();
            if (pos_ != text_.size())
                fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
            return value;
        }

    private:
        std::string_view text_;
        std::size_t pos_ = 0;

        [[noreturn]] void fail(const std::string& why) const
        {
            throw Error(ErrorCode::InvalidInput,
                        "cannot parse \"" + std::string(text_) + "\" at offset " + std::to_string(pos_) + ": " + why);
        }

        void skip_space()
        {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }

        char peek()
        {
            skip_space();
            return pos_ < text_.size() ? text_[pos_] : '\0';
        }

        ExactReal expression()
        {
            ExactReal value = term();
            for (char c = peek(); c == '+' || c == '-'; c = peek())
            {
                ++pos_;
                if (c == '+')
                    value += term();
                else
                    value -= term();
            }
            return value;
        }

        ExactReal term()
        {
            ExactReal value = unary();
            for (;;)
            {
                const char c = peek();
                if (c == '*')
                {
                    ++pos_;
                    value *= unary();
                }
                else if (c == '/')
                {
                    ++pos_;
                    value = divide(value, unary());
                }
                else if (c == 'p' || c == '(')
                    value *= unary();    // implicit product, as in "2pi"
                else
                    return value;
            }
        }

        ExactReal divide(const ExactReal& a, const ExactReal& b)
        {
            if (!b.is_monomial())
                fail("division by zero or by a non-monomial");
            return a / b;
        }

        ExactReal unary()
        {
            const char c = peek();
            if (c == '-')
            {
                ++pos_;
                return -unary();
            }
            if (c == '+')
            {
                ++pos_;
                return unary();
            }
            return power();
        }

        ExactReal power()
        {
            ExactReal base = primary();
            if (peek() != '^')
                return base;
            ++pos_;
            skip_space();
            bool negative = false;
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
                negative = text_[pos_++] == '-';
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (start == pos_)
                fail("expected integer exponent");
            const int exponent = std::stoi(std::string(text_.substr(start, pos_ - start)));
            ExactReal result(1);
            for (int i = 0; i < exponent; ++i)
                result *= base;
            return negative ? divide(ExactReal(1), result) : result;
        }

        ExactReal primary()
        {
            const char c = peek();
            if (c == '(')
            {
                ++pos_;
                ExactReal value = expression();
                if (peek() != ')')
                    fail("expected ')'");
                ++pos_;
                return value;
            }
            if (text_.substr(pos_, 2) == "pi")
            {
                pos_ += 2;
                return ExactReal::pi();
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
                return number();
            fail(c == '\0' ? "unexpected end of input" : "unexpected character");
        }

        ExactReal number()
        {
            boost::multiprecision::mpz_int digits = 0;
            boost::multiprecision::mpz_int scale = 1;
            bool any = false;
            bool fraction = false;
            for (; pos_ < text_.size(); ++pos_)
            {
                const char c = text_[pos_];
                if (std::isdigit(static_cast<unsigned char>(c)))
                {
                    digits = digits * 10 + (c - '0');
                    if (fraction)
                        scale *= 10;
                    any = true;
                }
                else if (c == '.' && !fraction)
                    fraction = true;
                else
                    break;
            }
            if (!any)
                fail("malformed number");
            return ExactReal(Rational(digits, scale));
        }
};

}   // namespace

std::pair<Rational, Rational> pi_enclosure(unsigned digits)
{
    const Rational bound = ten_to_minus(digits) / 64;
    const auto a = atan_inverse(5, bound);
    const auto b = atan_inverse(239, bound);
    return {16 * a.first - 4 * b.second, 16 * a.second - 4 * b.first};
}

ExactReal::ExactReal(const Rational& q)
{
    if (q != 0)
        terms_.emplace(0, q);
}

ExactReal ExactReal::monomial(const Rational& q, int power)
{
    ExactReal value;
    if (q != 0)
        value.terms_.emplace(power, q);
    return value;
}

ExactReal ExactReal::parse(std::string_view text)
{
    return Parser(text).parse();
}

bool ExactReal::is_rational() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

int ExactReal::sign() const
{
    if (terms_.empty())
        return 0;
    if (terms_.size() == 1)
        return terms_.begin()->second > 0 ? 1 : -1;

    // x * pi^-kmin is an ordinary polynomial P(pi) with nonzero constant term.
    const int kmin = terms_.begin()->first;
    const int kmax = terms_.rbegin()->first;
    std::vector<Rational> coeffs(static_cast<std::size_t>(kmax - kmin + 1));
    for (const auto& [k, q] : terms_)
        coeffs[static_cast<std::size_t>(k - kmin)] = q;

    auto evaluate = [&](const std::pair<Rational, Rational>& enclosure) {
        const Interval p{enclosure.first, enclosure.second};
        Interval acc{coeffs.back(), coeffs.back()};
        for (std::size_t i = coeffs.size() - 1; i-- > 0;)
        {
            acc = times_positive(acc, p);
            acc.lo += coeffs[i];
            acc.hi += coeffs[i];
        }
        return acc;
    };

    Interval value = evaluate(cached_enclosure());
    for (unsigned digits = 120; value.lo <= 0 && value.hi >= 0; digits *= 2)
    {
        if (digits > 20000)
            throw std::logic_error("ExactReal::sign: failed to separate value from zero");
        value = evaluate(pi_enclosure(digits));
    }
    return value.lo > 0 ? 1 : -1;
}

long double ExactReal::to_long_double() const
{
    long double sum = 0;
    for (const auto& [k, q] : terms_)
    {
        long double pk = 1;
        for (int i = 0; i < (k < 0 ? -k : k); ++i)
            pk *= kPi;
        const long double c = q.convert_to<long double>();
        sum += k < 0 ? c / pk : c * pk;
    }
    return sum;
}

std::string ExactReal::to_string() const
{
    if (terms_.empty())
        return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
    {
        const bool negative = it->second < 0;
        const Rational magnitude = negative ? Rational(-it->second) : it->second;
        if (out.empty())
            out = negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        out += monomial_text(magnitude, it->first);
    }
    return out;
}

ExactReal ExactReal::operator-() const
{
    ExactReal value = *this;
    for (auto& [k, q] : value.terms_)
        q = -q;
    return value;
}

ExactReal& ExactReal::operator+=(const ExactReal& other)
{
    for (const auto& [k, q] : other.terms_)
    {
        Rational& slot = terms_[k];
        slot += q;
        if (slot == 0)
            terms_.erase(k);
    }
    return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& other)
{
    return *this += -other;
}

ExactReal& ExactReal::operator*=(const ExactReal& other)
{
    ExactReal product;
    for (const auto& [k1, q1] : terms_)
        for (const auto& [k2, q2] : other.terms_)
            product += monomial(q1 * q2, k1 + k2);
    terms_ = std::move(product.terms_);
    return *this;
}

ExactReal& ExactReal::operator/=(const ExactReal& other)
{
    if (!other.is_monomial())
        throw std::domain_error("ExactReal: division by zero or by a non-monomial");
    const auto& [k, q] = *other.terms_.begin();
    std::map<int, Rational> quotient;
    for (const auto& [kk, qq] : terms_)
        quotient.emplace(kk - k, qq / q);
    terms_ = std::move(quotient);
    return *this;
}

std::strong_ordering operator<=>(const ExactReal& a, const ExactReal& b)
{
    const int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}   // namespace krf::cohomology
