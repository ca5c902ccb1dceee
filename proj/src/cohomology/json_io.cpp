#include "krf/cohomology/json_io.hpp"

#include <cmath>
#include <sstream>

#include "krf/cohomology/builtins.hpp"
#include "krf/error.hpp"

namespace krf::cohomology {

ExactReal exact_from_json(const json& j)
{
    if (j.is_string())
        return ExactReal::parse(j.get<std::string>());
    if (j.is_number_integer())
        return ExactReal(j.get<long long>());
    if (j.is_number_unsigned())
        return ExactReal(Rational(j.get<unsigned long long>()));
    if (j.is_number_float())
    {
        // The shortest round-trip decimal is what the user wrote; read it back exactly.
        const double d = j.get<double>();
        if (!std::isfinite(d))
            throw Error(ErrorCode::InvalidInput, "non-finite number");
        return ExactReal::parse(json(d).dump());
    }
    throw Error(ErrorCode::InvalidInput, "expected a number or expression string, got " + j.dump());
}

Rational rational_from_json(const json& j)
{
    const ExactReal x = exact_from_json(j);
    if (!x.is_rational())
        throw Error(ErrorCode::InvalidInput, "expected a rational number, got " + j.dump());
    return x.is_zero() ? Rational(0) : x.terms().begin()->second;
}

CohomologyClass class_from_json(const json& j)
{
    if (!j.is_array())
        throw Error(ErrorCode::InvalidInput, "a class must be an array of coefficients, got " + j.dump());
    std::vector<ExactReal> coeffs;
    for (const auto& c : j)
        coeffs.push_back(exact_from_json(c));
    return CohomologyClass(std::move(coeffs));
}

json class_to_json(const CohomologyClass& c)
{
    return json(c.to_strings());
}

namespace {

CohomologyClass rational_class_from_json(const json& j)
{
    if (!j.is_array())
        throw Error(ErrorCode::InvalidInput, "a class must be an array of coefficients, got " + j.dump());
    std::vector<ExactReal> coeffs;
    for (const auto& c : j)
        coeffs.emplace_back(rational_from_json(c));
    return CohomologyClass(std::move(coeffs));
}

const json& field(const json& j, const char* key)
{
    if (!j.contains(key))
        throw Error(ErrorCode::InvalidInput, std::string("manifold description lacks \"") + key + "\"");
    return j.at(key);
}

}   // namespace

ManifoldDescription manifold_from_json(const json& j)
{
    if (j.is_string())
        return builtin_manifold(j.get<std::string>());
    if (!j.is_object())
        throw Error(ErrorCode::InvalidInput, "manifold must be a name or an object");
    if (j.contains("builtin"))
        return builtin_manifold(j.at("builtin").get<std::string>(), j.value("n", 1), j.value("k", 1));

    ManifoldDescription m;
    m.basis_names = field(j, "basis").get<std::vector<std::string>>();
    m.canonical = rational_class_from_json(field(j, "canonical"));
    if (j.contains("divisors"))
        for (const auto& d : j.at("divisors"))
            m.divisors.push_back({d.value("name", std::string("D") + std::to_string(m.divisors.size() + 1)),
                                  rational_class_from_json(d.at("class"))});
    for (const auto& row : field(j, "cone"))
    {
        Functional l;
        for (const auto& v : row)
            l.push_back(rational_from_json(v));
        m.cone.functionals.push_back(std::move(l));
    }
    if (j.contains("witness"))
        m.cone.witness = class_from_json(j.at("witness"));
    m.complex_dim = j.value("dim", 1);
    m.validate();
    return m;
}

json manifold_to_json(const ManifoldDescription& m)
{
    json divisors = json::array();
    for (const auto& d : m.divisors)
        divisors.push_back({{"name", d.name}, {"class", class_to_json(d.cls)}});
    json cone = json::array();
    for (const auto& l : m.cone.functionals)
    {
        json row = json::array();
        for (const auto& q : l)
            row.push_back(ExactReal(q).to_string());
        cone.push_back(row);
    }
    json out = {{"basis", m.basis_names},
                {"canonical", class_to_json(m.canonical)},
                {"divisors", divisors},
                {"cone", cone},
                {"dim", m.complex_dim}};
    if (m.cone.witness)
        out["witness"] = class_to_json(*m.cone.witness);
    return out;
}

namespace {

json decimal(double x)
{
    return std::isinf(x) ? json("inf") : json(x);
}

}   // namespace

json verdict_to_json(const SingularityVerdict& v)
{
    json out;
    out["t_sing_unnormalized"] = {{"exact", v.t_sing_unnormalized.to_string()},
                                  {"decimal", decimal(v.t_sing_unnormalized.to_double())}};
    out["t_sing_normalized"] = decimal(v.t_sing_normalized);
    out["binding_functionals"] = v.binding_functionals;
    out["residual_class"] = v.residual_class ? class_to_json(*v.residual_class) : json(nullptr);
    out["classification"] = to_string(v.classification);
    return out;
}

namespace {

bool decimals_agree(const json& a, const json& b)
{
    if (a.is_number() && b.is_number())
    {
        const double x = a.get<double>();
        const double y = b.get<double>();
        return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x));
    }
    return a == b;
}

}   // namespace

std::vector<std::string> verdict_diff(const json& golden, const json& actual)
{
    std::vector<std::string> diffs;
    auto report = [&](const std::string& key, const json& want, const json& got) {
        diffs.push_back(key + ": expected " + want.dump() + ", got " + got.dump());
    };
    for (const auto& [key, want] : golden.items())
    {
        const json got = actual.value(key, json());
        if (key == "t_sing_unnormalized")
        {
            if (want.value("exact", json()) != got.value("exact", json()) ||
                !decimals_agree(want.value("decimal", json()), got.value("decimal", json())))
                report(key, want, got);
        }
        else if (key == "t_sing_normalized")
        {
            if (!decimals_agree(want, got))
                report(key, want, got);
        }
        else if (key == "residual_class" && want.is_array() && got.is_array() && want.size() == got.size())
        {
            // Compare values, not spellings.
            for (std::size_t i = 0; i < want.size(); ++i)
                if (!(exact_from_json(want[i]) == exact_from_json(got[i])))
                {
                    report(key, want, got);
                    break;
                }
        }
        else if (want != got)
            report(key, want, got);
    }
    return diffs;
}

}   // namespace krf::cohomology
