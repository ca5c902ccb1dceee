#include "krf/geometry/surface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "krf/error.hpp"

namespace krf::geometry {

std::vector<double> Grid::nodes() const
{
    std::vector<double> out(points());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = x(static_cast<std::ptrdiff_t>(i));
    return out;
}

namespace {

int count(EndKind kind, const EndCondition& a, const EndCondition& b)
{
    return (a.kind == kind) + (b.kind == kind);
}

void check_ends(Topology topology, const EndCondition& left, const EndCondition& right)
{
    for (const auto* e : {&left, &right})
        if (e->kind == EndKind::CuspMatch && !(e->c > 0))
            throw Error(ErrorCode::InvalidModel, "cusp constant must be positive");
    const int caps = count(EndKind::SmoothCap, left, right);
    switch (topology)
    {
        case Topology::OnePuncture:
            if (caps != 1)
                throw Error(ErrorCode::InvalidModel, "a one-puncture model needs exactly one smooth cap");
            break;
        case Topology::TwoPuncture:
            if (caps != 0)
                throw Error(ErrorCode::InvalidModel, "a two-puncture model has no smooth cap");
            break;
        case Topology::Sphere:
            if (caps != 2)
                throw Error(ErrorCode::InvalidModel, "a sphere model has two smooth caps");
            break;
    }
}

}   // namespace

SurfaceModel SurfaceModel::create(Topology topology, double x_min, double x_max, std::size_t n, EndCondition left,
                                  EndCondition right)
{
    if (n < 16)
        throw Error(ErrorCode::InvalidModel, "grid needs N >= 16 intervals, got " + std::to_string(n));
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
        throw Error(ErrorCode::InvalidModel, "grid needs finite x_min < x_max");
    check_ends(topology, left, right);
    return SurfaceModel(topology, Grid{x_min, (x_max - x_min) / static_cast<double>(n), n}, left, right);
}

SurfaceModel SurfaceModel::with_ends(EndCondition left, EndCondition right) const
{
    check_ends(topology_, left, right);
    return SurfaceModel(topology_, grid_, left, right);
}

SurfaceModel SurfaceModel::trimmed(std::size_t first, std::size_t last) const
{
    if (last > grid_.n || last < first + 16)
        throw Error(ErrorCode::InvalidModel, "trimmed grid would have fewer than 16 intervals");
    Grid g{grid_.x(static_cast<std::ptrdiff_t>(first)), grid_.h, last - first};
    return SurfaceModel(topology_, g, left_, right_);
}

std::string SurfaceModel::describe() const
{
    std::ostringstream out;
    out.precision(17);
    out << "topology=" << to_string(topology_) << " x0=" << grid_.x0 << " h=" << grid_.h << " N=" << grid_.n
        << " left=" << to_string(left_) << " right=" << to_string(right_);
    return out.str();
}

std::string to_string(Topology t)
{
    switch (t)
    {
        case Topology::OnePuncture: return "OnePuncture";
        case Topology::TwoPuncture: return "TwoPuncture";
        case Topology::Sphere:      return "Sphere";
    }
    return "Unknown";
}

Topology topology_from_string(const std::string& text)
{
    for (auto t : {Topology::OnePuncture, Topology::TwoPuncture, Topology::Sphere})
        if (to_string(t) == text)
            return t;
    throw Error(ErrorCode::ConfigError, "unknown topology '" + text + "'");
}

std::string to_string(const EndCondition& e)
{
    switch (e.kind)
    {
        case EndKind::CuspMatch:
        {
            std::ostringstream out;
            out.precision(17);
            out << "CuspMatch(" << e.c << ")";
            return out.str();
        }
        case EndKind::SmoothCap: return "SmoothCap";
        case EndKind::FlatEnd:   return "FlatEnd";
    }
    return "Unknown";
}

namespace {

/**
 * Ghosts beyond the left end of v, written to ghost[j - 1] for the point
 * x0 - j h. A right end is handled by the caller through mirroring
 * (reverse samples, x -> -x), which maps every rule onto itself.
 */
void left_ghosts(const std::vector<double>& v, double x0, double h, const EndCondition& end, Field field,
                 PotentialBoundary potential, std::vector<double>& ghost)
{
    const std::size_t layers = ghost.size();
    auto x = [&](std::ptrdiff_t i) { return x0 + static_cast<double>(i) * h; };
    if (end.kind == EndKind::SmoothCap)
    {
        // Regular extension over the cap: (log f - 2x) or u is A + B e^{2x}.
        const double shift = field == Field::LogMetric ? 2.0 : 0.0;
        const double w0 = v[0] - shift * x(0);
        const double w1 = v[1] - shift * x(1);
        const double denom = std::expm1(2.0 * h);
        for (std::size_t j = 1; j <= layers; ++j)
        {
            const double w = w0 - (w1 - w0) * (-std::expm1(-2.0 * h * static_cast<double>(j))) / denom;
            ghost[j - 1] = w + shift * x(-static_cast<std::ptrdiff_t>(j));
        }
        return;
    }
    if (field == Field::LogMetric && end.kind == EndKind::CuspMatch)
    {
        for (std::size_t j = 1; j <= layers; ++j)
        {
            const double xg = x(-static_cast<std::ptrdiff_t>(j));
            const double xi = x(static_cast<std::ptrdiff_t>(j));
            if (xg * x(0) <= 0 || xi * x(0) <= 0)
                throw Error(ErrorCode::DomainContainsZero, "cusp ghost layer crosses x = 0");
            ghost[j - 1] = v[j] + 2.0 * std::log(std::abs(xi)) - 2.0 * std::log(std::abs(xg));
        }
        return;
    }
    const bool odd = field == Field::Potential && potential == PotentialBoundary::Dirichlet;
    for (std::size_t j = 1; j <= layers; ++j)
        ghost[j - 1] = odd ? 2.0 * v[0] - v[j] : v[j];
}

}   // namespace

std::vector<double> extend_with_ghosts(const std::vector<double>& v, const SurfaceModel& model, Field field,
                                       std::size_t layers, PotentialBoundary potential)
{
    std::vector<double> out;
    extend_with_ghosts(v, model, field, layers, potential, out);
    return out;
}

void extend_with_ghosts(const std::vector<double>& v, const SurfaceModel& model, Field field, std::size_t layers,
                        PotentialBoundary potential, std::vector<double>& out)
{
    const Grid& g = model.grid();
    if (v.size() != g.points())
        throw Error(ErrorCode::InvalidInput, "sample count does not match grid");
    if (layers >= v.size() || layers > 8)
        throw Error(ErrorCode::InvalidInput, "too many ghost layers");

    std::vector<double> left(layers), right(layers);
    left_ghosts(v, g.x0, g.h, model.left(), field, potential, left);
    // Mirror the right end (reverse samples, x -> -x) onto the left-end rules.
    std::vector<double> tail(v.rbegin(), v.rbegin() + static_cast<std::ptrdiff_t>(std::min(v.size(), layers + 1)));
    left_ghosts(tail, -g.x_end(), g.h, model.right(), field, potential, right);

    out.resize(v.size() + 2 * layers);
    std::copy(left.rbegin(), left.rend(), out.begin());
    std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(layers));
    std::copy(right.begin(), right.end(), out.begin() + static_cast<std::ptrdiff_t>(layers + v.size()));
}

}   // namespace krf::geometry
