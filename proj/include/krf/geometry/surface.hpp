#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace krf::geometry {

/**
 * Punctured surfaces modelled on the cylinder w = x + i theta, x = log(1/|z|).
 * Sphere (no puncture, two caps) is kept for the round-metric checks.
 */
enum class Topology
{
    OnePuncture,
    TwoPuncture,
    Sphere,
};

enum class EndKind
{
    CuspMatch,   // f ~ c / x^2
    SmoothCap,   // f * e^{-+2x} extends smoothly over the cap point
    FlatEnd,     // f -> const (Ricci-flat cylinder end)
};

struct EndCondition
{
    EndKind kind = EndKind::CuspMatch;
    double c = 1.0;   // cusp constant, CuspMatch only

    static EndCondition cusp(double c) { return {EndKind::CuspMatch, c}; }
    static EndCondition cap() { return {EndKind::SmoothCap, 0.0}; }
    static EndCondition flat() { return {EndKind::FlatEnd, 0.0}; }
};

/** Boundary rule for the potential u at cusp and flat ends; caps always use the regularity fit. */
enum class PotentialBoundary
{
    Neumann,
    Dirichlet,
};

/** Uniform grid x_i = x0 + i h, i = 0..n (n intervals, n + 1 samples). */
struct Grid
{
    double x0 = 0.0;
    double h = 1.0;
    std::size_t n = 0;

    std::size_t points() const { return n + 1; }
    double x(std::ptrdiff_t i) const { return x0 + static_cast<double>(i) * h; }
    double x_end() const { return x(static_cast<std::ptrdiff_t>(n)); }
    std::vector<double> nodes() const;
};

class SurfaceModel
{
    public:
        SurfaceModel() = default;

        /** Throws InvalidModel on bad grids or end conditions that do not fit the topology. */
        static SurfaceModel create(Topology topology, double x_min, double x_max, std::size_t n, EndCondition left,
                                   EndCondition right);

        Topology topology() const { return topology_; }
        const Grid& grid() const { return grid_; }
        const EndCondition& left() const { return left_; }
        const EndCondition& right() const { return right_; }

        SurfaceModel with_ends(EndCondition left, EndCondition right) const;
        /** Sub-model on samples [first, last]; end conditions are kept. */
        SurfaceModel trimmed(std::size_t first, std::size_t last) const;

        std::string describe() const;

    private:
        SurfaceModel(Topology t, Grid g, EndCondition l, EndCondition r) : topology_(t), grid_(g), left_(l), right_(r) {}

        Topology topology_ = Topology::OnePuncture;
        Grid grid_;
        EndCondition left_ = EndCondition::cap();
        EndCondition right_;
};

std::string to_string(Topology t);
std::string to_string(const EndCondition& e);
Topology topology_from_string(const std::string& text);

enum class Field
{
    LogMetric,   // log f
    Potential,   // u
};

/**
 * Samples padded with `layers` ghost values on each side, derived from the
 * end conditions:
 *   cusp  (log f): log f + 2 log|x| reflected evenly;
 *   cap   (either field): the regularity fit A + B e^{+-2x} of log f -+ 2x (or u)
 *         through the boundary sample and its neighbour;
 *   flat  (log f): even reflection;
 *   cusp/flat (u): even reflection (Neumann) or odd about the boundary value (Dirichlet).
 */
std::vector<double> extend_with_ghosts(const std::vector<double>& v, const SurfaceModel& model, Field field,
                                       std::size_t layers, PotentialBoundary potential = PotentialBoundary::Neumann);

/** As above, writing into `out` (reuses its storage). */
void extend_with_ghosts(const std::vector<double>& v, const SurfaceModel& model, Field field, std::size_t layers,
                        PotentialBoundary potential, std::vector<double>& out);

}   // namespace krf::geometry
