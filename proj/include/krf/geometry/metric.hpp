#pragma once

#include <iosfwd>
#include <vector>

#include "krf/geometry/surface.hpp"

namespace krf::geometry {

/**
 * i ddbar phi = kappa2 * phi''(x) * (i/2) dw ^ dw-bar for phi = phi(x).
 * Fixed by the Poincare calibration (see calibrate_kappa2).
 */
inline constexpr double kappa2 = 0.5;

/** omega = f(x) (i/2) dw ^ dw-bar on the cylinder w = x + i theta, theta in [0, 2 pi). */
struct ConformalMetric
{
    std::vector<double> f;
};

struct CurvatureProfile
{
    std::vector<double> K;     // Gauss curvature
    std::vector<double> ric;   // Ricci-form coefficient, ric = K f
    double sup_abs_K = 0.0;
};

/** Throws NonPositiveMetric unless every sample is finite and positive. */
void require_positive(const std::vector<double>& f);

/** f = c / x^2. */
ConformalMetric poincare_cusp(double c, const SurfaceModel& model);

/** f = a sech^2(x - x_s): the round sphere of curvature 1/a. */
ConformalMetric round_sphere(double a, double x_s, const SurfaceModel& model);

/** Second-order centred K = -(1/(2f)) (log f)'' with ghost values from the end conditions. */
CurvatureProfile gauss_curvature(const ConformalMetric& g, const SurfaceModel& model);

/**
 * Least-squares constant k with -k (log f)'' = -f on Poincare samples f = 1/x^2
 * of the given grid (x > 0). Tends to kappa2 = 1/2 as h -> 0.
 */
double calibrate_kappa2(const SurfaceModel& model);

/**
 * 2 pi * (trapezoid of f) plus analytic end contributions: 2 pi c/|x| beyond
 * a cusp end and pi f_end beyond a cap. A cusp end on the side of x = 0
 * (e.g. the left end of a window [1, 40]) is a truncation and adds nothing.
 * Throws DivergentTail at a flat end.
 */
double volume(const ConformalMetric& g, const SurfaceModel& model);

/** 2 pi * (trapezoid of f) over the grid only. */
double window_volume(const ConformalMetric& g, const SurfaceModel& model);

/** Geodesic length int sqrt(f) dx across the grid. */
double geodesic_length(const ConformalMetric& g, const SurfaceModel& model);

struct BumpParameters
{
    double volume = 10.0;      // total area of the initial metric
    double center = 1.0;       // x_s of the round base
    double cap_scale = 1.0;    // x_c of the log-log correction; raised until f > 0
};

struct CarlsonGriffithsResult
{
    ConformalMetric metric;
    double cap_scale_used = 0.0;
};

/**
 * Round base R sech^2(x - x_s) plus, at each cusp end with constant c, the
 * coefficient of -c i ddbar log(log^2 |sigma|^{-2}) for the Hermitian metric
 * |sigma|^2 = |z|^2 / (|z|^2 + e^{-2 x_c}), namely c Phi(x) with
 *   L = log(e^{2x} + e^{2 x_c}),  p = 1 / (1 + e^{2(x_c - x)}),
 *   Phi = (4p^2 - 4p(1 - p) L) / L^2  (mirrored for a left cusp).
 * Phi has zero total area, so R = volume / (4 pi). If f is not positive,
 * x_c is raised in steps of 0.25 (the "rescale the Hermitian metric" knob);
 * throws PositivityFailure with the offending x if that does not help.
 */
CarlsonGriffithsResult carlson_griffiths_initial(const SurfaceModel& model, const BumpParameters& bump);

/** CSV with columns x,f,K,ric and a leading '#' header line describing the model. */
void write_snapshot(std::ostream& out, const ConformalMetric& g, const SurfaceModel& model);

}   // namespace krf::geometry
