#pragma once

#include <cstddef>

#include "rhflow/field.hpp"
#include "rhflow/grid.hpp"

// Localization apparatus: lattice geodesic distance under the initial metric,
// the Lipschitz cutoff φ = ((ρ/√K − d₀)/(ρ/√K))₊, and quadrature restricted
// to the geodesic ball {d₀ < r}.
namespace rhflow {

struct CutoffData {
    std::size_t center = 0;
    double rho = 0.0;
    double K = 0.0;
    double radius = 0.0;  // ρ/√K, the support radius of φ

    ScalarField d0;
    ScalarField phi;

    // Half the shortest coordinate-axis loop through the center, measured in
    // g0; a proxy for the injectivity radius on the torus.
    double inj_estimate = 0.0;
    // Set when radius exceeds half of inj_estimate: the ball wraps around
    // the torus and overlaps itself, so ball quantities should be read with
    // care.  Reported, never fatal.
    bool ball_wraps = false;
};

// Dijkstra on the periodic lattice graph with edge weight = length of the
// straight edge under the averaged endpoint metric.  The 2D neighborhood is
// the 8 axis/diagonal directions plus the (2,1) and (3,1) families (24
// total), which cuts the worst-case off-axis overestimate from ~8% to ~1.3%
// on isotropic metrics and keeps it near 8% up to a 3:1 axis stretch; 3D
// uses the 26-neighborhood (~8% isotropic).  Edge metrics are sampled at
// endpoints only, so the metric must be resolved by the lattice for the
// lengths to be trustworthy.
ScalarField geodesic_distance(const Grid& grid, const MetricField& g0, std::size_t center);

// Pointwise ((ρ/√K − d₀)/(ρ/√K))₊; throws unless ρ, K > 0.
ScalarField cutoff(const Grid& grid, const ScalarField& d0, double rho, double K);

CutoffData build_cutoff(const Grid& grid, const MetricField& g0, std::size_t center,
                        double rho, double K);

// Quadrature of 1 (resp. f) over {d₀ < r} against the volume density of the
// current metric.  Throws when the radius spans fewer than two lattice
// points (the ball would be the bare center).
double ball_volume(const Grid& grid, const ScalarField& d0, double r,
                   const ScalarField& sqrt_det);
double ball_integral(const Grid& grid, const ScalarField& f, const ScalarField& d0,
                     double r, const ScalarField& sqrt_det);

}  // namespace rhflow
