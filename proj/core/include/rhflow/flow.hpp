#pragma once

#include <cstddef>
#include <vector>

#include "rhflow/curvature.hpp"
#include "rhflow/field.hpp"
#include "rhflow/grid.hpp"

// Coupled metric / scalar heat system
//     ∂_t g = −2·Ric + 4·du⊗du,     ∂_t u = Δ_{g(t)} u
// integrated with classical RK4 under a parabolic step-size bound.  Initial
// data stays within the bundled symmetry ansatz (diagonal metrics and u
// depending on one coordinate), which the un-gauged system preserves; no
// gauge fixing is applied so the monitored evolution identities stay exact.
namespace rhflow {

struct FlowOptions {
    double t_max = 1.0;
    double dt = 1e-3;          // requested step, clamped by stable_dt each step
    double cfl_sigma = 1.0;    // multiplier on the parabolic bound
    int snapshot_stride = 1;   // record every k-th accepted step (first/last always)
};

enum class FlowStatus { completed, singular };

struct Snapshot {
    double t = 0.0;
    MetricField g;
    ScalarField u;
};

struct Trajectory {
    Grid grid;
    std::vector<Snapshot> snaps;
    FlowStatus status = FlowStatus::completed;

    // Valid when status == singular; the partial history stays available.
    double singular_t = 0.0;
    std::size_t singular_point = 0;

    // Per accepted step (leading entry is t = 0): time and sup |∇u|².
    std::vector<double> step_t;
    std::vector<double> sup_grad_u2;

    // True when the stability bound forced a step below the requested dt
    // anywhere (the final partial step toward t_max does not count).
    bool dt_clamped = false;
};

struct SupBounds {
    double K = 0.0;  // sup over snapshots and points of |Ric|
    double L = 0.0;  // sup over snapshots and points of |∇u|
};

struct FlowScratch {
    GeometryData geo;
    ScalarField lap;
};

// Right-hand side of the system; false when the metric fails SPD (the
// failing point is left in scratch.geo.bad_point).
bool flow_rhs(const Grid& grid, const MetricField& g, const ScalarField& u,
              SymTensorField& dg, ScalarField& du, FlowScratch& scratch);

// Parabolic stability bound σ·min(h)²·λ_min(g)/(2·dim), with λ_min the
// smallest metric eigenvalue anywhere on the lattice.
double stable_dt(const Grid& grid, const MetricField& g, double sigma);

double sup_grad_norm2(const Grid& grid, const MetricField& g, const ScalarField& u);

// Throws std::invalid_argument on non-SPD initial data; a singularity that
// develops during stepping is reported through Trajectory::status instead.
Trajectory evolve(const Grid& grid, const MetricField& g0, const ScalarField& u0,
                  const FlowOptions& options);

SupBounds measure_sup_bounds(const Trajectory& trajectory);

}  // namespace rhflow
