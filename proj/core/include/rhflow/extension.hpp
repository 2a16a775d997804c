#pragma once

#include <cstddef>
#include <vector>

#include "rhflow/curvature.hpp"
#include "rhflow/field.hpp"
#include "rhflow/flow.hpp"
#include "rhflow/grid.hpp"
#include "rhflow/localization.hpp"

// Audits for the comparison function
//     Φ = |Rm| + C_m·|∇u|² + 1,          C_m ≥ 2,
// which controls curvature blow-up: if Φ stays bounded up to the horizon the
// flow extends past it.  The chain of facts checked here, each against the
// recorded snapshots:
//
//   1. heat_bound_fit      □|Rm| ≤ C·(|Rm|² + |∇²u|² + 1), □ = ∂_t − Δ,
//                          with the smallest C the run supports;
//   2. riccati_check       (∂_t − Δ)Φ ≤ C_m·Φ² pointwise;
//   3. energy checks       the localized integral inequality for Φ^{2a} and
//                          its integrated-by-parts form, fitting the minimal
//                          admissible constant per exponent a ≥ 1;
//   4. moser_sup_report    sup Φ over the inner parabolic cylinder together
//                          with the time-uniform averaged L^p size of Φ and
//                          the constant a sup bound of Moser type would carry.
//
// Where ∂_t or Δ is applied to |Rm| the norm is regularized as
// √(|Rm|² + ε²), ε = 1e−8, since the raw norm is only Lipschitz at zeros of
// the tensor.  Integrands and suprema always use the raw norm.
namespace rhflow {

struct PhiField {
    double C_m = 2.0;
    ScalarField field;  // Φ per lattice point, always ≥ 1
};

// Throws std::invalid_argument when C_m < 2; the Riccati inequality needs
// the factor 2 in front of |∇²u|² that only C_m ≥ 2 provides.
PhiField build_phi(const Grid& grid, const CurvaturePack& pack, double C_m);

struct HeatBoundFit {
    double C = 0.0;  // max over interior space-time points of (□|Rm|)₊ / denom
    double witness_t = 0.0;
    std::size_t witness_point = 0;
};

// Time derivatives are centered across snapshot triples, so at least three
// snapshots are required (std::invalid_argument otherwise).
HeatBoundFit heat_bound_fit(const Trajectory& traj);

struct RiccatiCheck {
    bool pass = true;
    double C_m = 0.0;
    // Discretization allowance at the witness point: (Δt + max h²) scaled by
    // the local size of the heat operator.  The verdict is
    // worst_excess ≤ slack, both read at the point where the margin is worst.
    double slack = 0.0;
    double worst_excess = 0.0;  // □Φ − C_m·Φ² at the witness
    double witness_t = 0.0;
    std::size_t witness_point = 0;
};

// Evaluates (∂_t − Δ)Φ ≤ C_m·Φ² at every interior space-time point.  Any
// C_m is accepted so that deliberately small constants can be shown to fail;
// build_phi is the place that enforces C_m ≥ 2 for Φ itself.
RiccatiCheck riccati_check(const Trajectory& traj, double C_m);

struct EnergyCheck {
    double a = 1.0;
    bool feasible = true;
    // Smallest C with  −∫φ²Φ^{2a−1}ΔΦ dV + (1/2a)∫φ²∂_t(Φ^{2a}) dV ≤ C·∫φ²Φ^{2a+1} dV
    // at every interior snapshot.
    double C = 0.0;
    // Smallest C for the integrated-by-parts form
    //   ∫|∇(φΦ^a)|² dV + ½·d/dt ∫φ²Φ^{2a} dV ≤ C·a·∫φ²Φ^{2a+1} dV + ∫|∇φ|²Φ^{2a} dV.
    double C_derived = 0.0;
    std::vector<double> t;            // interior snapshot times
    std::vector<double> lhs;          // stated-form left side per time
    std::vector<double> lhs_derived;  // integrated-by-parts left side per time
    std::vector<double> basis;        // ∫φ²Φ^{2a+1} dV per time
};

// phi_cut is the spatial cutoff (the caller typically builds it supported in
// the half ball).  Throws std::invalid_argument when any a < 1, fewer than
// three snapshots are recorded, or phi_cut does not match the lattice.
std::vector<EnergyCheck> energy_inequality_sweep(const Trajectory& traj,
                                                 const std::vector<double>& a_list,
                                                 const ScalarField& phi_cut, double C_m);
EnergyCheck energy_inequality_check(const Trajectory& traj, double a,
                                    const ScalarField& phi_cut, double C_m);

struct MoserReport {
    double sup_phi = 0.0;   // sup Φ over {d₀ < radius/4} × [T/2, T]
    double sup_phi0 = 0.0;  // sup Φ over the same ball at the first snapshot
    // sup over snapshots of the normalized initial-measure average
    // ( ∫_{B(radius/2)} Φ^p dV₀ / Vol₀(B) )^{1/p}.
    double A = 0.0;
    double Lambda = 0.0;  // normalized curvature-estimate constant fed in
    double C_n = 0.0;     // (1 + Λ) + 3K/ρ² + 3·C_m·L² + 3
    // sup_phi / (1 + C_n + K/ρ² + 1/T): the constant the sup bound would
    // need.  Reported for comparison across runs, never asserted.
    double implied = 0.0;
};

// Throws std::invalid_argument on p ≤ 0 or T_horizon ≤ 0, and
// std::runtime_error when the window [T/2, T] lies beyond the recorded
// history or the inner ball contains no lattice points.
MoserReport moser_sup_report(const Trajectory& traj, const CutoffData& cut, double p,
                             double K, double L, double C_m, double Lambda,
                             double T_horizon);

struct PointwiseBounds {
    // R − 2|∇u|² ≥ −lower_C over all snapshots and points (0 when the scalar
    // quantity never goes negative).
    double lower_C = 0.0;
    // |R − 2|∇u|²| ≤ phi_ratio_C · Φ, fitted as the sup of the ratio.
    double phi_ratio_C = 0.0;
};

PointwiseBounds pointwise_bounds(const Trajectory& traj, double C_m);

struct SupGrowth {
    double C_fit = 0.0;  // max over interior times of (d/dt sup Φ)₊ / sup Φ
    bool pass = true;    // sup Φ(t) ≤ 10·sup Φ(0)·e^{C_fit·t} at every snapshot
    std::vector<double> t;
    std::vector<double> sup_phi;
};

// Throws std::invalid_argument with fewer than two snapshots.
SupGrowth sup_phi_growth(const Trajectory& traj, double C_m);

}  // namespace rhflow
