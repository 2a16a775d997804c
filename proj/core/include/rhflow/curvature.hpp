#pragma once

#include <optional>

#include "rhflow/field.hpp"
#include "rhflow/grid.hpp"

// Discrete Riemannian geometry of one metric snapshot: Christoffel symbols,
// the full curvature tensor with all index symmetries projected, Ricci and
// scalar curvature, covariant derivatives, the covariant Hessian/Laplacian
// of the scalar field, and pointwise orthonormal-frame norms.
//
// Orientation convention, fixed once for the whole code base: with
//   F^m_{ijk} = ∂_i Γ^m_{jk} − ∂_j Γ^m_{ik} + Γ^m_{ip}Γ^p_{jk} − Γ^m_{jp}Γ^p_{ik}
// we set R_{ijkl} = −g_{lm} F^m_{ijk} and Ric_{jl} = g^{ik} R_{ijkl}, which
// makes the round sphere come out with positive Ricci curvature.
namespace rhflow {

// Geometry shared by the flow right-hand side and the full pack.
struct GeometryData {
    SymTensorField inv;    // g^{ij}
    ScalarField sqrt_det;  // volume density
    PackedField gamma;     // Γ^m_{ij}, m major, (ij) packed symmetric
    PackedField rm;        // R_{ijkl}, dense dim^4, symmetries projected
    SymTensorField ric;
    ScalarField scal;

    // First point that failed the SPD check, when compute_geometry fails.
    std::optional<std::size_t> bad_point;
};

// Fills `out` from the metric; returns false (with out.bad_point set) when
// any lattice point is not SPD.  Buffers are reused across calls.
bool compute_geometry(const Grid& grid, const MetricField& g, GeometryData& out);

enum class PackLevel {
    base,  // curvature, u-derivatives, pointwise norms
    full   // base plus |∇Ric|² and |∇Rm|²
};

struct CurvaturePack {
    GeometryData geo;

    PackedField du;            // ∂_i u
    ScalarField grad_u2;       // |∇u|²
    SymTensorField hess_u;     // ∇²u (exactly symmetric)
    ScalarField hess_u_norm2;  // |∇²u|²
    ScalarField lap_u;         // Δu = g^{ij}(∇²u)_{ij}

    ScalarField rm_norm;    // |Rm|
    ScalarField ric_norm2;  // |Ric|²

    ScalarField grad_ric_norm2;  // |∇Ric|², full level only
    ScalarField grad_rm_norm2;   // |∇Rm|², full level only
    bool has_gradient_norms = false;
};

// Throws std::runtime_error when the metric is not SPD somewhere (the pack
// is an observer; the flow integrator reports singularities on its own).
void compute_pack(const Grid& grid, const MetricField& g, const ScalarField& u,
                  PackLevel level, CurvaturePack& out);

// Covariant derivative of a fully covariant dense rank-r tensor field:
// out_{a, i1..ir} = ∂_a T − Σ_s Γ^p_{a i_s} T|_{i_s→p}, new index slowest.
void covariant_derivative(const Grid& grid, const PackedField& tensor, int rank,
                          const PackedField& gamma, PackedField& out);

// Δf = g^{ij}(∂_i∂_j f − Γ^k_{ij} ∂_k f) against precomputed geometry.
void scalar_laplacian(const Grid& grid, const ScalarField& f, const SymTensorField& inv,
                      const PackedField& gamma, ScalarField& out);

// |∇f|² = g^{ij} ∂_i f ∂_j f.
void grad_norm2(const Grid& grid, const ScalarField& f, const SymTensorField& inv,
                ScalarField& out);

// Expands a packed symmetric 2-tensor field to a dense rank-2 PackedField.
void expand_symmetric(const Grid& grid, const SymTensorField& t, PackedField& out);

}  // namespace rhflow
