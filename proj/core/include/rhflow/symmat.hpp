#pragma once

#include <cstddef>
#include <optional>

#include "rhflow/field.hpp"
#include "rhflow/grid.hpp"

// Dense kernels for the pointwise symmetric matrices of a 2- or 3-dimensional
// metric: packed lower-triangle storage, closed-form inverses, Cholesky
// factors for orthonormal frames, and eigenvalue ranges.  Everything operates
// on raw component pointers so the field loops stay allocation-free.
namespace rhflow::sym {

constexpr int comp_count(int dim) { return dim * (dim + 1) / 2; }

// Packed index of (i,j) in the lower triangle, order (00),(10),(11),(20),...
constexpr int idx(int i, int j) {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
}

double det(int dim, const double* a);

// Sylvester criterion on the packed matrix (leading principal minors > 0).
bool is_spd(int dim, const double* a);

// Closed-form inverse of an SPD packed matrix; returns false when the
// determinant is not strictly positive.  det_out may be null.
bool invert(int dim, const double* a, double* out, double* det_out = nullptr);

// Cholesky a = L·Lᵀ with L dense row-major (dim×dim, upper part zeroed);
// returns false when a is not SPD.
bool cholesky(int dim, const double* a, double* lower);

// Inverse of a lower-triangular dense matrix by forward substitution.
void invert_lower(int dim, const double* lower, double* out);

// g-norm of a fully covariant rank-r tensor given dense components t
// (dim^rank entries) and linv = L⁻¹ of the metric's Cholesky factor: each
// slot is pushed into the orthonormal frame, then the entries are summed in
// squares.  rank ≤ 5.
double frame_norm2(int dim, const double* linv, const double* t, int rank);

// Eigenvalue range of a packed symmetric matrix (closed form in 2D, cyclic
// Jacobi in 3D).
void eig_range(int dim, const double* a, double& lmin, double& lmax);

// Eigenvalue range of the pencil (a, b) with b SPD, i.e. of b⁻¹a measured in
// the b-orthonormal frame.  Returns false when b fails Cholesky.
bool gen_eig_range(int dim, const double* a, const double* b, double& lmin, double& lmax);

// First lattice point where the field is not SPD, if any.
std::optional<std::size_t> first_non_spd(const Grid& grid, const SymTensorField& field);

}  // namespace rhflow::sym
