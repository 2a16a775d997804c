#pragma once

#include <cstddef>

#include "rhflow/field.hpp"
#include "rhflow/grid.hpp"

// Whole-field stencil and quadrature primitives: second-order centered
// differences with periodic wrap, and compensated-summation integrals.
// The flow and curvature kernels fuse their own loops for speed; these
// entry points serve the audits and tests.
namespace rhflow {

// Compensated sum (Neumaier variant, which keeps the correction even when a
// later summand exceeds the running total) in fixed storage order, so
// integrals are bit-reproducible run to run.
double compensated_sum(const double* v, std::size_t n);

// Centered first derivative of a strided component: data holds ncomp values
// per point, the derivative of component c along `axis` lands in out.
void partial_strided(const Grid& grid, const double* data, int ncomp, int c, int axis,
                     double* out);

void partial(const Grid& grid, const ScalarField& f, int axis, ScalarField& out);

// Centered second derivative ∂_a∂_b (pure when a == b, mixed otherwise).
void partial2(const Grid& grid, const ScalarField& f, int a, int b, ScalarField& out);

// ∫ f over the coordinate torus (midpoint rule, unit density).
double integrate(const Grid& grid, const ScalarField& f);

// ∫ f dV_g with the volume density √det g supplied pointwise.
double integrate(const Grid& grid, const ScalarField& f, const ScalarField& sqrt_det);

double max_abs(const ScalarField& f);
double max_value(const ScalarField& f);
double min_value(const ScalarField& f);

}  // namespace rhflow
