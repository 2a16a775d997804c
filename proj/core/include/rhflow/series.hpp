#pragma once

#include <vector>

// Small helpers for sampled time series on non-uniform, strictly increasing
// time grids.
namespace rhflow {

// d/dt by the three-point centered stencil at interior points and one-sided
// second-order stencils at the ends (first-order slope when only two points
// exist).  Differentiating the sampled series keeps the audit independent of
// the evolution equations that produced it.
std::vector<double> time_derivative(const std::vector<double>& t,
                                    const std::vector<double>& y);

}  // namespace rhflow
