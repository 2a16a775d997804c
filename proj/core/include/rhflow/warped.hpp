#pragma once

#include "rhflow/field.hpp"
#include "rhflow/grid.hpp"

namespace rhflow {

// One-coordinate profile c0 + ca·cos(ka·x) + cs·sin(ks·x).  This family is
// closed under the symmetry ansatz of the bundled scenarios and has exact
// derivatives, which the closed-form curvature oracles in the tests rely on.
struct Profile {
    double c0 = 1.0;
    double cos_amp = 0.0;
    double cos_k = 1.0;
    double sin_amp = 0.0;
    double sin_k = 1.0;

    double operator()(double x) const;
    double d1(double x) const;
    double d2(double x) const;

    bool operator==(const Profile&) const = default;

    static Profile constant(double c) { return Profile{c, 0.0, 1.0, 0.0, 1.0}; }
};

// diag(a(x)², b(x)²) in 2D; throws when the profiles are not positive on the
// lattice (the metric must stay SPD).
MetricField product_metric(const Grid& grid, const Profile& a, const Profile& b);

// diag(a(x)², b(x)², c(x)²) in 3D.
MetricField product_metric(const Grid& grid, const Profile& a, const Profile& b,
                           const Profile& c);

// Conformally flat e^{2v(x)}·δ in 2D.
MetricField conformal_metric(const Grid& grid, const Profile& v);

MetricField flat_metric(const Grid& grid, double scale = 1.0);

// Samples a profile of the first coordinate as a scalar field.
ScalarField profile_field(const Grid& grid, const Profile& p);

}  // namespace rhflow
