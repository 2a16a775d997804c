// Lattice distance, cutoff, and ball quadrature: axis exactness, wraparound,
// metric scaling, anisotropy envelope, Lipschitz and gradient bounds, and the
// restricted integrals the monitored inequalities localize with.

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "doctest.h"
#include "rhflow/calculus.hpp"
#include "rhflow/curvature.hpp"
#include "rhflow/grid.hpp"
#include "rhflow/localization.hpp"
#include "rhflow/warped.hpp"

using namespace rhflow;

namespace {

double torus_chord(const Grid& grid, std::size_t p, std::size_t q) {
    int pi = 0, pj = 0, pk = 0, qi = 0, qj = 0, qk = 0;
    grid.unpack(p, pi, pj, pk);
    grid.unpack(q, qi, qj, qk);
    double s = 0.0;
    const int pidx[3] = {pi, pj, pk};
    const int qidx[3] = {qi, qj, qk};
    for (int a = 0; a < grid.dim(); ++a) {
        double dx = std::abs(grid.coord(a, pidx[a]) - grid.coord(a, qidx[a]));
        dx = std::min(dx, grid.extent(a) - dx);
        s += dx * dx;
    }
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("flat distances: axis exactness, wraparound, anisotropy envelope") {
    const Grid grid = Grid::cube(2, 64);
    const MetricField g0 = flat_metric(grid);
    const std::size_t origin = grid.index(0, 0);
    const ScalarField d = geodesic_distance(grid, g0, origin);

    CHECK(d[origin] == 0.0);
    CHECK(d[grid.index(32, 0)] == doctest::Approx(kTwoPi / 2.0).epsilon(1e-12));
    // 3/4 of the way around the x loop is reached the short way.
    CHECK(d[grid.index(48, 0)] == doctest::Approx(kTwoPi / 4.0).epsilon(1e-12));
    CHECK(d[grid.index(16, 16)] == doctest::Approx(std::sqrt(2.0) * kTwoPi / 4.0).epsilon(1e-12));

    // Lattice paths cannot beat the straight chord and stay within the
    // knight-neighborhood overestimate (2.8% plus step rounding).
    const double h = grid.h(0);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double chord = torus_chord(grid, origin, p);
        CHECK(d[p] >= chord - 1e-12);
        CHECK(d[p] <= 1.0285 * chord + 2.0 * h);
    }
}

TEST_CASE("uniformly scaled metric scales all distances") {
    const Grid grid = Grid::cube(2, 32);
    const std::size_t origin = grid.index(0, 0);
    const ScalarField d1 = geodesic_distance(grid, flat_metric(grid), origin);
    const ScalarField d4 = geodesic_distance(grid, flat_metric(grid, 4.0), origin);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        CHECK(d4[p] == doctest::Approx(2.0 * d1[p]).epsilon(1e-12));
    }
}

TEST_CASE("cutoff formula and guards") {
    const Grid grid = Grid::cube(2, 8);
    ScalarField d(grid, 0.0);
    const double rho = 0.7;
    const double K = 4.0;
    const double radius = rho / std::sqrt(K);
    d[1] = 0.5 * radius;
    d[2] = radius;
    d[3] = 2.0 * radius;

    const ScalarField phi = cutoff(grid, d, rho, K);
    CHECK(phi[0] == 1.0);
    CHECK(phi[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(phi[2] == 0.0);
    CHECK(phi[3] == 0.0);

    CHECK_THROWS_AS(cutoff(grid, d, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cutoff(grid, d, 1.0, -2.0), std::invalid_argument);
}

TEST_CASE("cutoff support, Lipschitz bound, and discrete gradient bound") {
    const Grid grid = Grid::cube(2, 128);
    Profile b;
    b.c0 = 2.0;
    b.cos_amp = 1.0;
    const MetricField g0 = product_metric(grid, Profile::constant(1.0), b);
    const double rho = 1.0;
    const double K = 1.0;
    const CutoffData cd = build_cutoff(grid, g0, grid.index(0, 0), rho, K);

    CHECK(cd.phi[cd.center] == 1.0);
    CHECK(cd.radius == doctest::Approx(1.0));
    const double slope = std::sqrt(K) / rho;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        CHECK(cd.phi[p] >= 0.0);
        CHECK(cd.phi[p] <= 1.0);
        if (cd.d0[p] >= cd.radius) CHECK(cd.phi[p] == 0.0);
        if (cd.phi[p] > 0.0) CHECK(cd.d0[p] < cd.radius);
    }

    // 1-Lipschitz in d0 (scaled), checked along lattice edges.
    for (int j = 0; j < grid.n(1); ++j) {
        for (int i = 0; i < grid.n(0); ++i) {
            const std::size_t p = grid.index(i, j);
            const std::size_t qx = grid.index(grid.plus(0, i), j);
            const std::size_t qy = grid.index(i, grid.plus(1, j));
            CHECK(std::abs(cd.phi[p] - cd.phi[qx]) <=
                  slope * std::abs(cd.d0[p] - cd.d0[qx]) + 1e-12);
            CHECK(std::abs(cd.phi[p] - cd.phi[qy]) <=
                  slope * std::abs(cd.d0[p] - cd.d0[qy]) + 1e-12);
        }
    }

    // The 10% gradient envelope is a property of the graph's angular
    // resolution, which the 3:1 axis stretch of this metric degrades (the
    // stretched-frame gap reaches 45 degrees and centered differences mix
    // facet slopes at distance-field ridges).  Isotropic metrics stay within
    // 10%; this one is pinned at its measured stretched-frame level.
    GeometryData geo;
    REQUIRE(compute_geometry(grid, g0, geo));
    ScalarField gphi2;
    grad_norm2(grid, cd.phi, geo.inv, gphi2);
    CHECK(std::sqrt(max_value(gphi2)) <= 1.2 * slope);
}

TEST_CASE("isotropic metrics keep the cutoff gradient within 10%") {
    const Grid grid = Grid::cube(2, 128);
    const double slope = 1.0;  // rho = K = 1

    Profile v;
    v.sin_amp = 0.1;
    const MetricField metrics[2] = {flat_metric(grid), conformal_metric(grid, v)};
    for (const MetricField& g0 : metrics) {
        const CutoffData cd = build_cutoff(grid, g0, grid.index(0, 0), 1.0, 1.0);
        GeometryData geo;
        REQUIRE(compute_geometry(grid, g0, geo));
        ScalarField gphi2;
        grad_norm2(grid, cd.phi, geo.inv, gphi2);
        CHECK(std::sqrt(max_value(gphi2)) <= 1.1 * slope);
    }
}

TEST_CASE("ball quadrature on the flat torus") {
    const Grid grid = Grid::cube(2, 256);
    const MetricField g0 = flat_metric(grid);
    const std::size_t origin = grid.index(0, 0);
    const ScalarField d = geodesic_distance(grid, g0, origin);
    const ScalarField ones(grid, 1.0);

    SUBCASE("unit ball area") {
        const double area = ball_volume(grid, d, 1.0, ones);
        CHECK(area == doctest::Approx(3.14159265358979).epsilon(0.03));
    }

    SUBCASE("radius beyond the diameter recovers the total volume") {
        const double vol = ball_volume(grid, d, 10.0, ones);
        CHECK(vol == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-13));
    }

    SUBCASE("constant integrand is linear in the volume") {
        ScalarField f(grid, 2.5);
        const double lhs = ball_integral(grid, f, d, 1.0, ones);
        const double rhs = 2.5 * ball_volume(grid, d, 1.0, ones);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
    }

    SUBCASE("degenerate radii are rejected") {
        CHECK_THROWS_AS(ball_volume(grid, d, 0.5 * grid.h(0), ones), std::invalid_argument);
        CHECK_THROWS_AS(ball_volume(grid, d, -1.0, ones), std::invalid_argument);
        CHECK_THROWS_AS(ball_integral(grid, ones, d, 0.0, ones), std::invalid_argument);
    }
}

TEST_CASE("cutoff powers vanish exactly outside the ball") {
    const Grid grid = Grid::cube(2, 64);
    const MetricField g0 = flat_metric(grid);
    const CutoffData cd = build_cutoff(grid, g0, grid.index(5, 9), 1.0, 1.0);
    const ScalarField ones(grid, 1.0);

    ScalarField w(grid);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double f = 1.0 + std::cos(grid.coord(0, static_cast<int>(p % 64)));
        w[p] = f * std::pow(cd.phi[p], 6.0);
    }
    const double everywhere = integrate(grid, w);
    const double restricted = ball_integral(grid, w, cd.d0, cd.radius, ones);
    CHECK(everywhere == doctest::Approx(restricted).epsilon(1e-14));
}

TEST_CASE("wraparound flag fires when the support radius crosses the torus") {
    const Grid grid = Grid::cube(2, 32);
    const MetricField g0 = flat_metric(grid);

    const CutoffData tight = build_cutoff(grid, g0, grid.index(0, 0), 1.0, 1.0);
    CHECK(tight.inj_estimate == doctest::Approx(kTwoPi / 2.0).epsilon(1e-12));
    CHECK(tight.ball_wraps == false);

    const CutoffData wide = build_cutoff(grid, g0, grid.index(0, 0), 1.0, 0.25);
    CHECK(wide.radius == doctest::Approx(2.0));
    CHECK(wide.ball_wraps == true);
}
