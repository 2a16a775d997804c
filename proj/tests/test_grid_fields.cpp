// Lattice, stencil, quadrature and small-matrix kernels against analytic
// values: these primitives back every geometric quantity downstream, so the
// tolerances here are the base of the whole tolerance ladder.
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "rhflow/calculus.hpp"
#include "rhflow/field.hpp"
#include "rhflow/grid.hpp"
#include "rhflow/symmat.hpp"

using namespace rhflow;

namespace {

ScalarField sample(const Grid& g, double (*f)(double, double)) {
    ScalarField out(g);
    std::size_t p = 0;
    for (int k = 0; k < g.n(2); ++k)
        for (int j = 0; j < g.n(1); ++j)
            for (int i = 0; i < g.n(0); ++i, ++p)
                out[p] = f(g.coord(0, i), g.coord(1, j));
    return out;
}

double max_err(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("grid construction and guards") {
    const Grid g = Grid::cube(2, 64);
    CHECK(g.h(0) == doctest::Approx(kTwoPi / 64).epsilon(1e-15));
    CHECK(g.size() == 64 * 64);

    const Grid g3 = Grid::cube(3, 16);
    CHECK(g3.size() == 4096);

    CHECK_THROWS_AS(Grid::cube(4, 16), std::invalid_argument);
    CHECK_THROWS_AS(Grid::cube(2, 4), std::invalid_argument);
    CHECK_THROWS_AS(Grid(2, {16, 16, 1}, {-1.0, kTwoPi, 0.0}), std::invalid_argument);

    // Wrap tables invert each other on every axis.
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < g.n(a); ++i) {
            CHECK(g.minus(a, g.plus(a, i)) == i);
            CHECK(g.plus(a, g.minus(a, i)) == i);
        }
}

TEST_CASE("centered derivative: analytic error and O(h^2) refinement") {
    const Grid g64 = Grid::cube(2, 64);
    const Grid g128 = Grid::cube(2, 128);

    auto check_axis_error = [](const Grid& g, double expected_bound) {
        ScalarField f = sample(g, [](double x, double) { return std::sin(x); });
        ScalarField exact = sample(g, [](double x, double) { return std::cos(x); });
        ScalarField d;
        partial(g, f, 0, d);
        const double err = max_err(d, exact);
        CHECK(err > 0.0);
        CHECK(err <= expected_bound);
        return err;
    };

    // Max error of the centered stencil on sin is (1 − sin h/h); 1.6e−3 at N=64.
    const double e64 = check_axis_error(g64, 2e-3);
    const double e128 = check_axis_error(g128, 5e-4);
    CHECK(e64 / e128 > 3.0);
    CHECK(e64 / e128 < 5.0);

    // Doubling the frequency quadruples the relative error at fixed N: the
    // centered stencil's relative error on sin(kx) is 1 − sin(kh)/(kh) ~ (kh)²/6.
    ScalarField f2 = sample(g64, [](double x, double) { return std::sin(2.0 * x); });
    ScalarField exact2 = sample(g64, [](double x, double) { return 2.0 * std::cos(2.0 * x); });
    ScalarField d2;
    partial(g64, f2, 0, d2);
    const double rel2 = max_err(d2, exact2) / 2.0;
    CHECK(rel2 / e64 > 3.0);
    CHECK(rel2 / e64 < 5.0);

    // Constants differentiate to exactly zero.
    ScalarField c(g64, 3.7);
    ScalarField dc;
    partial(g64, c, 1, dc);
    CHECK(max_abs(dc) <= 1e-14);

    // Pure and mixed second derivatives.
    ScalarField fxy = sample(g64, [](double x, double y) { return std::sin(x) * std::cos(y); });
    ScalarField dxx, dxy;
    partial2(g64, fxy, 0, 0, dxx);
    partial2(g64, fxy, 0, 1, dxy);
    ScalarField exact_xx =
        sample(g64, [](double x, double y) { return -std::sin(x) * std::cos(y); });
    ScalarField exact_xy =
        sample(g64, [](double x, double y) { return -std::cos(x) * std::sin(y); });
    CHECK(max_err(dxx, exact_xx) < 4e-3);
    CHECK(max_err(dxy, exact_xy) < 4e-3);
}

TEST_CASE("quadrature on the periodic lattice") {
    const Grid g = Grid::cube(2, 64);

    ScalarField one(g, 1.0);
    CHECK(integrate(g, one) == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-13));

    ScalarField s = sample(g, [](double x, double) { return std::sin(x); });
    CHECK(std::abs(integrate(g, s)) < 1e-12);

    // Volume against a uniformly scaled metric: √det(4·I) = 4.
    ScalarField sqrt_det(g, 4.0);
    CHECK(integrate(g, one, sqrt_det) ==
          doctest::Approx(4.0 * kTwoPi * kTwoPi).epsilon(1e-13));

    // Discrete divergence theorem: centered differences of any periodic field
    // telescope to zero exactly.
    ScalarField f = sample(g, [](double x, double y) {
        return std::exp(std::sin(x)) * std::cos(2.0 * y);
    });
    ScalarField df;
    partial(g, f, 0, df);
    CHECK(std::abs(integrate(g, df)) < 1e-12 * integrate(g, one));
    partial(g, f, 1, df);
    CHECK(std::abs(integrate(g, df)) < 1e-12 * integrate(g, one));
}

TEST_CASE("compensated summation survives cancellation") {
    const double vals[3] = {1e16, 1.0, -1e16};
    CHECK(compensated_sum(vals, 3) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("packed symmetric kernels: inverse, Cholesky, eigenvalues") {
    std::mt19937 rng(20260817);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    for (int dim : {2, 3}) {
        const int nc = sym::comp_count(dim);
        for (int trial = 0; trial < 50; ++trial) {
            // Random SPD matrix: MᵀM + I.
            double m[9];
            for (int i = 0; i < dim * dim; ++i) m[i] = unif(rng);
            double a[6] = {0, 0, 0, 0, 0, 0};
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j <= i; ++j) {
                    double s = (i == j) ? 1.0 : 0.0;
                    for (int k = 0; k < dim; ++k) s += m[k * dim + i] * m[k * dim + j];
                    a[sym::idx(i, j)] = s;
                }
            CHECK(sym::is_spd(dim, a));

            double inv[6], id_err = 0.0;
            REQUIRE(sym::invert(dim, a, inv));
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < dim; ++k)
                        s += a[sym::idx(i, k)] * inv[sym::idx(k, j)];
                    id_err = std::max(id_err, std::abs(s - (i == j ? 1.0 : 0.0)));
                }
            CHECK(id_err < 1e-12);

            double lower[9];
            REQUIRE(sym::cholesky(dim, a, lower));
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j <= i; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < dim; ++k) s += lower[i * dim + k] * lower[j * dim + k];
                    CHECK(s == doctest::Approx(a[sym::idx(i, j)]).epsilon(1e-12));
                }

            // Eigenvalue range brackets the Rayleigh quotient of random vectors.
            double lmin, lmax;
            sym::eig_range(dim, a, lmin, lmax);
            CHECK(lmin > 0.0);
            CHECK(lmax >= lmin);
            for (int probe = 0; probe < 8; ++probe) {
                double v[3] = {0, 0, 0};
                double n2 = 0.0;
                for (int i = 0; i < dim; ++i) {
                    v[i] = unif(rng);
                    n2 += v[i] * v[i];
                }
                double q = 0.0;
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j) q += v[i] * a[sym::idx(i, j)] * v[j];
                q /= n2;
                CHECK(q >= lmin - 1e-10);
                CHECK(q <= lmax + 1e-10);
            }

            // Pencil (a, a) has unit eigenvalues.
            REQUIRE(sym::gen_eig_range(dim, a, a, lmin, lmax));
            CHECK(lmin == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(lmax == doctest::Approx(1.0).epsilon(1e-10));

            // Frame norm equals the explicit g-contraction for a random
            // symmetric 2-tensor.
            double t[6];
            for (int c = 0; c < nc; ++c) t[c] = unif(rng);
            double dense[9];
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) dense[i * dim + j] = t[sym::idx(i, j)];
            double linv[9];
            sym::invert_lower(dim, lower, linv);
            const double via_frame = sym::frame_norm2(dim, linv, dense, 2);
            double via_contraction = 0.0;
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    for (int k = 0; k < dim; ++k)
                        for (int l = 0; l < dim; ++l)
                            via_contraction += inv[sym::idx(i, k)] * inv[sym::idx(j, l)] *
                                               t[sym::idx(i, j)] * t[sym::idx(k, l)];
            CHECK(via_frame == doctest::Approx(via_contraction).epsilon(1e-10));

            // |g|²_g = dim.
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) dense[i * dim + j] = a[sym::idx(i, j)];
            CHECK(sym::frame_norm2(dim, linv, dense, 2) ==
                  doctest::Approx(static_cast<double>(dim)).epsilon(1e-10));
        }
    }
}

TEST_CASE("SPD screening locates the offending point") {
    const Grid g = Grid::cube(2, 8);
    SymTensorField field(g, 2);
    for (std::size_t p = 0; p < g.size(); ++p) {
        field.at(p)[0] = 1.0;
        field.at(p)[2] = 1.0;
    }
    CHECK(!sym::first_non_spd(g, field).has_value());
    field.at(g.index(3, 5))[0] = -0.5;
    auto bad = sym::first_non_spd(g, field);
    REQUIRE(bad.has_value());
    CHECK(*bad == g.index(3, 5));
}
