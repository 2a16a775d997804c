// Sampled-series differentiation and the discrete comparison principle:
// stencil exactness, equality cases of the integral bound, rate fitting on
// analytic series, infeasibility detection, and monotonicity of the verdict.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rhflow/gronwall.hpp"
#include "rhflow/series.hpp"

using namespace rhflow;

namespace {

std::vector<double> sample(const std::vector<double>& t, double (*f)(double)) {
    std::vector<double> y;
    y.reserve(t.size());
    for (double x : t) y.push_back(f(x));
    return y;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
}

}  // namespace

TEST_CASE("time derivative is exact on quadratics, even on uneven grids") {
    const std::vector<double> t = {0.0, 0.1, 0.25, 0.3, 0.55, 0.8};
    std::vector<double> y;
    for (double x : t) y.push_back(3.0 + 2.0 * x - 1.5 * x * x);
    const std::vector<double> d = time_derivative(t, y);
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(d[i] == doctest::Approx(2.0 - 3.0 * t[i]).epsilon(1e-12));
}

TEST_CASE("time derivative converges at second order on smooth data") {
    const auto worst_err = [](std::size_t n) {
        const std::vector<double> t = uniform_grid(0.0, 1.0, n);
        const std::vector<double> d = time_derivative(t, sample(t, [](double x) { return std::sin(3.0 * x); }));
        double worst = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i)
            worst = std::max(worst, std::abs(d[i] - 3.0 * std::cos(3.0 * t[i])));
        return worst;
    };
    const double e1 = worst_err(33);
    const double e2 = worst_err(65);
    CHECK(e1 / e2 > 3.0);
    CHECK(e1 / e2 < 5.0);
}

TEST_CASE("time derivative input validation") {
    CHECK_THROWS_AS(time_derivative({0.0, 1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(time_derivative({0.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(time_derivative({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}),
                    std::invalid_argument);
    // Two samples degrade to the shared slope.
    const std::vector<double> d = time_derivative({0.0, 0.5}, {1.0, 2.0});
    CHECK(d[0] == doctest::Approx(2.0));
    CHECK(d[1] == doctest::Approx(2.0));
}

TEST_CASE("exponential growth saturates the comparison bound") {
    ComparisonProblem prob;
    prob.t = uniform_grid(0.0, 1.0, 101);
    prob.U = sample(prob.t, [](double x) { return std::exp(2.0 * x); });
    prob.F.assign(prob.t.size(), 0.0);
    prob.lambda1 = 2.0;
    prob.lambda2 = 0.0;

    const ComparisonResult res = verify_comparison(prob);
    CHECK(res.pass);
    // The exact integrating factor reproduces e^{2t} with no drift.
    for (std::size_t i = 0; i < prob.t.size(); ++i)
        CHECK(res.bound[i] == doctest::Approx(prob.U[i]).epsilon(1e-9));
}

TEST_CASE("constant series with zero rates sits exactly on the bound") {
    ComparisonProblem prob;
    prob.t = uniform_grid(0.0, 2.0, 21);
    prob.U.assign(prob.t.size(), 3.0);
    prob.F.assign(prob.t.size(), 5.0);

    const ComparisonResult res = verify_comparison(prob);
    CHECK(res.pass);
    for (double b : res.bound) CHECK(b == doctest::Approx(3.0).epsilon(1e-14));
    for (double m : res.margin) CHECK(m == doctest::Approx(0.0));
}

TEST_CASE("pure forcing reproduces the trapezoid integral") {
    // With lambda1 = 0 the bound is U(0) + lambda2 * integral of F; linear
    // forcing makes the trapezoid rule exact.
    ComparisonProblem prob;
    prob.t = uniform_grid(0.0, 1.0, 41);
    prob.F = prob.t;
    prob.U = sample(prob.t, [](double x) { return 0.5 * x * x; });
    prob.lambda1 = 0.0;
    prob.lambda2 = 1.0;

    const ComparisonResult res = verify_comparison(prob);
    CHECK(res.pass);
    for (std::size_t i = 0; i < prob.t.size(); ++i)
        CHECK(res.bound[i] == doctest::Approx(prob.U[i]).epsilon(1e-12));
}

TEST_CASE("fitted rates recover exponential growth") {
    const std::vector<double> t = uniform_grid(0.0, 1.0, 101);
    const std::vector<double> U = sample(t, [](double x) { return std::exp(2.0 * x); });
    const std::vector<double> F(t.size(), 1.0);

    const LambdaFit fit = fit_lambdas(t, U, F);
    CHECK(fit.feasible);
    CHECK(fit.lambda1 == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(std::abs(fit.lambda2) < 1e-3);

    ComparisonProblem prob{t, U, F, fit.lambda1, fit.lambda2};
    CHECK(verify_comparison(prob).pass);
}

TEST_CASE("fitted rates lean on the forcing when growth outruns U near zero") {
    const std::vector<double> t = uniform_grid(0.0, 1.0, 101);
    const std::vector<double> U = t;
    const std::vector<double> F(t.size(), 1.0);

    const LambdaFit fit = fit_lambdas(t, U, F);
    CHECK(fit.feasible);
    CHECK(fit.lambda1 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fit.lambda2 == doctest::Approx(1.0).epsilon(1e-3));

    ComparisonProblem prob{t, U, F, fit.lambda1, fit.lambda2};
    CHECK(verify_comparison(prob).pass);
}

TEST_CASE("growth with neither U nor F to carry it is infeasible") {
    const std::vector<double> t = {0.0, 0.1, 0.2, 0.3, 0.4};
    const std::vector<double> U = {0.0, 0.0, 0.05, 0.1, 0.15};
    const std::vector<double> F(t.size(), 0.0);

    const LambdaFit fit = fit_lambdas(t, U, F);
    CHECK_FALSE(fit.feasible);
}

TEST_CASE("identically zero series fits zero rates") {
    const std::vector<double> t = uniform_grid(0.0, 1.0, 11);
    const std::vector<double> U(t.size(), 0.0);
    const std::vector<double> F(t.size(), 1.0);

    const LambdaFit fit = fit_lambdas(t, U, F);
    CHECK(fit.feasible);
    CHECK(fit.lambda1 == 0.0);
    CHECK(fit.lambda2 == 0.0);
    CHECK(verify_comparison({t, U, F, 0.0, 0.0}).pass);
}

TEST_CASE("enlarging either rate never flips a pass into a fail") {
    const std::vector<double> t = uniform_grid(0.0, 1.0, 51);
    const std::vector<double> U = sample(t, [](double x) { return 1.0 + x * x; });
    const std::vector<double> F = sample(t, [](double x) { return 1.0 + std::sin(x); });

    const LambdaFit fit = fit_lambdas(t, U, F);
    CHECK(fit.feasible);
    CHECK(verify_comparison({t, U, F, fit.lambda1, fit.lambda2}).pass);
    CHECK(verify_comparison({t, U, F, fit.lambda1 + 0.7, fit.lambda2}).pass);
    CHECK(verify_comparison({t, U, F, fit.lambda1, fit.lambda2 + 0.7}).pass);
    CHECK(verify_comparison({t, U, F, fit.lambda1 + 0.7, fit.lambda2 + 0.7}).pass);
}

TEST_CASE("comparison input validation") {
    ComparisonProblem prob;
    prob.t = {0.0, 1.0};
    prob.U = {1.0, 1.0};
    prob.F = {0.0};
    CHECK_THROWS_AS(verify_comparison(prob), std::invalid_argument);

    prob.F = {0.0, 0.0};
    prob.U = {-1.0, 1.0};
    CHECK_THROWS_AS(verify_comparison(prob), std::invalid_argument);

    prob.U = {1.0, 1.0};
    prob.t = {1.0, 1.0};
    CHECK_THROWS_AS(verify_comparison(prob), std::invalid_argument);
}
