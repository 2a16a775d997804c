#include "rhflow/warped.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rhflow/symmat.hpp"

namespace rhflow {

double Profile::operator()(double x) const {
    return c0 + cos_amp * std::cos(cos_k * x) + sin_amp * std::sin(sin_k * x);
}

double Profile::d1(double x) const {
    return -cos_amp * cos_k * std::sin(cos_k * x) + sin_amp * sin_k * std::cos(sin_k * x);
}

double Profile::d2(double x) const {
    return -cos_amp * cos_k * cos_k * std::cos(cos_k * x) -
           sin_amp * sin_k * sin_k * std::sin(sin_k * x);
}

namespace {

void require_positive(const Grid& grid, const Profile& p, const char* name) {
    for (int i = 0; i < grid.n(0); ++i)
        if (!(p(grid.coord(0, i)) > 0.0))
            throw std::invalid_argument(std::string("metric profile ") + name +
                                        " must be positive on the lattice");
}

}  // namespace

MetricField product_metric(const Grid& grid, const Profile& a, const Profile& b) {
    if (grid.dim() != 2) throw std::invalid_argument("product_metric: expected dim 2");
    require_positive(grid, a, "a");
    require_positive(grid, b, "b");
    MetricField g(grid, 2);
    std::size_t p = 0;
    for (int j = 0; j < grid.n(1); ++j)
        for (int i = 0; i < grid.n(0); ++i, ++p) {
            const double x = grid.coord(0, i);
            const double av = a(x), bv = b(x);
            double* gp = g.at(p);
            gp[0] = av * av;
            gp[1] = 0.0;
            gp[2] = bv * bv;
        }
    return g;
}

MetricField product_metric(const Grid& grid, const Profile& a, const Profile& b,
                           const Profile& c) {
    if (grid.dim() != 3) throw std::invalid_argument("product_metric: expected dim 3");
    require_positive(grid, a, "a");
    require_positive(grid, b, "b");
    require_positive(grid, c, "c");
    MetricField g(grid, 3);
    std::size_t p = 0;
    for (int k = 0; k < grid.n(2); ++k)
        for (int j = 0; j < grid.n(1); ++j)
            for (int i = 0; i < grid.n(0); ++i, ++p) {
                const double x = grid.coord(0, i);
                const double av = a(x), bv = b(x), cv = c(x);
                double* gp = g.at(p);
                gp[0] = av * av;
                gp[1] = 0.0;
                gp[2] = bv * bv;
                gp[3] = 0.0;
                gp[4] = 0.0;
                gp[5] = cv * cv;
            }
    return g;
}

MetricField conformal_metric(const Grid& grid, const Profile& v) {
    if (grid.dim() != 2) throw std::invalid_argument("conformal_metric: expected dim 2");
    MetricField g(grid, 2);
    std::size_t p = 0;
    for (int j = 0; j < grid.n(1); ++j)
        for (int i = 0; i < grid.n(0); ++i, ++p) {
            const double factor = std::exp(2.0 * v(grid.coord(0, i)));
            double* gp = g.at(p);
            gp[0] = factor;
            gp[1] = 0.0;
            gp[2] = factor;
        }
    return g;
}

MetricField flat_metric(const Grid& grid, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("flat_metric: scale must be positive");
    MetricField g(grid, grid.dim());
    const std::size_t npts = grid.size();
    for (std::size_t p = 0; p < npts; ++p) {
        double* gp = g.at(p);
        for (int a = 0; a < grid.dim(); ++a) gp[sym::idx(a, a)] = scale;
    }
    return g;
}

ScalarField profile_field(const Grid& grid, const Profile& prof) {
    ScalarField f(grid);
    std::size_t p = 0;
    for (int k = 0; k < grid.n(2); ++k)
        for (int j = 0; j < grid.n(1); ++j)
            for (int i = 0; i < grid.n(0); ++i, ++p) f[p] = prof(grid.coord(0, i));
    return f;
}

}  // namespace rhflow
