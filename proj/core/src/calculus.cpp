#include "rhflow/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace rhflow {

double compensated_sum(const double* v, std::size_t n) {
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = v[i];
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

void partial_strided(const Grid& grid, const double* data, int ncomp, int c, int axis,
                     double* out) {
    const int nx = grid.n(0), ny = grid.n(1), nz = grid.n(2);
    const double inv2h = 1.0 / (2.0 * grid.h(axis));
    const std::size_t stride[3] = {static_cast<std::size_t>(ncomp),
                                   static_cast<std::size_t>(ncomp) * nx,
                                   static_cast<std::size_t>(ncomp) * nx * ny};
    std::size_t p = 0;
    for (int k = 0; k < nz; ++k) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i, ++p) {
                const int ijk[3] = {i, j, k};
                const int fwd = grid.plus(axis, ijk[axis]);
                const int bwd = grid.minus(axis, ijk[axis]);
                const std::size_t base = p * ncomp - ijk[axis] * stride[axis];
                const double fp = data[base + fwd * stride[axis] + c];
                const double fm = data[base + bwd * stride[axis] + c];
                out[p] = (fp - fm) * inv2h;
            }
        }
    }
}

void partial(const Grid& grid, const ScalarField& f, int axis, ScalarField& out) {
    out.data.resize(f.size());
    partial_strided(grid, f.data.data(), 1, 0, axis, out.data.data());
}

void partial2(const Grid& grid, const ScalarField& f, int a, int b, ScalarField& out) {
    out.data.resize(f.size());
    const int nx = grid.n(0), ny = grid.n(1), nz = grid.n(2);
    const std::size_t stride[3] = {1, static_cast<std::size_t>(nx),
                                   static_cast<std::size_t>(nx) * ny};
    const double* v = f.data.data();
    std::size_t p = 0;
    if (a == b) {
        const double invh2 = 1.0 / (grid.h(a) * grid.h(a));
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i, ++p) {
                    const int ijk[3] = {i, j, k};
                    const std::size_t base = p - ijk[a] * stride[a];
                    const double fp = v[base + grid.plus(a, ijk[a]) * stride[a]];
                    const double fm = v[base + grid.minus(a, ijk[a]) * stride[a]];
                    out[p] = (fp - 2.0 * v[p] + fm) * invh2;
                }
        return;
    }
    const double inv4h = 1.0 / (4.0 * grid.h(a) * grid.h(b));
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i, ++p) {
                const int ijk[3] = {i, j, k};
                const std::size_t base = p - ijk[a] * stride[a] - ijk[b] * stride[b];
                const std::size_t ap = grid.plus(a, ijk[a]) * stride[a];
                const std::size_t am = grid.minus(a, ijk[a]) * stride[a];
                const std::size_t bp = grid.plus(b, ijk[b]) * stride[b];
                const std::size_t bm = grid.minus(b, ijk[b]) * stride[b];
                out[p] = (v[base + ap + bp] - v[base + ap + bm] - v[base + am + bp] +
                          v[base + am + bm]) *
                         inv4h;
            }
}

double integrate(const Grid& grid, const ScalarField& f) {
    return compensated_sum(f.data.data(), f.size()) * grid.cell_measure();
}

double integrate(const Grid& grid, const ScalarField& f, const ScalarField& sqrt_det) {
    double sum = 0.0;
    double comp = 0.0;
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = f[i] * sqrt_det[i];
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return (sum + comp) * grid.cell_measure();
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.data) m = std::max(m, std::abs(v));
    return m;
}

double max_value(const ScalarField& f) {
    double m = f.data.empty() ? 0.0 : f.data[0];
    for (double v : f.data) m = std::max(m, v);
    return m;
}

double min_value(const ScalarField& f) {
    double m = f.data.empty() ? 0.0 : f.data[0];
    for (double v : f.data) m = std::min(m, v);
    return m;
}

}  // namespace rhflow
