#include "rhflow/localization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rhflow/calculus.hpp"
#include "rhflow/symmat.hpp"

namespace rhflow {

namespace {

struct Offset {
    int d[3];
};

std::vector<Offset> neighborhood(int dim) {
    std::vector<Offset> offs;
    if (dim == 2) {
        for (int dx = -3; dx <= 3; ++dx) {
            for (int dy = -3; dy <= 3; ++dy) {
                if (dx == 0 && dy == 0) continue;
                const int ax = std::abs(dx);
                const int ay = std::abs(dy);
                // axis + diagonal steps plus the (2,1) and (3,1) families;
                // the long moves keep the angular gaps small even when the
                // metric stretches one axis against the other.
                const bool keep = ax + ay == 1 || (std::min(ax, ay) == 1 && std::max(ax, ay) <= 3);
                if (keep) offs.push_back({{dx, dy, 0}});
            }
        }
    } else {
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dz = -1; dz <= 1; ++dz) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    offs.push_back({{dx, dy, dz}});
                }
            }
        }
    }
    return offs;
}

int shifted(const Grid& grid, int axis, int i, int delta) {
    while (delta > 0) {
        i = grid.plus(axis, i);
        --delta;
    }
    while (delta < 0) {
        i = grid.minus(axis, i);
        ++delta;
    }
    return i;
}

double edge_length(int dim, const double* ga, const double* gb, const double* dx) {
    double w2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            const int c = sym::idx(a, b);
            w2 += 0.5 * (ga[c] + gb[c]) * dx[a] * dx[b];
        }
    }
    return std::sqrt(std::max(w2, 0.0));
}

}  // namespace

ScalarField geodesic_distance(const Grid& grid, const MetricField& g0, std::size_t center) {
    if (center >= grid.size()) {
        throw std::invalid_argument("distance: center point outside the lattice");
    }
    if (auto bad = sym::first_non_spd(grid, g0)) {
        throw std::invalid_argument("distance: metric not SPD at point " +
                                    std::to_string(*bad));
    }

    const int dim = grid.dim();
    const std::vector<Offset> offs = neighborhood(dim);

    ScalarField dist(grid, std::numeric_limits<double>::infinity());
    dist[center] = 0.0;

    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    queue.push({0.0, center});

    while (!queue.empty()) {
        const auto [d, p] = queue.top();
        queue.pop();
        if (d > dist[p]) continue;

        int i = 0;
        int j = 0;
        int k = 0;
        grid.unpack(p, i, j, k);
        for (const Offset& off : offs) {
            const int qi = shifted(grid, 0, i, off.d[0]);
            const int qj = shifted(grid, 1, j, off.d[1]);
            const int qk = dim == 3 ? shifted(grid, 2, k, off.d[2]) : 0;
            const std::size_t q = grid.index(qi, qj, qk);

            double dx[3] = {0.0, 0.0, 0.0};
            for (int a = 0; a < dim; ++a) dx[a] = off.d[a] * grid.h(a);
            const double w = edge_length(dim, g0.at(p), g0.at(q), dx);
            const double cand = d + w;
            if (cand < dist[q]) {
                dist[q] = cand;
                queue.push({cand, q});
            }
        }
    }
    return dist;
}

ScalarField cutoff(const Grid& grid, const ScalarField& d0, double rho, double K) {
    if (!(rho > 0.0)) throw std::invalid_argument("cutoff: rho must be positive");
    if (!(K > 0.0)) throw std::invalid_argument("cutoff: K must be positive");

    const double radius = rho / std::sqrt(K);
    ScalarField phi(grid);
    for (std::size_t p = 0; p < d0.size(); ++p) {
        phi[p] = std::max(0.0, 1.0 - d0[p] / radius);
    }
    return phi;
}

CutoffData build_cutoff(const Grid& grid, const MetricField& g0, std::size_t center,
                        double rho, double K) {
    CutoffData out;
    out.center = center;
    out.rho = rho;
    out.K = K;
    out.d0 = geodesic_distance(grid, g0, center);
    out.phi = cutoff(grid, out.d0, rho, K);
    out.radius = rho / std::sqrt(K);

    // Shortest axis-aligned loop through the center under g0.
    int ci = 0;
    int cj = 0;
    int ck = 0;
    grid.unpack(center, ci, cj, ck);
    double shortest = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < grid.dim(); ++axis) {
        double loop = 0.0;
        int idx[3] = {ci, cj, ck};
        for (int s = 0; s < grid.n(axis); ++s) {
            int nxt[3] = {idx[0], idx[1], idx[2]};
            nxt[axis] = grid.plus(axis, idx[axis]);
            const std::size_t p = grid.index(idx[0], idx[1], idx[2]);
            const std::size_t q = grid.index(nxt[0], nxt[1], nxt[2]);
            double dx[3] = {0.0, 0.0, 0.0};
            dx[axis] = grid.h(axis);
            loop += edge_length(grid.dim(), g0.at(p), g0.at(q), dx);
            idx[axis] = nxt[axis];
        }
        shortest = std::min(shortest, loop);
    }
    out.inj_estimate = 0.5 * shortest;
    out.ball_wraps = out.radius > 0.5 * out.inj_estimate;
    return out;
}

namespace {

double restricted_sum(const Grid& grid, const ScalarField* f, const ScalarField& d0,
                      double r, const ScalarField& sqrt_det, const char* what) {
    if (!(r > 0.0)) {
        throw std::invalid_argument(std::string(what) + ": radius must be positive");
    }
    std::size_t inside = 0;
    double acc = 0.0;
    double comp = 0.0;
    for (std::size_t p = 0; p < d0.size(); ++p) {
        if (!(d0[p] < r)) continue;
        ++inside;
        const double term = (f ? (*f)[p] : 1.0) * sqrt_det[p];
        const double next = acc + term;
        if (std::abs(acc) >= std::abs(term)) {
            comp += (acc - next) + term;
        } else {
            comp += (term - next) + acc;
        }
        acc = next;
    }
    if (inside < 2) {
        throw std::invalid_argument(std::string(what) + ": radius " + std::to_string(r) +
                                    " spans fewer than two lattice points");
    }
    return (acc + comp) * grid.cell_measure();
}

}  // namespace

double ball_volume(const Grid& grid, const ScalarField& d0, double r,
                   const ScalarField& sqrt_det) {
    return restricted_sum(grid, nullptr, d0, r, sqrt_det, "ball_volume");
}

double ball_integral(const Grid& grid, const ScalarField& f, const ScalarField& d0,
                     double r, const ScalarField& sqrt_det) {
    return restricted_sum(grid, &f, d0, r, sqrt_det, "ball_integral");
}

}  // namespace rhflow
