#include "rhflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

#include "rhflow/symmat.hpp"

namespace rhflow {

namespace {

// y = base + s·x, elementwise; y is resized to match.
void staged(std::vector<double>& y, const std::vector<double>& base, double s,
            const std::vector<double>& x) {
    y.resize(base.size());
    for (std::size_t n = 0; n < base.size(); ++n) y[n] = base[n] + s * x[n];
}

std::optional<std::size_t> first_non_finite(const std::vector<double>& v,
                                            std::size_t stride) {
    for (std::size_t n = 0; n < v.size(); ++n) {
        if (!std::isfinite(v[n])) return n / stride;
    }
    return std::nullopt;
}

std::size_t argmin_eig_point(const Grid& grid, const MetricField& g) {
    const int dim = grid.dim();
    double best = std::numeric_limits<double>::infinity();
    std::size_t where = 0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        double lo = 0.0;
        double hi = 0.0;
        sym::eig_range(dim, g.at(p), lo, hi);
        if (lo < best) {
            best = lo;
            where = p;
        }
    }
    return where;
}

}  // namespace

bool flow_rhs(const Grid& grid, const MetricField& g, const ScalarField& u,
              SymTensorField& dg, ScalarField& du, FlowScratch& scratch) {
    if (!compute_geometry(grid, g, scratch.geo)) return false;
    scalar_laplacian(grid, u, scratch.geo.inv, scratch.geo.gamma, scratch.lap);

    const int dim = grid.dim();
    dg.assign(grid, dim);
    du.assign(grid);

    double inv2h[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) inv2h[a] = 1.0 / (2.0 * grid.h(a));

    const int nx = grid.n(0);
    const int ny = grid.n(1);
    const int nz = grid.n(2);
    const double* ud = u.data.data();

    for (int k = 0; k < nz; ++k) {
        const int kp = grid.plus(2, k);
        const int km = grid.minus(2, k);
        for (int j = 0; j < ny; ++j) {
            const std::size_t row = grid.index(0, j, k);
            const std::size_t row_jp = grid.index(0, grid.plus(1, j), k);
            const std::size_t row_jm = grid.index(0, grid.minus(1, j), k);
            const std::size_t row_kp = grid.index(0, j, kp);
            const std::size_t row_km = grid.index(0, j, km);
            for (int i = 0; i < nx; ++i) {
                const std::size_t p = row + i;
                double d[3] = {0.0, 0.0, 0.0};
                d[0] = (ud[row + grid.plus(0, i)] - ud[row + grid.minus(0, i)]) * inv2h[0];
                d[1] = (ud[row_jp + i] - ud[row_jm + i]) * inv2h[1];
                if (dim == 3) d[2] = (ud[row_kp + i] - ud[row_km + i]) * inv2h[2];

                const double* ric = scratch.geo.ric.at(p);
                double* out = dg.at(p);
                for (int a = 0; a < dim; ++a) {
                    for (int b = 0; b <= a; ++b) {
                        const int c = sym::idx(a, b);
                        out[c] = -2.0 * ric[c] + 4.0 * d[a] * d[b];
                    }
                }
                du[p] = scratch.lap[p];
            }
        }
    }
    return true;
}

double stable_dt(const Grid& grid, const MetricField& g, double sigma) {
    const int dim = grid.dim();
    double lmin = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < g.points(); ++p) {
        double lo = 0.0;
        double hi = 0.0;
        sym::eig_range(dim, g.at(p), lo, hi);
        lmin = std::min(lmin, lo);
    }
    if (!(lmin > 0.0)) return 0.0;
    const double h = grid.min_h();
    return sigma * h * h * lmin / (2.0 * dim);
}

double sup_grad_norm2(const Grid& grid, const MetricField& g, const ScalarField& u) {
    const int dim = grid.dim();
    double inv2h[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) inv2h[a] = 1.0 / (2.0 * grid.h(a));

    const int nx = grid.n(0);
    const int ny = grid.n(1);
    const int nz = grid.n(2);
    const double* ud = u.data.data();
    double sup = 0.0;

    for (int k = 0; k < nz; ++k) {
        const int kp = grid.plus(2, k);
        const int km = grid.minus(2, k);
        for (int j = 0; j < ny; ++j) {
            const std::size_t row = grid.index(0, j, k);
            const std::size_t row_jp = grid.index(0, grid.plus(1, j), k);
            const std::size_t row_jm = grid.index(0, grid.minus(1, j), k);
            const std::size_t row_kp = grid.index(0, j, kp);
            const std::size_t row_km = grid.index(0, j, km);
            for (int i = 0; i < nx; ++i) {
                const std::size_t p = row + i;
                double d[3] = {0.0, 0.0, 0.0};
                d[0] = (ud[row + grid.plus(0, i)] - ud[row + grid.minus(0, i)]) * inv2h[0];
                d[1] = (ud[row_jp + i] - ud[row_jm + i]) * inv2h[1];
                if (dim == 3) d[2] = (ud[row_kp + i] - ud[row_km + i]) * inv2h[2];

                double inv[6];
                if (!sym::invert(dim, g.at(p), inv)) {
                    return std::numeric_limits<double>::infinity();
                }
                double s = 0.0;
                for (int a = 0; a < dim; ++a) {
                    for (int b = 0; b < dim; ++b) s += inv[sym::idx(a, b)] * d[a] * d[b];
                }
                sup = std::max(sup, s);
            }
        }
    }
    return sup;
}

Trajectory evolve(const Grid& grid, const MetricField& g0, const ScalarField& u0,
                  const FlowOptions& options) {
    if (!(options.t_max > 0.0)) throw std::invalid_argument("flow: t_max must be positive");
    if (!(options.dt > 0.0)) throw std::invalid_argument("flow: dt must be positive");
    if (!(options.cfl_sigma > 0.0)) {
        throw std::invalid_argument("flow: cfl_sigma must be positive");
    }
    if (options.snapshot_stride < 1) {
        throw std::invalid_argument("flow: snapshot_stride must be >= 1");
    }
    if (g0.points() != grid.size() || u0.size() != grid.size()) {
        throw std::invalid_argument("flow: initial data does not match the grid");
    }
    if (auto bad = sym::first_non_spd(grid, g0)) {
        throw std::invalid_argument("flow: initial metric not SPD at point " +
                                    std::to_string(*bad));
    }

    Trajectory traj;
    traj.grid = grid;

    MetricField g = g0;
    ScalarField u = u0;

    FlowScratch scratch;
    SymTensorField k1g, k2g, k3g, k4g, gtmp;
    ScalarField k1u, k2u, k3u, k4u, utmp;
    gtmp.ncomp = g.ncomp;

    traj.snaps.push_back({0.0, g, u});
    traj.step_t.push_back(0.0);
    traj.sup_grad_u2.push_back(sup_grad_norm2(grid, g, u));

    const double t_end = options.t_max;
    double t = 0.0;
    long step = 0;

    while (t < t_end) {
        const double bound = stable_dt(grid, g, options.cfl_sigma);
        double dt_eff = std::min(options.dt, bound);
        const double remaining = t_end - t;
        double t_next;
        if (dt_eff >= remaining) {
            dt_eff = remaining;
            t_next = t_end;
        } else {
            if (bound < options.dt) traj.dt_clamped = true;
            t_next = t + dt_eff;
        }
        // A collapsed step bound means an eigenvalue reached roundoff scale
        // while the strict minor test still passes; that is a degeneration,
        // not a configuration error.
        if (!(dt_eff > 0.0) || t_next == t) {
            traj.status = FlowStatus::singular;
            traj.singular_t = t;
            traj.singular_point = argmin_eig_point(grid, g);
            break;
        }

        // Classical RK4; a stage that leaves the SPD cone aborts the step
        // with the state untouched, so the last good history is kept.
        const auto stage_failed = [&](double at) {
            traj.status = FlowStatus::singular;
            traj.singular_t = at;
            traj.singular_point = scratch.geo.bad_point.value_or(0);
        };
        if (!flow_rhs(grid, g, u, k1g, k1u, scratch)) {
            stage_failed(t);
            break;
        }
        staged(gtmp.data, g.data, 0.5 * dt_eff, k1g.data);
        staged(utmp.data, u.data, 0.5 * dt_eff, k1u.data);
        if (!flow_rhs(grid, gtmp, utmp, k2g, k2u, scratch)) {
            stage_failed(t + 0.5 * dt_eff);
            break;
        }
        staged(gtmp.data, g.data, 0.5 * dt_eff, k2g.data);
        staged(utmp.data, u.data, 0.5 * dt_eff, k2u.data);
        if (!flow_rhs(grid, gtmp, utmp, k3g, k3u, scratch)) {
            stage_failed(t + 0.5 * dt_eff);
            break;
        }
        staged(gtmp.data, g.data, dt_eff, k3g.data);
        staged(utmp.data, u.data, dt_eff, k3u.data);
        if (!flow_rhs(grid, gtmp, utmp, k4g, k4u, scratch)) {
            stage_failed(t + dt_eff);
            break;
        }

        const double w = dt_eff / 6.0;
        for (std::size_t n = 0; n < g.data.size(); ++n) {
            g.data[n] += w * (k1g.data[n] + 2.0 * k2g.data[n] + 2.0 * k3g.data[n] + k4g.data[n]);
        }
        for (std::size_t n = 0; n < u.data.size(); ++n) {
            u.data[n] += w * (k1u.data[n] + 2.0 * k2u.data[n] + 2.0 * k3u.data[n] + k4u.data[n]);
        }

        if (auto bad = sym::first_non_spd(grid, g)) {
            traj.status = FlowStatus::singular;
            traj.singular_t = t_next;
            traj.singular_point = *bad;
            break;
        }
        if (auto bad = first_non_finite(g.data, static_cast<std::size_t>(g.ncomp))) {
            traj.status = FlowStatus::singular;
            traj.singular_t = t_next;
            traj.singular_point = *bad;
            break;
        }
        if (auto bad = first_non_finite(u.data, 1)) {
            traj.status = FlowStatus::singular;
            traj.singular_t = t_next;
            traj.singular_point = *bad;
            break;
        }

        t = t_next;
        ++step;
        traj.step_t.push_back(t);
        traj.sup_grad_u2.push_back(sup_grad_norm2(grid, g, u));
        if (step % options.snapshot_stride == 0 || t >= t_end) {
            traj.snaps.push_back({t, g, u});
        }
    }

    return traj;
}

SupBounds measure_sup_bounds(const Trajectory& trajectory) {
    const Grid& grid = trajectory.grid;
    const int dim = grid.dim();
    SupBounds out;
    GeometryData geo;

    double inv2h[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) inv2h[a] = 1.0 / (2.0 * grid.h(a));
    const int nx = grid.n(0);
    const int ny = grid.n(1);
    const int nz = grid.n(2);

    for (const Snapshot& snap : trajectory.snaps) {
        if (!compute_geometry(grid, snap.g, geo)) {
            throw std::runtime_error("sup bounds: metric not SPD at point " +
                                     std::to_string(geo.bad_point.value_or(0)));
        }
        const double* ud = snap.u.data.data();
        for (int k = 0; k < nz; ++k) {
            const int kp = grid.plus(2, k);
            const int km = grid.minus(2, k);
            for (int j = 0; j < ny; ++j) {
                const std::size_t row = grid.index(0, j, k);
                const std::size_t row_jp = grid.index(0, grid.plus(1, j), k);
                const std::size_t row_jm = grid.index(0, grid.minus(1, j), k);
                const std::size_t row_kp = grid.index(0, j, kp);
                const std::size_t row_km = grid.index(0, j, km);
                for (int i = 0; i < nx; ++i) {
                    const std::size_t p = row + i;

                    double lower[9];
                    sym::cholesky(dim, snap.g.at(p), lower);
                    double linv[9];
                    sym::invert_lower(dim, lower, linv);
                    double ric_dense[9];
                    const double* ric = geo.ric.at(p);
                    for (int a = 0; a < dim; ++a) {
                        for (int b = 0; b < dim; ++b) {
                            ric_dense[a * dim + b] = ric[sym::idx(a, b)];
                        }
                    }
                    out.K = std::max(out.K, std::sqrt(sym::frame_norm2(dim, linv, ric_dense, 2)));

                    double d[3] = {0.0, 0.0, 0.0};
                    d[0] = (ud[row + grid.plus(0, i)] - ud[row + grid.minus(0, i)]) * inv2h[0];
                    d[1] = (ud[row_jp + i] - ud[row_jm + i]) * inv2h[1];
                    if (dim == 3) d[2] = (ud[row_kp + i] - ud[row_km + i]) * inv2h[2];
                    const double* inv = geo.inv.at(p);
                    double s = 0.0;
                    for (int a = 0; a < dim; ++a) {
                        for (int b = 0; b < dim; ++b) s += inv[sym::idx(a, b)] * d[a] * d[b];
                    }
                    out.L = std::max(out.L, std::sqrt(std::max(s, 0.0)));
                }
            }
        }
    }
    return out;
}

}  // namespace rhflow
