#include "rhflow/curvature.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "rhflow/symmat.hpp"

namespace rhflow {

namespace {

constexpr int kMaxComp = 6;  // packed symmetric components, dim 3

// Flat indices of the six axis neighbors plus the in-plane corners needed by
// mixed second derivatives; recomputed per point from the wrap tables.
struct Neighbors {
    std::size_t plus[3];
    std::size_t minus[3];

    void load(const Grid& g, int i, int j, int k) {
        const int nx = g.n(0), ny = g.n(1);
        const std::size_t row = (static_cast<std::size_t>(k) * ny + j) * nx;
        const std::size_t row_jp = (static_cast<std::size_t>(k) * ny + g.plus(1, j)) * nx;
        const std::size_t row_jm = (static_cast<std::size_t>(k) * ny + g.minus(1, j)) * nx;
        plus[0] = row + g.plus(0, i);
        minus[0] = row + g.minus(0, i);
        plus[1] = row_jp + i;
        minus[1] = row_jm + i;
        if (g.dim() == 3) {
            const std::size_t row_kp =
                (static_cast<std::size_t>(g.plus(2, k)) * ny + j) * nx;
            const std::size_t row_km =
                (static_cast<std::size_t>(g.minus(2, k)) * ny + j) * nx;
            plus[2] = row_kp + i;
            minus[2] = row_km + i;
        } else {
            plus[2] = minus[2] = row + i;
        }
    }

    // Corner neighbor with offsets ±1 along two distinct axes.
    static std::size_t corner(const Grid& g, int i, int j, int k, int a, int sa, int b,
                              int sb) {
        int c[3] = {i, j, k};
        c[a] = sa > 0 ? g.plus(a, c[a]) : g.minus(a, c[a]);
        c[b] = sb > 0 ? g.plus(b, c[b]) : g.minus(b, c[b]);
        return g.index(c[0], c[1], c[2]);
    }
};

void ensure_geometry_sized(const Grid& grid, GeometryData& out) {
    const int dim = grid.dim();
    const int ncomp = sym::comp_count(dim);
    const std::size_t npts = grid.size();
    const int rm_comp = dim * dim * dim * dim;
    if (out.inv.data.size() != npts * ncomp) out.inv.assign(grid, dim);
    if (out.sqrt_det.size() != npts) out.sqrt_det.assign(grid);
    if (out.gamma.data.size() != npts * static_cast<std::size_t>(dim * ncomp))
        out.gamma.assign(grid, dim * ncomp);
    if (out.rm.data.size() != npts * static_cast<std::size_t>(rm_comp))
        out.rm.assign(grid, rm_comp);
    if (out.ric.data.size() != npts * ncomp) out.ric.assign(grid, dim);
    if (out.scal.size() != npts) out.scal.assign(grid);
    out.bad_point.reset();
}

// Packed second derivatives of a scalar field at one point:
// d2[idx(a,b)] = ∂_a∂_b f.
void scalar_d2_at(const Grid& grid, const double* f, std::size_t p, int i, int j, int k,
                  const Neighbors& nb, double* d2) {
    const int dim = grid.dim();
    const double fc = f[p];
    for (int a = 0; a < dim; ++a) {
        const double invh2 = 1.0 / (grid.h(a) * grid.h(a));
        d2[sym::idx(a, a)] = (f[nb.plus[a]] - 2.0 * fc + f[nb.minus[a]]) * invh2;
        for (int b = 0; b < a; ++b) {
            const double inv4h = 1.0 / (4.0 * grid.h(a) * grid.h(b));
            const double pp = f[Neighbors::corner(grid, i, j, k, a, +1, b, +1)];
            const double pm = f[Neighbors::corner(grid, i, j, k, a, +1, b, -1)];
            const double mp = f[Neighbors::corner(grid, i, j, k, a, -1, b, +1)];
            const double mm = f[Neighbors::corner(grid, i, j, k, a, -1, b, -1)];
            d2[sym::idx(a, b)] = (pp - pm - mp + mm) * inv4h;
        }
    }
}

// Curvature from the Christoffel field, 2D specialization: the projected
// tensor has the single independent component r = P_{0101}; Ric = (r/det)·g.
void riemann_pass_2d(const Grid& grid, const MetricField& g, GeometryData& out) {
    const int nx = grid.n(0), ny = grid.n(1);
    const double* gam = out.gamma.data.data();
    const double inv2h[2] = {1.0 / (2.0 * grid.h(0)), 1.0 / (2.0 * grid.h(1))};
    Neighbors nb;
    std::size_t p = 0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i, ++p) {
            nb.load(grid, i, j, 0);
            const double* gp = g.at(p);
            const double* gm_c = gam + p * 6;
            // F^m_{01k} = ∂_0 Γ^m_{1k} − ∂_1 Γ^m_{0k} + Γ^m_{0q}Γ^q_{1k} − Γ^m_{1q}Γ^q_{0k}
            double F[2][2];
            for (int m = 0; m < 2; ++m) {
                const int base = m * 3;
                for (int k = 0; k < 2; ++k) {
                    const int c1k = sym::idx(1, k);
                    const int c0k = sym::idx(0, k);
                    double v = (gam[nb.plus[0] * 6 + base + c1k] -
                                gam[nb.minus[0] * 6 + base + c1k]) *
                                   inv2h[0] -
                               (gam[nb.plus[1] * 6 + base + c0k] -
                                gam[nb.minus[1] * 6 + base + c0k]) *
                                   inv2h[1];
                    for (int q = 0; q < 2; ++q)
                        v += gm_c[base + sym::idx(0, q)] * gm_c[q * 3 + c1k] -
                             gm_c[base + sym::idx(1, q)] * gm_c[q * 3 + c0k];
                    F[m][k] = v;
                }
            }
            // R⁰_{01kl} = −g_{lm} F^m_{01k}; r = ½(R⁰_{0101} − R⁰_{0110})
            const double r0101 = -(gp[sym::idx(1, 0)] * F[0][0] + gp[sym::idx(1, 1)] * F[1][0]);
            const double r0110 = -(gp[sym::idx(0, 0)] * F[0][1] + gp[sym::idx(0, 1)] * F[1][1]);
            const double r = 0.5 * (r0101 - r0110);
            double* rm = out.rm.at(p);
            for (int c = 0; c < 16; ++c) rm[c] = 0.0;
            rm[0b0101] = r;   // (0,1,0,1)
            rm[0b0110] = -r;  // (0,1,1,0)
            rm[0b1001] = -r;  // (1,0,0,1)
            rm[0b1010] = r;   // (1,0,1,0)
            const double det = gp[0] * gp[2] - gp[1] * gp[1];
            const double kg = r / det;
            double* ric = out.ric.at(p);
            ric[0] = kg * gp[0];
            ric[1] = kg * gp[1];
            ric[2] = kg * gp[2];
            out.scal[p] = 2.0 * kg;
        }
    }
}

// Generic curvature pass (used in 3D): full F tensor, orientation projection,
// and traces.
void riemann_pass_nd(const Grid& grid, const MetricField& g, GeometryData& out) {
    const int dim = grid.dim();
    const int ncomp = sym::comp_count(dim);
    const int gcomp = dim * ncomp;
    const int nx = grid.n(0), ny = grid.n(1), nz = grid.n(2);
    const double* gam = out.gamma.data.data();
    double inv2h[3];
    for (int a = 0; a < dim; ++a) inv2h[a] = 1.0 / (2.0 * grid.h(a));
    Neighbors nb;
    std::size_t p = 0;
    for (int k3 = 0; k3 < nz; ++k3) {
        for (int j3 = 0; j3 < ny; ++j3) {
            for (int i3 = 0; i3 < nx; ++i3, ++p) {
                nb.load(grid, i3, j3, k3);
                const double* gp = g.at(p);
                const double* ivp = out.inv.at(p);
                const double* gm_c = gam + p * gcomp;
                double dgam[3][18];
                for (int a = 0; a < dim; ++a) {
                    const double* fp = gam + nb.plus[a] * gcomp;
                    const double* fm = gam + nb.minus[a] * gcomp;
                    for (int c = 0; c < gcomp; ++c)
                        dgam[a][c] = (fp[c] - fm[c]) * inv2h[a];
                }
                double F[3][3][3][3];  // F[m][i][j][k]
                for (int m = 0; m < dim; ++m)
                    for (int i = 0; i < dim; ++i)
                        for (int j = 0; j < dim; ++j)
                            for (int k = 0; k < dim; ++k) {
                                double v = dgam[i][m * ncomp + sym::idx(j, k)] -
                                           dgam[j][m * ncomp + sym::idx(i, k)];
                                for (int q = 0; q < dim; ++q)
                                    v += gm_c[m * ncomp + sym::idx(i, q)] *
                                             gm_c[q * ncomp + sym::idx(j, k)] -
                                         gm_c[m * ncomp + sym::idx(j, q)] *
                                             gm_c[q * ncomp + sym::idx(i, k)];
                                F[m][i][j][k] = v;
                            }
                // R⁰_{ijkl} = −g_{lm} F^m_{ijk}, then enforce the pair
                // symmetries the continuum tensor has.
                double r0[81];
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        for (int k = 0; k < dim; ++k)
                            for (int l = 0; l < dim; ++l) {
                                double v = 0.0;
                                for (int m = 0; m < dim; ++m)
                                    v -= gp[sym::idx(l, m)] * F[m][i][j][k];
                                r0[((i * dim + j) * dim + k) * dim + l] = v;
                            }
                auto at4 = [dim](const double* t, int i, int j, int k, int l) {
                    return t[((i * dim + j) * dim + k) * dim + l];
                };
                double anti[81];
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        for (int k = 0; k < dim; ++k)
                            for (int l = 0; l < dim; ++l)
                                anti[((i * dim + j) * dim + k) * dim + l] =
                                    0.5 * (at4(r0, i, j, k, l) - at4(r0, i, j, l, k));
                double* rm = out.rm.at(p);
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        for (int k = 0; k < dim; ++k)
                            for (int l = 0; l < dim; ++l)
                                rm[((i * dim + j) * dim + k) * dim + l] =
                                    0.5 * (at4(anti, i, j, k, l) + at4(anti, k, l, i, j));
                double* ric = out.ric.at(p);
                for (int j = 0; j < dim; ++j)
                    for (int l = 0; l <= j; ++l) {
                        double v = 0.0;
                        for (int i = 0; i < dim; ++i)
                            for (int k = 0; k < dim; ++k)
                                v += ivp[sym::idx(i, k)] *
                                     0.5 * (at4(rm, i, j, k, l) + at4(rm, i, l, k, j));
                        ric[sym::idx(j, l)] = v;
                    }
                double sc = 0.0;
                for (int j = 0; j < dim; ++j)
                    for (int l = 0; l < dim; ++l)
                        sc += ivp[sym::idx(j, l)] * ric[sym::idx(j, l)];
                out.scal[p] = sc;
            }
        }
    }
}

}  // namespace

bool compute_geometry(const Grid& grid, const MetricField& g, GeometryData& out) {
    const int dim = grid.dim();
    const int ncomp = sym::comp_count(dim);
    const std::size_t npts = grid.size();
    ensure_geometry_sized(grid, out);

    // Inverse metric and volume density; SPD failure aborts the pass.
    for (std::size_t p = 0; p < npts; ++p) {
        const double* gp = g.at(p);
        if (!sym::is_spd(dim, gp)) {
            out.bad_point = p;
            return false;
        }
        double det = 0.0;
        sym::invert(dim, gp, out.inv.at(p), &det);
        out.sqrt_det[p] = std::sqrt(det);
    }

    // Christoffel symbols Γ^m_{ij} = ½ g^{ml}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij}).
    {
        const int nx = grid.n(0), ny = grid.n(1), nz = grid.n(2);
        double inv2h[3];
        for (int a = 0; a < dim; ++a) inv2h[a] = 1.0 / (2.0 * grid.h(a));
        const double* gd = g.data.data();
        Neighbors nb;
        std::size_t p = 0;
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i, ++p) {
                    nb.load(grid, i, j, k);
                    double dg[3][kMaxComp];
                    for (int a = 0; a < dim; ++a) {
                        const double* fp = gd + nb.plus[a] * ncomp;
                        const double* fm = gd + nb.minus[a] * ncomp;
                        for (int c = 0; c < ncomp; ++c)
                            dg[a][c] = (fp[c] - fm[c]) * inv2h[a];
                    }
                    const double* ivp = out.inv.at(p);
                    double* gm = out.gamma.at(p);
                    for (int m = 0; m < dim; ++m)
                        for (int a = 0; a < dim; ++a)
                            for (int b = 0; b <= a; ++b) {
                                double s = 0.0;
                                for (int l = 0; l < dim; ++l)
                                    s += ivp[sym::idx(m, l)] *
                                         (dg[a][sym::idx(b, l)] + dg[b][sym::idx(a, l)] -
                                          dg[l][sym::idx(a, b)]);
                                gm[m * ncomp + sym::idx(a, b)] = 0.5 * s;
                            }
                }
    }

    if (dim == 2)
        riemann_pass_2d(grid, g, out);
    else
        riemann_pass_nd(grid, g, out);
    return true;
}

void compute_pack(const Grid& grid, const MetricField& g, const ScalarField& u,
                  PackLevel level, CurvaturePack& out) {
    const int dim = grid.dim();
    const int ncomp = sym::comp_count(dim);
    const std::size_t npts = grid.size();
    if (!compute_geometry(grid, g, out.geo))
        throw std::runtime_error("curvature: metric not SPD at point " +
                                 std::to_string(*out.geo.bad_point));

    if (out.du.data.size() != npts * static_cast<std::size_t>(dim)) out.du.assign(grid, dim);
    if (out.grad_u2.size() != npts) out.grad_u2.assign(grid);
    if (out.hess_u.data.size() != npts * ncomp) out.hess_u.assign(grid, dim);
    if (out.hess_u_norm2.size() != npts) out.hess_u_norm2.assign(grid);
    if (out.lap_u.size() != npts) out.lap_u.assign(grid);
    if (out.rm_norm.size() != npts) out.rm_norm.assign(grid);
    if (out.ric_norm2.size() != npts) out.ric_norm2.assign(grid);
    out.has_gradient_norms = (level == PackLevel::full);
    if (out.has_gradient_norms) {
        if (out.grad_ric_norm2.size() != npts) out.grad_ric_norm2.assign(grid);
        if (out.grad_rm_norm2.size() != npts) out.grad_rm_norm2.assign(grid);
    }

    const int nx = grid.n(0), ny = grid.n(1), nz = grid.n(2);
    double inv2h[3];
    for (int a = 0; a < dim; ++a) inv2h[a] = 1.0 / (2.0 * grid.h(a));

    // First derivatives of u, then the covariant Hessian
    // (∇²u)_{ab} = ∂_a∂_b u − Γ^k_{ab} ∂_k u (symmetric by construction).
    {
        const double* ud = u.data.data();
        Neighbors nb;
        std::size_t p = 0;
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i, ++p) {
                    nb.load(grid, i, j, k);
                    double* dup = out.du.at(p);
                    for (int a = 0; a < dim; ++a)
                        dup[a] = (ud[nb.plus[a]] - ud[nb.minus[a]]) * inv2h[a];
                }
        p = 0;
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i, ++p) {
                    nb.load(grid, i, j, k);
                    double d2[kMaxComp];
                    scalar_d2_at(grid, ud, p, i, j, k, nb, d2);
                    const double* gm = out.geo.gamma.at(p);
                    const double* dup = out.du.at(p);
                    double* hp = out.hess_u.at(p);
                    for (int c = 0; c < ncomp; ++c) {
                        double corr = 0.0;
                        for (int m = 0; m < dim; ++m) corr += gm[m * ncomp + c] * dup[m];
                        hp[c] = d2[c] - corr;
                    }
                }
    }

    // Frame-norm pass: one Cholesky per point serves every tensor norm.
    {
        const int rm_comp = dim * dim * dim * dim;
        Neighbors nb;
        std::size_t p = 0;
        for (int k3 = 0; k3 < nz; ++k3)
            for (int j3 = 0; j3 < ny; ++j3)
                for (int i3 = 0; i3 < nx; ++i3, ++p) {
                    const double* gp = g.at(p);
                    const double* ivp = out.geo.inv.at(p);
                    double lower[9], linv[9];
                    if (!sym::cholesky(dim, gp, lower))
                        throw std::runtime_error("curvature: Cholesky failed at point " +
                                                 std::to_string(p));
                    sym::invert_lower(dim, lower, linv);

                    out.rm_norm[p] =
                        std::sqrt(sym::frame_norm2(dim, linv, out.geo.rm.at(p), 4));

                    double dense2[9];
                    const double* ricp = out.geo.ric.at(p);
                    for (int a = 0; a < dim; ++a)
                        for (int b = 0; b < dim; ++b)
                            dense2[a * dim + b] = ricp[sym::idx(a, b)];
                    out.ric_norm2[p] = sym::frame_norm2(dim, linv, dense2, 2);

                    const double* dup = out.du.at(p);
                    double gu2 = 0.0;
                    for (int a = 0; a < dim; ++a)
                        for (int b = 0; b < dim; ++b)
                            gu2 += ivp[sym::idx(a, b)] * dup[a] * dup[b];
                    out.grad_u2[p] = gu2;

                    const double* hp = out.hess_u.at(p);
                    double lap = 0.0;
                    for (int a = 0; a < dim; ++a)
                        for (int b = 0; b < dim; ++b) {
                            dense2[a * dim + b] = hp[sym::idx(a, b)];
                            lap += ivp[sym::idx(a, b)] * hp[sym::idx(a, b)];
                        }
                    out.lap_u[p] = lap;
                    out.hess_u_norm2[p] = sym::frame_norm2(dim, linv, dense2, 2);

                    if (!out.has_gradient_norms) continue;

                    nb.load(grid, i3, j3, k3);
                    const double* gm = out.geo.gamma.at(p);

                    // ∇Ric
                    {
                        double dric[3][kMaxComp];
                        for (int a = 0; a < dim; ++a) {
                            const double* fp = out.geo.ric.at(nb.plus[a]);
                            const double* fm = out.geo.ric.at(nb.minus[a]);
                            for (int c = 0; c < ncomp; ++c)
                                dric[a][c] = (fp[c] - fm[c]) * inv2h[a];
                        }
                        double t3[27];
                        for (int a = 0; a < dim; ++a)
                            for (int i = 0; i < dim; ++i)
                                for (int j = 0; j < dim; ++j) {
                                    double v = dric[a][sym::idx(i, j)];
                                    for (int q = 0; q < dim; ++q)
                                        v -= gm[q * ncomp + sym::idx(a, i)] *
                                                 ricp[sym::idx(q, j)] +
                                             gm[q * ncomp + sym::idx(a, j)] *
                                                 ricp[sym::idx(i, q)];
                                    t3[(a * dim + i) * dim + j] = v;
                                }
                        out.grad_ric_norm2[p] = sym::frame_norm2(dim, linv, t3, 3);
                    }

                    // ∇Rm
                    {
                        const double* rmp = out.geo.rm.at(p);
                        double t5[243];
                        const int d3 = dim * dim * dim;
                        for (int a = 0; a < dim; ++a) {
                            const double* fp = out.geo.rm.at(nb.plus[a]);
                            const double* fm = out.geo.rm.at(nb.minus[a]);
                            for (int e = 0; e < rm_comp; ++e) {
                                const int i = e / d3;
                                const int j = (e / (dim * dim)) % dim;
                                const int kk = (e / dim) % dim;
                                const int l = e % dim;
                                double v = (fp[e] - fm[e]) * inv2h[a];
                                for (int q = 0; q < dim; ++q) {
                                    v -= gm[q * ncomp + sym::idx(a, i)] *
                                         rmp[((q * dim + j) * dim + kk) * dim + l];
                                    v -= gm[q * ncomp + sym::idx(a, j)] *
                                         rmp[((i * dim + q) * dim + kk) * dim + l];
                                    v -= gm[q * ncomp + sym::idx(a, kk)] *
                                         rmp[((i * dim + j) * dim + q) * dim + l];
                                    v -= gm[q * ncomp + sym::idx(a, l)] *
                                         rmp[((i * dim + j) * dim + kk) * dim + q];
                                }
                                t5[a * rm_comp + e] = v;
                            }
                        }
                        out.grad_rm_norm2[p] = sym::frame_norm2(dim, linv, t5, 5);
                    }
                }
    }
}

void covariant_derivative(const Grid& grid, const PackedField& tensor, int rank,
                          const PackedField& gamma, PackedField& out) {
    const int dim = grid.dim();
    const int ncomp = sym::comp_count(dim);
    int count = 1;
    for (int r = 0; r < rank; ++r) count *= dim;
    if (tensor.ncomp != count)
        throw std::invalid_argument("covariant_derivative: rank/component mismatch");
    out.assign(grid, dim * count);

    const int nx = grid.n(0), ny = grid.n(1), nz = grid.n(2);
    double inv2h[3];
    for (int a = 0; a < dim; ++a) inv2h[a] = 1.0 / (2.0 * grid.h(a));
    // dim-power strides of each slot within the dense index.
    int slot_stride[5] = {1, 1, 1, 1, 1};
    for (int s = rank - 1; s >= 0; --s)
        for (int r = s + 1; r < rank; ++r) slot_stride[s] *= dim;

    Neighbors nb;
    std::size_t p = 0;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i, ++p) {
                nb.load(grid, i, j, k);
                const double* tp = tensor.at(p);
                const double* gm = gamma.at(p);
                double* op = out.at(p);
                for (int a = 0; a < dim; ++a) {
                    const double* fp = tensor.at(nb.plus[a]);
                    const double* fm = tensor.at(nb.minus[a]);
                    for (int e = 0; e < count; ++e) {
                        double v = (fp[e] - fm[e]) * inv2h[a];
                        for (int s = 0; s < rank; ++s) {
                            const int is = (e / slot_stride[s]) % dim;
                            const int base = e - is * slot_stride[s];
                            for (int q = 0; q < dim; ++q)
                                v -= gm[q * ncomp + sym::idx(a, is)] *
                                     tp[base + q * slot_stride[s]];
                        }
                        op[a * count + e] = v;
                    }
                }
            }
}

void scalar_laplacian(const Grid& grid, const ScalarField& f, const SymTensorField& inv,
                      const PackedField& gamma, ScalarField& out) {
    const int dim = grid.dim();
    const int ncomp = sym::comp_count(dim);
    const int nx = grid.n(0), ny = grid.n(1), nz = grid.n(2);
    out.data.resize(grid.size());
    double inv2h[3];
    for (int a = 0; a < dim; ++a) inv2h[a] = 1.0 / (2.0 * grid.h(a));
    const double* fd = f.data.data();
    Neighbors nb;
    std::size_t p = 0;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i, ++p) {
                nb.load(grid, i, j, k);
                double d1[3];
                for (int a = 0; a < dim; ++a)
                    d1[a] = (fd[nb.plus[a]] - fd[nb.minus[a]]) * inv2h[a];
                double d2[kMaxComp];
                scalar_d2_at(grid, fd, p, i, j, k, nb, d2);
                const double* ivp = inv.at(p);
                const double* gm = gamma.at(p);
                double lap = 0.0;
                for (int a = 0; a < dim; ++a)
                    for (int b = 0; b < dim; ++b) {
                        const int c = sym::idx(a, b);
                        double corr = 0.0;
                        for (int m = 0; m < dim; ++m) corr += gm[m * ncomp + c] * d1[m];
                        lap += ivp[c] * (d2[c] - corr);
                    }
                out[p] = lap;
            }
}

void grad_norm2(const Grid& grid, const ScalarField& f, const SymTensorField& inv,
                ScalarField& out) {
    const int dim = grid.dim();
    const int nx = grid.n(0), ny = grid.n(1), nz = grid.n(2);
    out.data.resize(grid.size());
    double inv2h[3];
    for (int a = 0; a < dim; ++a) inv2h[a] = 1.0 / (2.0 * grid.h(a));
    const double* fd = f.data.data();
    Neighbors nb;
    std::size_t p = 0;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i, ++p) {
                nb.load(grid, i, j, k);
                double d1[3];
                for (int a = 0; a < dim; ++a)
                    d1[a] = (fd[nb.plus[a]] - fd[nb.minus[a]]) * inv2h[a];
                const double* ivp = inv.at(p);
                double s = 0.0;
                for (int a = 0; a < dim; ++a)
                    for (int b = 0; b < dim; ++b) s += ivp[sym::idx(a, b)] * d1[a] * d1[b];
                out[p] = s;
            }
}

void expand_symmetric(const Grid& grid, const SymTensorField& t, PackedField& out) {
    const int dim = grid.dim();
    out.assign(grid, dim * dim);
    const std::size_t npts = grid.size();
    for (std::size_t p = 0; p < npts; ++p) {
        const double* tp = t.at(p);
        double* op = out.at(p);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) op[a * dim + b] = tp[sym::idx(a, b)];
    }
}

}  // namespace rhflow
