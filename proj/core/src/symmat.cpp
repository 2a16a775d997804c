#include "rhflow/symmat.hpp"

#include <algorithm>
#include <cmath>

namespace rhflow::sym {

namespace {

// Packed -> dense expansion for the small eigenvalue/Cholesky paths.
void to_dense(int dim, const double* a, double m[3][3]) {
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m[i][j] = a[idx(i, j)];
}

// Cyclic Jacobi on a dense symmetric 3x3; rotation order is fixed so the
// result is bit-reproducible.
void jacobi3_eigs(double m[3][3], double eig[3]) {
    for (int sweep = 0; sweep < 32; ++sweep) {
        const double off = std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
        const double scale = std::abs(m[0][0]) + std::abs(m[1][1]) + std::abs(m[2][2]);
        if (off <= 1e-15 * scale) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const double apq = m[p][q];
                if (apq == 0.0) continue;
                const double theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    eig[0] = m[0][0];
    eig[1] = m[1][1];
    eig[2] = m[2][2];
}

}  // namespace

double det(int dim, const double* a) {
    if (dim == 2) return a[0] * a[2] - a[1] * a[1];
    return a[0] * (a[2] * a[5] - a[4] * a[4]) - a[1] * (a[1] * a[5] - a[4] * a[3]) +
           a[3] * (a[1] * a[4] - a[2] * a[3]);
}

bool is_spd(int dim, const double* a) {
    if (!(a[0] > 0.0)) return false;
    const double minor2 = a[0] * a[2] - a[1] * a[1];
    if (!(minor2 > 0.0)) return false;
    if (dim == 2) return true;
    return det(3, a) > 0.0;
}

bool invert(int dim, const double* a, double* out, double* det_out) {
    const double d = det(dim, a);
    if (det_out) *det_out = d;
    if (!(d > 0.0)) return false;
    const double inv_d = 1.0 / d;
    if (dim == 2) {
        out[0] = a[2] * inv_d;
        out[1] = -a[1] * inv_d;
        out[2] = a[0] * inv_d;
        return true;
    }
    // Adjugate of the packed 3x3: a = [[a0,a1,a3],[a1,a2,a4],[a3,a4,a5]].
    out[0] = (a[2] * a[5] - a[4] * a[4]) * inv_d;
    out[1] = (a[3] * a[4] - a[1] * a[5]) * inv_d;
    out[2] = (a[0] * a[5] - a[3] * a[3]) * inv_d;
    out[3] = (a[1] * a[4] - a[3] * a[2]) * inv_d;
    out[4] = (a[1] * a[3] - a[0] * a[4]) * inv_d;
    out[5] = (a[0] * a[2] - a[1] * a[1]) * inv_d;
    return true;
}

bool cholesky(int dim, const double* a, double* lower) {
    double m[3][3];
    to_dense(dim, a, m);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) lower[i * dim + j] = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m[i][j];
            for (int k = 0; k < j; ++k) s -= lower[i * dim + k] * lower[j * dim + k];
            if (i == j) {
                if (!(s > 0.0)) return false;
                lower[i * dim + i] = std::sqrt(s);
            } else {
                lower[i * dim + j] = s / lower[j * dim + j];
            }
        }
    }
    return true;
}

void invert_lower(int dim, const double* lower, double* out) {
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out[i * dim + j] = 0.0;
    for (int i = 0; i < dim; ++i) {
        out[i * dim + i] = 1.0 / lower[i * dim + i];
        for (int j = 0; j < i; ++j) {
            double s = 0.0;
            for (int k = j; k < i; ++k) s += lower[i * dim + k] * out[k * dim + j];
            out[i * dim + j] = -s / lower[i * dim + i];
        }
    }
}

double frame_norm2(int dim, const double* linv, const double* t, int rank) {
    // Contract one slot at a time: out[Ia] = Σ_i in[Ii]·linv[a][i], where the
    // slot being transformed is kept innermost (stride 1) throughout.
    double buf_a[243];
    double buf_b[243];
    std::size_t count = 1;
    for (int r = 0; r < rank; ++r) count *= dim;
    std::copy(t, t + count, buf_a);
    double* src = buf_a;
    double* dst = buf_b;
    const std::size_t prefix = count / dim;
    for (int slot = 0; slot < rank; ++slot) {
        // Transform the innermost index, then rotate it to the outermost
        // position so each slot is innermost exactly once.
        for (std::size_t p = 0; p < prefix; ++p) {
            const double* in = src + p * dim;
            for (int a = 0; a < dim; ++a) {
                double s = 0.0;
                for (int i = 0; i < dim; ++i) s += linv[a * dim + i] * in[i];
                dst[static_cast<std::size_t>(a) * prefix + p] = s;
            }
        }
        std::swap(src, dst);
    }
    double n2 = 0.0;
    for (std::size_t p = 0; p < count; ++p) n2 += src[p] * src[p];
    return n2;
}

void eig_range(int dim, const double* a, double& lmin, double& lmax) {
    if (dim == 2) {
        const double tr = a[0] + a[2];
        const double diff = a[0] - a[2];
        const double disc = std::sqrt(diff * diff + 4.0 * a[1] * a[1]);
        lmin = 0.5 * (tr - disc);
        lmax = 0.5 * (tr + disc);
        return;
    }
    double m[3][3];
    to_dense(3, a, m);
    double eig[3];
    jacobi3_eigs(m, eig);
    lmin = std::min({eig[0], eig[1], eig[2]});
    lmax = std::max({eig[0], eig[1], eig[2]});
}

bool gen_eig_range(int dim, const double* a, const double* b, double& lmin, double& lmax) {
    double lower[9], linv[9];
    if (!cholesky(dim, b, lower)) return false;
    invert_lower(dim, lower, linv);
    // m = L⁻¹ · a · L⁻ᵀ has the eigenvalues of the pencil (a, b).
    double ad[3][3];
    to_dense(dim, a, ad);
    double tmp[3][3];
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += linv[i * dim + k] * ad[k][j];
            tmp[i][j] = s;
        }
    double packed[6];
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += tmp[i][k] * linv[j * dim + k];
            packed[idx(i, j)] = s;
        }
    eig_range(dim, packed, lmin, lmax);
    return true;
}

std::optional<std::size_t> first_non_spd(const Grid& grid, const SymTensorField& field) {
    const std::size_t npts = grid.size();
    for (std::size_t p = 0; p < npts; ++p)
        if (!is_spd(grid.dim(), field.at(p))) return p;
    return std::nullopt;
}

}  // namespace rhflow::sym
