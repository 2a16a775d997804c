#include "rhflow/extension.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rhflow/calculus.hpp"
#include "rhflow/series.hpp"

namespace rhflow {

namespace {

// Width of the smoothing in √(|Rm|² + ε²); far below every tolerance in the
// audits, wide enough to keep ∂_t and Δ of the norm bounded at tensor zeros.
constexpr double kNormEps = 1e-8;

// Streaming Neumaier accumulator in fixed lattice order (bit-reproducible).
struct Acc {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double total() const { return s + c; }
};

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

// Weights of the centered first derivative at t1 on a possibly uneven triple.
struct TimeWeights {
    double wm, w0, wp;
};

TimeWeights centered_weights(double t0, double t1, double t2) {
    const double h1 = t1 - t0, h2 = t2 - t1;
    return {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))};
}

double max_axis_h2(const Grid& grid) {
    double m = 0.0;
    for (int a = 0; a < grid.dim(); ++a) m = std::max(m, grid.h(a) * grid.h(a));
    return m;
}

void check_c_m_nonneg(double C_m, const char* who) {
    if (!(C_m >= 0.0))
        throw std::invalid_argument(std::string(who) + ": C_m must be nonnegative");
}

}  // namespace

PhiField build_phi(const Grid& grid, const CurvaturePack& pack, double C_m) {
    if (!(C_m >= 2.0)) throw std::invalid_argument("build_phi: C_m must be >= 2");
    if (pack.rm_norm.size() != grid.size() || pack.grad_u2.size() != grid.size())
        throw std::invalid_argument("build_phi: pack does not match the grid");
    PhiField out;
    out.C_m = C_m;
    out.field.assign(grid);
    for (std::size_t q = 0; q < grid.size(); ++q)
        out.field[q] = pack.rm_norm[q] + C_m * pack.grad_u2[q] + 1.0;
    return out;
}

HeatBoundFit heat_bound_fit(const Trajectory& traj) {
    const auto& snaps = traj.snaps;
    if (snaps.size() < 3)
        throw std::invalid_argument("heat_bound_fit: need at least three snapshots");
    const Grid& grid = traj.grid;
    const std::size_t n = grid.size();

    // Ring over snapshot triples: the regularized norm everywhere, plus its
    // Laplacian and the bound's denominator evaluated at the slot's own time.
    struct Slot {
        double t = 0.0;
        ScalarField rm_eps, lap, denom;
    };
    std::array<Slot, 3> ring;

    CurvaturePack pack;
    HeatBoundFit fit;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        Slot& slot = ring[i % 3];
        compute_pack(grid, snaps[i].g, snaps[i].u, PackLevel::base, pack);
        slot.t = snaps[i].t;
        slot.rm_eps.data.resize(n);
        slot.denom.data.resize(n);
        for (std::size_t q = 0; q < n; ++q) {
            const double rm = pack.rm_norm[q];
            slot.rm_eps[q] = std::hypot(rm, kNormEps);
            slot.denom[q] = rm * rm + pack.hess_u_norm2[q] + 1.0;
        }
        scalar_laplacian(grid, slot.rm_eps, pack.geo.inv, pack.geo.gamma, slot.lap);

        if (i < 2) continue;
        const Slot& prev = ring[(i - 2) % 3];
        const Slot& mid = ring[(i - 1) % 3];
        const Slot& next = slot;
        const TimeWeights w = centered_weights(prev.t, mid.t, next.t);
        for (std::size_t q = 0; q < n; ++q) {
            const double box = w.wm * prev.rm_eps[q] + w.w0 * mid.rm_eps[q] +
                               w.wp * next.rm_eps[q] - mid.lap[q];
            const double ratio = positive_part(box) / mid.denom[q];
            if (ratio > fit.C) {
                fit.C = ratio;
                fit.witness_t = mid.t;
                fit.witness_point = q;
            }
        }
    }
    return fit;
}

RiccatiCheck riccati_check(const Trajectory& traj, double C_m) {
    const auto& snaps = traj.snaps;
    if (snaps.size() < 3)
        throw std::invalid_argument("riccati_check: need at least three snapshots");
    const Grid& grid = traj.grid;
    const std::size_t n = grid.size();

    struct Slot {
        double t = 0.0;
        ScalarField phi_eps, phi, lap;
    };
    std::array<Slot, 3> ring;

    CurvaturePack pack;
    RiccatiCheck out;
    out.C_m = C_m;
    out.worst_excess = std::numeric_limits<double>::lowest();
    out.slack = 0.0;
    const double h2 = max_axis_h2(grid);
    double worst_violation = std::numeric_limits<double>::lowest();

    for (std::size_t i = 0; i < snaps.size(); ++i) {
        Slot& slot = ring[i % 3];
        compute_pack(grid, snaps[i].g, snaps[i].u, PackLevel::base, pack);
        slot.t = snaps[i].t;
        slot.phi_eps.data.resize(n);
        slot.phi.data.resize(n);
        for (std::size_t q = 0; q < n; ++q) {
            const double tail = C_m * pack.grad_u2[q] + 1.0;
            slot.phi_eps[q] = std::hypot(pack.rm_norm[q], kNormEps) + tail;
            slot.phi[q] = pack.rm_norm[q] + tail;
        }
        scalar_laplacian(grid, slot.phi_eps, pack.geo.inv, pack.geo.gamma, slot.lap);

        if (i < 2) continue;
        const Slot& prev = ring[(i - 2) % 3];
        const Slot& mid = ring[(i - 1) % 3];
        const Slot& next = slot;
        const TimeWeights w = centered_weights(prev.t, mid.t, next.t);
        const double dt = 0.5 * (next.t - prev.t);
        for (std::size_t q = 0; q < n; ++q) {
            const double box = w.wm * prev.phi_eps[q] + w.w0 * mid.phi_eps[q] +
                               w.wp * next.phi_eps[q] - mid.lap[q];
            const double excess = box - C_m * mid.phi[q] * mid.phi[q];
            // Pointwise allowance: a global one would be inflated by the
            // Laplacian spikes the regularized norm has at tensor zeros.
            const double allow = (dt + h2) * std::max(1.0, std::abs(box));
            if (excess - allow > worst_violation) {
                worst_violation = excess - allow;
                out.worst_excess = excess;
                out.slack = allow;
                out.witness_t = mid.t;
                out.witness_point = q;
            }
        }
    }

    out.pass = out.worst_excess <= out.slack;
    return out;
}

std::vector<EnergyCheck> energy_inequality_sweep(const Trajectory& traj,
                                                 const std::vector<double>& a_list,
                                                 const ScalarField& phi_cut, double C_m) {
    const auto& snaps = traj.snaps;
    if (snaps.size() < 3)
        throw std::invalid_argument("energy_inequality_check: need at least three snapshots");
    if (a_list.empty())
        throw std::invalid_argument("energy_inequality_check: empty exponent list");
    for (double a : a_list)
        if (!(a >= 1.0))
            throw std::invalid_argument("energy_inequality_check: a must be >= 1");
    check_c_m_nonneg(C_m, "energy_inequality_check");
    const Grid& grid = traj.grid;
    const std::size_t n = grid.size();
    if (phi_cut.size() != n)
        throw std::invalid_argument("energy_inequality_check: cutoff does not match the lattice");

    const std::size_t ns = snaps.size();
    const std::size_t na = a_list.size();
    const double cell = grid.cell_measure();

    // Integral tables, one row per exponent and one column per snapshot.  I2
    // (the pointwise ∂_t term) needs the snapshot triple and is filled when
    // the sliding window completes; everything else at the snapshot itself.
    auto table = [&] { return std::vector<std::vector<double>>(na, std::vector<double>(ns, 0.0)); };
    auto I1 = table(), I2 = table(), basisT = table(), energyT = table(), gradT = table(),
         cutT = table();
    std::vector<double> ts(ns);

    struct Slot {
        double t = 0.0;
        ScalarField phi, sqrt_det;
    };
    std::array<Slot, 3> ring;

    CurvaturePack pack;
    ScalarField phi_eps, lap_eps, gcut2, w_field, gw2;
    for (std::size_t i = 0; i < ns; ++i) {
        Slot& slot = ring[i % 3];
        compute_pack(grid, snaps[i].g, snaps[i].u, PackLevel::base, pack);
        ts[i] = slot.t = snaps[i].t;
        slot.phi.data.resize(n);
        phi_eps.data.resize(n);
        for (std::size_t q = 0; q < n; ++q) {
            const double tail = C_m * pack.grad_u2[q] + 1.0;
            slot.phi[q] = pack.rm_norm[q] + tail;
            phi_eps[q] = std::hypot(pack.rm_norm[q], kNormEps) + tail;
        }
        slot.sqrt_det = pack.geo.sqrt_det;
        scalar_laplacian(grid, phi_eps, pack.geo.inv, pack.geo.gamma, lap_eps);
        grad_norm2(grid, phi_cut, pack.geo.inv, gcut2);

        for (std::size_t ai = 0; ai < na; ++ai) {
            const double a = a_list[ai];
            w_field.data.resize(n);
            Acc i1, basis, energy, hcut;
            for (std::size_t q = 0; q < n; ++q) {
                const double phi = slot.phi[q];
                const double p2a = std::pow(phi, 2.0 * a);
                const double sd = slot.sqrt_det[q];
                const double fc = phi_cut[q];
                w_field[q] = fc * std::sqrt(p2a);
                i1.add(-fc * fc * (p2a / phi) * lap_eps[q] * sd);
                basis.add(fc * fc * p2a * phi * sd);
                energy.add(fc * fc * p2a * sd);
                hcut.add(gcut2[q] * p2a * sd);
            }
            grad_norm2(grid, w_field, pack.geo.inv, gw2);
            Acc grad;
            for (std::size_t q = 0; q < n; ++q) grad.add(gw2[q] * slot.sqrt_det[q]);
            I1[ai][i] = cell * i1.total();
            basisT[ai][i] = cell * basis.total();
            energyT[ai][i] = cell * energy.total();
            cutT[ai][i] = cell * hcut.total();
            gradT[ai][i] = cell * grad.total();
        }

        if (i < 2) continue;
        const Slot& prev = ring[(i - 2) % 3];
        const Slot& mid = ring[(i - 1) % 3];
        const Slot& next = slot;
        const TimeWeights w = centered_weights(prev.t, mid.t, next.t);
        for (std::size_t ai = 0; ai < na; ++ai) {
            const double a2 = 2.0 * a_list[ai];
            Acc i2;
            for (std::size_t q = 0; q < n; ++q) {
                const double fc = phi_cut[q];
                if (fc == 0.0) continue;
                const double dpow = w.wm * std::pow(prev.phi[q], a2) +
                                    w.w0 * std::pow(mid.phi[q], a2) +
                                    w.wp * std::pow(next.phi[q], a2);
                i2.add(fc * fc * dpow * mid.sqrt_det[q]);
            }
            I2[ai][i - 1] = cell * i2.total() / a2;
        }
    }

    std::vector<EnergyCheck> out(na);
    for (std::size_t ai = 0; ai < na; ++ai) {
        EnergyCheck& ck = out[ai];
        ck.a = a_list[ai];
        const std::vector<double> dE = time_derivative(ts, energyT[ai]);

        double scale = 0.0;
        for (std::size_t i = 1; i + 1 < ns; ++i) {
            const double lhs = I1[ai][i] + I2[ai][i];
            const double lhs2 = gradT[ai][i] + 0.5 * dE[i];
            scale = std::max({scale, std::abs(lhs), std::abs(lhs2), basisT[ai][i]});
        }
        const double tol = 1e-11 * std::max(scale, 1e-300);

        for (std::size_t i = 1; i + 1 < ns; ++i) {
            const double lhs = I1[ai][i] + I2[ai][i];
            const double lhs2 = gradT[ai][i] + 0.5 * dE[i];
            const double basis = basisT[ai][i];
            ck.t.push_back(ts[i]);
            ck.lhs.push_back(lhs);
            ck.lhs_derived.push_back(lhs2);
            ck.basis.push_back(basis);
            if (basis > 0.0) {
                ck.C = std::max(ck.C, positive_part(lhs) / basis);
                ck.C_derived =
                    std::max(ck.C_derived, positive_part(lhs2 - cutT[ai][i]) / (ck.a * basis));
            } else if (lhs > tol || lhs2 - cutT[ai][i] > tol) {
                ck.feasible = false;
            }
        }
    }
    return out;
}

EnergyCheck energy_inequality_check(const Trajectory& traj, double a,
                                    const ScalarField& phi_cut, double C_m) {
    return energy_inequality_sweep(traj, {a}, phi_cut, C_m).front();
}

MoserReport moser_sup_report(const Trajectory& traj, const CutoffData& cut, double p,
                             double K, double L, double C_m, double Lambda,
                             double T_horizon) {
    if (!(p > 0.0)) throw std::invalid_argument("moser_sup_report: p must be positive");
    if (!(T_horizon > 0.0))
        throw std::invalid_argument("moser_sup_report: T must be positive");
    check_c_m_nonneg(C_m, "moser_sup_report");
    const auto& snaps = traj.snaps;
    if (snaps.empty()) throw std::invalid_argument("moser_sup_report: empty trajectory");
    const Grid& grid = traj.grid;
    const std::size_t n = grid.size();
    if (cut.d0.size() != n)
        throw std::invalid_argument("moser_sup_report: cutoff does not match the lattice");
    if (0.5 * T_horizon > snaps.back().t + 1e-12)
        throw std::runtime_error(
            "moser_sup_report: the window [T/2, T] lies beyond the recorded history");

    const double half = 0.5 * cut.radius;
    const double inner = 0.25 * cut.radius;
    std::size_t inner_count = 0;
    for (std::size_t q = 0; q < n; ++q)
        if (cut.d0[q] < inner) ++inner_count;
    if (inner_count == 0)
        throw std::runtime_error("moser_sup_report: inner ball contains no lattice points");

    CurvaturePack pack;
    compute_pack(grid, snaps.front().g, snaps.front().u, PackLevel::base, pack);
    const ScalarField sd0 = pack.geo.sqrt_det;
    Acc den0;
    for (std::size_t q = 0; q < n; ++q)
        if (cut.d0[q] < half) den0.add(sd0[q]);
    const double half_vol0 = den0.total();

    MoserReport rep;
    rep.Lambda = Lambda;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        compute_pack(grid, snaps[i].g, snaps[i].u, PackLevel::base, pack);
        Acc num;
        double sup = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            const double d = cut.d0[q];
            if (!(d < half)) continue;
            const double phi = pack.rm_norm[q] + C_m * pack.grad_u2[q] + 1.0;
            num.add(std::pow(phi, p) * sd0[q]);
            if (d < inner) sup = std::max(sup, phi);
        }
        rep.A = std::max(rep.A, std::pow(num.total() / half_vol0, 1.0 / p));
        if (i == 0) rep.sup_phi0 = sup;
        if (snaps[i].t >= 0.5 * T_horizon - 1e-12) rep.sup_phi = std::max(rep.sup_phi, sup);
    }

    const double rho2 = cut.rho * cut.rho;
    rep.C_n = (1.0 + Lambda) + 3.0 * K / rho2 + 3.0 * C_m * L * L + 3.0;
    rep.implied = rep.sup_phi / (1.0 + rep.C_n + K / rho2 + 1.0 / T_horizon);
    return rep;
}

PointwiseBounds pointwise_bounds(const Trajectory& traj, double C_m) {
    check_c_m_nonneg(C_m, "pointwise_bounds");
    if (traj.snaps.empty())
        throw std::invalid_argument("pointwise_bounds: empty trajectory");
    const Grid& grid = traj.grid;

    CurvaturePack pack;
    double low = 0.0, ratio = 0.0;
    for (const Snapshot& snap : traj.snaps) {
        compute_pack(grid, snap.g, snap.u, PackLevel::base, pack);
        for (std::size_t q = 0; q < grid.size(); ++q) {
            const double v = pack.geo.scal[q] - 2.0 * pack.grad_u2[q];
            const double phi = pack.rm_norm[q] + C_m * pack.grad_u2[q] + 1.0;
            low = std::min(low, v);
            ratio = std::max(ratio, std::abs(v) / phi);
        }
    }
    return PointwiseBounds{-low, ratio};
}

SupGrowth sup_phi_growth(const Trajectory& traj, double C_m) {
    check_c_m_nonneg(C_m, "sup_phi_growth");
    if (traj.snaps.size() < 2)
        throw std::invalid_argument("sup_phi_growth: need at least two snapshots");
    const Grid& grid = traj.grid;

    SupGrowth out;
    CurvaturePack pack;
    for (const Snapshot& snap : traj.snaps) {
        compute_pack(grid, snap.g, snap.u, PackLevel::base, pack);
        double sup = 0.0;
        for (std::size_t q = 0; q < grid.size(); ++q)
            sup = std::max(sup, pack.rm_norm[q] + C_m * pack.grad_u2[q] + 1.0);
        out.t.push_back(snap.t);
        out.sup_phi.push_back(sup);
    }

    const std::vector<double> d = time_derivative(out.t, out.sup_phi);
    const std::size_t ns = out.t.size();
    const std::size_t lo = ns == 2 ? 0 : 1;
    const std::size_t hi = ns == 2 ? ns : ns - 1;
    for (std::size_t i = lo; i < hi; ++i)
        out.C_fit = std::max(out.C_fit, positive_part(d[i]) / out.sup_phi[i]);

    const double sup0 = out.sup_phi.front();
    for (std::size_t i = 0; i < ns; ++i)
        if (out.sup_phi[i] >
            10.0 * sup0 * std::exp(out.C_fit * out.t[i]) * (1.0 + 1e-9))
            out.pass = false;
    return out;
}

}  // namespace rhflow
