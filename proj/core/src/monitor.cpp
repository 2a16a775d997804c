#include "rhflow/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rhflow/series.hpp"

namespace rhflow {

namespace {

// Streaming Neumaier accumulator; summation order is the fixed storage order
// of the lattice, so repeated runs produce identical bytes.
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

}  // namespace

MonitorSample sample_quantities(const Grid& grid, const CurvaturePack& pack,
                                const CutoffData& cut, double p, double K_sup,
                                double t) {
    if (!(p >= 3.0)) throw std::invalid_argument("monitor: p must be >= 3");
    if (!pack.has_gradient_norms)
        throw std::invalid_argument("monitor: pack must carry gradient norms");
    const std::size_t n = grid.size();
    if (pack.rm_norm.size() != n || cut.d0.size() != n || cut.phi.size() != n)
        throw std::invalid_argument("monitor: field sizes do not match the grid");

    const double K_eff = std::max(K_sup, 1e-12);
    const int kmax = static_cast<int>(std::ceil(p));

    MonitorSample s;
    s.t = t;
    s.p = p;
    s.Tk.assign(static_cast<std::size_t>(kmax), 0.0);

    // |∇φ|² against the snapshot metric; the cutoff itself is frozen at t = 0.
    ScalarField gphi2;
    grad_norm2(grid, cut.phi, pack.geo.inv, gphi2);

    Acc a1, a2, a3, a4, b1, b2, sacc, st, ricw, volom, volhalf, lhsb, tp, tpm1;
    std::vector<Acc> tk(static_cast<std::size_t>(kmax));

    const double radius = cut.radius;
    for (std::size_t q = 0; q < n; ++q) {
        const double sd = pack.geo.sqrt_det[q];
        const double d = cut.d0[q];
        const double rm = pack.rm_norm[q];

        if (d < 0.5 * radius) {
            volhalf.add(sd);
            lhsb.add(std::pow(rm, p) * sd);
        }
        if (!(d < radius)) continue;

        volom.add(sd);
        const double phi = cut.phi[q];
        const double w = std::pow(phi, 2.0 * p);
        const double rmp = std::pow(rm, p);
        const double rmp1 = std::pow(rm, p - 1.0);
        const double gp = gphi2[q];
        const double hess = pack.hess_u_norm2[q];
        const double gu = pack.grad_u2[q];

        a1.add(rmp * w * sd);
        a2.add(rmp1 * w * sd);
        a3.add(rmp1 * gp * std::pow(phi, 2.0 * p - 1.0) * sd);
        a4.add(rmp1 * gp * std::pow(phi, 2.0 * p - 2.0) * sd);
        b1.add(pack.grad_ric_norm2[q] * rmp1 * w * sd);
        // std::pow(0, 0) == 1, which is exactly the degenerate weight wanted
        // at p = 3; for p > 3 the weight vanishes with the curvature.
        b2.add(pack.grad_rm_norm2[q] * std::pow(rm, p - 3.0) * w * sd);

        double f = 1.0;
        for (int k = 0; k < kmax; ++k) {
            tk[static_cast<std::size_t>(k)].add(f * hess * w * sd);
            f *= rm;
        }
        tp.add(rmp1 * hess * w * sd);
        tpm1.add(std::pow(rm, p - 2.0) * hess * w * sd);

        sacc.add(rmp1 * gu * w * sd);
        st.add(gu * w * sd);
        ricw.add(pack.ric_norm2[q] * rmp1 * w * sd);
    }

    const double cell = grid.cell_measure();
    s.A1 = a1.total() * cell;
    s.A2 = a2.total() * cell;
    s.A3 = a3.total() * cell;
    s.A4 = a4.total() * cell;
    s.B1 = b1.total() * cell / K_eff;
    s.B2 = b2.total() * cell;
    for (int k = 0; k < kmax; ++k)
        s.Tk[static_cast<std::size_t>(k)] = tk[static_cast<std::size_t>(k)].total() * cell;
    s.Tp = tp.total() * cell;
    s.Tpm1 = tpm1.total() * cell;
    s.S = sacc.total() * cell;
    s.Stilde = st.total() * cell;
    s.RicWeighted = ricw.total() * cell;
    s.VolOmega = volom.total() * cell;
    s.VolBallHalf = volhalf.total() * cell;
    s.LHSball = lhsb.total() * cell;
    return s;
}

bool check_tk_interpolation(const MonitorSample& s, double C, int k,
                            double rel_tol) {
    if (!(C > 0.0)) throw std::invalid_argument("monitor: C must be positive");
    if (k < 1 || k > static_cast<int>(std::floor(s.p)))
        throw std::invalid_argument("monitor: k must lie in [1, floor(p)]");
    if (s.Tk.size() < static_cast<std::size_t>(k))
        throw std::invalid_argument("monitor: sample lacks the requested T_k");

    const double lhs = s.Tk[static_cast<std::size_t>(k - 1)];
    const double rhs = std::pow(C, static_cast<double>(k) - s.p) * s.Tp +
                       (s.p - k) * std::pow(C, k - 1.0) * s.Tk[0];
    return lhs - rhs <= rel_tol * std::max({std::abs(lhs), std::abs(rhs), 1e-30});
}

const char* inequality_name(Inequality id) {
    switch (id) {
        case Inequality::lp_energy_growth: return "lp_energy_growth";
        case Inequality::ricci_gradient_energy: return "ricci_gradient_energy";
        case Inequality::curvature_gradient_energy: return "curvature_gradient_energy";
        case Inequality::hessian_weighted_energy: return "hessian_weighted_energy";
        case Inequality::hessian_energy: return "hessian_energy";
    }
    return "unknown";
}

namespace {

struct SeriesColumns {
    std::vector<double> t, A1, A2, A4, B1, B2, Tp, Tpm1, T1, S, St, RicW, Vol;
};

SeriesColumns extract_columns(const MonitorSeries& s) {
    SeriesColumns c;
    const std::size_t n = s.samples.size();
    if (n < 5)
        throw std::invalid_argument(
            "monitor: inequality fits need at least three interior sample times");
    const double p = s.samples.front().p;
    for (const MonitorSample& m : s.samples) {
        if (m.p != p)
            throw std::invalid_argument("monitor: mixed p within one series");
        c.t.push_back(m.t);
        c.A1.push_back(m.A1);
        c.A2.push_back(m.A2);
        c.A4.push_back(m.A4);
        c.B1.push_back(m.B1);
        c.B2.push_back(m.B2);
        c.Tp.push_back(m.Tp);
        c.Tpm1.push_back(m.Tpm1);
        c.T1.push_back(m.Tk.at(0));
        c.S.push_back(m.S);
        c.St.push_back(m.Stilde);
        c.RicW.push_back(m.RicWeighted);
        c.Vol.push_back(m.VolOmega);
    }
    return c;
}

}  // namespace

InequalityReport fit_inequality_constant(Inequality id, const MonitorSeries& s) {
    const SeriesColumns c = extract_columns(s);
    const std::size_t n = c.t.size();
    const double p = s.samples.front().p;
    const double K = std::max(s.K, 1e-12);
    const double L2 = s.L * s.L;

    InequalityReport rep;
    rep.id = id;
    rep.name = inequality_name(id);

    const std::vector<double> dA1 = time_derivative(c.t, c.A1);
    const std::vector<double> dA2 = time_derivative(c.t, c.A2);
    const std::vector<double> dS = time_derivative(c.t, c.S);
    const std::vector<double> dSt = time_derivative(c.t, c.St);
    const std::vector<double> dRicW = time_derivative(c.t, c.RicW);

    std::vector<std::size_t> interior;
    for (std::size_t i = 1; i + 1 < n; ++i) interior.push_back(i);

    if (id == Inequality::hessian_weighted_energy) {
        // T_p + d/dt S + C [ (1/(p-1)) d/dt A2 + (1/K) d/dt RicWeighted ]
        //   <= C [ (K+L²)A1 + KL²A2 + (K+L²)A4 ] + C^{p-1} T_1
        const auto gap = [&](double C_try, std::size_t i) {
            const double lhs = c.Tp[i] + dS[i] +
                               C_try * (dA2[i] / (p - 1.0) + dRicW[i] / K);
            const double rhs = C_try * ((K + L2) * c.A1[i] + K * L2 * c.A2[i] +
                                        (K + L2) * c.A4[i]) +
                               std::pow(C_try, p - 1.0) * c.T1[i];
            return lhs - rhs;
        };
        const auto feasible_at = [&](double C_try) {
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t i : interior) worst = std::max(worst, gap(C_try, i));
            double scale = 1.0;
            for (std::size_t i : interior)
                scale = std::max(scale, std::abs(c.Tp[i] + dS[i]));
            return worst <= 1e-11 * scale;
        };

        double lo = 0.0, hi = 0.0;
        bool found = feasible_at(0.0);
        if (!found) {
            for (double C_try = 1e-8; C_try <= 1.0e8; C_try *= 1.2) {
                if (feasible_at(C_try)) {
                    hi = C_try;
                    found = true;
                    break;
                }
                lo = C_try;
            }
            if (found) {
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (feasible_at(mid) ? hi : lo) = mid;
                }
            }
        }
        rep.feasible = found;
        rep.C_fit = found ? hi : 0.0;
        for (std::size_t i : interior) {
            rep.t.push_back(c.t[i]);
            rep.lhs.push_back(c.Tp[i] + dS[i] +
                              rep.C_fit * (dA2[i] / (p - 1.0) + dRicW[i] / K));
            rep.envelope.push_back(rep.C_fit * ((K + L2) * c.A1[i] +
                                                K * L2 * c.A2[i] +
                                                (K + L2) * c.A4[i]) +
                                   std::pow(rep.C_fit, p - 1.0) * c.T1[i]);
        }
        return rep;
    }

    // The remaining four forms are linear in the constant: LHS - cf <= C * basis.
    std::vector<double> lhs(n, 0.0), cf(n, 0.0), basis(n, 0.0);
    switch (id) {
        case Inequality::lp_energy_growth:
            for (std::size_t i = 0; i < n; ++i) {
                lhs[i] = dA1[i];
                cf[i] = c.B1[i];
                basis[i] = K * c.B2[i] + K * c.A4[i] + (K + L2) * c.A1[i] + c.Tp[i];
            }
            break;
        case Inequality::ricci_gradient_energy:
            for (std::size_t i = 0; i < n; ++i) {
                lhs[i] = c.B1[i] + dRicW[i] / (2.0 * K);
                basis[i] = K * c.B2[i] + (K + L2) * c.A1[i] + K * L2 * c.A2[i] +
                           K * c.A4[i] + c.Tp[i];
            }
            break;
        case Inequality::curvature_gradient_energy:
            for (std::size_t i = 0; i < n; ++i) {
                lhs[i] = c.B2[i] + dA2[i] / (p - 1.0);
                basis[i] = c.A1[i] + c.A4[i] + L2 * c.A2[i] + c.Tpm1[i];
            }
            break;
        case Inequality::hessian_energy:
            for (std::size_t i = 0; i < n; ++i) {
                lhs[i] = c.T1[i] + dSt[i];
                basis[i] = L2 * c.Vol[i];
            }
            break;
        case Inequality::hessian_weighted_energy:
            break;  // handled above
    }

    double scale = 1.0;
    for (std::size_t i : interior) scale = std::max(scale, std::abs(lhs[i]));
    const double zero_tol = 1e-11 * scale;

    double C_fit = 0.0;
    bool feas = true;
    for (std::size_t i : interior) {
        const double need = positive_part(lhs[i] - cf[i]);
        if (basis[i] > 0.0)
            C_fit = std::max(C_fit, need / basis[i]);
        else if (need > zero_tol)
            feas = false;
    }
    rep.C_fit = feas ? C_fit : 0.0;
    rep.feasible = feas;
    for (std::size_t i : interior) {
        rep.t.push_back(c.t[i]);
        rep.lhs.push_back(lhs[i]);
        rep.envelope.push_back(cf[i] + rep.C_fit * basis[i]);
    }
    return rep;
}

double assemble_U(const MonitorSample& s, double K, double C) {
    return s.A1 + C * K / (s.p - 1.0) * s.A2 + C * s.RicWeighted + C * K * s.S +
           K * std::pow(C, s.p) * s.Stilde;
}

GammaConstants gamma_constants(double K, double L, double T, double p,
                               double rho, double C_in) {
    if (!(K > 0.0) || !(T >= 0.0) || !(rho > 0.0) || !(C_in > 0.0))
        throw std::invalid_argument("monitor: gamma constants need K, rho, C > 0 and T >= 0");
    if (!(p >= 3.0)) throw std::invalid_argument("monitor: p must be >= 3");
    if (!(L >= 0.0)) throw std::invalid_argument("monitor: L must be nonnegative");

    GammaConstants g;
    g.C_in = C_in;
    g.K = K;
    g.L = L;
    g.T = T;
    g.p = p;
    g.rho = rho;

    const double L2 = L * L;
    const double C = C_in;
    g.lambda1 = C * (p - 1.0) * K * L2 + C * K * (K + L2);

    // lambda2's first term carries e^{2pKT}; assemble its logarithm and only
    // exponentiate when representable.
    const double log_t1 = std::log(C * K * (K + L2)) + p * std::log(K) +
                          2.0 * p * K * T - 2.0 * p * std::log(rho);
    const double t2 = C * K * std::pow(C, p) * L2;
    const double kMaxExp = 700.0;  // just under log(DBL_MAX)
    if (log_t1 > kMaxExp) {
        g.overflowed = true;
        g.lambda2 = std::numeric_limits<double>::infinity();
        // The finite second term is negligible at this magnitude.
        g.log_lambda2 = log_t1;
    } else {
        g.lambda2 = std::exp(log_t1) + t2;
        g.log_lambda2 = std::log(g.lambda2);
    }

    const double base1 = C * K / (p - 1.0) + C * K * K + C * K * L2;
    const double base2 = C * K / (p - 1.0) + C + C * K * L2;
    const double log_growth = g.lambda1 * T;
    if (log_growth + std::log(base1) > kMaxExp ||
        (std::isfinite(g.lambda2)
             ? log_growth + std::log(base2 + g.lambda2) > kMaxExp
             : true)) {
        g.overflowed = true;
    }
    g.log_gamma1 = log_growth + std::log(base1);
    g.log_gamma2 = log_growth + (std::isfinite(g.lambda2)
                                     ? std::log(base2 + g.lambda2)
                                     : g.log_lambda2);
    g.gamma1 = std::exp(std::min(g.log_gamma1, 2.0 * kMaxExp));
    g.gamma2 = std::exp(std::min(g.log_gamma2, 2.0 * kMaxExp));
    return g;
}

BallBoundCheck ball_bound_check(const MonitorSeries& s, const GammaConstants& gc,
                                double initial_ball_lp, double initial_ball_vol) {
    if (s.samples.empty())
        throw std::invalid_argument("monitor: ball bound needs at least one sample");
    if (!(initial_ball_lp >= 0.0) || !(initial_ball_vol >= 0.0))
        throw std::invalid_argument("monitor: initial ball data must be nonnegative");

    BallBoundCheck chk;
    chk.rhs = gc.gamma1 * initial_ball_lp + gc.gamma2 * initial_ball_vol;
    for (const MonitorSample& m : s.samples) {
        chk.t.push_back(m.t);
        chk.lhs.push_back(m.LHSball);
        const double margin = std::isfinite(chk.rhs)
                                  ? (chk.rhs - m.LHSball) / chk.rhs
                                  : 1.0;
        chk.margin.push_back(margin);
        if (margin < 0.0 && chk.pass) {
            chk.pass = false;
            chk.first_violation_t = m.t;
        }
    }
    return chk;
}

NormalizedLpResult normalized_lp_check(double p, const std::vector<double>& avg,
                                       double avg0, double K, double rho) {
    if (!(p >= 3.0 && p <= 8.0))
        throw std::invalid_argument("monitor: normalized check needs p in [3, 8]");
    if (!(K > 0.0) || !(rho > 0.0))
        throw std::invalid_argument("monitor: normalized check needs K, rho > 0");
    if (avg.empty()) throw std::invalid_argument("monitor: empty average series");

    NormalizedLpResult res;
    res.p = p;
    const double floor_term = std::pow(K, p) * std::pow(rho, -2.0 * p);
    double q = 0.0;
    for (double a : avg) q = std::max(q, a / (avg0 + floor_term));
    res.Q = q;

    if (q <= 0.0) {
        res.C = 0.0;
        return res;
    }
    const auto f = [&](double C) { return C * std::exp(C * (p - 1.0)); };
    double hi = 1.0;
    while (f(hi) < q && hi < 1e6) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < q ? lo : hi) = mid;
    }
    res.C = hi;
    return res;
}

}  // namespace rhflow
