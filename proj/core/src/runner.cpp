#include "rhflow/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "audit_internal.hpp"
#include "rhflow/artifact.hpp"
#include "rhflow/calculus.hpp"
#include "rhflow/curvature.hpp"
#include "rhflow/extension.hpp"
#include "rhflow/flow.hpp"
#include "rhflow/gronwall.hpp"
#include "rhflow/localization.hpp"
#include "rhflow/monitor.hpp"
#include "rhflow/symmat.hpp"
#include "rhflow/warped.hpp"

namespace rhflow {

namespace detail {

std::string format_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string p_tag(double p) { return "p" + format_g(p); }

namespace {

struct TimeWeights {
    double w0 = 0.0, w1 = 0.0, w2 = 0.0;
};

TimeWeights centered_weights(double t0, double t1, double t2) {
    const double h1 = t1 - t0, h2 = t2 - t1;
    return {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))};
}

struct IdentitySlot {
    double t = 0.0;
    ScalarField gu2, sqrt_det, lap_gu2, hess2, scal;
};

constexpr Inequality kAllInequalities[] = {
    Inequality::lp_energy_growth,          Inequality::ricci_gradient_energy,
    Inequality::curvature_gradient_energy, Inequality::hessian_weighted_energy,
    Inequality::hessian_energy,
};

}  // namespace

SnapshotScan scan_snapshots(const Grid& grid, const Trajectory& traj,
                            const CutoffData& cut, const std::vector<double>& p_list,
                            double K_eff, double L) {
    SnapshotScan out;
    const std::size_t nsnap = traj.snaps.size();
    const std::size_t npts = grid.size();

    out.series.resize(p_list.size());
    for (auto& s : out.series) {
        s.samples.reserve(nsnap);
        s.K = K_eff;
        s.L = L;
    }
    out.initial_lp.assign(p_list.size(), 0.0);

    CurvaturePack pack;
    IdentitySlot ring[3];
    ScalarField rm_pow(grid);
    const MetricField& g0 = traj.snaps.front().g;

    for (std::size_t i = 0; i < nsnap; ++i) {
        const Snapshot& snap = traj.snaps[i];
        compute_pack(grid, snap.g, snap.u, PackLevel::full, pack);

        for (std::size_t j = 0; j < p_list.size(); ++j)
            out.series[j].samples.push_back(
                sample_quantities(grid, pack, cut, p_list[j], K_eff, snap.t));

        if (i == 0) {
            for (std::size_t j = 0; j < p_list.size(); ++j) {
                for (std::size_t q = 0; q < npts; ++q)
                    rm_pow[q] = std::pow(pack.rm_norm[q], p_list[j]);
                out.initial_lp[j] = ball_integral(grid, rm_pow, cut.d0, cut.radius,
                                                  pack.geo.sqrt_det);
            }
        }

        double lmin = std::numeric_limits<double>::infinity();
        double lmax = -lmin;
        for (std::size_t q = 0; q < npts; ++q) {
            double a = 0.0, b = 0.0;
            sym::gen_eig_range(grid.dim(), snap.g.at(q), g0.at(q), a, b);
            lmin = std::min(lmin, a);
            lmax = std::max(lmax, b);
        }
        out.t.push_back(snap.t);
        out.lam_min.push_back(lmin);
        out.lam_max.push_back(lmax);
        out.sup_gu2.push_back(max_value(pack.grad_u2));

        IdentitySlot& slot = ring[i % 3];
        slot.t = snap.t;
        slot.gu2 = pack.grad_u2;
        slot.sqrt_det = pack.geo.sqrt_det;
        slot.hess2 = pack.hess_u_norm2;
        slot.scal = pack.geo.scal;
        scalar_laplacian(grid, pack.grad_u2, pack.geo.inv, pack.geo.gamma, slot.lap_gu2);

        if (i >= 2) {
            const IdentitySlot& a = ring[(i - 2) % 3];
            const IdentitySlot& m = ring[(i - 1) % 3];
            const IdentitySlot& b = ring[i % 3];
            const TimeWeights w = centered_weights(a.t, m.t, b.t);
            for (std::size_t q = 0; q < npts; ++q) {
                const double dt_gu2 = w.w0 * a.gu2[q] + w.w1 * m.gu2[q] + w.w2 * b.gu2[q];
                const double r1 = dt_gu2 - m.lap_gu2[q] + 2.0 * m.hess2[q] +
                                  4.0 * m.gu2[q] * m.gu2[q];
                const double dt_sd =
                    w.w0 * a.sqrt_det[q] + w.w1 * m.sqrt_det[q] + w.w2 * b.sqrt_det[q];
                const double r2 =
                    dt_sd - (-m.scal[q] + 2.0 * m.gu2[q]) * m.sqrt_det[q];
                out.eq2_residual = std::max(out.eq2_residual, std::abs(r1));
                out.dv_residual = std::max(out.dv_residual, std::abs(r2));
            }
        }
    }
    return out;
}

ExponentAudit audit_exponent(const MonitorSeries& series, const Scenario& s,
                             double K_eff, double initial_lp, double T_final) {
    ExponentAudit out;
    out.p = series.samples.front().p;
    out.initial_lp = initial_lp;
    out.initial_vol = series.samples.front().VolOmega;

    double c_max = 0.0;
    for (Inequality id : kAllInequalities) {
        out.fits.push_back(fit_inequality_constant(id, series));
        if (out.fits.back().feasible) c_max = std::max(c_max, out.fits.back().C_fit);
    }
    if (s.c_in_fitted) {
        // The five fitted constants can be arbitrarily small on a slack run,
        // but the envelope assembly also spends the same constant on
        // unit-strength absorption identities (|Rm|^{p-1} ≤ |Rm|^p + 1 and
        // relatives), so the aggregate constant is floored at 1.
        out.C_in = std::max(1.0, c_max);
        out.c_in_floored = c_max < 1.0;
    } else {
        out.C_in = s.c_in;
    }

    const std::size_t n = series.samples.size();
    ComparisonProblem prob;
    prob.t.reserve(n);
    prob.U.reserve(n);
    prob.F.reserve(n);
    for (const MonitorSample& m : series.samples) {
        prob.t.push_back(m.t);
        prob.U.push_back(assemble_U(m, K_eff, out.C_in));
        prob.F.push_back(m.VolOmega);
    }
    out.U = prob.U;

    out.gamma = gamma_constants(K_eff, series.L, T_final, out.p, s.rho, out.C_in);
    prob.lambda1 = out.gamma.lambda1;
    prob.lambda2 = out.gamma.lambda2;
    out.comp = verify_comparison(prob);
    out.lam = fit_lambdas(prob.t, prob.U, prob.F);

    // Integrated form of the same envelope, with the forcing frozen at its
    // instantaneous value: U(t) ≤ e^{λ₁T}(U(0) + λ₂·Vol(t)).
    if (out.gamma.overflowed) {
        out.integrated_pass = true;  // the envelope exceeds double range
        out.integrated_margin = 1.0;
    } else {
        const double grow = std::exp(out.gamma.lambda1 * T_final);
        for (std::size_t i = 0; i < n; ++i) {
            const double rhs = grow * (prob.U[0] + out.gamma.lambda2 * prob.F[i]);
            const double margin =
                (rhs - prob.U[i]) / std::max({rhs, std::abs(prob.U[i]), 1e-300});
            out.integrated_margin = std::min(out.integrated_margin, margin);
            if (prob.U[i] > rhs * (1.0 + kRelSlack)) out.integrated_pass = false;
        }
    }

    if (out.gamma.overflowed) {
        out.ball.pass = true;
        out.ball.rhs = std::numeric_limits<double>::infinity();
    } else {
        out.ball = ball_bound_check(series, out.gamma, initial_lp, out.initial_vol);
    }

    std::vector<double> avg(n);
    for (std::size_t i = 0; i < n; ++i)
        avg[i] = series.samples[i].LHSball / series.samples[i].VolBallHalf;
    out.norm = normalized_lp_check(out.p, avg, avg[0], K_eff, s.rho);

    const int kmax = static_cast<int>(std::floor(out.p));
    for (const MonitorSample& m : series.samples) {
        for (int k = 1; k <= kmax && out.tk_pass; ++k) {
            if (!check_tk_interpolation(m, out.C_in, k)) {
                out.tk_pass = false;
                out.tk_first_t = m.t;
                out.tk_first_k = k;
            }
        }
        if (!out.tk_pass) break;
    }
    return out;
}

double volume_ratio_rate(const std::vector<MonitorSample>& samples, double T_final) {
    if (!(T_final > 0.0)) return 0.0;
    double c = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i; j < samples.size(); ++j) {
            const double vi = samples[i].VolOmega, vj = samples[j].VolOmega;
            if (vi > 0.0 && vj > 0.0) c = std::max(c, std::log(vi / vj) / T_final);
        }
    return c;
}

MetricEquivalence metric_equivalence_check(const std::vector<double>& t,
                                           const std::vector<double>& lam_min,
                                           const std::vector<double>& lam_max,
                                           double K, double L) {
    MetricEquivalence out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double up = std::exp(2.0 * K * t[i]);
        const double up_corr = std::exp((2.0 * K + 4.0 * L * L) * t[i]);
        const double lo = std::exp(-2.0 * K * t[i]);
        out.upper_excess = std::max(out.upper_excess, lam_max[i] / up - 1.0);
        out.lower_excess = std::max(out.lower_excess, lo / lam_min[i] - 1.0);
        if (lam_max[i] > up * (1.0 + kEnvelopeTol)) out.pass = false;
        if (lam_max[i] > up_corr * (1.0 + kEnvelopeTol)) out.pass_corrected = false;
        if (lam_min[i] < lo * (1.0 - kEnvelopeTol)) {
            out.pass = false;
            out.pass_corrected = false;
        }
    }
    return out;
}

}  // namespace detail

namespace {

using ordered_json = nlohmann::ordered_json;
using detail::ExponentAudit;
using detail::format_g;
using detail::p_tag;

MetricField initial_metric(const Grid& grid, const Scenario& s) {
    switch (s.metric) {
        case MetricKind::flat:
            return flat_metric(grid, s.flat_scale);
        case MetricKind::warped:
            return grid.dim() == 2 ? product_metric(grid, s.a, s.b)
                                   : product_metric(grid, s.a, s.b, s.c);
        case MetricKind::conformal:
            return conformal_metric(grid, s.v);
    }
    throw std::logic_error("unhandled metric kind");
}

std::string fit_detail(const InequalityReport& r) {
    if (!r.feasible) return "infeasible: left side positive where the envelope vanishes";
    return "C = " + format_g(r.C_fit);
}

void print_verdicts(std::ostream& log, const std::vector<Verdict>& verdicts) {
    for (const Verdict& v : verdicts) {
        log << (v.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(36) << v.name;
        if (!v.detail.empty()) log << "  " << v.detail;
        log << "\n";
    }
}

ordered_json exponent_json(const ExponentAudit& a) {
    ordered_json j;
    j["C_in"] = a.C_in;
    j["c_in_floored"] = a.c_in_floored;
    ordered_json fits = ordered_json::object();
    for (const InequalityReport& r : a.fits)
        fits[r.name] = {{"C", r.C_fit}, {"feasible", r.feasible}};
    j["fits"] = std::move(fits);
    j["gamma"] = {{"lambda1", a.gamma.lambda1},
                  {"lambda2", a.gamma.lambda2},
                  {"gamma1", a.gamma.gamma1},
                  {"gamma2", a.gamma.gamma2},
                  {"log_gamma1", a.gamma.log_gamma1},
                  {"log_gamma2", a.gamma.log_gamma2},
                  {"overflowed", a.gamma.overflowed}};
    double comp_margin = 1.0;
    for (double m : a.comp.margin) comp_margin = std::min(comp_margin, m);
    j["gronwall"] = {{"pass", a.comp.pass},
                     {"min_margin", comp_margin},
                     {"lambda1_fit", a.lam.lambda1},
                     {"lambda2_fit", a.lam.lambda2},
                     {"fit_feasible", a.lam.feasible}};
    j["gronwall_integrated"] = {{"pass", a.integrated_pass},
                                {"min_margin", a.integrated_margin}};
    double ball_margin = 1.0;
    for (double m : a.ball.margin) ball_margin = std::min(ball_margin, m);
    j["ball"] = {{"pass", a.ball.pass},
                 {"rhs", a.ball.rhs},
                 {"min_margin", ball_margin},
                 {"initial_lp", a.initial_lp},
                 {"initial_vol", a.initial_vol},
                 {"first_violation_t", a.ball.first_violation_t}};
    j["normalized"] = {{"Q", a.norm.Q}, {"C", a.norm.C}};
    j["tk"] = {{"pass", a.tk_pass},
               {"C_used", a.C_in},
               {"first_violation_t", a.tk_first_t},
               {"first_violation_k", a.tk_first_k}};
    return j;
}

}  // namespace

RunSummary run_scenario(const Scenario& s, const std::string& out_dir,
                        std::ostream& log) {
    validate_scenario(s);

    // The audits need three interior sample times, i.e. five snapshots.
    // Clamping only shortens dt, so the requested dt gives a lower bound
    // on how many the evolution will record.
    const auto steps = static_cast<std::size_t>(std::ceil(s.t_max / s.dt));
    const auto stride = static_cast<std::size_t>(s.snapshot_stride);
    if (steps / stride + 1 + (steps % stride == 0 ? 0 : 1) < 5) {
        throw std::invalid_argument(
            "scenario: horizon records fewer than five snapshots; raise "
            "flow.t_max or lower flow.snapshot_stride");
    }

    RunSummary summary;
    summary.out_dir = out_dir;

    const Grid grid(s.dim, s.resolution, s.extent);
    const MetricField g0 = initial_metric(grid, s);
    const ScalarField u0 = profile_field(grid, s.u0);

    FlowOptions opt;
    opt.t_max = s.t_max;
    opt.dt = s.dt;
    opt.cfl_sigma = s.cfl_sigma;
    opt.snapshot_stride = s.snapshot_stride;

    const std::string hash = scenario_hash(s);
    log << "run " << s.name << " (" << hash << ")\n";
    log << "  grid " << grid.n(0) << "x" << grid.n(1);
    if (s.dim == 3) log << "x" << grid.n(2);
    log << ", t_max = " << s.t_max << ", dt = " << s.dt << "\n";

    Trajectory traj = evolve(grid, g0, u0, opt);
    summary.completed = traj.status == FlowStatus::completed;

    std::filesystem::create_directories(out_dir);
    const auto dir = std::filesystem::path(out_dir);

    ordered_json report;
    report["schema"] = "rhflow-report/1";
    report["scenario"] = {{"name", s.name}, {"hash", hash}};

    double grad_rise = 0.0;
    for (std::size_t i = 0; i + 1 < traj.sup_grad_u2.size(); ++i)
        grad_rise = std::max(grad_rise, traj.sup_grad_u2[i + 1] - traj.sup_grad_u2[i]);

    report["flow"] = {{"status", summary.completed ? "completed" : "singular"},
                      {"t_final", traj.snaps.back().t},
                      {"snapshots", traj.snaps.size()},
                      {"dt_requested", s.dt},
                      {"dt_clamped", traj.dt_clamped},
                      {"sup_grad_u2_max_step_increase", grad_rise}};
    if (!summary.completed) {
        report["flow"]["singular_t"] = traj.singular_t;
        report["flow"]["singular_point"] = traj.singular_point;
    }

    try {
        std::ofstream sc(dir / "scenario.txt");
        sc << serialize_scenario(s);
        if (!sc.good()) throw std::runtime_error("cannot write scenario.txt");
        sc.close();
        write_trajectory((dir / "trajectory.bin").string(), traj);
    } catch (const std::exception& e) {
        log << "artifact error: " << e.what() << "\n";
        summary.exit_code = 3;
        return summary;
    }

    if (!summary.completed) {
        // Persist what exists and stop: the audits assume a complete run.
        std::ofstream rep(dir / "report.json");
        rep << report.dump(2) << "\n";
        log << "flow singular at t = " << traj.singular_t << " (point "
            << traj.singular_point << "); partial history saved\n";
        summary.exit_code = 2;
        return summary;
    }

    const SupBounds sb = measure_sup_bounds(traj);
    summary.K = sb.K;
    summary.L = sb.L;
    const double K_eff = std::max(sb.K, detail::kKFloor);
    const double T_final = traj.snaps.back().t;

    const std::size_t center =
        grid.index(s.center[0], s.center[1], s.dim == 3 ? s.center[2] : 0);
    const CutoffData cut = build_cutoff(grid, traj.snaps.front().g, center, s.rho, K_eff);

    report["bounds"] = {{"K", sb.K}, {"L", sb.L}, {"K_eff", K_eff}};
    report["localization"] = {{"radius", cut.radius},
                              {"inj_estimate", cut.inj_estimate},
                              {"ball_wraps", cut.ball_wraps}};
    log << "  K = " << sb.K << ", L = " << sb.L << ", ball radius = " << cut.radius
        << (cut.ball_wraps ? " (wraps)" : "") << "\n";

    const detail::SnapshotScan scan =
        detail::scan_snapshots(grid, traj, cut, s.p_list, K_eff, sb.L);
    report["identities"] = {{"eq2_residual_max", scan.eq2_residual},
                            {"dv_residual_max", scan.dv_residual}};
    report["bounds"]["vol_ratio_c"] =
        detail::volume_ratio_rate(scan.series.front().samples, T_final);

    const detail::MetricEquivalence me =
        detail::metric_equivalence_check(scan.t, scan.lam_min, scan.lam_max, sb.K, sb.L);
    report["metric_equivalence"] = {{"pass", me.pass},
                                    {"pass_corrected", me.pass_corrected},
                                    {"rel_tol", detail::kEnvelopeTol},
                                    {"upper_excess", me.upper_excess},
                                    {"lower_excess", me.lower_excess},
                                    {"t", scan.t},
                                    {"lambda_min", scan.lam_min},
                                    {"lambda_max", scan.lam_max}};
    if (!me.pass)
        report["metric_equivalence"]["analysis"] =
            "the e^{±2Kt} envelope tracks only the Ricci term of "
            "d/dt g = -2 Ric + 4 du⊗du; the nonnegative gradient forcing is "
            "invisible to K, so the upper bound must widen to e^{(2K+4L²)t} "
            "(pass_corrected) whenever the coupling is active while the "
            "curvature stays small";

    std::vector<ExponentAudit> audits;
    audits.reserve(s.p_list.size());
    for (std::size_t j = 0; j < s.p_list.size(); ++j)
        audits.push_back(detail::audit_exponent(scan.series[j], s, K_eff,
                                                scan.initial_lp[j], T_final));

    ordered_json monitor_json = ordered_json::object();
    for (const ExponentAudit& a : audits) monitor_json[p_tag(a.p)] = exponent_json(a);
    report["monitor"] = std::move(monitor_json);

    // Comparison-function battery at the leading exponent.
    const HeatBoundFit heat = heat_bound_fit(traj);
    const double C_m = s.c_m_fitted ? std::max(2.0, 2.0 * heat.C) : s.c_m;
    const RiccatiCheck ric = riccati_check(traj, C_m);
    const ScalarField phi_half = cutoff(grid, cut.d0, 0.5 * s.rho, K_eff);
    const std::vector<EnergyCheck> energy =
        energy_inequality_sweep(traj, s.a_list, phi_half, C_m);
    const MoserReport moser =
        moser_sup_report(traj, cut, s.p_list.front(), K_eff, sb.L, C_m,
                         audits.front().norm.C, T_final);
    const PointwiseBounds pw = pointwise_bounds(traj, C_m);
    const SupGrowth growth = sup_phi_growth(traj, C_m);

    report["extension"]["heat_bound"] = {{"C", heat.C}, {"witness_t", heat.witness_t}};
    report["extension"]["C_m"] = C_m;
    report["extension"]["C_m_policy"] = s.c_m_fitted ? "fitted" : "pinned";
    report["extension"]["riccati"] = {{"pass", ric.pass},
                                      {"worst_excess", ric.worst_excess},
                                      {"slack", ric.slack},
                                      {"witness_t", ric.witness_t}};
    ordered_json energy_json = ordered_json::array();
    for (const EnergyCheck& e : energy)
        energy_json.push_back({{"a", e.a},
                               {"feasible", e.feasible},
                               {"C", e.C},
                               {"C_derived", e.C_derived}});
    report["extension"]["energy"] = std::move(energy_json);
    report["extension"]["moser"] = {{"sup_phi", moser.sup_phi},
                                    {"sup_phi0", moser.sup_phi0},
                                    {"A", moser.A},
                                    {"Lambda", moser.Lambda},
                                    {"C_n", moser.C_n},
                                    {"implied", moser.implied}};
    report["extension"]["pointwise"] = {{"lower_C", pw.lower_C},
                                        {"phi_ratio_C", pw.phi_ratio_C}};
    report["extension"]["sup_growth"] = {{"C_fit", growth.C_fit}, {"pass", growth.pass}};

    auto add = [&](const std::string& name, bool pass, std::string detail_text) {
        summary.verdicts.push_back({name, pass, std::move(detail_text)});
    };

    add("flow_completed", true,
        "t_final = " + format_g(T_final) + ", snapshots = " +
            std::to_string(traj.snaps.size()));
    add("requested_dt_stable", !traj.dt_clamped,
        traj.dt_clamped ? "the parabolic bound forced steps below the requested dt"
                        : "requested dt honored at every step");
    add("gradient_sup_monotone", grad_rise <= detail::kGradStepTol,
        "max step increase of sup |∇u|² = " + format_g(grad_rise));
    add("metric_equivalence", me.pass,
        me.pass ? "eigenvalue pencil inside [e^{-2Kt}, e^{2Kt}]"
                : "upper excess " + format_g(me.upper_excess) + ", lower excess " +
                      format_g(me.lower_excess) + "; see report analysis");
    add("metric_equivalence_corrected", me.pass_corrected,
        "upper envelope widened to e^{(2K+4L²)t}");

    for (const ExponentAudit& a : audits) {
        const std::string tag = "_" + p_tag(a.p);
        for (const InequalityReport& r : a.fits) add(r.name + tag, r.feasible, fit_detail(r));
        add("tk_interpolation" + tag, a.tk_pass,
            a.tk_pass ? "C = " + format_g(a.C_in)
                      : "fails at t = " + format_g(a.tk_first_t) + ", k = " +
                            std::to_string(a.tk_first_k));
        double comp_margin = 1.0;
        for (double m : a.comp.margin) comp_margin = std::min(comp_margin, m);
        add("gronwall_comparison" + tag, a.comp.pass,
            "min margin " + format_g(comp_margin) + ", rates (" +
                format_g(a.gamma.lambda1) + ", " + format_g(a.gamma.lambda2) + ")");
        add("gronwall_integrated" + tag, a.integrated_pass,
            "min margin " + format_g(a.integrated_margin));
        double ball_margin = 1.0;
        for (double m : a.ball.margin) ball_margin = std::min(ball_margin, m);
        add("ball_bound" + tag, a.ball.pass,
            a.ball.pass ? "min margin " + format_g(ball_margin)
                        : "violated from t = " + format_g(a.ball.first_violation_t));
        add("normalized_lp" + tag,
            std::isfinite(a.norm.C) && std::isfinite(a.norm.Q),
            "Q = " + format_g(a.norm.Q) + ", C = " + format_g(a.norm.C));
    }

    add("heat_bound_finite", std::isfinite(heat.C),
        "C = " + format_g(heat.C) + " at t = " + format_g(heat.witness_t));
    add("riccati", ric.pass,
        "worst excess " + format_g(ric.worst_excess) + " vs slack " +
            format_g(ric.slack) + " (C_m = " + format_g(C_m) + ")");
    for (const EnergyCheck& e : energy)
        add("energy_a" + format_g(e.a),
            e.feasible && std::isfinite(e.C) && std::isfinite(e.C_derived),
            e.feasible
                ? "C = " + format_g(e.C) + ", derived " + format_g(e.C_derived)
                : "infeasible: basis integral vanishes while the left side grows");
    add("moser_sup_finite",
        std::isfinite(moser.sup_phi) && moser.sup_phi > 0.0 &&
            std::isfinite(moser.implied),
        "sup Φ = " + format_g(moser.sup_phi) + ", implied constant " +
            format_g(moser.implied));
    add("sup_phi_growth", growth.pass, "C_fit = " + format_g(growth.C_fit));

    ordered_json verdict_json = ordered_json::array();
    for (const Verdict& v : summary.verdicts)
        verdict_json.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    report["verdicts"] = std::move(verdict_json);

    try {
        for (std::size_t j = 0; j < s.p_list.size(); ++j)
            write_monitor_csv((dir / ("monitor_" + p_tag(s.p_list[j]) + ".csv")).string(),
                              scan.series[j], audits[j].U);
        std::ofstream rep(dir / "report.json");
        rep << report.dump(2) << "\n";
        if (!rep.good()) throw std::runtime_error("cannot write report.json");
    } catch (const std::exception& e) {
        log << "artifact error: " << e.what() << "\n";
        summary.exit_code = 3;
        return summary;
    }

    print_verdicts(log, summary.verdicts);
    std::size_t failed = 0;
    for (const Verdict& v : summary.verdicts)
        if (!v.pass) ++failed;
    log << "artifacts: " << out_dir << " (" << summary.verdicts.size() << " audits, "
        << failed << " failed)\n";
    summary.exit_code = 0;
    return summary;
}

}  // namespace rhflow
