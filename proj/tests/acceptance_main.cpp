// Release gate.  Twelve numbered checks cover the curvature oracles, the
// integrator, the evolution identities, the monitored inequality battery,
// the extension checks, and the tooling contract.  Every check prints one
// PASS/FAIL line with its measured numbers; tolerances are pinned here, not
// configurable.  Two checks fail by construction on flat_coupled (the
// eigenvalue envelope e^{±2Kt} cannot see the gradient forcing, and the
// artifact verifier honestly re-derives that failure); they are printed as
// documented failures, and the process exits 0 only when the outcome
// matches the documented expectation exactly.
//
// Fresh artifacts are produced under a scratch tree (--scratch <dir>,
// default under the system temp directory): every bundled scenario at its
// shipped size, the same scenario refined (N -> 2N, dt -> dt/2), one rerun
// for byte-identity, and one deliberately corrupted copy.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rhflow/calculus.hpp"
#include "rhflow/curvature.hpp"
#include "rhflow/flow.hpp"
#include "rhflow/localization.hpp"
#include "rhflow/monitor.hpp"
#include "rhflow/runner.hpp"
#include "rhflow/scenario.hpp"
#include "rhflow/warped.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace rhflow;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json load_json(const fs::path& p) {
    std::ifstream f(p);
    if (!f) throw std::runtime_error("cannot open " + p.string());
    return json::parse(f);
}

std::string read_bytes(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

// Rewrites one numeric column of a monitor CSV, leaving every other token
// byte-identical, to fabricate an artifact whose stored series contradicts
// its own trajectory.
void scale_csv_column(const fs::path& path, std::size_t col, double factor) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    in.close();
    std::ofstream out(path, std::ios::binary);
    for (const std::string& line : lines) {
        if (!line.empty() && line[0] == '#') {
            out << line << "\n";
            continue;
        }
        std::vector<std::string> tok;
        std::stringstream ss(line);
        for (std::string t; std::getline(ss, t, ',');) tok.push_back(t);
        if (col < tok.size()) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", std::stod(tok[col]) * factor);
            tok[col] = buf;
        }
        for (std::size_t i = 0; i < tok.size(); ++i) out << (i ? "," : "") << tok[i];
        out << "\n";
    }
}

struct GateLine {
    int id = 0;
    std::string title;
    bool pass = false;
    bool documented = false;  // failure that is analyzed and expected
    std::string detail;
};

std::vector<GateLine> gate;

void record(int id, const std::string& title, bool pass, const std::string& detail,
            bool documented = false) {
    gate.push_back({id, title, pass, documented, detail});
}

struct RunData {
    std::string name;
    RunSummary summary;
    json report;
    fs::path dir;
};

RunData do_run(const Scenario& s, const fs::path& dir) {
    const auto t0 = std::chrono::steady_clock::now();
    std::cout << "# run " << s.name << " (" << s.resolution[0] << "^" << s.dim
              << ", dt " << s.dt << ") ... " << std::flush;
    fs::create_directories(dir.parent_path());
    std::ofstream log(dir.string() + ".log");
    RunData r;
    r.name = s.name;
    r.dir = dir;
    r.summary = run_scenario(s, dir.string(), log);
    r.report = load_json(dir / "report.json");
    std::cout << fmt(seconds_since(t0)) << " s\n";
    return r;
}

Scenario refined_scenario(Scenario s) {
    for (int a = 0; a < s.dim; ++a) s.resolution[a] *= 2;
    s.dt *= 0.5;
    s.snapshot_stride *= 2;
    s.name += "_refined";
    return s;
}

// Ratio-based stability for a pair of fitted constants: identically zero
// fits (exactly flat data) count as stable, anything else must agree
// within the given factor.
bool stable_pair(double a, double b, double factor) {
    if (!std::isfinite(a) || !std::isfinite(b)) return false;
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (hi <= 1e-8) return true;
    return lo > 0.0 && hi / lo <= factor;
}

const std::array<const char*, 5> kFitNames = {
    "lp_energy_growth", "ricci_gradient_energy", "curvature_gradient_energy",
    "hessian_weighted_energy", "hessian_energy"};

std::vector<std::string> p_tags(const json& report) {
    std::vector<std::string> tags;
    for (auto it = report.at("monitor").begin(); it != report.at("monitor").end(); ++it)
        tags.push_back(it.key());
    return tags;
}

}  // namespace

int main(int argc, char** argv) {
    fs::path scratch = fs::temp_directory_path() / "rhflow_acceptance";
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--scratch") scratch = argv[i + 1];
    fs::remove_all(scratch);
    fs::create_directories(scratch);
    std::cout << "# scratch tree: " << scratch << "\n";
    const auto wall0 = std::chrono::steady_clock::now();

    // [1] Generic curvature engine against the closed-form warped-product
    // oracle diag(1, (2+cos x)^2), whose scalar curvature is 2cos x/(2+cos x).
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto oracle_err = [](int n) {
            const Grid grid = Grid::cube(2, n);
            const MetricField g =
                product_metric(grid, Profile::constant(1.0), Profile{2.0, 1.0, 1.0, 0.0, 1.0});
            const ScalarField u(grid);
            CurvaturePack pack;
            compute_pack(grid, g, u, PackLevel::base, pack);
            double err = 0.0;
            for (std::size_t q = 0; q < grid.size(); ++q) {
                int i, j, k;
                grid.unpack(q, i, j, k);
                const double x = grid.coord(0, i);
                const double closed = 2.0 * std::cos(x) / (2.0 + std::cos(x));
                err = std::max(err, std::abs(pack.geo.scal[q] - closed));
            }
            return err;
        };
        const double e128 = oracle_err(128);
        const double e256 = oracle_err(256);
        const double ratio = e128 / e256;
        const double secs = seconds_since(t0);
        record(1, "curvature oracle equivalence",
               e128 <= 5e-3 && ratio >= 3.0 && ratio <= 5.0 && secs < 10.0,
               "max|R_gen - R_closed| = " + fmt(e128) + " at N=128 (<= 5e-3), ratio 128/256 = " +
                   fmt(ratio) + " in [3,5], " + fmt(secs) + " s");
    }

    // [2] Exact flatness: curvature, Ricci, and Christoffel symbols vanish
    // on the flat metric at every tested resolution and dimension.
    {
        auto flat_err = [](int dim, int n) {
            const Grid grid = Grid::cube(dim, n);
            const MetricField g = flat_metric(grid);
            const ScalarField u(grid);
            CurvaturePack pack;
            compute_pack(grid, g, u, PackLevel::base, pack);
            double worst = max_abs(pack.rm_norm);
            worst = std::max(worst, std::sqrt(max_abs(pack.ric_norm2)));
            for (double v : pack.geo.gamma.data) worst = std::max(worst, std::abs(v));
            return worst;
        };
        const double w = std::max({flat_err(2, 32), flat_err(2, 128), flat_err(3, 16)});
        record(2, "flat exactness", w <= 1e-10,
               "max of |Rm|, |Ric|, |Gamma| = " + fmt(w) +
                   " over N=32,128 (2D) and N=16 (3D), tolerance 1e-10");
    }

    // [3] Integrator: the flat stationary state is step-invariant, and a
    // one-step Richardson probe on the coupled initial data shows fourth
    // order.  The probe runs at N = 32, the largest lattice whose stability
    // bound admits a step big enough to keep the one-step differences far
    // above roundoff.
    {
        const Grid fgrid = Grid::cube(2, 32);
        FlowOptions fo;
        fo.t_max = 5e-3;
        fo.dt = 1e-3;
        fo.snapshot_stride = 1;
        const Trajectory ft = evolve(fgrid, flat_metric(fgrid), ScalarField(fgrid), fo);
        double drift = 0.0;
        for (std::size_t i = 0; i + 1 < ft.snaps.size(); ++i) {
            for (std::size_t q = 0; q < ft.snaps[i].g.data.size(); ++q)
                drift = std::max(drift,
                                 std::abs(ft.snaps[i + 1].g.data[q] - ft.snaps[i].g.data[q]));
            for (std::size_t q = 0; q < ft.snaps[i].u.data.size(); ++q)
                drift = std::max(drift,
                                 std::abs(ft.snaps[i + 1].u.data[q] - ft.snaps[i].u.data[q]));
        }

        const Scenario wc = preset_scenario("warped_coupled");
        const Grid grid(2, {32, 32, 1}, wc.extent);
        const MetricField g0 = product_metric(grid, wc.a, wc.b);
        const ScalarField u0 = profile_field(grid, wc.u0);
        const double dt0 = 8e-3;
        const bool admissible = dt0 <= stable_dt(grid, g0, 1.0);
        auto final_state = [&](double dt) {
            FlowOptions o;
            o.t_max = dt0;
            o.dt = dt;
            o.snapshot_stride = 1 << 20;
            return evolve(grid, g0, u0, o).snaps.back();
        };
        const Snapshot s1 = final_state(dt0);
        const Snapshot s2 = final_state(dt0 / 2);
        const Snapshot s3 = final_state(dt0 / 4);
        auto dist = [](const Snapshot& a, const Snapshot& b) {
            double m = 0.0;
            for (std::size_t q = 0; q < a.g.data.size(); ++q)
                m = std::max(m, std::abs(a.g.data[q] - b.g.data[q]));
            for (std::size_t q = 0; q < a.u.data.size(); ++q)
                m = std::max(m, std::abs(a.u.data[q] - b.u.data[q]));
            return m;
        };
        const double e1 = dist(s1, s2);
        const double e2 = dist(s2, s3);
        const double order = std::log2(e1 / e2);
        record(3, "flow correctness",
               drift <= 1e-14 && admissible && order >= 3.5 && order <= 4.5,
               "flat per-step drift " + fmt(drift) + " (<= 1e-14); Richardson order " +
                   fmt(order) + " in [3.5,4.5] (one-step errors " + fmt(e1) + ", " + fmt(e2) +
                   " on the coupled data at N=32)");
    }

    // Artifact matrix: every bundled scenario at its shipped size and once
    // refined, plus a rerun of flat_coupled for the byte-identity probe.
    std::map<std::string, RunData> base, refined;
    for (const std::string& name : preset_names()) {
        const Scenario s = preset_scenario(name);
        base.emplace(name, do_run(s, scratch / "base" / name));
        refined.emplace(name, do_run(refined_scenario(s), scratch / "refined" / name));
    }
    const RunData rerun = do_run(preset_scenario("flat_coupled"), scratch / "rerun" / "flat_coupled");

    bool all_completed = true;
    for (const auto& [name, r] : base) all_completed &= r.summary.exit_code == 0;
    for (const auto& [name, r] : refined) all_completed &= r.summary.exit_code == 0;
    if (!all_completed) {
        std::cout << "FATAL: a scenario run did not complete; gate aborted\n";
        return 1;
    }

    // [4] Evolution identity residuals on the coupled scenario shrink by at
    // least 3x when h and dt are both halved.
    {
        const json& ib = base.at("warped_coupled").report.at("identities");
        const json& ir = refined.at("warped_coupled").report.at("identities");
        const double eq2_b = ib.at("eq2_residual_max").get<double>();
        const double eq2_r = ir.at("eq2_residual_max").get<double>();
        const double dv_b = ib.at("dv_residual_max").get<double>();
        const double dv_r = ir.at("dv_residual_max").get<double>();
        const bool pass = eq2_r > 0.0 && dv_r > 0.0 && eq2_b / eq2_r >= 3.0 && dv_b / dv_r >= 3.0;
        record(4, "identity residual refinement", pass,
               "heat-operator identity " + fmt(eq2_b) + " -> " + fmt(eq2_r) + " (x" +
                   fmt(eq2_b / eq2_r) + "), volume identity " + fmt(dv_b) + " -> " + fmt(dv_r) +
                   " (x" + fmt(dv_b / dv_r) + "), required >= 3x");
    }

    // [5] sup|grad u|^2 never rises by more than 1e-8 in a step, on every
    // run in the matrix.
    {
        double worst = 0.0;
        std::string where = "-";
        for (const auto* group : {&base, &refined})
            for (const auto& [name, r] : *group) {
                const double rise =
                    r.report.at("flow").at("sup_grad_u2_max_step_increase").get<double>();
                if (rise > worst) {
                    worst = rise;
                    where = r.report.at("scenario").at("name").get<std::string>();
                }
            }
        record(5, "gradient sup monotonicity", worst <= 1e-8,
               "largest per-step increase " + fmt(worst) + " (" + where + "), tolerance 1e-8");
    }

    // [6] Eigenvalues of g(0)^{-1} g(t) against [e^{-2Kt}, e^{2Kt}] with the
    // measured K.  flat_coupled violates the upper envelope by construction:
    // its metric stays a flat product (K = 0 exactly) while d/dt g =
    // 4 du x du stretches g_xx, so only the corrected envelope
    // e^{(2K+4L^2)t} can hold.  Documented failure, not a defect.
    {
        std::vector<std::string> violators;
        bool corrected_ok = true;
        double fc_excess = 0.0;
        for (const auto& [name, r] : base) {
            const json& me = r.report.at("metric_equivalence");
            if (!me.at("pass").get<bool>()) violators.push_back(name);
            corrected_ok &= me.at("pass_corrected").get<bool>();
            if (name == "flat_coupled") fc_excess = me.at("upper_excess").get<double>();
        }
        const bool documented = violators == std::vector<std::string>{"flat_coupled"} &&
                                corrected_ok;
        record(6, "metric equivalence envelope", violators.empty(),
               violators.empty()
                   ? "all scenarios inside the envelope"
                   : "flat_coupled exceeds e^{2Kt} by " + fmt(fc_excess) +
                         " with K_measured = 0 (pure gradient forcing); corrected envelope "
                         "e^{(2K+4L^2)t} holds on every scenario",
               documented);
    }

    // [7] Hessian-ladder interpolation: exact on every recorded sample of
    // every run, and on synthetic nonnegative fields with random constants.
    {
        bool samples_ok = true;
        for (const auto* group : {&base, &refined})
            for (const auto& [name, r] : *group)
                for (const std::string& tag : p_tags(r.report))
                    samples_ok &=
                        r.report.at("monitor").at(tag).at("tk").at("pass").get<bool>();

        std::mt19937 rng(20260817u);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        bool synth_ok = true;
        for (int trial = 0; trial < 100; ++trial) {
            const double p = std::array<double, 3>{3.0, 4.0, 6.0}[trial % 3];
            const int kmax = static_cast<int>(p);
            MonitorSample s;
            s.p = p;
            s.Tk.assign(kmax, 0.0);
            const int npts = 20;
            for (int j = 0; j < npts; ++j) {
                const double w = unit(rng);
                const double rm = unit(rng) < 0.1 ? 0.0 : 3.0 * unit(rng);
                for (int k = 1; k <= kmax; ++k) s.Tk[k - 1] += w * std::pow(rm, k - 1);
                s.Tp += w * std::pow(rm, p - 1.0);
                s.Tpm1 += w * std::pow(rm, p - 2.0);
            }
            const double C = 0.1 + 9.9 * unit(rng);
            for (int k = 1; k <= kmax; ++k) synth_ok &= check_tk_interpolation(s, C, k);
        }
        record(7, "hessian ladder interpolation", samples_ok && synth_ok,
               std::string("run samples ") + (samples_ok ? "exact" : "VIOLATED") +
                   ", 100 synthetic fields with C in [0.1,10] " +
                   (synth_ok ? "exact" : "VIOLATED") + ", rel tol 1e-12");
    }

    // [8] The five fitted minimal constants are finite on every scenario and
    // move by at most 2x under the joint refinement.
    {
        bool ok = true;
        double worst_ratio = 1.0;
        std::string where = "-";
        for (const auto& [name, rb] : base) {
            const RunData& rr = refined.at(name);
            for (const std::string& tag : p_tags(rb.report)) {
                const json& fb = rb.report.at("monitor").at(tag).at("fits");
                const json& fr = rr.report.at("monitor").at(tag).at("fits");
                for (const char* fit : kFitNames) {
                    const bool feas = fb.at(fit).at("feasible").get<bool>() &&
                                      fr.at(fit).at("feasible").get<bool>();
                    const double cb = fb.at(fit).at("C").get<double>();
                    const double cr = fr.at(fit).at("C").get<double>();
                    const bool stable = feas && stable_pair(cb, cr, 2.0);
                    ok &= stable;
                    const double lo = std::min(cb, cr), hi = std::max(cb, cr);
                    if (hi > 1e-8 && lo > 0.0 && hi / lo > worst_ratio) {
                        worst_ratio = hi / lo;
                        where = name + "/" + tag + "/" + fit;
                    } else if (!stable) {
                        where = name + "/" + tag + "/" + fit;
                    }
                }
            }
        }
        record(8, "fitted constants refinement-stable", ok,
               "all finite; worst base/refined ratio " + fmt(worst_ratio) + " (" + where +
                   "), allowed 2");
    }

    // [9] Aggregate comparison bound and final ball bound hold with positive
    // margin everywhere, and the envelope constants match the hand value at
    // K=1, L=0, T=0, p=3, rho=1, C=1.
    {
        bool ok = true;
        double min_margin = 1.0;
        std::string where = "-";
        for (const auto& [name, r] : base)
            for (const std::string& tag : p_tags(r.report)) {
                const json& m = r.report.at("monitor").at(tag);
                const double gm = m.at("gronwall").at("min_margin").get<double>();
                const double bm = m.at("ball").at("min_margin").get<double>();
                const bool here = m.at("gronwall").at("pass").get<bool>() &&
                                  m.at("ball").at("pass").get<bool>() && gm > 0.0 && bm > 0.0;
                ok &= here;
                if (std::min(gm, bm) < min_margin) {
                    min_margin = std::min(gm, bm);
                    where = name + "/" + tag;
                }
            }
        const GammaConstants gc = gamma_constants(1.0, 0.0, 0.0, 3.0, 1.0, 1.0);
        const double hand = std::max({std::abs(gc.lambda1 - 1.0), std::abs(gc.lambda2 - 1.0),
                                      std::abs(gc.gamma1 - 1.5), std::abs(gc.gamma2 - 2.5)});
        record(9, "comparison and ball bounds", ok && hand <= 1e-12,
               "min margin " + fmt(min_margin) + " (" + where +
                   "); envelope constants vs hand value: max deviation " + fmt(hand) +
                   " (<= 1e-12)");
    }

    // [10] The normalized-form constant is uniform within 50% across the
    // monitored exponents on the coupled scenario.
    {
        const json& mon = base.at("warped_coupled").report.at("monitor");
        double lo = 1e300, hi = 0.0;
        for (const std::string& tag : {std::string("p3"), std::string("p4"), std::string("p6")}) {
            const double c = mon.at(tag).at("normalized").at("C").get<double>();
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        record(10, "normalized constant uniform in p", hi / lo <= 1.5,
               "C(p) spread " + fmt(hi / lo) + " across p = 3,4,6 (allowed 1.5), range [" +
                   fmt(lo) + ", " + fmt(hi) + "]");
    }

    // [11] Extension battery: parabolic sup bound fit finite and stable,
    // Riccati comparison holds at twice the fitted constant, the localized
    // energy inequality stays feasible with at-most-linear growth in a, and
    // the iterated sup bound is finite through the horizon everywhere.
    {
        bool heat_ok = true, ric_ok = true, energy_ok = true, moser_ok = true;
        double worst_drift = 1.0, worst_a_ratio = 0.0;
        for (const auto& [name, rb] : base) {
            const json& eb = rb.report.at("extension");
            const json& er = refined.at(name).report.at("extension");
            const double hb = eb.at("heat_bound").at("C").get<double>();
            const double hr = er.at("heat_bound").at("C").get<double>();
            heat_ok &= std::isfinite(hb) && stable_pair(hb, hr, 2.0);
            const double lo = std::min(hb, hr), hi = std::max(hb, hr);
            if (hi > 1e-8 && lo > 0.0) worst_drift = std::max(worst_drift, hi / lo);

            ric_ok &= eb.at("riccati").at("pass").get<bool>();

            double c1 = -1.0, c4 = -1.0;
            for (const json& e : eb.at("energy")) {
                energy_ok &= e.at("feasible").get<bool>();
                if (e.at("a").get<double>() == 1.0) c1 = e.at("C").get<double>();
                if (e.at("a").get<double>() == 4.0) c4 = e.at("C").get<double>();
            }
            if (c1 <= 1e-12) {
                energy_ok &= c4 <= 1e-9;
            } else {
                energy_ok &= c4 / c1 <= 6.0;
                worst_a_ratio = std::max(worst_a_ratio, c4 / c1);
            }

            const double sp = eb.at("moser").at("sup_phi").get<double>();
            moser_ok &= std::isfinite(sp) && sp > 0.0 &&
                        std::isfinite(eb.at("moser").at("implied").get<double>());
        }
        record(11, "extension battery", heat_ok && ric_ok && energy_ok && moser_ok,
               "sup-bound fit drift " + fmt(worst_drift) + " (<= 2); Riccati " +
                   (ric_ok ? "holds" : "VIOLATED") + "; energy C(a=4)/C(a=1) worst " +
                   fmt(worst_a_ratio) + " (<= 6); iterated sup bound " +
                   (moser_ok ? "finite through t = T" : "NOT finite"));
    }

    // [12] Tooling: the verifier accepts every freshly produced artifact,
    // rejects a corrupted one naming the violated bound, and reruns are
    // byte-identical.  flat_coupled is the documented exception: its
    // artifact honestly records the envelope failure of [6], and the
    // verifier re-derives exactly that failure.
    {
        std::vector<std::string> rejected;
        bool fc_names_envelope = false;
        for (const auto& [name, r] : base) {
            std::ostringstream vlog;
            const int rc = verify_artifact(r.dir.string(), vlog);
            if (rc != 0) {
                rejected.push_back(name);
                if (name == "flat_coupled")
                    fc_names_envelope = vlog.str().find("metric_equivalence") != std::string::npos;
            }
        }

        const fs::path probe = scratch / "probe" / "warped_ricci";
        fs::create_directories(probe.parent_path());
        fs::copy(base.at("warped_ricci").dir, probe, fs::copy_options::recursive);
        scale_csv_column(probe / "monitor_p3.csv", 17, 1e8);  // the ball-integral column
        std::ostringstream plog;
        const int probe_rc = verify_artifact(probe.string(), plog);
        const bool probe_ok =
            probe_rc != 0 && plog.str().find("ball_bound") != std::string::npos;

        bool bytes_ok = true;
        for (const char* f : {"trajectory.bin", "monitor_p3.csv", "report.json"})
            bytes_ok &= read_bytes(base.at("flat_coupled").dir / f) == read_bytes(rerun.dir / f);

        const bool pass = rejected.empty() && probe_ok && bytes_ok;
        const bool documented = rejected == std::vector<std::string>{"flat_coupled"} &&
                                fc_names_envelope && probe_ok && bytes_ok;
        record(12, "tooling contract", pass,
               std::string("corruption probe ") +
                   (probe_ok ? "rejected naming ball_bound" : "NOT rejected") + "; reruns " +
                   (bytes_ok ? "byte-identical" : "DIFFER") +
                   (rejected.empty()
                        ? "; verifier accepts all artifacts"
                        : "; verifier rejects flat_coupled by re-deriving the envelope "
                          "failure of [6] (cascade, not an independent defect)"),
               documented);
    }

    std::cout << "\n";
    int unexpected = 0, documented_fails = 0, passed = 0;
    for (const GateLine& g : gate) {
        const bool as_expected = g.documented ? !g.pass : g.pass;
        if (g.pass) ++passed;
        if (!g.pass && g.documented) ++documented_fails;
        if (!as_expected) ++unexpected;
        std::printf("%s  [%2d] %s: %s\n",
                    g.pass ? "PASS" : (g.documented ? "FAIL (documented)" : "FAIL"), g.id,
                    g.title.c_str(), g.detail.c_str());
    }
    std::printf("\ngate: %d/12 pass, %d documented structural failures, %d unexpected (%.0f s)\n",
                passed, documented_fails, unexpected, seconds_since(wall0));
    return unexpected == 0 ? 0 : 1;
}
