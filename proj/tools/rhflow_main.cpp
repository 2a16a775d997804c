// Command line front end.  Four subcommands:
//
//   run     --scenario <file-or-preset> --out <dir>   integrate and audit
//   verify  --artifact <dir>                           re-check a persisted run
//   plots   --artifact <dir>                           emit TSV/SVG overlays
//   presets                                            list bundled scenarios
//
// `run` accepts either a scenario file path or the name of a bundled
// preset; --p/--resolution/--tmax override the corresponding scenario
// fields after parsing, so a preset can be rerun at a different lattice
// size or horizon without writing a file.  Exit codes pass through from
// the library: run returns 0 even when audits fail (the report records
// them), 2 on singular termination, 3 when artifacts cannot be written;
// verify returns 0 only when every re-checked verdict holds.

#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rhflow/runner.hpp"
#include "rhflow/scenario.hpp"

namespace {

rhflow::Scenario load_scenario(const std::string& arg) {
    if (std::filesystem::exists(arg)) return rhflow::parse_scenario(arg);
    try {
        return rhflow::preset_scenario(arg);
    } catch (const std::exception&) {
        std::string msg = "no scenario file '" + arg + "' and no preset of that name; bundled:";
        for (const auto& n : rhflow::preset_names()) msg += " " + n;
        throw std::runtime_error(msg);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"torus Ricci-harmonic flow laboratory"};
    app.require_subcommand(1);

    std::string scenario_arg;
    std::string out_dir;
    std::string artifact_dir;
    std::vector<double> p_override;
    int resolution_override = 0;
    double tmax_override = 0.0;

    CLI::App* run = app.add_subcommand("run", "integrate a scenario and audit the result");
    run->add_option("--scenario", scenario_arg, "scenario file or bundled preset name")
        ->required();
    run->add_option("--out", out_dir, "directory for the artifact bundle")->required();
    run->add_option("--p", p_override, "override monitor.p_list (repeatable)");
    run->add_option("--resolution", resolution_override,
                    "override grid.resolution on every axis");
    run->add_option("--tmax", tmax_override, "override flow.t_max");

    CLI::App* verify = app.add_subcommand("verify", "re-check a persisted artifact");
    verify->add_option("--artifact", artifact_dir, "artifact directory")->required();

    CLI::App* plots = app.add_subcommand("plots", "emit plot data for an artifact");
    plots->add_option("--artifact", artifact_dir, "artifact directory")->required();

    app.add_subcommand("presets", "list bundled scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            rhflow::Scenario s = load_scenario(scenario_arg);
            if (!p_override.empty()) s.p_list = p_override;
            if (resolution_override > 0) {
                for (int a = 0; a < s.dim; ++a) s.resolution[a] = resolution_override;
            }
            if (tmax_override > 0.0) s.t_max = tmax_override;
            return rhflow::run_scenario(s, out_dir, std::cout).exit_code;
        }
        if (verify->parsed()) return rhflow::verify_artifact(artifact_dir, std::cout);
        if (plots->parsed()) return rhflow::emit_plots(artifact_dir, std::cout);
        for (const auto& n : rhflow::preset_names()) std::cout << n << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "rhflow: " << e.what() << "\n";
        return 1;
    }
}
