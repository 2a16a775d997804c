#pragma once

// End-to-end orchestration: run a scenario and persist its artifacts, then
// re-check every recorded claim from the artifacts alone.
//
// A run directory contains
//   scenario.txt      canonical key=value scenario (hash identity)
//   trajectory.bin    every recorded snapshot (metric + scalar field)
//   monitor_p<P>.csv  monitor time series for each exponent P
//   report.json       bounds, fitted constants, comparisons, verdicts
//   plots/            TSV series and SVG overlays (emit_plots)
//
// run_scenario prints one PASS/FAIL line per audited claim and returns a
// summary; a failed audit does not change the exit code (the run completed
// and the artifacts record the failure).  Only a flow abort or an
// unwritable artifact is a nonzero exit.  verify_artifact is the strict
// gate: it rebuilds the audits from the persisted series and exits nonzero
// if any claim fails or any stored constant cannot be reproduced.

#include <iosfwd>
#include <string>
#include <vector>

#include "rhflow/scenario.hpp"

namespace rhflow {

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunSummary {
    int exit_code = 1;
    bool completed = false;     // flow reached t_max without a singularity
    double K = 0.0;             // sup |Ric| over the run
    double L = 0.0;             // sup |grad u| over the run
    std::vector<Verdict> verdicts;
    std::string out_dir;
};

RunSummary run_scenario(const Scenario& s, const std::string& out_dir,
                        std::ostream& log);

// Exit 0 iff every verdict reproduces from the artifacts; failures name the
// violated inequality.
int verify_artifact(const std::string& dir, std::ostream& log);

// Deterministic: emitting twice yields byte-identical files.
int emit_plots(const std::string& dir, std::ostream& log);

}  // namespace rhflow
