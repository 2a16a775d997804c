#pragma once

#include <array>
#include <string>
#include <vector>

#include "rhflow/grid.hpp"
#include "rhflow/warped.hpp"

// Run configuration: a flat key = value text format with dotted section
// prefixes (diff-friendly, no schema tooling).  Lists are space-separated;
// '#' starts a comment.  serialize_scenario always emits every key in a
// fixed order, so parse → serialize → parse is the identity and the FNV-1a
// hash of the canonical text identifies a configuration exactly.
namespace rhflow {

enum class MetricKind { flat, warped, conformal };

struct Scenario {
    std::string name = "custom";

    int dim = 2;
    std::array<int, 3> resolution{64, 64, 1};
    std::array<double, 3> extent{kTwoPi, kTwoPi, kTwoPi};

    MetricKind metric = MetricKind::flat;
    double flat_scale = 1.0;
    // Warped product diag(a², b²[, c²]); v is the conformal exponent.  All
    // profiles are functions of the first coordinate.
    Profile a = Profile::constant(1.0);
    Profile b = Profile::constant(1.0);
    Profile c = Profile::constant(1.0);
    Profile v = Profile::constant(0.0);

    Profile u0 = Profile::constant(0.0);

    double t_max = 1.0;
    double dt = 1e-3;
    double cfl_sigma = 1.0;
    int snapshot_stride = 1;

    std::array<int, 3> center{0, 0, 0};
    double rho = 1.0;

    std::vector<double> p_list{3.0};
    bool c_in_fitted = true;  // aggregate constant: fitted from the run, or pinned
    double c_in = 0.0;
    bool c_m_fitted = true;  // comparison-function constant: fitted or pinned
    double c_m = 2.0;
    std::vector<double> a_list{1.0, 2.0, 4.0};

    unsigned long seed = 0;

    bool operator==(const Scenario&) const = default;
};

// Throws std::invalid_argument naming the offending key and its constraint.
void validate_scenario(const Scenario& s);

// parse_scenario_text validates before returning; unknown keys and malformed
// values name the key in the error message.
Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario(const std::string& path);  // throws std::runtime_error if unreadable

std::string serialize_scenario(const Scenario& s);

// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

std::vector<std::string> preset_names();
// Throws std::invalid_argument for unknown names, listing the bundled ones.
Scenario preset_scenario(const std::string& name);

}  // namespace rhflow
