#pragma once

#include <string>
#include <vector>

#include "rhflow/flow.hpp"
#include "rhflow/monitor.hpp"

// On-disk artifact formats.
//
// Trajectory (binary): magic "RHFTRAJ1"; then int32 dim, int32 n[3],
// double extent[3], int32 snapshot count; then per snapshot one double t
// followed by the lattice in row-major order (x fastest), each point
// contributing the lower-triangle metric components (00),(10),(11)[,(20),
// (21),(22)] and then u.  All values little-endian IEEE doubles.
//
// Monitor CSV: a "# "-prefixed header line naming the columns, then one row
// per snapshot, every value printed with %.17g so doubles round-trip
// exactly.  The T_k ladder makes the column count depend on p; the header is
// authoritative.
namespace rhflow {

void write_trajectory(const std::string& path, const Trajectory& traj);
// Throws std::runtime_error on missing file, bad magic, or truncation.
Trajectory read_trajectory(const std::string& path);

struct MonitorCsv {
    MonitorSeries series;
    std::vector<double> U;
};

void write_monitor_csv(const std::string& path, const MonitorSeries& series,
                       const std::vector<double>& U);
// p must match the value the file was written with (the T_k column count
// depends on it); K and L re-populate the series bounds.
MonitorCsv read_monitor_csv(const std::string& path, double p, double K, double L);

}  // namespace rhflow
