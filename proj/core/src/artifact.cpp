#include "rhflow/artifact.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rhflow {

namespace {

constexpr char kMagic[8] = {'R', 'H', 'F', 'T', 'R', 'A', 'J', '1'};

void put_i32(std::ostream& out, std::int32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::int32_t get_i32(std::istream& in, const char* what) {
    std::int32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
        throw std::runtime_error(std::string("trajectory: truncated reading ") + what);
    return v;
}

double get_f64(std::istream& in, const char* what) {
    double v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
        throw std::runtime_error(std::string("trajectory: truncated reading ") + what);
    return v;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_trajectory(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("trajectory: cannot write '" + path + "'");
    const Grid& grid = traj.grid;
    const int dim = grid.dim();
    out.write(kMagic, sizeof kMagic);
    put_i32(out, dim);
    for (int i = 0; i < 3; ++i) put_i32(out, grid.n(i));
    for (int i = 0; i < 3; ++i) put_f64(out, grid.extent(i));
    put_i32(out, static_cast<std::int32_t>(traj.snaps.size()));

    const int ncomp = dim * (dim + 1) / 2;
    for (const Snapshot& snap : traj.snaps) {
        put_f64(out, snap.t);
        for (std::size_t q = 0; q < grid.size(); ++q) {
            out.write(reinterpret_cast<const char*>(snap.g.at(q)),
                      ncomp * sizeof(double));
            put_f64(out, snap.u[q]);
        }
    }
    if (!out) throw std::runtime_error("trajectory: write failed for '" + path + "'");
}

Trajectory read_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("trajectory: cannot open '" + path + "'");
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("trajectory: bad magic in '" + path + "'");

    const int dim = get_i32(in, "dim");
    if (dim != 2 && dim != 3) throw std::runtime_error("trajectory: unsupported dim");
    std::array<int, 3> n{};
    for (int i = 0; i < 3; ++i) n[i] = get_i32(in, "resolution");
    std::array<double, 3> extent{};
    for (int i = 0; i < 3; ++i) extent[i] = get_f64(in, "extent");
    const std::int32_t nsnap = get_i32(in, "snapshot count");
    if (nsnap < 0) throw std::runtime_error("trajectory: negative snapshot count");

    Trajectory traj;
    traj.grid = Grid(dim, n, extent);
    const int ncomp = dim * (dim + 1) / 2;
    traj.snaps.resize(static_cast<std::size_t>(nsnap));
    for (Snapshot& snap : traj.snaps) {
        snap.t = get_f64(in, "snapshot time");
        snap.g.assign(traj.grid, dim);
        snap.u.assign(traj.grid);
        for (std::size_t q = 0; q < traj.grid.size(); ++q) {
            if (!in.read(reinterpret_cast<char*>(snap.g.at(q)), ncomp * sizeof(double)))
                throw std::runtime_error("trajectory: truncated reading metric");
            snap.u[q] = get_f64(in, "scalar field");
        }
    }
    return traj;
}

void write_monitor_csv(const std::string& path, const MonitorSeries& series,
                       const std::vector<double>& U) {
    if (series.samples.empty())
        throw std::invalid_argument("monitor csv: empty series");
    if (U.size() != series.samples.size())
        throw std::invalid_argument("monitor csv: U length mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("monitor csv: cannot write '" + path + "'");

    const std::size_t kmax = series.samples.front().Tk.size();
    out << "# t,A1,A2,A3,A4,B1,B2";
    for (std::size_t k = 1; k <= kmax; ++k) out << ",T" << k;
    out << ",Tp,Tpm1,S,Stilde,RicWeighted,VolOmega,VolBallHalf,LHSball,U\n";

    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        const MonitorSample& s = series.samples[i];
        out << fmt(s.t) << ',' << fmt(s.A1) << ',' << fmt(s.A2) << ',' << fmt(s.A3)
            << ',' << fmt(s.A4) << ',' << fmt(s.B1) << ',' << fmt(s.B2);
        for (double tk : s.Tk) out << ',' << fmt(tk);
        out << ',' << fmt(s.Tp) << ',' << fmt(s.Tpm1) << ',' << fmt(s.S) << ','
            << fmt(s.Stilde) << ',' << fmt(s.RicWeighted) << ',' << fmt(s.VolOmega)
            << ',' << fmt(s.VolBallHalf) << ',' << fmt(s.LHSball) << ',' << fmt(U[i])
            << '\n';
    }
    if (!out) throw std::runtime_error("monitor csv: write failed for '" + path + "'");
}

MonitorCsv read_monitor_csv(const std::string& path, double p, double K, double L) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("monitor csv: cannot open '" + path + "'");
    const std::size_t kmax = static_cast<std::size_t>(std::ceil(p));
    const std::size_t ncols = 7 + kmax + 9;

    MonitorCsv out;
    out.series.K = K;
    out.series.L = L;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> vals;
        vals.reserve(ncols);
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
        if (vals.size() != ncols)
            throw std::runtime_error("monitor csv: row with " + std::to_string(vals.size()) +
                                     " columns, expected " + std::to_string(ncols));
        MonitorSample s;
        std::size_t j = 0;
        s.t = vals[j++];
        s.p = p;
        s.A1 = vals[j++];
        s.A2 = vals[j++];
        s.A3 = vals[j++];
        s.A4 = vals[j++];
        s.B1 = vals[j++];
        s.B2 = vals[j++];
        s.Tk.assign(vals.begin() + j, vals.begin() + j + kmax);
        j += kmax;
        s.Tp = vals[j++];
        s.Tpm1 = vals[j++];
        s.S = vals[j++];
        s.Stilde = vals[j++];
        s.RicWeighted = vals[j++];
        s.VolOmega = vals[j++];
        s.VolBallHalf = vals[j++];
        s.LHSball = vals[j++];
        out.U.push_back(vals[j++]);
        out.series.samples.push_back(std::move(s));
    }
    if (out.series.samples.empty())
        throw std::runtime_error("monitor csv: no data rows in '" + path + "'");
    return out;
}

}  // namespace rhflow
