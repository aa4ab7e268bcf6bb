// Field and time-series persistence: CSV with full double precision, and
// snapshots as a one-line text header plus a raw little-endian float64
// payload (u1, u2, phi, mu row-major, then both wall traces). Round trips
// are bit-exact.
#pragma once

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mcl/diagnostics.hpp"

namespace mcl {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VersionMismatch : IoError {
    using IoError::IoError;
};
struct DimensionMismatch : IoError {
    using IoError::IoError;
};
struct TruncatedPayload : IoError {
    using IoError::IoError;
};

inline constexpr int kSnapshotVersion = 1;

inline const char* timeseries_header() {
    return "t,kinetic,gradient,doublewell,wall,total,viscous_diss,slip_diss,chem_diss,"
           "relax_diss,damping_norm,law_residual,mass_mean,picard_iters";
}

inline void write_timeseries(const std::string& path, const std::vector<StepRecord>& records) {
    std::ofstream out(path);
    if (!out) throw IoError("write_timeseries: cannot open " + path);
    out << timeseries_header() << "\n";
    char buf[512];
    for (const auto& r : records) {
        const EnergyReport& e = r.energy;
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g,%.17g,%d\n",
                      r.t, e.kinetic, e.gradient, e.doublewell, e.wall, e.total,
                      e.viscous_diss, e.slip_diss, e.chem_diss, e.relax_diss, e.damping_norm,
                      r.law_residual, r.mass_mean, r.picard.iterations);
        out << buf;
    }
    if (!out) throw IoError("write_timeseries: write failed on " + path);
}

struct TimeseriesRow {
    double t, kinetic, gradient, doublewell, wall, total;
    double viscous_diss, slip_diss, chem_diss, relax_diss, damping_norm;
    double law_residual, mass_mean;
    int picard_iters;
};

inline std::vector<TimeseriesRow> read_timeseries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_timeseries: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("read_timeseries: empty file " + path);
    if (line != timeseries_header())
        throw IoError("read_timeseries: unrecognized header in " + path);
    std::vector<TimeseriesRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TimeseriesRow r{};
        const int got = std::sscanf(
            line.c_str(),
            "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%d", &r.t, &r.kinetic,
            &r.gradient, &r.doublewell, &r.wall, &r.total, &r.viscous_diss, &r.slip_diss,
            &r.chem_diss, &r.relax_diss, &r.damping_norm, &r.law_residual, &r.mass_mean,
            &r.picard_iters);
        if (got != 14) throw IoError("read_timeseries: malformed row in " + path);
        rows.push_back(r);
    }
    return rows;
}

inline void write_snapshot(const std::string& path, const ChannelGrid& g, const SimState& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_snapshot: cannot open " + path);
    char header[512];
    const PhysParams& p = s.params;
    std::snprintf(header, sizeof(header),
                  "mclsnap v%d Nx=%d Ny=%d Lx=%.17g t=%.17g beta=%.17g a=%.17g delta=%.17g "
                  "nu=%.17g mobility=%.17g relax=%.17g\n",
                  kSnapshotVersion, g.Nx, g.Ny, g.Lx, s.t, p.beta, p.a, p.delta, p.nu,
                  p.mobility, p.relax);
    out << header;
    auto dump = [&](const std::vector<double>& v) {
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    dump(s.u.u1.values);
    dump(s.u.u2.values);
    dump(s.phi.values);
    dump(s.mu.values);
    dump(s.psi_bottom.values);
    dump(s.psi_top.values);
    if (!out) throw IoError("write_snapshot: write failed on " + path);
}

struct Snapshot {
    ChannelGrid grid;
    SimState state;
};

inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_snapshot: cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw IoError("read_snapshot: missing header in " + path);

    int version = 0, nx = 0, ny = 0;
    double lx = 0, t = 0, beta = 0, a = 0, delta = 0, nu = 0, mobility = 0, relax = 0;
    const int got = std::sscanf(header.c_str(),
                                "mclsnap v%d Nx=%d Ny=%d Lx=%lg t=%lg beta=%lg a=%lg "
                                "delta=%lg nu=%lg mobility=%lg relax=%lg",
                                &version, &nx, &ny, &lx, &t, &beta, &a, &delta, &nu, &mobility,
                                &relax);
    if (got < 1 || header.rfind("mclsnap", 0) != 0)
        throw IoError("read_snapshot: not a snapshot file: " + path);
    if (version != kSnapshotVersion)
        throw VersionMismatch("read_snapshot: version mismatch (file v" +
                              std::to_string(version) + ", expected v" +
                              std::to_string(kSnapshotVersion) + ")");
    if (got != 11) throw IoError("read_snapshot: malformed header in " + path);
    if (nx < 4 || ny < 5 || !(lx > 0.0))
        throw DimensionMismatch("read_snapshot: invalid dimensions in header");

    Snapshot snap;
    snap.grid = make_grid(lx, nx, ny);
    SimState& s = snap.state;
    s.t = t;
    s.params.beta = beta;
    s.params.a = a;
    s.params.delta = delta;
    s.params.nu = nu;
    s.params.mobility = mobility;
    s.params.relax = relax;
    s.u = VectorField(nx, ny);
    s.phi = ScalarField(nx, ny);
    s.mu = ScalarField(nx, ny);
    s.psi_bottom = BoundaryField(WallSide::Bottom, nx);
    s.psi_top = BoundaryField(WallSide::Top, nx);

    auto slurp = [&](std::vector<double>& v) {
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
        if (in.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double)))
            throw TruncatedPayload("read_snapshot: truncated payload in " + path);
    };
    slurp(s.u.u1.values);
    slurp(s.u.u2.values);
    slurp(s.phi.values);
    slurp(s.mu.values);
    slurp(s.psi_bottom.values);
    slurp(s.psi_top.values);
    return snap;
}

}  // namespace mcl
