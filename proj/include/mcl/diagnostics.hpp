// Quantitative verification harness: energy-law audit, mass drift,
// boundary-identity norms, contact-angle measurement, and manufactured
// convergence studies.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mcl/stepper.hpp"

namespace mcl {

struct AuditRecord {
    double t = 0.0;
    EnergyReport report;
    double law_residual = 0.0;  // (E^{n+1}-E^n)/dt + D^{n+1}
};

struct EnergyAudit {
    std::vector<AuditRecord> records;
    double max_abs_residual = 0.0;
    double max_positive_increment = 0.0;
};

// Residuals use the end-of-step dissipation (backward-Euler pairing); the
// first record carries residual 0.
inline EnergyAudit audit_energy(const std::vector<std::pair<double, EnergyReport>>& trajectory) {
    if (trajectory.size() < 2)
        throw std::invalid_argument("audit_energy: need at least 2 records");
    EnergyAudit audit;
    audit.records.reserve(trajectory.size());
    for (std::size_t n = 0; n < trajectory.size(); ++n) {
        AuditRecord rec;
        rec.t = trajectory[n].first;
        rec.report = trajectory[n].second;
        if (n > 0) {
            const double dt = trajectory[n].first - trajectory[n - 1].first;
            if (!(dt > 0.0)) throw std::invalid_argument("audit_energy: records not time-ordered");
            const double dE = rec.report.total - trajectory[n - 1].second.total;
            rec.law_residual = dE / dt + rec.report.total_dissipation();
            audit.max_abs_residual = std::max(audit.max_abs_residual, std::abs(rec.law_residual));
            audit.max_positive_increment = std::max(audit.max_positive_increment, dE);
        }
        audit.records.push_back(std::move(rec));
    }
    return audit;
}

// max_n |mean(phi^n) - mean(phi^0)| / (1 + |mean(phi^0)|); entry 0 is the
// initial mean.
inline double mass_drift(const std::vector<double>& mass_means) {
    if (mass_means.empty()) return 0.0;
    const double m0 = mass_means.front();
    double drift = 0.0;
    for (double m : mass_means) drift = std::max(drift, std::abs(m - m0));
    return drift / (1.0 + std::abs(m0));
}

struct BoundaryNorms {
    double linf = 0.0;
    double l2 = 0.0;
};

// Norms of the trace identity residual over both walls.
inline BoundaryNorms boundary_identity_norm(const ChannelGrid& g, const SimState& s) {
    BoundaryNorms n;
    double l2sq = 0.0;
    for (WallSide w : {WallSide::Bottom, WallSide::Top}) {
        BoundaryField r = boundary_residual(g, s.u, s.phi, s.mu, s.params, w);
        n.linf = std::max(n.linf, max_abs(r));
        l2sq += l2_wall_sq(g, r);
    }
    n.l2 = std::sqrt(l2sq);
    return n;
}

namespace detail {

// Crossings of phi = 0 along one x-row, with interpolated positions and
// the sign of dphi/dx at the crossing.
struct Crossing {
    double x = 0.0;
    int sign = 0;
};

inline std::vector<Crossing> row_crossings(const ChannelGrid& g, const ScalarField& phi, int j) {
    std::vector<Crossing> out;
    for (int i = 0; i < g.Nx; ++i) {
        const double a = phi(i, j);
        const double b = phi((i + 1) % g.Nx, j);
        if (a == 0.0) {
            out.push_back({g.x(i), b > a ? 1 : -1});
        } else if (a * b < 0.0) {
            const double frac = a / (a - b);
            out.push_back({g.x(i) + frac * g.dx, b > a ? 1 : -1});
        }
    }
    return out;
}

inline double periodic_dist(double a, double b, double Lx) {
    double d = std::fmod(std::abs(a - b), Lx);
    return std::min(d, Lx - d);
}

}  // namespace detail

// Contact angles (degrees, in (0, 180)) at each zero crossing of trace(phi)
// on one wall, measured on the side of the phi > 0 phase. The phi = 0 level
// set is located in the 3 wall-adjacent rows and fitted linearly in
// (distance-from-wall, x).
inline std::vector<double> contact_angle(const ChannelGrid& g, const ScalarField& phi,
                                         WallSide wall) {
    check_on_grid(g, phi);
    const int jw = g.wall_index(wall);
    const int step = (wall == WallSide::Bottom) ? 1 : -1;
    auto wall_cross = detail::row_crossings(g, phi, jw);
    if (wall_cross.empty())
        throw std::invalid_argument("contact_angle: no interface crossing on the wall trace");

    std::vector<double> angles;
    for (const auto& c : wall_cross) {
        // track the same crossing through rows 0,1,2 from the wall
        double xi[3], xc[3];
        bool ok = true;
        for (int r = 0; r < 3; ++r) {
            const int j = jw + step * r;
            auto rows = detail::row_crossings(g, phi, j);
            double best = -1.0;
            double bx = 0.0;
            for (const auto& rc : rows) {
                if (rc.sign != c.sign) continue;
                const double d = detail::periodic_dist(rc.x, c.x, g.Lx);
                if (best < 0.0 || d < best) {
                    best = d;
                    bx = rc.x;
                }
            }
            if (best < 0.0 || best > 0.25 * g.Lx) {
                ok = false;
                break;
            }
            xi[r] = r * g.dy;
            // unwrap relative to the wall crossing
            double dx = bx - c.x;
            if (dx > 0.5 * g.Lx) dx -= g.Lx;
            if (dx < -0.5 * g.Lx) dx += g.Lx;
            xc[r] = dx;
        }
        if (!ok) continue;
        // least-squares slope dx/dxi through the 3 points
        const double mxi = (xi[0] + xi[1] + xi[2]) / 3.0;
        const double mxc = (xc[0] + xc[1] + xc[2]) / 3.0;
        double num = 0.0, den = 0.0;
        for (int r = 0; r < 3; ++r) {
            num += (xi[r] - mxi) * (xc[r] - mxc);
            den += (xi[r] - mxi) * (xi[r] - mxi);
        }
        const double slope = num / den;
        const double theta =
            std::atan2(1.0, c.sign * slope) * 180.0 / std::numbers::pi;
        angles.push_back(theta);
    }
    if (angles.empty())
        throw std::invalid_argument("contact_angle: could not track any crossing off the wall");
    return angles;
}

enum class MmsCase { HelmholtzNeumann, InteriorHeat, Momentum, FullStep };

struct ConvergenceTable {
    std::vector<int> resolutions;
    std::vector<double> errors;
    std::vector<double> orders;  // log2 ratios between adjacent rows
    std::vector<double> aux;     // case-specific (momentum: divergence norms)
};

namespace detail {

inline double max_diff_field(const ScalarField& A, const ScalarField& B) {
    double m = 0.0;
    for (std::size_t n = 0; n < A.values.size(); ++n)
        m = std::max(m, std::abs(A.values[n] - B.values[n]));
    return m;
}

inline double mms_helmholtz(int Ny) {
    using std::numbers::pi;
    auto g = make_grid(2.0 * pi, 16, Ny);
    const double delta = 0.2;
    ScalarField mustar(g.Nx, g.Ny), G1(g.Nx, g.Ny);
    const double lam = 1.0 + delta * (1.0 + pi * pi);
    for (int i = 0; i < g.Nx; ++i)
        for (int j = 0; j < g.Ny; ++j) {
            mustar(i, j) = std::cos(g.x(i)) * std::cos(pi * (g.y(j) + 1.0));
            G1(i, j) = lam * mustar(i, j);
        }
    return max_diff_field(helmholtz_neumann(g, delta, G1), mustar);
}

inline double mms_interior_heat(int Ny) {
    using std::numbers::pi;
    auto g = make_grid(2.0 * pi, 16, Ny);
    const double delta = 1.0, dt = 0.1;
    ScalarField phistar(g.Nx, g.Ny), G3(g.Nx, g.Ny), zero(g.Nx, g.Ny, 0.0);
    const double lam = delta / dt + 1.0 + 0.25 * pi * pi;
    for (int i = 0; i < g.Nx; ++i)
        for (int j = 0; j < g.Ny; ++j) {
            phistar(i, j) = std::cos(g.x(i)) * std::cos(0.5 * pi * g.y(j));
            G3(i, j) = lam * phistar(i, j);
        }
    BoundaryField gb = trace(g, phistar, WallSide::Bottom);
    BoundaryField gt = trace(g, phistar, WallSide::Top);
    return max_diff_field(interior_heat_step(g, zero, delta, dt, G3, gb, gt), phistar);
}

inline std::pair<double, double> mms_momentum(int Ny) {
    using std::numbers::pi;
    auto g = make_grid(2.0 * pi, 16, Ny);
    PhysParams p;
    p.beta = 1.0;
    VectorField ustar(g.Nx, g.Ny), G4(g.Nx, g.Ny);
    for (int i = 0; i < g.Nx; ++i)
        for (int j = 0; j < g.Ny; ++j) {
            const double x = g.x(i), y = g.y(j);
            const double s = (1.0 - y * y) * (1.0 - y * y);
            const double sp = -4.0 * y * (1.0 - y * y);
            const double spp = -4.0 + 12.0 * y * y;
            const double sppp = 24.0 * y;
            ustar.u1(i, j) = sp * std::cos(x);
            ustar.u2(i, j) = s * std::sin(x);
            G4.u1(i, j) = -p.nu * std::cos(x) * (sppp - sp);
            G4.u2(i, j) = -p.nu * std::sin(x) * (spp - s);
        }
    BoundaryField gb(WallSide::Bottom, g.Nx), gt(WallSide::Top, g.Nx);
    for (int i = 0; i < g.Nx; ++i) {
        gb[i] = -8.0 * std::cos(g.x(i));
        gt[i] = 8.0 * std::cos(g.x(i));
    }
    auto u = momentum_step(g, ustar, 0.1, G4, gb, gt, p);
    double err = std::max(max_diff_field(u.u1, ustar.u1), max_diff_field(u.u2, ustar.u2));
    return {err, relative_divergence(g, u)};
}

// Forced full-step study in time: phi* = c0 + A e^{-t} cos(x) (1-y^2)^2 with
// u* = 0, sources built from the scheme's own discrete operators, so the
// manufactured pair solves the semi-discrete system exactly and the measured
// error is purely temporal.
inline double mms_full_step(int n_steps) {
    using std::numbers::pi;
    auto g = make_grid(2.0 * pi, 16, 17);
    PhysParams p;
    p.a = 0.5;
    const double T = 0.1;
    const double dt = T / n_steps;
    const double c0 = 0.2, A = 0.3;

    auto sample_phi = [&](double t) {
        ScalarField P(g.Nx, g.Ny);
        for (int i = 0; i < g.Nx; ++i)
            for (int j = 0; j < g.Ny; ++j) {
                const double q = (1.0 - g.y(j) * g.y(j)) * (1.0 - g.y(j) * g.y(j));
                P(i, j) = c0 + A * std::exp(-t) * std::cos(g.x(i)) * q;
            }
        return P;
    };

    auto make_forcing = [&](double t) {
        StepForcing f;
        ScalarField P = sample_phi(t);
        ScalarField Pt = P;
        for (std::size_t n = 0; n < Pt.values.size(); ++n)
            Pt.values[n] = -(P.values[n] - c0);  // d/dt of the exponential factor
        ScalarField Mu = laplacian(g, P);
        Mu *= -1.0;
        Mu += bulk_force(P);

        f.ch.row_a = Pt;
        const ScalarField lapMu = neumann_flux_laplacian(g, Mu);
        for (std::size_t n = 0; n < f.ch.row_a.values.size(); ++n)
            f.ch.row_a.values[n] -= p.mobility * lapMu.values[n];
        f.ch.row_b = ScalarField(g.Nx, g.Ny, 0.0);
        f.ch.relax_bottom = BoundaryField(WallSide::Bottom, g.Nx);
        f.ch.relax_top = BoundaryField(WallSide::Top, g.Nx);
        for (WallSide w : {WallSide::Bottom, WallSide::Top}) {
            BoundaryField L = wall_traction_consistent(g, P, Mu, w, p.a);
            BoundaryField Ptw = trace(g, Pt, w);
            BoundaryField& target =
                (w == WallSide::Bottom) ? f.ch.relax_bottom : f.ch.relax_top;
            for (int i = 0; i < g.Nx; ++i) target[i] = Ptw[i] + p.relax * L[i];
        }
        f.momentum = VectorField(g.Nx, g.Ny);
        f.momentum.u1 = hadamard(Mu, ddx(g, P));
        f.momentum.u1 *= -1.0;
        f.momentum.u2 = hadamard(Mu, ddy(g, P));
        f.momentum.u2 *= -1.0;
        return f;
    };

    PhysParams p0 = p;
    p0.delta = 0.0;
    SimState s = make_state(g, VectorField(g.Nx, g.Ny), sample_phi(0.0), p0);
    StepConfig cfg;
    cfg.dt = dt;
    cfg.picard_tol = 1e-12;
    cfg.picard_max = 60;
    for (int n = 0; n < n_steps; ++n) {
        StepForcing f = make_forcing(s.t + dt);
        auto [s1, rep] = picard_step(g, s, cfg, &f);
        if (!rep.converged) throw SolverError("mms_full_step: picard did not converge");
        s = std::move(s1);
    }
    return detail::max_diff_field(s.phi, sample_phi(T));
}

}  // namespace detail

// Convergence study per sub-solver (spatial, over Ny) or for the full step
// (temporal, over step counts on a fixed grid).
inline ConvergenceTable mms_convergence(MmsCase c, const std::vector<int>& resolutions) {
    if (resolutions.size() < 3)
        throw std::invalid_argument("mms_convergence: need at least 3 resolutions");
    ConvergenceTable table;
    table.resolutions = resolutions;
    for (int r : resolutions) {
        switch (c) {
            case MmsCase::HelmholtzNeumann:
                table.errors.push_back(detail::mms_helmholtz(r));
                break;
            case MmsCase::InteriorHeat:
                table.errors.push_back(detail::mms_interior_heat(r));
                break;
            case MmsCase::Momentum: {
                auto [err, div] = detail::mms_momentum(r);
                table.errors.push_back(err);
                table.aux.push_back(div);
                break;
            }
            case MmsCase::FullStep:
                table.errors.push_back(detail::mms_full_step(r));
                break;
        }
    }
    for (std::size_t i = 0; i + 1 < table.errors.size(); ++i)
        table.orders.push_back(std::log2(table.errors[i] / table.errors[i + 1]));
    return table;
}

// Trajectory capture used by the audit-style tests and the CLI.
struct Trajectory {
    std::vector<std::pair<double, EnergyReport>> energy;  // includes the initial record
    std::vector<double> mass;
    std::vector<int> picard_iterations;
    std::vector<double> mean_contraction;  // per step, mean of the ratio sequence
    SimState final_state;
    bool completed = false;
    int failed_step = -1;
};

inline Trajectory run_trajectory(const ChannelGrid& g, SimState s0, int n_steps,
                                 const StepConfig& cfg) {
    Trajectory traj;
    traj.energy.emplace_back(s0.t, energy_report(g, s0.u, s0.phi, s0.mu, s0.params));
    traj.mass.push_back(mean(g, s0.phi));
    std::vector<StepSink> sinks{[&](const StepRecord& rec) {
        traj.energy.emplace_back(rec.t, rec.energy);
        traj.mass.push_back(rec.mass_mean);
        traj.picard_iterations.push_back(rec.picard.iterations);
        double sum = 0.0;
        for (double q : rec.picard.contraction_ratios) sum += q;
        traj.mean_contraction.push_back(
            rec.picard.contraction_ratios.empty()
                ? 0.0
                : sum / static_cast<double>(rec.picard.contraction_ratios.size()));
    }};
    auto r = advance(g, std::move(s0), n_steps, cfg, sinks);
    traj.final_state = std::move(r.state);
    traj.completed = r.completed;
    traj.failed_step = r.failed_step;
    return traj;
}

}  // namespace mcl
