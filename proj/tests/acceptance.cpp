// Acceptance suite: one criterion per numbered block, each printing a single
// PASS/FAIL line. Run all with no arguments or a subset by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "mcl/diagnostics.hpp"
#include "mcl/io.hpp"

using namespace mcl;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double max_field_diff(const ScalarField& A, const ScalarField& B) {
    double m = 0.0;
    for (std::size_t n = 0; n < A.values.size(); ++n)
        m = std::max(m, std::abs(A.values[n] - B.values[n]));
    return m;
}

SimState perturbed_state(const ChannelGrid& g, PhysParams p, double amp = 0.15) {
    InitialCondition ic;
    ic.kind = InitialKind::PerturbedInterface;
    ic.amplitude = amp;
    ic.mode = 1;
    auto [u0, phi0] = build_initial(g, ic);
    return make_state(g, std::move(u0), std::move(phi0), p);
}

// interface tension of the tanh profile by 1D quadrature (Simpson)
double gamma_interface_oracle() {
    const double L = 15.0, h = 1e-3;
    const int n = static_cast<int>(2 * L / h);
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = -L + i * h;
        const double c = std::cosh(x / std::sqrt(2.0));
        const double fp = 1.0 / (std::sqrt(2.0) * c * c);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * fp * fp;
    }
    return s * h / 3.0;
}

// 1. Equilibrium exactness: phi = +-1, u = 0 preserved for 100 steps to
//    1e-12 in every field, for delta in {0, 1e-2}, a in {0, 1}, beta = 1.
void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    auto g = make_grid(2.0 * pi, 64, 33);
    StepConfig cfg;
    cfg.dt = 1e-2;
    cfg.picard_max = 50;
    double worst = 0.0;
    bool all_converged = true;
    for (double delta : {0.0, 1e-2}) {
        for (double a : {0.0, 1.0}) {
            for (double val : {1.0, -1.0}) {
                PhysParams p;
                p.beta = 1.0;
                p.a = a;
                p.delta = delta;
                InitialCondition ic;
                ic.kind = InitialKind::Equilibrium;
                ic.value = val;
                auto [u0, phi0] = build_initial(g, ic);
                SimState s0 = make_state(g, u0, phi0, p);
                auto r = advance(g, s0, 100, cfg);
                all_converged = all_converged && r.completed;
                worst = std::max(worst, max_field_diff(r.state.phi, s0.phi));
                worst = std::max(worst, max_field_diff(r.state.mu, s0.mu));
                worst = std::max(worst, max_field_diff(r.state.u.u1, s0.u.u1));
                worst = std::max(worst, max_field_diff(r.state.u.u2, s0.u.u2));
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char detail[160];
    std::snprintf(detail, sizeof(detail), "max field drift %.3e over 100 steps x 8 runs, %.2f s",
                  worst, secs);
    report(1, all_converged && worst <= 1e-12 && secs < 5.0, "equilibrium exactness", detail);
}

// 2. Mass conservation: relative drift <= 1e-10 over 1000 delta=0 steps of a
//    perturbed-interface run at 128x65.
void criterion_2() {
    auto g = make_grid(2.0 * pi, 128, 65);
    PhysParams p;
    StepConfig cfg;
    cfg.dt = 1e-3;
    auto traj = run_trajectory(g, perturbed_state(g, p), 1000, cfg);
    const double drift = mass_drift(traj.mass);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "relative drift %.3e over 1000 steps", drift);
    report(2, traj.completed && drift <= 1e-10, "mass conservation", detail);
}

// 3. Energy law: u = 0 (slow dynamics), a = 0 relaxation run. E_tot
//    non-increasing with per-step slack <= 1e-8 and the law-residual
//    max-norm drops at temporal order >= 0.9 over dt in {4e-3, 2e-3, 1e-3}.
//    The three runs start from a spun-up state so the max residual reflects
//    the integrator, not the initial fast transient.
void criterion_3() {
    auto g = make_grid(2.0 * pi, 64, 33);
    PhysParams p;
    p.a = 0.0;
    StepConfig warm;
    warm.dt = 5e-4;
    warm.freeze_velocity = true;
    auto spun = advance(g, perturbed_state(g, p), 100, warm);

    const double T = 0.1;
    const double dts[3] = {4e-3, 2e-3, 1e-3};
    double res[3] = {0, 0, 0};
    double max_inc = 0.0;
    bool ok = spun.completed;
    for (int r = 0; r < 3; ++r) {
        StepConfig cfg;
        cfg.dt = dts[r];
        cfg.freeze_velocity = true;
        auto traj = run_trajectory(g, spun.state, static_cast<int>(T / dts[r] + 0.5), cfg);
        ok = ok && traj.completed;
        auto audit = audit_energy(traj.energy);
        res[r] = audit.max_abs_residual;
        max_inc = std::max(max_inc, audit.max_positive_increment);
    }
    const double o1 = std::log2(res[0] / res[1]);
    const double o2 = std::log2(res[1] / res[2]);
    char detail[192];
    std::snprintf(detail, sizeof(detail),
                  "max energy increment %.3e; residuals %.3e/%.3e/%.3e, orders %.2f, %.2f",
                  max_inc, res[0], res[1], res[2], o1, o2);
    report(3, ok && max_inc <= 1e-8 && o1 >= 0.9 && o2 >= 0.9, "energy law", detail);
}

// 4. Boundary identity: after converged delta=0 steps the wall residual
//    Linf norm decreases monotonically under simultaneous (dt, dy) halving.
void criterion_4() {
    const int nys[3] = {33, 65, 129};
    const double dts[3] = {4e-3, 2e-3, 1e-3};
    const double T = 0.05;
    double linf[3];
    bool ok = true;
    for (int l = 0; l < 3; ++l) {
        auto g = make_grid(2.0 * pi, 64, nys[l]);
        PhysParams p;
        StepConfig cfg;
        cfg.dt = dts[l];
        auto r = advance(g, perturbed_state(g, p), static_cast<int>(T / dts[l] + 0.5), cfg);
        ok = ok && r.completed;
        linf[l] = boundary_identity_norm(g, r.state).linf;
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "Linf %.3e -> %.3e -> %.3e", linf[0], linf[1],
                  linf[2]);
    report(4, ok && linf[1] < linf[0] && linf[2] < linf[1], "boundary identity refinement",
           detail);
}

// 5. Subsolver MMS: spatial orders in [1.8, 2.3] over 3 dyadic Ny levels,
//    momentum divergence <= 1e-10, and resolved single-mode cases exact to
//    1e-10.
void criterion_5() {
    bool ok = true;
    std::string detail;
    char buf[96];
    const std::vector<int> res{17, 33, 65};
    const char* names[3] = {"helmholtz", "interior", "momentum"};
    const MmsCase cases[3] = {MmsCase::HelmholtzNeumann, MmsCase::InteriorHeat,
                              MmsCase::Momentum};
    for (int c = 0; c < 3; ++c) {
        auto table = mms_convergence(cases[c], res);
        for (double o : table.orders) ok = ok && o >= 1.8 && o <= 2.3;
        for (double d : table.aux) ok = ok && d <= 1e-10;
        std::snprintf(buf, sizeof(buf), "%s %.2f/%.2f ", names[c], table.orders[0],
                      table.orders[1]);
        detail += buf;
    }

    // resolved single-mode cases, spectrally exact in x
    {
        auto g = make_grid(2.0 * pi, 32, 17);
        const double delta = 0.37;
        ScalarField mustar(g.Nx, g.Ny), G1(g.Nx, g.Ny);
        for (int i = 0; i < g.Nx; ++i)
            for (int j = 0; j < g.Ny; ++j) {
                mustar(i, j) = std::cos(g.x(i));
                G1(i, j) = (1.0 + delta) * mustar(i, j);
            }
        const double e1 = max_field_diff(helmholtz_neumann(g, delta, G1), mustar);

        PhysParams p;
        p.beta = 0.8;
        VectorField ustar(g.Nx, g.Ny), G4(g.Nx, g.Ny);
        for (int i = 0; i < g.Nx; ++i)
            for (int j = 0; j < g.Ny; ++j) {
                const double x = g.x(i), y = g.y(j);
                ustar.u1(i, j) = -2.0 * y * std::cos(x);
                ustar.u2(i, j) = std::sin(x) * (1.0 - y * y);
                G4.u1(i, j) = -p.nu * 2.0 * y * std::cos(x);
                G4.u2(i, j) = -p.nu * std::sin(x) * (y * y - 3.0);
            }
        BoundaryField gb(WallSide::Bottom, g.Nx), gt(WallSide::Top, g.Nx);
        for (int i = 0; i < g.Nx; ++i) {
            gb[i] = (2.0 * p.beta + 2.0) * std::cos(g.x(i));
            gt[i] = -(2.0 * p.beta + 2.0) * std::cos(g.x(i));
        }
        auto u = momentum_step(g, ustar, 0.07, G4, gb, gt, p);
        const double e2 =
            std::max(max_field_diff(u.u1, ustar.u1), max_field_diff(u.u2, ustar.u2));
        ok = ok && e1 <= 1e-10 && e2 <= 1e-10;
        std::snprintf(buf, sizeof(buf), "single-mode %.1e/%.1e", e1, e2);
        detail += buf;
    }
    report(5, ok, "subsolver MMS", detail);
}

// 6. Picard contraction: perturbed-interface delta=0 run, dt = 1e-3 at
//    128x65, tol 1e-10: every step converges in <= 10 iterations, and the
//    mean contraction ratio at dt/2 is smaller than at dt.
void criterion_6() {
    auto g = make_grid(2.0 * pi, 128, 65);
    PhysParams p;
    const double T = 0.05;
    auto run = [&](double dt, int& max_iters, double& mean_ratio, bool& done) {
        StepConfig cfg;
        cfg.dt = dt;
        cfg.picard_tol = 1e-10;
        auto traj = run_trajectory(g, perturbed_state(g, p), static_cast<int>(T / dt + 0.5), cfg);
        done = traj.completed;
        max_iters = 0;
        double sum = 0.0;
        int cnt = 0;
        for (std::size_t i = 0; i < traj.picard_iterations.size(); ++i) {
            max_iters = std::max(max_iters, traj.picard_iterations[i]);
            if (traj.mean_contraction[i] > 0.0) {
                sum += traj.mean_contraction[i];
                ++cnt;
            }
        }
        mean_ratio = cnt ? sum / cnt : 0.0;
    };
    int it1 = 0, it2 = 0;
    double q1 = 0.0, q2 = 0.0;
    bool d1 = false, d2 = false;
    run(1e-3, it1, q1, d1);
    run(5e-4, it2, q2, d2);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "max iterations %d (dt=1e-3); mean ratio %.3f (dt) vs %.3f (dt/2)", it1, q1,
                  q2);
    report(6, d1 && d2 && it1 <= 10 && q2 < q1, "picard contraction", detail);
}

// 7. Delta continuation: ladder {1e-2, 5e-3, 2.5e-3, 1.25e-3} on a fixed
//    perturbed IC and horizon gives strictly decreasing Cauchy differences,
//    and the smallest-delta state is closer to the native delta=0 state than
//    the largest-delta state. Run y-resolved (the Dirichlet-trace coupling
//    carries a dy^2.5/delta wall truncation term).
void criterion_7() {
    auto g = make_grid(2.0 * pi, 64, 129);
    PhysParams p;
    InitialCondition ic;
    ic.kind = InitialKind::PerturbedInterface;
    ic.amplitude = 0.1;
    auto [u0, phi0] = build_initial(g, ic);
    StepConfig cfg;
    cfg.dt = 1e-3;
    cfg.picard_max = 3000;
    auto rep = delta_continuation(g, u0, phi0, p, cfg, {1e-2, 5e-3, 2.5e-3, 1.25e-3}, 50);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < rep.phi_diffs.size(); ++i)
        ok = ok && rep.phi_diffs[i + 1] < rep.phi_diffs[i];
    ok = ok && rep.phi_vs_zero.back() < rep.phi_vs_zero.front();
    char detail[192];
    std::snprintf(detail, sizeof(detail),
                  "Cauchy gaps %.3e/%.3e/%.3e; vs delta=0: %.3e (largest) vs %.3e (smallest)",
                  rep.phi_diffs[0], rep.phi_diffs[1], rep.phi_diffs[2], rep.phi_vs_zero.front(),
                  rep.phi_vs_zero.back());
    report(7, ok, "delta continuation", detail);
}

// 8. Static contact angle: a chosen so cos(theta_s) = 2a/gamma = 0.5 with
//    gamma from the 1D quadrature oracle; a relaxed interface at 256x129
//    reports wall angles within 5 degrees of 60. The channel period is 8*pi
//    so the two-phase state is stable against dissolution (the potential
//    fixes the interface width at O(1)).
void criterion_8() {
    const auto start = std::chrono::steady_clock::now();
    const double gamma = gamma_interface_oracle();
    const double a = 0.25 * gamma;  // cos(theta_s) = 2a/gamma = 1/2
    auto g = make_grid(8.0 * pi, 256, 129);
    PhysParams p;
    p.a = a;
    InitialCondition ic;
    ic.kind = InitialKind::FlatInterface;
    auto [u0, phi0] = build_initial(g, ic);
    StepConfig cfg;
    cfg.dt = 5e-3;
    cfg.picard_max = 100;
    auto r = advance(g, make_state(g, u0, phi0, p), 2000, cfg);
    bool ok = r.completed;
    double worst = 180.0;
    if (ok) {
        worst = 0.0;
        for (WallSide w : {WallSide::Bottom, WallSide::Top}) {
            auto angles = contact_angle(g, r.state.phi, w);
            ok = ok && angles.size() == 2;
            for (double ang : angles) worst = std::max(worst, std::abs(ang - 60.0));
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "gamma=%.6f, a=%.6f, max |angle - 60| = %.2f deg, %.1f s", gamma, a, worst,
                  secs);
    report(8, ok && worst <= 5.0 && secs < 300.0, "static contact angle", detail);
}

// 9. Determinism and persistence: snapshot round trip bit-exact; resuming
//    from the midpoint checkpoint matches the direct run's final CSV row to
//    1e-12.
void criterion_9() {
    auto g = make_grid(2.0 * pi, 64, 33);
    PhysParams p;
    SimState s0 = perturbed_state(g, p);
    StepConfig cfg;
    cfg.dt = 2e-3;

    const auto dir = std::filesystem::temp_directory_path() / "mcl_acceptance";
    std::filesystem::create_directories(dir);

    // bit-exact round trip
    const auto snap_path = (dir / "state.bin").string();
    write_snapshot(snap_path, g, s0);
    Snapshot snap = read_snapshot(snap_path);
    bool bit_exact =
        std::memcmp(snap.state.phi.values.data(), s0.phi.values.data(),
                    s0.phi.values.size() * sizeof(double)) == 0 &&
        std::memcmp(snap.state.mu.values.data(), s0.mu.values.data(),
                    s0.mu.values.size() * sizeof(double)) == 0 &&
        std::memcmp(snap.state.u.u1.values.data(), s0.u.u1.values.data(),
                    s0.u.u1.values.size() * sizeof(double)) == 0 &&
        std::memcmp(snap.state.u.u2.values.data(), s0.u.u2.values.data(),
                    s0.u.u2.values.size() * sizeof(double)) == 0 &&
        snap.state.t == s0.t;

    // direct 20 steps vs checkpoint at 10 + resume 10, compared through the
    // CSV writer/reader round trip
    std::vector<StepRecord> direct, resumed;
    std::vector<StepSink> sink_d{[&](const StepRecord& r) { direct.push_back(r); }};
    auto rd = advance(g, s0, 20, cfg, sink_d);
    auto rmid = advance(g, s0, 10, cfg);
    const auto mid_path = (dir / "mid.bin").string();
    write_snapshot(mid_path, g, rmid.state);
    Snapshot mid = read_snapshot(mid_path);
    std::vector<StepSink> sink_r{[&](const StepRecord& r) { resumed.push_back(r); }};
    auto rr = advance(mid.grid, mid.state, 10, cfg, sink_r);

    write_timeseries((dir / "direct.csv").string(), direct);
    write_timeseries((dir / "resumed.csv").string(), resumed);
    auto rows_d = read_timeseries((dir / "direct.csv").string());
    auto rows_r = read_timeseries((dir / "resumed.csv").string());

    double row_diff = 1.0;
    bool ok = rd.completed && rmid.completed && rr.completed && !rows_d.empty() &&
              !rows_r.empty();
    if (ok) {
        const auto& a = rows_d.back();
        const auto& b = rows_r.back();
        row_diff = std::max({std::abs(a.t - b.t), std::abs(a.total - b.total),
                             std::abs(a.kinetic - b.kinetic),
                             std::abs(a.mass_mean - b.mass_mean),
                             std::abs(a.law_residual - b.law_residual),
                             std::abs(a.chem_diss - b.chem_diss)});
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "round trip %s, final-row diff %.3e",
                  bit_exact ? "bit-exact" : "NOT bit-exact", row_diff);
    report(9, ok && bit_exact && row_diff <= 1e-12, "determinism and persistence", detail);
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    auto want = [&](int c) { return wanted.empty() || wanted.count(c) > 0; };

    if (want(1)) criterion_1();
    if (want(2)) criterion_2();
    if (want(3)) criterion_3();
    if (want(4)) criterion_4();
    if (want(5)) criterion_5();
    if (want(6)) criterion_6();
    if (want(7)) criterion_7();
    if (want(8)) criterion_8();
    if (want(9)) criterion_9();
    return failures;
}
