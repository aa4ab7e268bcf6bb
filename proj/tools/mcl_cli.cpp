// Batch driver: run simulations from a config file, audit time series,
// sweep the delta continuation ladder, run convergence studies, and read
// contact angles off snapshots.
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure (the failing
// step index is reported on stderr for Picard non-convergence).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mcl/config.hpp"
#include "mcl/io.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mcl::ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string snap_name(const std::string& dir, const char* stem, int step) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%06d.bin", stem, step);
    return dir + "/" + buf;
}

int cmd_run(const std::string& config_path, int steps_override, const std::string& out_override,
            const std::string& resume_path) {
    mcl::RunConfig cfg = mcl::parse_config(read_file(config_path));
    if (steps_override >= 0) cfg.n_steps = steps_override;
    if (!out_override.empty()) cfg.directory = out_override;

    mcl::ChannelGrid g = mcl::make_grid(cfg.Lx, cfg.Nx, cfg.Ny);
    mcl::SimState state;
    if (!resume_path.empty()) {
        mcl::Snapshot snap = mcl::read_snapshot(resume_path);
        if (snap.grid.Nx != g.Nx || snap.grid.Ny != g.Ny || snap.grid.Lx != g.Lx)
            throw mcl::DimensionMismatch("resume snapshot grid does not match the config grid");
        state = std::move(snap.state);
    } else {
        auto [u0, phi0] = mcl::build_initial(g, cfg.ic);
        state = mcl::make_state(g, std::move(u0), std::move(phi0), cfg.physics);
    }

    std::filesystem::create_directories(cfg.directory);
    std::vector<mcl::StepRecord> records;
    mcl::EnergyReport prev =
        mcl::energy_report(g, state.u, state.phi, state.mu, state.params);

    for (int s = 1; s <= cfg.n_steps; ++s) {
        auto [next, rep] = mcl::picard_step(g, state, cfg.stepping);
        if (!rep.converged) {
            if (cfg.timeseries && !records.empty())
                mcl::write_timeseries(cfg.directory + "/timeseries.csv", records);
            std::cerr << "picard iteration did not converge at step " << s << "\n";
            return 2;
        }
        state = std::move(next);
        mcl::StepRecord rec;
        rec.step = s;
        rec.t = state.t;
        rec.energy = mcl::energy_report(g, state.u, state.phi, state.mu, state.params);
        rec.mass_mean = mcl::mean(g, state.phi);
        rec.law_residual =
            (rec.energy.total - prev.total) / cfg.stepping.dt + rec.energy.total_dissipation();
        rec.picard = rep;
        prev = rec.energy;
        records.push_back(std::move(rec));

        if (cfg.snapshot_stride > 0 && s % cfg.snapshot_stride == 0)
            mcl::write_snapshot(snap_name(cfg.directory, "snap", s), g, state);
        if (cfg.checkpoint_stride > 0 && s % cfg.checkpoint_stride == 0)
            mcl::write_snapshot(snap_name(cfg.directory, "checkpoint", s), g, state);
    }

    if (cfg.timeseries)
        mcl::write_timeseries(cfg.directory + "/timeseries.csv", records);
    mcl::write_snapshot(cfg.directory + "/final.bin", g, state);
    return 0;
}

int cmd_audit(const std::string& csv_path) {
    auto rows = mcl::read_timeseries(csv_path);
    if (rows.empty()) {
        std::cout << "no records\n";
        return 0;
    }
    double max_res = 0.0, max_inc = 0.0, drift = 0.0;
    long iters = 0;
    const double m0 = rows.front().mass_mean;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        max_res = std::max(max_res, std::abs(rows[i].law_residual));
        if (i > 0) max_inc = std::max(max_inc, rows[i].total - rows[i - 1].total);
        drift = std::max(drift, std::abs(rows[i].mass_mean - m0));
        iters += rows[i].picard_iters;
    }
    std::printf("records:                %zu\n", rows.size());
    std::printf("max |law_residual|:     %.6e\n", max_res);
    std::printf("max energy increment:   %.6e\n", max_inc);
    std::printf("mass drift (relative):  %.6e\n", drift / (1.0 + std::abs(m0)));
    std::printf("mean picard iterations: %.2f\n",
                static_cast<double>(iters) / static_cast<double>(rows.size()));
    return 0;
}

int cmd_continuation(const std::string& config_path, const std::vector<double>& deltas) {
    mcl::RunConfig cfg = mcl::parse_config(read_file(config_path));
    mcl::ChannelGrid g = mcl::make_grid(cfg.Lx, cfg.Nx, cfg.Ny);
    auto [u0, phi0] = mcl::build_initial(g, cfg.ic);
    auto rep = mcl::delta_continuation(g, u0, phi0, cfg.physics, cfg.stepping, deltas,
                                       cfg.n_steps);
    std::printf("delta,phi_diff_to_next,u_diff_to_next,phi_vs_zero\n");
    for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
        if (i + 1 < rep.deltas.size())
            std::printf("%.17g,%.17g,%.17g,%.17g\n", rep.deltas[i], rep.phi_diffs[i],
                        rep.u_diffs[i], rep.phi_vs_zero[i]);
        else
            std::printf("%.17g,,,%.17g\n", rep.deltas[i], rep.phi_vs_zero[i]);
    }
    return 0;
}

int cmd_mms(const std::string& case_name, std::vector<int> resolutions) {
    mcl::MmsCase c;
    if (case_name == "helmholtz") c = mcl::MmsCase::HelmholtzNeumann;
    else if (case_name == "interior") c = mcl::MmsCase::InteriorHeat;
    else if (case_name == "momentum") c = mcl::MmsCase::Momentum;
    else if (case_name == "fullstep") c = mcl::MmsCase::FullStep;
    else throw std::invalid_argument("unknown mms case: " + case_name +
                                     " (expected helmholtz|interior|momentum|fullstep)");
    if (resolutions.empty())
        resolutions = (c == mcl::MmsCase::FullStep) ? std::vector<int>{10, 20, 40}
                                                    : std::vector<int>{17, 33, 65};
    auto table = mcl::mms_convergence(c, resolutions);
    const bool has_aux = !table.aux.empty();
    std::printf("resolution,error,order%s\n", has_aux ? ",divergence" : "");
    for (std::size_t i = 0; i < table.errors.size(); ++i) {
        std::printf("%d,%.6e", table.resolutions[i], table.errors[i]);
        if (i > 0)
            std::printf(",%.3f", table.orders[i - 1]);
        else
            std::printf(",");
        if (has_aux) std::printf(",%.3e", table.aux[i]);
        std::printf("\n");
    }
    return 0;
}

int cmd_angle(const std::string& snapshot_path) {
    mcl::Snapshot snap = mcl::read_snapshot(snapshot_path);
    for (mcl::WallSide w : {mcl::WallSide::Bottom, mcl::WallSide::Top}) {
        auto angles = mcl::contact_angle(snap.grid, snap.state.phi, w);
        std::printf("%s:", mcl::wall_name(w));
        for (double a : angles) std::printf(" %.3f", a);
        std::printf("\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"channel-geometry NSCH solver with GNBC and relaxation walls"};
    app.require_subcommand(1);

    std::string config_path, resume_path, out_override, csv_path, case_name, snapshot_path;
    int steps_override = -1;
    std::vector<double> deltas;
    std::vector<int> resolutions;

    auto* run = app.add_subcommand("run", "advance a simulation and emit diagnostics");
    run->add_option("config", config_path, "run configuration file")->required();
    run->add_option("--steps", steps_override, "override stepping.n_steps");
    run->add_option("--out", out_override, "override output.directory");
    run->add_option("--resume", resume_path, "resume from a snapshot");

    auto* audit = app.add_subcommand("audit", "summarize an energy-law time series");
    audit->add_option("timeseries", csv_path, "timeseries.csv from a run")->required();

    auto* cont = app.add_subcommand("continuation", "delta continuation ladder study");
    cont->add_option("config", config_path, "run configuration file")->required();
    cont->add_option("--deltas", deltas, "strictly decreasing ladder")
        ->required()
        ->delimiter(',');

    auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
    mms->add_option("case", case_name, "helmholtz|interior|momentum|fullstep")->required();
    mms->add_option("--resolutions", resolutions, "Ny levels (or step counts for fullstep)")
        ->delimiter(',');

    auto* angle = app.add_subcommand("angle", "report wall contact angles of a snapshot");
    angle->add_option("snapshot", snapshot_path, "snapshot file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, steps_override, out_override, resume_path);
        if (audit->parsed()) return cmd_audit(csv_path);
        if (cont->parsed()) return cmd_continuation(config_path, deltas);
        if (mms->parsed()) return cmd_mms(case_name, resolutions);
        if (angle->parsed()) return cmd_angle(snapshot_path);
    } catch (const mcl::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const mcl::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const mcl::IoError& e) {
        std::cerr << "i/o failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
