// Time integration of the coupled system by per-step Picard iteration over
// the linearized sub-solvers, with frozen-coefficient ordering mu -> psi ->
// phi -> u. The delta=0 path replaces the (mu, psi, phi) sweep by the
// coupled Cahn-Hilliard block solve. Non-convergence is transactional: the
// incoming state is left untouched.
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mcl/initial.hpp"
#include "mcl/linsolve.hpp"

namespace mcl {

struct SimState {
    double t = 0.0;
    VectorField u;
    ScalarField phi;
    ScalarField mu;
    BoundaryField psi_bottom{WallSide::Bottom, 0};
    BoundaryField psi_top{WallSide::Top, 0};
    PhysParams params;
};

// Which discrete norms enter the composite Picard residual.
struct NormSpec {
    double u_l2_weight = 1.0;
    double phi_h1_weight = 1.0;
};

struct StepConfig {
    double dt = 1e-3;
    double picard_tol = 1e-10;
    int picard_max = 25;
    NormSpec norm_spec;
    // Pin u = 0 (the slow-dynamics special case: pure Cahn-Hilliard with
    // Neumann and relaxation walls). The momentum solve is skipped.
    bool freeze_velocity = false;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
        if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be > 0");
        if (picard_max < 1) throw std::invalid_argument("picard_max must be >= 1");
    }
};

struct PicardReport {
    int iterations = 0;
    std::vector<double> residuals;
    std::vector<double> contraction_ratios;
    bool converged = false;
};

// Extra sources for manufactured full-step studies (delta = 0 path).
struct StepForcing {
    ChForcing ch;
    VectorField momentum;
};

// mu_0^delta: solve mu - M*delta*lap(mu) = -delta u0.grad(phi0)
//             + delta^2 dxx(phi0) + mu_0 with Neumann walls,
// where mu_0 = -lap(phi0) + f(phi0).
inline ScalarField init_mu_delta(const ChannelGrid& g, const VectorField& u0,
                                 const ScalarField& phi0, double delta, double mobility = 1.0) {
    if (!(delta > 0.0)) throw std::invalid_argument("init_mu_delta: delta must be > 0");
    PhysParams p0;
    ScalarField mu0 = chemical_potential(g, phi0, p0);
    ScalarField rhs = mu0;
    const ScalarField adv = hadamard(u0.u1, ddx(g, phi0)) + hadamard(u0.u2, ddy(g, phi0));
    const ScalarField pxx = d2dx(g, phi0);
    for (std::size_t n = 0; n < rhs.values.size(); ++n)
        rhs.values[n] += -delta * adv.values[n] + delta * delta * pxx.values[n];
    return helmholtz_neumann(g, mobility * delta, rhs);
}

// Assemble a consistent SimState from initial data.
inline SimState make_state(const ChannelGrid& g, VectorField u0, ScalarField phi0,
                           const PhysParams& params, double t0 = 0.0) {
    params.validate();
    SimState s;
    s.t = t0;
    s.params = params;
    if (params.delta > 0.0)
        s.mu = init_mu_delta(g, u0, phi0, params.delta, params.mobility);
    else
        s.mu = chemical_potential(g, phi0, params);
    s.psi_bottom = trace(g, phi0, WallSide::Bottom);
    s.psi_top = trace(g, phi0, WallSide::Top);
    s.u = std::move(u0);
    s.phi = std::move(phi0);
    return s;
}

namespace detail {

inline ScalarField advect(const ChannelGrid& g, const VectorField& U, const ScalarField& F) {
    return hadamard(U.u1, ddx(g, F)) + hadamard(U.u2, ddy(g, F));
}

inline VectorField momentum_forcing(const ChannelGrid& g, const VectorField& U,
                                    const ScalarField& mu, const ScalarField& Phi) {
    VectorField G4(g.Nx, g.Ny);
    G4.u1 = advect(g, U, U.u1);
    G4.u1 *= -1.0;
    G4.u1 += hadamard(mu, ddx(g, Phi));
    G4.u2 = advect(g, U, U.u2);
    G4.u2 *= -1.0;
    G4.u2 += hadamard(mu, ddy(g, Phi));
    return G4;
}

inline double h1_norm(const ChannelGrid& g, const ScalarField& F) {
    return std::sqrt(l2_norm_sq(g, F) + l2_norm_sq(g, ddx(g, F)) + l2_norm_sq(g, ddy(g, F)));
}

inline double composite_residual(const ChannelGrid& g, const NormSpec& spec,
                                 const VectorField& u, const VectorField& U,
                                 const ScalarField& phi, const ScalarField& Phi) {
    VectorField du(g.Nx, g.Ny);
    du.u1 = u.u1 - U.u1;
    du.u2 = u.u2 - U.u2;
    const double nu = std::sqrt(l2_norm_sq(g, u));
    const double r_u = std::sqrt(l2_norm_sq(g, du)) / (1.0 + nu);
    const double nphi = h1_norm(g, phi);
    const double r_phi = h1_norm(g, phi - Phi) / (1.0 + nphi);
    return spec.u_l2_weight * r_u + spec.phi_h1_weight * r_phi;
}

}  // namespace detail

// One backward-Euler step via Picard iteration with frozen (U, Phi).
// On convergence the returned state satisfies all discrete equations
// simultaneously to picard_tol; otherwise the input state is returned
// unmodified with converged = false.
inline std::pair<SimState, PicardReport> picard_step(const ChannelGrid& g, const SimState& state,
                                                     const StepConfig& cfg,
                                                     const StepForcing* forcing = nullptr) {
    cfg.validate();
    const PhysParams& p = state.params;
    const double dt = cfg.dt;
    const double delta = p.delta;

    VectorField U = state.u;
    ScalarField Phi = state.phi;

    PicardReport report;
    VectorField u_new;
    ScalarField phi_new, mu_new;
    BoundaryField psi_b = state.psi_bottom, psi_t = state.psi_top;

    for (int it = 1; it <= cfg.picard_max; ++it) {
        BoundaryField psi_b_new = psi_b, psi_t_new = psi_t;
        if (delta > 0.0) {
            // (i) Helmholtz solve for mu
            ScalarField G1 = laplacian(g, Phi);
            G1 *= -1.0;
            G1 += bulk_force(Phi);
            const ScalarField pxx = d2dx(g, Phi);
            const ScalarField adv = detail::advect(g, U, Phi);
            for (std::size_t n = 0; n < G1.values.size(); ++n)
                G1.values[n] += delta * delta * pxx.values[n] - delta * adv.values[n];
            mu_new = helmholtz_neumann(g, p.mobility * delta, G1);

            // (ii) wall heat steps for psi. The traction uses the
            // flux-consistent normal derivative so the wall law matches the
            // trace of the bulk discretization; a one-sided stencil here
            // leaves an O(dy^2) wall mismatch that the trace identity
            // amplifies by 1/delta.
            const ScalarField u1dx = hadamard(U.u1, ddx(g, Phi));
            for (WallSide w : {WallSide::Bottom, WallSide::Top}) {
                BoundaryField G2 = wall_traction_consistent(g, Phi, mu_new, w, p.a);
                G2 *= -p.relax;
                G2 -= trace(g, u1dx, w);
                if (w == WallSide::Bottom)
                    psi_b_new = boundary_heat_step(g, state.psi_bottom, delta, dt, G2);
                else
                    psi_t_new = boundary_heat_step(g, state.psi_top, delta, dt, G2);
            }

            // (iii) interior heat step for phi with Dirichlet traces psi
            ScalarField G3 = mu_new - bulk_force(Phi);
            phi_new = interior_heat_step(g, state.phi, delta, dt, G3, psi_b_new, psi_t_new);
        } else {
            // (iii') coupled Cahn-Hilliard block solve
            auto [phi_c, mu_c] = ch_coupled_step(g, state.phi, dt, U, Phi, p,
                                                 forcing ? &forcing->ch : nullptr);
            phi_new = std::move(phi_c);
            mu_new = std::move(mu_c);
            psi_b_new = trace(g, phi_new, WallSide::Bottom);
            psi_t_new = trace(g, phi_new, WallSide::Top);
        }

        // (iv) momentum step with the GNBC data of the frozen iterate
        if (cfg.freeze_velocity) {
            u_new = state.u;
        } else {
            VectorField G4 = detail::momentum_forcing(g, U, mu_new, Phi);
            if (forcing) {
                G4.u1 += forcing->momentum.u1;
                G4.u2 += forcing->momentum.u2;
            }
            const BoundaryField g4b = gnbc_rhs(g, Phi, WallSide::Bottom, p.a);
            const BoundaryField g4t = gnbc_rhs(g, Phi, WallSide::Top, p.a);
            u_new = momentum_step(g, state.u, dt, G4, g4b, g4t, p);
        }

        const double res = detail::composite_residual(g, cfg.norm_spec, u_new, U, phi_new, Phi);
        report.residuals.push_back(res);
        if (report.residuals.size() >= 2) {
            const std::size_t m = report.residuals.size();
            report.contraction_ratios.push_back(report.residuals[m - 1] /
                                                report.residuals[m - 2]);
        }
        report.iterations = it;
        if (res <= cfg.picard_tol) {
            report.converged = true;
            psi_b = std::move(psi_b_new);
            psi_t = std::move(psi_t_new);
            break;
        }
        U = u_new;
        Phi = phi_new;
        psi_b = psi_b_new;
        psi_t = psi_t_new;
    }

    if (!report.converged) return {state, report};

    SimState out;
    out.t = state.t + dt;
    out.u = std::move(u_new);
    out.phi = std::move(phi_new);
    out.mu = std::move(mu_new);
    out.psi_bottom = std::move(psi_b);
    out.psi_top = std::move(psi_t);
    out.params = state.params;
    return {std::move(out), std::move(report)};
}

struct StepRecord {
    int step = 0;
    double t = 0.0;
    EnergyReport energy;
    double mass_mean = 0.0;
    double law_residual = 0.0;
    PicardReport picard;
};

using StepSink = std::function<void(const StepRecord&)>;

struct AdvanceResult {
    SimState state;
    int steps_completed = 0;
    bool completed = false;
    int failed_step = -1;  // 1-based index of the first non-converged step
};

// Run n steps, emitting one record per accepted step to every sink.
// Aborts cleanly on the first non-converged step (partial records flushed,
// state of the last accepted step returned).
inline AdvanceResult advance(const ChannelGrid& g, SimState state, int n_steps,
                             const StepConfig& cfg, const std::vector<StepSink>& sinks = {},
                             const StepForcing* forcing = nullptr) {
    cfg.validate();
    if (n_steps < 0) throw std::invalid_argument("advance: n_steps must be >= 0");
    EnergyReport prev = energy_report(g, state.u, state.phi, state.mu, state.params);
    AdvanceResult result;
    for (int s = 1; s <= n_steps; ++s) {
        auto [next, rep] = picard_step(g, state, cfg, forcing);
        if (!rep.converged) {
            result.state = std::move(state);
            result.steps_completed = s - 1;
            result.completed = false;
            result.failed_step = s;
            return result;
        }
        state = std::move(next);
        EnergyReport er = energy_report(g, state.u, state.phi, state.mu, state.params);
        StepRecord rec;
        rec.step = s;
        rec.t = state.t;
        rec.energy = er;
        rec.mass_mean = mean(g, state.phi);
        rec.law_residual = (er.total - prev.total) / cfg.dt + er.total_dissipation();
        rec.picard = std::move(rep);
        for (const auto& sink : sinks) sink(rec);
        prev = er;
    }
    result.state = std::move(state);
    result.steps_completed = n_steps;
    result.completed = true;
    return result;
}

struct ContinuationReport {
    std::vector<double> deltas;
    std::vector<SimState> final_states;
    SimState zero_state;             // native delta = 0 run on the same data
    std::vector<double> phi_diffs;   // ||phi^{d_i} - phi^{d_{i+1}}||_L2
    std::vector<double> u_diffs;
    std::vector<double> phi_vs_zero; // per delta: ||phi^d - phi^0||_L2
};

// Run the same initial data and horizon for every delta in a strictly
// decreasing ladder, plus the native delta = 0 run, and record successive
// Cauchy differences at the final time.
inline ContinuationReport delta_continuation(const ChannelGrid& g, const VectorField& u0,
                                             const ScalarField& phi0, PhysParams params,
                                             const StepConfig& cfg,
                                             const std::vector<double>& deltas, int n_steps) {
    if (deltas.empty()) throw std::invalid_argument("delta_continuation: empty ladder");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0))
            throw std::invalid_argument("delta_continuation: ladder entries must be > 0");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument("delta_continuation: ladder must be strictly decreasing");
    }
    ContinuationReport rep;
    rep.deltas = deltas;

    auto run_at = [&](double delta) {
        params.delta = delta;
        SimState s0 = make_state(g, u0, phi0, params);
        AdvanceResult r = advance(g, std::move(s0), n_steps, cfg);
        if (!r.completed)
            throw SolverError("delta_continuation: run at delta=" + std::to_string(delta) +
                              " failed at step " + std::to_string(r.failed_step));
        return std::move(r.state);
    };

    for (double d : deltas) rep.final_states.push_back(run_at(d));
    rep.zero_state = run_at(0.0);

    for (std::size_t i = 0; i + 1 < rep.final_states.size(); ++i) {
        rep.phi_diffs.push_back(
            l2_norm(g, rep.final_states[i].phi - rep.final_states[i + 1].phi));
        VectorField du(g.Nx, g.Ny);
        du.u1 = rep.final_states[i].u.u1 - rep.final_states[i + 1].u.u1;
        du.u2 = rep.final_states[i].u.u2 - rep.final_states[i + 1].u.u2;
        rep.u_diffs.push_back(std::sqrt(l2_norm_sq(g, du)));
    }
    for (const auto& s : rep.final_states)
        rep.phi_vs_zero.push_back(l2_norm(g, s.phi - rep.zero_state.phi));
    return rep;
}

}  // namespace mcl
