// The four linearized sub-problem solvers behind the per-step fixed point,
// plus the delta=0 coupled Cahn-Hilliard block solver. Everything reduces to
// per-x-mode tridiagonal or 2x2-block tridiagonal systems in y.
//
// Wall closures are chosen for exact discrete bookkeeping under the grid's
// trapezoid/rectangle quadrature:
//  - Neumann walls use the half-cell flux balance (ghost form), which makes
//    mean(mu) = mean(G1) hold to round-off in helmholtz_neumann;
//  - the coupled CH step keeps the flux-form bulk row at the wall nodes, so
//    mean(phi) telescopes exactly, and discretizes the relaxation row with
//    the flux-consistent normal derivative (see physics.hpp).
#pragma once

#include <utility>

#include "mcl/physics.hpp"
#include "mcl/tridiag.hpp"

namespace mcl {

// x-second-derivative symbol; the Nyquist mode is zeroed to match d2dx.
inline double alpha_x(const ChannelGrid& g, int k) {
    if (k == g.nyquist()) return 0.0;
    return g.kx(k) * g.kx(k);
}

// Flux-form Laplacian with homogeneous Neumann wall fluxes: 3-point interior
// rows, half-cell balance at the walls. This is the operator the Neumann
// solvers invert; tests verify residuals against it.
inline ScalarField neumann_flux_laplacian(const ChannelGrid& g, const ScalarField& F) {
    check_on_grid(g, F);
    ScalarField R = d2dx(g, F);
    const double h2 = g.dy * g.dy;
    const int n = g.Ny;
    for (int i = 0; i < g.Nx; ++i) {
        R(i, 0) += 2.0 * (F(i, 1) - F(i, 0)) / h2;
        for (int j = 1; j < n - 1; ++j)
            R(i, j) += (F(i, j + 1) - 2.0 * F(i, j) + F(i, j - 1)) / h2;
        R(i, n - 1) += -2.0 * (F(i, n - 1) - F(i, n - 2)) / h2;
    }
    return R;
}

// Solve mu - delta*lap(mu) = G1 with d_n mu = 0 on both walls.
inline ScalarField helmholtz_neumann(const ChannelGrid& g, double delta, const ScalarField& G1) {
    if (!(delta > 0.0)) throw std::invalid_argument("helmholtz_neumann: delta must be > 0");
    check_on_grid(g, G1);
    ModalField rhs = to_modes(g, G1);
    ModalField sol(rhs.Nk, rhs.Ny);
    const double h2 = g.dy * g.dy;
    const int n = g.Ny;
    for (int k = 0; k < rhs.Nk; ++k) {
        const double ak = alpha_x(g, k);
        ModalSystem sys(k, n);
        sys.bottom.kind = BoundaryRowSpec::Kind::Neumann;
        sys.top.kind = BoundaryRowSpec::Kind::Neumann;
        sys.diag[0] = 1.0 + delta * ak + 2.0 * delta / h2;
        sys.upper[0] = -2.0 * delta / h2;
        for (int j = 1; j < n - 1; ++j) {
            sys.lower[j] = -delta / h2;
            sys.diag[j] = 1.0 + delta * ak + 2.0 * delta / h2;
            sys.upper[j] = -delta / h2;
        }
        sys.diag[n - 1] = 1.0 + delta * ak + 2.0 * delta / h2;
        sys.lower[n - 1] = -2.0 * delta / h2;
        for (int j = 0; j < n; ++j) sys.rhs[j] = rhs(k, j);
        auto x = sys.solve();
        for (int j = 0; j < n; ++j) sol(k, j) = x[j];
    }
    return from_modes(g, std::move(sol));
}

// Backward-Euler step of psi_t - delta * dxx psi = G2 on one wall line.
// Exact per-mode diagonal solve.
inline BoundaryField boundary_heat_step(const ChannelGrid& g, const BoundaryField& psi_n,
                                        double delta, double dt, const BoundaryField& G2) {
    if (!(dt > 0.0)) throw std::invalid_argument("boundary_heat_step: dt must be > 0");
    if (delta < 0.0) throw std::invalid_argument("boundary_heat_step: delta must be >= 0");
    check_on_grid(g, psi_n);
    check_on_grid(g, G2);
    auto m = to_modes(g, psi_n);
    auto f = to_modes(g, G2);
    for (int k = 0; k < g.num_modes(); ++k)
        m[k] = (m[k] + dt * f[k]) / (1.0 + delta * dt * alpha_x(g, k));
    return from_modes(g, psi_n.wall, std::move(m));
}

// Backward-Euler step of delta*phi_t - lap(phi) = G3 with Dirichlet traces.
inline ScalarField interior_heat_step(const ChannelGrid& g, const ScalarField& phi_n,
                                      double delta, double dt, const ScalarField& G3,
                                      const BoundaryField& g3_bottom,
                                      const BoundaryField& g3_top) {
    if (!(delta > 0.0)) throw std::invalid_argument("interior_heat_step: delta must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("interior_heat_step: dt must be > 0");
    check_on_grid(g, phi_n);
    check_on_grid(g, G3);
    ModalField phin = to_modes(g, phi_n);
    ModalField rhs = to_modes(g, G3);
    auto gb = to_modes(g, g3_bottom);
    auto gt = to_modes(g, g3_top);
    ModalField sol(rhs.Nk, rhs.Ny);
    const double h2 = g.dy * g.dy;
    const double r = delta / dt;
    const int n = g.Ny;
    for (int k = 0; k < rhs.Nk; ++k) {
        const double ak = alpha_x(g, k);
        ModalSystem sys(k, n);
        sys.bottom.kind = BoundaryRowSpec::Kind::Dirichlet;
        sys.top.kind = BoundaryRowSpec::Kind::Dirichlet;
        sys.diag[0] = 1.0;
        sys.rhs[0] = gb[k];
        for (int j = 1; j < n - 1; ++j) {
            sys.lower[j] = -1.0 / h2;
            sys.diag[j] = r + ak + 2.0 / h2;
            sys.upper[j] = -1.0 / h2;
            sys.rhs[j] = r * phin(k, j) + rhs(k, j);
        }
        sys.diag[n - 1] = 1.0;
        sys.rhs[n - 1] = gt[k];
        auto x = sys.solve();
        for (int j = 0; j < n; ++j) sol(k, j) = x[j];
    }
    return from_modes(g, std::move(sol));
}

namespace detail {

// One-sided second-order d/dy of a complex y-profile at the walls.
inline Complex dy_bottom(const std::vector<Complex>& v, double dy) {
    return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dy);
}
inline Complex dy_top(const std::vector<Complex>& v, double dy) {
    const std::size_t n = v.size();
    return (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dy);
}

// ddy stencil family applied to a complex y-profile.
inline std::vector<Complex> dy_profile(const std::vector<Complex>& v, double dy) {
    const std::size_t n = v.size();
    std::vector<Complex> r(n);
    r[0] = dy_bottom(v, dy);
    for (std::size_t j = 1; j + 1 < n; ++j) r[j] = (v[j + 1] - v[j - 1]) / (2.0 * dy);
    r[n - 1] = dy_top(v, dy);
    return r;
}

// (1/dt + nu*alpha) I - nu D2 with Dirichlet rows carrying the given values.
inline std::vector<Complex> solve_omega(const ChannelGrid& g, int k, double dt, double nu,
                                        const std::vector<Complex>& rhs, Complex wall_bottom,
                                        Complex wall_top) {
    const int n = g.Ny;
    const double h2 = g.dy * g.dy;
    const double ak = alpha_x(g, k);
    ModalSystem sys(k, n);
    sys.bottom.kind = BoundaryRowSpec::Kind::CoupledVorticity;
    sys.top.kind = BoundaryRowSpec::Kind::CoupledVorticity;
    sys.diag[0] = 1.0;
    sys.rhs[0] = wall_bottom;
    for (int j = 1; j < n - 1; ++j) {
        sys.lower[j] = -nu / h2;
        sys.diag[j] = 1.0 / dt + nu * ak + 2.0 * nu / h2;
        sys.upper[j] = -nu / h2;
        sys.rhs[j] = rhs[j];
    }
    sys.diag[n - 1] = 1.0;
    sys.rhs[n - 1] = wall_top;
    return sys.solve();
}

// D2 sigma - alpha sigma = -omega with sigma = 0 on the walls.
inline std::vector<Complex> solve_streamfunction(const ChannelGrid& g, int k,
                                                 const std::vector<Complex>& omega) {
    const int n = g.Ny;
    const double h2 = g.dy * g.dy;
    const double ak = alpha_x(g, k);
    ModalSystem sys(k, n);
    sys.diag[0] = 1.0;
    sys.rhs[0] = 0.0;
    for (int j = 1; j < n - 1; ++j) {
        sys.lower[j] = 1.0 / h2;
        sys.diag[j] = -(ak + 2.0 / h2);
        sys.upper[j] = 1.0 / h2;
        sys.rhs[j] = -omega[j];
    }
    sys.diag[n - 1] = 1.0;
    sys.rhs[n - 1] = 0.0;
    return sys.solve();
}

}  // namespace detail

// Backward-Euler momentum step in vorticity-streamfunction form.
//
// Nonzero modes: (1/dt) w - nu lap w = curl G4 + w^n/dt with the GNBC closed
// as the Dirichlet vorticity row w = +-(beta u1 - g4) through the influence
// matrix (two auxiliary unit-wall solves per mode). The k=0 mean mode of u1
// solves the scalar Robin problem directly; the k=0 mode of u2 is zero. Any
// x-mean vertical forcing is absorbed by the eliminated hydrostatic pressure
// and does not enter.
inline VectorField momentum_step(const ChannelGrid& g, const VectorField& u_n, double dt,
                                 const VectorField& G4, const BoundaryField& g4_bottom,
                                 const BoundaryField& g4_top, const PhysParams& p) {
    if (!(dt > 0.0)) throw std::invalid_argument("momentum_step: dt must be > 0");
    check_on_grid(g, u_n.u1);
    check_on_grid(g, G4.u1);
    const int n = g.Ny;
    const double h2 = g.dy * g.dy;
    const double nu = p.nu;
    const double beta = p.beta;

    const ScalarField omega_n = ddx(g, u_n.u2) - ddy(g, u_n.u1);
    const ScalarField curl_g4 = ddx(g, G4.u2) - ddy(g, G4.u1);

    ModalField w_n = to_modes(g, omega_n);
    ModalField cg = to_modes(g, curl_g4);
    ModalField g41 = to_modes(g, G4.u1);
    ModalField u1n = to_modes(g, u_n.u1);
    auto g4b = to_modes(g, g4_bottom);
    auto g4t = to_modes(g, g4_top);

    ModalField U1(w_n.Nk, n), U2(w_n.Nk, n);

    // k = 0: Robin problem for the mean of u1.
    {
        ModalSystem sys(0, n);
        sys.bottom.kind = BoundaryRowSpec::Kind::Robin;
        sys.top.kind = BoundaryRowSpec::Kind::Robin;
        const Complex a_int = -nu / h2;
        const Complex b_int = 1.0 / dt + 2.0 * nu / h2;
        for (int j = 1; j < n - 1; ++j) {
            sys.lower[j] = a_int;
            sys.diag[j] = b_int;
            sys.upper[j] = a_int;
            sys.rhs[j] = g41(0, j) + u1n(0, j) / dt;
        }
        // beta u - d_y u = g4 at the bottom, beta u + d_y u = g4 at the top,
        // one-sided; the third entry is eliminated with the adjacent row.
        {
            const Complex p0 = beta + 3.0 / (2.0 * g.dy);
            const Complex p1 = -2.0 / g.dy;
            const Complex p2 = 1.0 / (2.0 * g.dy);
            const Complex r1 = g41(0, 1) + u1n(0, 1) / dt;
            // eliminate the u_2 entry of the Robin row with interior row 1
            const Complex cu = a_int;  // coefficient of u_2 in row 1
            sys.diag[0] = p0 - p2 * a_int / cu;
            sys.upper[0] = p1 - p2 * b_int / cu;
            sys.rhs[0] = g4b[0] - p2 * r1 / cu;
        }
        {
            const Complex q0 = beta + 3.0 / (2.0 * g.dy);
            const Complex q1 = -2.0 / g.dy;
            const Complex q2 = 1.0 / (2.0 * g.dy);
            const Complex rn = g41(0, n - 2) + u1n(0, n - 2) / dt;
            const Complex cl = a_int;  // coefficient of u_{n-3} in row n-2
            sys.diag[n - 1] = q0 - q2 * a_int / cl;
            sys.lower[n - 1] = q1 - q2 * b_int / cl;
            sys.rhs[n - 1] = g4t[0] - q2 * rn / cl;
        }
        auto x = sys.solve();
        for (int j = 0; j < n; ++j) {
            U1(0, j) = x[j];
            U2(0, j) = 0.0;
        }
    }

    // k >= 1: influence matrix over (omega, sigma).
    for (int k = 1; k < w_n.Nk; ++k) {
        std::vector<Complex> rhs(n);
        for (int j = 0; j < n; ++j) rhs[j] = cg(k, j) + w_n(k, j) / dt;
        const std::vector<Complex> zero(n, Complex(0.0));

        auto w_p = detail::solve_omega(g, k, dt, nu, rhs, 0.0, 0.0);
        auto w_b = detail::solve_omega(g, k, dt, nu, zero, 1.0, 0.0);
        auto w_t = detail::solve_omega(g, k, dt, nu, zero, 0.0, 1.0);
        auto s_p = detail::solve_streamfunction(g, k, w_p);
        auto s_b = detail::solve_streamfunction(g, k, w_b);
        auto s_t = detail::solve_streamfunction(g, k, w_t);

        const Complex Bp = detail::dy_bottom(s_p, g.dy), Bb = detail::dy_bottom(s_b, g.dy),
                      Bt = detail::dy_bottom(s_t, g.dy);
        const Complex Tp = detail::dy_top(s_p, g.dy), Tb = detail::dy_top(s_b, g.dy),
                      Tt = detail::dy_top(s_t, g.dy);

        // bottom: w(-1) + beta u1(-1) = g4b;  top: w(+1) - beta u1(+1) = -g4t
        const Complex m00 = 1.0 + beta * Bb, m01 = beta * Bt;
        const Complex m10 = -beta * Tb, m11 = 1.0 - beta * Tt;
        const Complex det = m00 * m11 - m01 * m10;
        double scale = std::abs(m00) + std::abs(m01) + std::abs(m10) + std::abs(m11);
        if (std::abs(det) <= 1e-14 * scale * scale)
            throw SolverError("influence matrix singular (mode " + std::to_string(k) + ")");
        const Complex r0 = g4b[k] - beta * Bp;
        const Complex r1 = -g4t[k] + beta * Tp;
        const Complex lam_b = (r0 * m11 - m01 * r1) / det;
        const Complex lam_t = (m00 * r1 - m10 * r0) / det;

        std::vector<Complex> sigma(n);
        for (int j = 0; j < n; ++j) sigma[j] = s_p[j] + lam_b * s_b[j] + lam_t * s_t[j];
        auto u1k = detail::dy_profile(sigma, g.dy);
        const Complex ikx =
            (k == g.nyquist()) ? Complex(0.0) : Complex(0.0, g.kx(k));
        for (int j = 0; j < n; ++j) {
            U1(k, j) = u1k[j];
            U2(k, j) = -ikx * sigma[j];
        }
    }

    VectorField u(g.Nx, g.Ny);
    u.u1 = from_modes(g, std::move(U1));
    u.u2 = from_modes(g, std::move(U2));
    return u;
}

// Conservative transport div(U Phi): spectral in x, flux form in y with the
// pointwise wall flux, so the quadrature-weighted sum telescopes to the wall
// values of U2*Phi.
inline ScalarField conservative_transport(const ChannelGrid& g, const VectorField& U,
                                          const ScalarField& Phi) {
    const ScalarField f1 = hadamard(U.u1, Phi);
    const ScalarField f2 = hadamard(U.u2, Phi);
    ScalarField T = ddx(g, f1);
    const int n = g.Ny;
    for (int i = 0; i < g.Nx; ++i) {
        T(i, 0) += (f2(i, 1) - f2(i, 0)) / g.dy;
        for (int j = 1; j < n - 1; ++j) T(i, j) += (f2(i, j + 1) - f2(i, j - 1)) / (2.0 * g.dy);
        T(i, n - 1) += (f2(i, n - 1) - f2(i, n - 2)) / g.dy;
    }
    return T;
}

// Optional extra sources for the coupled step (used by the manufactured
// full-step convergence study).
struct ChForcing {
    ScalarField row_a;             // transport equation, all rows
    ScalarField row_b;             // mu definition rows (interior)
    BoundaryField relax_bottom{WallSide::Bottom, 0};
    BoundaryField relax_top{WallSide::Top, 0};
};

// The delta=0 production step: jointly solve
//   (phi^{n+1} - phi^n)/dt + div(U Phi) = M lap(mu^{n+1})         (bulk + wall flux rows)
//   mu^{n+1} + lap(phi^{n+1}) = f(Phi)                            (interior)
//   (phi^{n+1} - phi^n)/dt + U1 dx Phi = -relax * L(phi^{n+1})    (wall rows)
// with d_n mu = 0 encoded in the wall flux rows and L discretized with the
// flux-consistent normal derivative.
inline std::pair<ScalarField, ScalarField> ch_coupled_step(const ChannelGrid& g,
                                                           const ScalarField& phi_n, double dt,
                                                           const VectorField& U,
                                                           const ScalarField& Phi,
                                                           const PhysParams& p,
                                                           const ChForcing* forcing = nullptr) {
    if (!(dt > 0.0)) throw std::invalid_argument("ch_coupled_step: dt must be > 0");
    check_on_grid(g, phi_n);
    check_on_grid(g, Phi);
    const int n = g.Ny;
    const double h2 = g.dy * g.dy;
    const double M = p.mobility;
    const double R = p.relax;

    ScalarField rhs_a = conservative_transport(g, U, Phi);
    rhs_a *= -1.0;
    for (std::size_t m = 0; m < rhs_a.values.size(); ++m)
        rhs_a.values[m] += phi_n.values[m] / dt;
    ScalarField fphi = bulk_force(Phi);
    if (forcing) {
        rhs_a += forcing->row_a;
        fphi += forcing->row_b;
    }

    const ScalarField u1dx = hadamard(U.u1, ddx(g, Phi));
    BoundaryField rb(WallSide::Bottom, g.Nx), rt(WallSide::Top, g.Nx);
    for (int i = 0; i < g.Nx; ++i) {
        rb[i] = phi_n(i, 0) / dt - u1dx(i, 0) -
                R * (0.5 * g.dy * bulk_force(Phi(i, 0)) + wall_energy_d(Phi(i, 0), p.a));
        rt[i] = phi_n(i, n - 1) / dt - u1dx(i, n - 1) -
                R * (0.5 * g.dy * bulk_force(Phi(i, n - 1)) +
                     wall_energy_d(Phi(i, n - 1), p.a));
    }
    if (forcing) {
        rb += forcing->relax_bottom;
        rt += forcing->relax_top;
    }

    ModalField ma = to_modes(g, rhs_a);
    ModalField mf = to_modes(g, fphi);
    auto mrb = to_modes(g, rb);
    auto mrt = to_modes(g, rt);

    ModalField phi_hat(ma.Nk, n), mu_hat(ma.Nk, n);
    for (int k = 0; k < ma.Nk; ++k) {
        const double ak = alpha_x(g, k);
        BlockModalSystem sys(k, n);
        // wall block rows: (flux-form bulk row, relaxation row)
        sys.diag[0] = {Complex(1.0 / dt), Complex(M * (2.0 / h2 + ak)),
                       Complex(1.0 / dt + R / g.dy + 0.5 * R * g.dy * ak),
                       Complex(-0.5 * R * g.dy)};
        sys.upper[0] = {Complex(0.0), Complex(-2.0 * M / h2), Complex(-R / g.dy), Complex(0.0)};
        sys.rhs[0] = {ma(k, 0), mrb[k]};
        for (int j = 1; j < n - 1; ++j) {
            sys.lower[j] = {Complex(0.0), Complex(-M / h2), Complex(1.0 / h2), Complex(0.0)};
            sys.diag[j] = {Complex(1.0 / dt), Complex(M * (ak + 2.0 / h2)),
                           Complex(-(ak + 2.0 / h2)), Complex(1.0)};
            sys.upper[j] = {Complex(0.0), Complex(-M / h2), Complex(1.0 / h2), Complex(0.0)};
            sys.rhs[j] = {ma(k, j), mf(k, j)};
        }
        sys.lower[n - 1] = {Complex(0.0), Complex(-2.0 * M / h2), Complex(-R / g.dy),
                            Complex(0.0)};
        sys.diag[n - 1] = {Complex(1.0 / dt), Complex(M * (2.0 / h2 + ak)),
                           Complex(1.0 / dt + R / g.dy + 0.5 * R * g.dy * ak),
                           Complex(-0.5 * R * g.dy)};
        sys.rhs[n - 1] = {ma(k, n - 1), mrt[k]};

        auto x = sys.solve();
        for (int j = 0; j < n; ++j) {
            phi_hat(k, j) = x[j].v0;
            mu_hat(k, j) = x[j].v1;
        }
    }
    return {from_modes(g, std::move(phi_hat)), from_modes(g, std::move(mu_hat))};
}

}  // namespace mcl
