// Channel geometry T_Lx x (-1,1) with Fourier-collocation calculus in x and
// second-order finite differences in y.
//
// Conventions fixed here and relied on by the solvers:
//  - ddx zeroes the Nyquist mode of the derivative; d2dx does the same, so
//    laplacian's x part equals ddx applied twice.
//  - ddy / normal_deriv use second-order one-sided stencils at the walls;
//    d2dy uses the 4-point one-sided second-derivative stencil there.
//  - Quadrature is trapezoid in y, rectangle in x.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mcl/fft.hpp"
#include "mcl/field.hpp"

namespace mcl {

struct ChannelGrid {
    double Lx = 2.0 * std::numbers::pi;
    int Nx = 0;
    int Ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    std::vector<double> y_coords;

    int num_modes() const { return Nx / 2 + 1; }
    int nyquist() const { return Nx / 2; }

    double x(int i) const { return dx * i; }
    double y(int j) const { return y_coords[j]; }

    // Wavenumber of mode k.
    double kx(int k) const { return 2.0 * std::numbers::pi * k / Lx; }

    int wall_index(WallSide w) const { return w == WallSide::Bottom ? 0 : Ny - 1; }
};

inline ChannelGrid make_grid(double Lx, int Nx, int Ny) {
    if (Lx <= 0.0) throw std::invalid_argument("make_grid: Lx must be > 0");
    if (Nx < 4) throw std::invalid_argument("make_grid: Nx must be >= 4");
    if (Nx % 2 != 0) throw std::invalid_argument("make_grid: Nx must be even");
    if (Ny < 5) throw std::invalid_argument("make_grid: Ny must be >= 5");
    ChannelGrid g;
    g.Lx = Lx;
    g.Nx = Nx;
    g.Ny = Ny;
    g.dx = Lx / Nx;
    g.dy = 2.0 / (Ny - 1);
    g.y_coords.resize(Ny);
    for (int j = 0; j < Ny; ++j) g.y_coords[j] = -1.0 + j * g.dy;
    g.y_coords[0] = -1.0;
    g.y_coords[Ny - 1] = 1.0;
    return g;
}

inline void check_on_grid(const ChannelGrid& g, const ScalarField& F) {
    if (F.Nx != g.Nx || F.Ny != g.Ny)
        throw std::invalid_argument("field shape does not match grid");
}

inline void check_on_grid(const ChannelGrid& g, const BoundaryField& B) {
    if (B.Nx() != g.Nx) throw std::invalid_argument("boundary field length does not match grid");
}

inline ModalField to_modes(const ChannelGrid& g, const ScalarField& F) {
    check_on_grid(g, F);
    return x_forward(g.Nx, g.Ny, F.values);
}

inline ScalarField from_modes(const ChannelGrid& g, ModalField m) {
    ScalarField F(g.Nx, g.Ny);
    F.values = x_inverse(g.Nx, g.Ny, std::move(m));
    return F;
}

inline std::vector<Complex> to_modes(const ChannelGrid& g, const BoundaryField& B) {
    check_on_grid(g, B);
    return x_forward(g.Nx, 1, B.values).data;
}

inline BoundaryField from_modes(const ChannelGrid& g, WallSide w, std::vector<Complex> modes) {
    ModalField m(g.num_modes(), 1);
    m.data = std::move(modes);
    BoundaryField B(w, g.Nx);
    B.values = x_inverse(g.Nx, 1, std::move(m));
    return B;
}

// Spectral d/dx; the Nyquist mode of the derivative is zeroed.
inline ScalarField ddx(const ChannelGrid& g, const ScalarField& F) {
    ModalField m = to_modes(g, F);
    for (int k = 0; k < m.Nk; ++k) {
        const Complex ik = (k == g.nyquist()) ? Complex(0.0, 0.0) : Complex(0.0, g.kx(k));
        for (int j = 0; j < g.Ny; ++j) m(k, j) *= ik;
    }
    return from_modes(g, std::move(m));
}

// Spectral d2/dx2 with the same Nyquist treatment, so d2dx == ddx(ddx(.)).
inline ScalarField d2dx(const ChannelGrid& g, const ScalarField& F) {
    ModalField m = to_modes(g, F);
    for (int k = 0; k < m.Nk; ++k) {
        const double a = (k == g.nyquist()) ? 0.0 : -g.kx(k) * g.kx(k);
        for (int j = 0; j < g.Ny; ++j) m(k, j) *= a;
    }
    return from_modes(g, std::move(m));
}

inline BoundaryField ddx(const ChannelGrid& g, const BoundaryField& B) {
    auto m = to_modes(g, B);
    for (int k = 0; k < g.num_modes(); ++k)
        m[k] *= (k == g.nyquist()) ? Complex(0.0, 0.0) : Complex(0.0, g.kx(k));
    return from_modes(g, B.wall, std::move(m));
}

inline BoundaryField d2dx(const ChannelGrid& g, const BoundaryField& B) {
    auto m = to_modes(g, B);
    for (int k = 0; k < g.num_modes(); ++k)
        m[k] *= (k == g.nyquist()) ? 0.0 : -g.kx(k) * g.kx(k);
    return from_modes(g, B.wall, std::move(m));
}

// d/dy: centered at interior nodes, second-order one-sided at j=0, Ny-1.
inline ScalarField ddy(const ChannelGrid& g, const ScalarField& F) {
    check_on_grid(g, F);
    ScalarField R(g.Nx, g.Ny);
    const double h = g.dy;
    const int n = g.Ny;
    for (int i = 0; i < g.Nx; ++i) {
        R(i, 0) = (-3.0 * F(i, 0) + 4.0 * F(i, 1) - F(i, 2)) / (2.0 * h);
        for (int j = 1; j < n - 1; ++j) R(i, j) = (F(i, j + 1) - F(i, j - 1)) / (2.0 * h);
        R(i, n - 1) = (3.0 * F(i, n - 1) - 4.0 * F(i, n - 2) + F(i, n - 3)) / (2.0 * h);
    }
    return R;
}

// d2/dy2: three-point at interior nodes, 4-point one-sided at the walls.
inline ScalarField d2dy(const ChannelGrid& g, const ScalarField& F) {
    check_on_grid(g, F);
    ScalarField R(g.Nx, g.Ny);
    const double h2 = g.dy * g.dy;
    const int n = g.Ny;
    for (int i = 0; i < g.Nx; ++i) {
        R(i, 0) = (2.0 * F(i, 0) - 5.0 * F(i, 1) + 4.0 * F(i, 2) - F(i, 3)) / h2;
        for (int j = 1; j < n - 1; ++j)
            R(i, j) = (F(i, j + 1) - 2.0 * F(i, j) + F(i, j - 1)) / h2;
        R(i, n - 1) =
            (2.0 * F(i, n - 1) - 5.0 * F(i, n - 2) + 4.0 * F(i, n - 3) - F(i, n - 4)) / h2;
    }
    return R;
}

inline ScalarField laplacian(const ChannelGrid& g, const ScalarField& F) {
    return d2dx(g, F) + d2dy(g, F);
}

inline BoundaryField trace(const ChannelGrid& g, const ScalarField& F, WallSide w) {
    check_on_grid(g, F);
    BoundaryField B(w, g.Nx);
    const int j = g.wall_index(w);
    for (int i = 0; i < g.Nx; ++i) B[i] = F(i, j);
    return B;
}

// Outward normal derivative: +d/dy at the top wall, -d/dy at the bottom,
// via the second-order one-sided stencil.
inline BoundaryField normal_deriv(const ChannelGrid& g, const ScalarField& F, WallSide w) {
    check_on_grid(g, F);
    BoundaryField B(w, g.Nx);
    const double h = g.dy;
    const int n = g.Ny;
    if (w == WallSide::Bottom) {
        for (int i = 0; i < g.Nx; ++i)
            B[i] = -(-3.0 * F(i, 0) + 4.0 * F(i, 1) - F(i, 2)) / (2.0 * h);
    } else {
        for (int i = 0; i < g.Nx; ++i)
            B[i] = (3.0 * F(i, n - 1) - 4.0 * F(i, n - 2) + F(i, n - 3)) / (2.0 * h);
    }
    return B;
}

// Trapezoid weight of node j in the y quadrature.
inline double y_weight(const ChannelGrid& g, int j) {
    return (j == 0 || j == g.Ny - 1) ? 0.5 * g.dy : g.dy;
}

// Integral over the channel: rectangle in x, trapezoid in y.
inline double integral(const ChannelGrid& g, const ScalarField& F) {
    check_on_grid(g, F);
    double s = 0.0;
    for (int j = 0; j < g.Ny; ++j) {
        const double w = y_weight(g, j);
        double row = 0.0;
        for (int i = 0; i < g.Nx; ++i) row += F(i, j);
        s += w * row;
    }
    return s * g.dx;
}

// Mean over |Omega| = 2*Lx.
inline double mean(const ChannelGrid& g, const ScalarField& F) {
    return integral(g, F) / (2.0 * g.Lx);
}

// Rectangle rule along one wall line.
inline double integrate_wall(const ChannelGrid& g, const BoundaryField& B) {
    check_on_grid(g, B);
    double s = 0.0;
    for (int i = 0; i < g.Nx; ++i) s += B[i];
    return s * g.dx;
}

inline double l2_norm_sq(const ChannelGrid& g, const ScalarField& F) {
    return integral(g, hadamard(F, F));
}

inline double l2_norm(const ChannelGrid& g, const ScalarField& F) {
    return std::sqrt(l2_norm_sq(g, F));
}

inline double l2_norm_sq(const ChannelGrid& g, const VectorField& u) {
    return l2_norm_sq(g, u.u1) + l2_norm_sq(g, u.u2);
}

inline double l2_wall_sq(const ChannelGrid& g, const BoundaryField& B) {
    return integrate_wall(g, hadamard(B, B));
}

inline double max_abs(const ScalarField& F) {
    double m = 0.0;
    for (double v : F.values) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs(const BoundaryField& B) {
    double m = 0.0;
    for (double v : B.values) m = std::max(m, std::abs(v));
    return m;
}

inline ScalarField divergence(const ChannelGrid& g, const VectorField& u) {
    return ddx(g, u.u1) + ddy(g, u.u2);
}

// Relative discrete divergence used by the solenoidal invariant checks.
inline double relative_divergence(const ChannelGrid& g, const VectorField& u) {
    const double nu = std::sqrt(l2_norm_sq(g, u));
    if (nu == 0.0) return 0.0;
    return l2_norm(g, divergence(g, u)) / nu;
}

// Velocity from a streamfunction: u = (d sigma/dy, -d sigma/dx). Fields built
// this way are discretely divergence-free because ddx and ddy commute.
inline VectorField velocity_from_streamfunction(const ChannelGrid& g, const ScalarField& sigma) {
    VectorField u(g.Nx, g.Ny);
    u.u1 = ddy(g, sigma);
    u.u2 = ddx(g, sigma);
    u.u2 *= -1.0;
    return u;
}

}  // namespace mcl
