// Library of compatible initial data: tanh interface profiles (periodized as
// a double interface) and solenoidal velocities with zero wall-normal trace.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "mcl/grid.hpp"

namespace mcl {

enum class InitialKind { Equilibrium, FlatInterface, TiltedInterface, PerturbedInterface, ShearFlow };

struct InitialCondition {
    InitialKind kind = InitialKind::FlatInterface;
    double x0 = -1.0;      // interface anchor; < 0 means Lx/2
    double width = 1.0;    // tanh scale; the potential fixes the physical width
    double angle = 90.0;   // degrees between interface and wall (tilted)
    double amplitude = 0.1;  // perturbation / shear amplitude
    int mode = 1;          // perturbation y-mode
    double value = 1.0;    // equilibrium constant
};

namespace detail {

// Periodic double-interface profile: rising crossing at 0, falling at Lx/2,
// smooth by summing tanh images (tails decay like exp(-Lx/width)).
inline double pair_profile(double xi, double Lx, double width) {
    const double s = std::sqrt(2.0) * width;
    double v = -1.0;
    for (int m = -4; m <= 4; ++m)
        v += std::tanh((xi + m * Lx) / s) - std::tanh((xi - 0.5 * Lx + m * Lx) / s);
    return v;
}

}  // namespace detail

inline std::pair<VectorField, ScalarField> build_initial(const ChannelGrid& g,
                                                         const InitialCondition& ic) {
    if (!(ic.width > 0.0)) throw std::invalid_argument("build_initial: width must be > 0");
    if (!(ic.angle > 0.0 && ic.angle < 180.0))
        throw std::invalid_argument("build_initial: angle must be in (0, 180) degrees");
    if (ic.mode < 0) throw std::invalid_argument("build_initial: mode must be >= 0");
    if (!std::isfinite(ic.amplitude) || !std::isfinite(ic.value))
        throw std::invalid_argument("build_initial: amplitude/value must be finite");

    const double x0 = ic.x0 < 0.0 ? 0.5 * g.Lx : ic.x0;
    VectorField u(g.Nx, g.Ny);
    ScalarField phi(g.Nx, g.Ny);

    switch (ic.kind) {
        case InitialKind::Equilibrium:
            for (auto& v : phi.values) v = ic.value;
            break;
        case InitialKind::FlatInterface:
            for (int i = 0; i < g.Nx; ++i)
                for (int j = 0; j < g.Ny; ++j)
                    phi(i, j) = detail::pair_profile(g.x(i) - x0, g.Lx, ic.width);
            break;
        case InitialKind::TiltedInterface: {
            const double slope = 1.0 / std::tan(ic.angle * std::numbers::pi / 180.0);
            for (int i = 0; i < g.Nx; ++i)
                for (int j = 0; j < g.Ny; ++j)
                    phi(i, j) =
                        detail::pair_profile(g.x(i) - x0 - slope * g.y(j), g.Lx, ic.width);
            break;
        }
        case InitialKind::PerturbedInterface: {
            for (int i = 0; i < g.Nx; ++i)
                for (int j = 0; j < g.Ny; ++j) {
                    const double shift =
                        ic.amplitude *
                        std::cos(ic.mode * std::numbers::pi * (g.y(j) + 1.0) / 2.0);
                    phi(i, j) = detail::pair_profile(g.x(i) - x0 - shift, g.Lx, ic.width);
                }
            break;
        }
        case InitialKind::ShearFlow: {
            for (int i = 0; i < g.Nx; ++i)
                for (int j = 0; j < g.Ny; ++j) {
                    u.u1(i, j) = ic.amplitude * std::sin(std::numbers::pi * g.y(j));
                    phi(i, j) = detail::pair_profile(g.x(i) - x0, g.Lx, ic.width);
                }
            break;
        }
    }
    return {std::move(u), std::move(phi)};
}

}  // namespace mcl
