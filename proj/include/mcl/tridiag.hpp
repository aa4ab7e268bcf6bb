// Per-x-mode linear systems in y: complex tridiagonal and 2x2-block
// tridiagonal Thomas solvers with explicit singularity detection. The
// systems assembled here are diagonally dominant, so no pivoting; the
// detection guards the claim.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcl/fft.hpp"

namespace mcl {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundaryRowSpec {
    enum class Kind { Dirichlet, Neumann, Robin, CoupledVorticity } kind = Kind::Dirichlet;
    double alpha = 0.0;  // Robin: alpha*u + beta*du/dn = g
    double beta = 0.0;
};

// One per-mode tridiagonal system over the y nodes. Boundary rows occupy
// exactly j = 0 and j = n-1.
struct ModalSystem {
    int k = 0;
    std::vector<Complex> lower;  // lower[j] multiplies x_{j-1}; lower[0] unused
    std::vector<Complex> diag;
    std::vector<Complex> upper;  // upper[j] multiplies x_{j+1}; upper[n-1] unused
    std::vector<Complex> rhs;
    BoundaryRowSpec bottom, top;

    explicit ModalSystem(int mode, int n)
        : k(mode), lower(n), diag(n), upper(n), rhs(n) {}

    int size() const { return static_cast<int>(diag.size()); }

    std::vector<Complex> solve() const {
        const int n = size();
        std::vector<Complex> c(n), d(n);
        double scale = 0.0;
        for (int j = 0; j < n; ++j)
            scale = std::max(scale,
                             std::abs(diag[j]) + std::abs(lower[j]) + std::abs(upper[j]));
        if (scale == 0.0) throw SolverError("singular modal system: zero matrix (mode " +
                                            std::to_string(k) + ")");
        Complex piv = diag[0];
        if (std::abs(piv) <= 1e-14 * scale)
            throw SolverError("singular modal system (mode " + std::to_string(k) + ", row 0)");
        c[0] = upper[0] / piv;
        d[0] = rhs[0] / piv;
        for (int j = 1; j < n; ++j) {
            piv = diag[j] - lower[j] * c[j - 1];
            if (std::abs(piv) <= 1e-14 * scale)
                throw SolverError("singular modal system (mode " + std::to_string(k) + ", row " +
                                  std::to_string(j) + ")");
            c[j] = upper[j] / piv;
            d[j] = (rhs[j] - lower[j] * d[j - 1]) / piv;
        }
        std::vector<Complex> x(n);
        x[n - 1] = d[n - 1];
        for (int j = n - 2; j >= 0; --j) x[j] = d[j] - c[j] * x[j + 1];
        return x;
    }
};

// 2x2 complex block and vector for the coupled (phi, mu) systems.
struct Block2 {
    Complex m00{}, m01{}, m10{}, m11{};

    Block2 operator*(const Block2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    Block2 operator-(const Block2& o) const {
        return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11};
    }
};

struct Vec2 {
    Complex v0{}, v1{};
    Vec2 operator-(const Vec2& o) const { return {v0 - o.v0, v1 - o.v1}; }
};

inline Vec2 operator*(const Block2& m, const Vec2& v) {
    return {m.m00 * v.v0 + m.m01 * v.v1, m.m10 * v.v0 + m.m11 * v.v1};
}

struct BlockModalSystem {
    int k = 0;
    std::vector<Block2> lower, diag, upper;
    std::vector<Vec2> rhs;

    explicit BlockModalSystem(int mode, int n)
        : k(mode), lower(n), diag(n), upper(n), rhs(n) {}

    int size() const { return static_cast<int>(diag.size()); }

    std::vector<Vec2> solve() const {
        const int n = size();
        auto block_norm = [](const Block2& b) {
            return std::abs(b.m00) + std::abs(b.m01) + std::abs(b.m10) + std::abs(b.m11);
        };
        double scale = 0.0;
        for (int j = 0; j < n; ++j)
            scale = std::max(scale, block_norm(diag[j]) + block_norm(lower[j]) +
                                        block_norm(upper[j]));
        auto invert = [&](const Block2& b, int row) {
            const Complex det = b.m00 * b.m11 - b.m01 * b.m10;
            if (std::abs(det) <= 1e-14 * scale * scale)
                throw SolverError("singular block modal system (mode " + std::to_string(k) +
                                  ", row " + std::to_string(row) + ")");
            const Complex inv = 1.0 / det;
            return Block2{b.m11 * inv, -b.m01 * inv, -b.m10 * inv, b.m00 * inv};
        };

        std::vector<Block2> c(n);
        std::vector<Vec2> d(n);
        Block2 inv = invert(diag[0], 0);
        c[0] = inv * upper[0];
        d[0] = inv * rhs[0];
        for (int j = 1; j < n; ++j) {
            const Block2 piv = diag[j] - lower[j] * c[j - 1];
            inv = invert(piv, j);
            c[j] = inv * upper[j];
            d[j] = inv * (rhs[j] - lower[j] * d[j - 1]);
        }
        std::vector<Vec2> x(n);
        x[n - 1] = d[n - 1];
        for (int j = n - 2; j >= 0; --j) x[j] = d[j] - c[j] * x[j + 1];
        return x;
    }
};

}  // namespace mcl
