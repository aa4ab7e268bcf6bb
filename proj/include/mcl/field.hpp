// Discrete field containers on the channel grid: bulk scalars/vectors and
// wall-line traces. Value-semantic, shape-checked on use.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mcl {

enum class WallSide { Bottom, Top };

inline const char* wall_name(WallSide w) {
    return w == WallSide::Bottom ? "bottom" : "top";
}

// Bulk scalar, Nx x Ny values, row-major with x as the slow index:
// values[i*Ny + j] lives at (x_i, y_j).
struct ScalarField {
    int Nx = 0;
    int Ny = 0;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(int nx, int ny, double fill = 0.0)
        : Nx(nx), Ny(ny), values(static_cast<std::size_t>(nx) * ny, fill) {}

    double& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * Ny + j]; }
    double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * Ny + j]; }

    bool same_shape(const ScalarField& o) const { return Nx == o.Nx && Ny == o.Ny; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }

    ScalarField& operator+=(const ScalarField& o) {
        check_shape(o);
        for (std::size_t n = 0; n < values.size(); ++n) values[n] += o.values[n];
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        check_shape(o);
        for (std::size_t n = 0; n < values.size(); ++n) values[n] -= o.values[n];
        return *this;
    }
    ScalarField& operator*=(double s) {
        for (double& v : values) v *= s;
        return *this;
    }

    void check_shape(const ScalarField& o) const {
        if (!same_shape(o)) throw std::invalid_argument("ScalarField: shape mismatch");
    }
};

inline ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
inline ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
inline ScalarField operator*(double s, ScalarField a) { return a *= s; }

// Pointwise product; shapes must agree.
inline ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    a.check_shape(b);
    ScalarField r = a;
    for (std::size_t n = 0; n < r.values.size(); ++n) r.values[n] *= b.values[n];
    return r;
}

struct VectorField {
    ScalarField u1;
    ScalarField u2;

    VectorField() = default;
    VectorField(int nx, int ny) : u1(nx, ny), u2(nx, ny) {}

    bool same_shape(const VectorField& o) const {
        return u1.same_shape(o.u1) && u2.same_shape(o.u2);
    }
    bool all_finite() const { return u1.all_finite() && u2.all_finite(); }
};

// Trace of a bulk field on one wall line, periodic in x by construction.
struct BoundaryField {
    WallSide wall = WallSide::Bottom;
    std::vector<double> values;

    BoundaryField() = default;
    BoundaryField(WallSide w, int nx, double fill = 0.0) : wall(w), values(nx, fill) {}

    int Nx() const { return static_cast<int>(values.size()); }
    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }

    BoundaryField& operator+=(const BoundaryField& o) {
        check_shape(o);
        for (std::size_t n = 0; n < values.size(); ++n) values[n] += o.values[n];
        return *this;
    }
    BoundaryField& operator-=(const BoundaryField& o) {
        check_shape(o);
        for (std::size_t n = 0; n < values.size(); ++n) values[n] -= o.values[n];
        return *this;
    }
    BoundaryField& operator*=(double s) {
        for (double& v : values) v *= s;
        return *this;
    }

    void check_shape(const BoundaryField& o) const {
        if (values.size() != o.values.size())
            throw std::invalid_argument("BoundaryField: length mismatch");
    }
};

inline BoundaryField operator+(BoundaryField a, const BoundaryField& b) { return a += b; }
inline BoundaryField operator-(BoundaryField a, const BoundaryField& b) { return a -= b; }

inline BoundaryField hadamard(const BoundaryField& a, const BoundaryField& b) {
    a.check_shape(b);
    BoundaryField r = a;
    for (std::size_t n = 0; n < r.values.size(); ++n) r.values[n] *= b.values[n];
    return r;
}

}  // namespace mcl
