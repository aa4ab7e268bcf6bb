// Thin FFTW wrapper for the periodic x direction. Transforms every y-row of
// an Nx x Ny array at once (strided many-plan). Plans are cached per shape
// behind a mutex; execution is reentrant.
#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

namespace mcl {

using Complex = std::complex<double>;

// Spectral coefficients of a real Nx x Ny field: Nk = Nx/2+1 modes,
// layout data[k*Ny + j]. Mode k corresponds to wavenumber 2*pi*k/Lx.
struct ModalField {
    int Nk = 0;
    int Ny = 0;
    std::vector<Complex> data;

    ModalField() = default;
    ModalField(int nk, int ny) : Nk(nk), Ny(ny), data(static_cast<std::size_t>(nk) * ny) {}

    Complex& operator()(int k, int j) { return data[static_cast<std::size_t>(k) * Ny + j]; }
    Complex operator()(int k, int j) const { return data[static_cast<std::size_t>(k) * Ny + j]; }
};

namespace detail {

struct FftPlans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// One forward/backward plan pair per (Nx, Ny). FFTW planning is not
// thread-safe; execution through the new-array interface is.
inline FftPlans& plans_for(int Nx, int Ny) {
    static std::map<std::pair<int, int>, FftPlans> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(Nx, Ny);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    FftPlans p;
    int nk = Nx / 2 + 1;
    std::vector<double> rbuf(static_cast<std::size_t>(Nx) * Ny);
    std::vector<Complex> cbuf(static_cast<std::size_t>(nk) * Ny);
    int n[1] = {Nx};
    // x is the slow index: stride Ny between consecutive x samples of one
    // y-row, distance 1 between the Ny transforms.
    p.fwd = fftw_plan_many_dft_r2c(1, n, Ny, rbuf.data(), nullptr, Ny, 1,
                                   reinterpret_cast<fftw_complex*>(cbuf.data()), nullptr, Ny, 1,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_many_dft_c2r(1, n, Ny, reinterpret_cast<fftw_complex*>(cbuf.data()), nullptr,
                                   Ny, 1, rbuf.data(), nullptr, Ny, 1,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    auto [ins, ok] = cache.emplace(key, p);
    (void)ok;
    return ins->second;
}

}  // namespace detail

// Forward transform of all y-rows; unnormalized FFTW convention.
inline ModalField x_forward(int Nx, int Ny, const std::vector<double>& values) {
    ModalField out(Nx / 2 + 1, Ny);
    auto& p = detail::plans_for(Nx, Ny);
    std::vector<double> in = values;  // r2c may not preserve input
    fftw_execute_dft_r2c(p.fwd, in.data(), reinterpret_cast<fftw_complex*>(out.data.data()));
    return out;
}

// Inverse transform including the 1/Nx normalization. c2r destroys its
// input, so the modal data is taken by value.
inline std::vector<double> x_inverse(int Nx, int Ny, ModalField modes) {
    std::vector<double> out(static_cast<std::size_t>(Nx) * Ny);
    auto& p = detail::plans_for(Nx, Ny);
    fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(modes.data.data()), out.data());
    const double s = 1.0 / Nx;
    for (double& v : out) v *= s;
    return out;
}

}  // namespace mcl
