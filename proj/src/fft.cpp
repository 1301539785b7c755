// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace snse {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Canonical representative of a Hermitian pair: the stored half-spectrum
// holds k3 >= 0, and on the k3 = 0 plane only one of {k, -k} is read.
inline bool canonical_mode(int k1, int k2, int k3) {
    if (k3 != 0) return k3 > 0;
    if (k2 != 0) return k2 > 0;
    return k1 >= 0;
}

}  // namespace

FourierWorkspace::FourierWorkspace(GridSpec g) : grid_(g) {
    const int n = grid_.n;
    phys_count_ = static_cast<std::size_t>(n) * n * n;
    half_count_ = static_cast<std::size_t>(n) * n * (n / 2 + 1);

    real_ = fftw_alloc_real(phys_count_);
    half_ = fftw_alloc_complex(half_count_);
    for (auto& b : bufs_) b = fftw_alloc_real(phys_count_);
    if (!real_ || !half_) throw std::bad_alloc();

    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_c2r_ = fftw_plan_dft_c2r_3d(n, n, n, static_cast<fftw_complex*>(half_), real_,
                                     FFTW_ESTIMATE);
    plan_r2c_ = fftw_plan_dft_r2c_3d(n, n, n, real_, static_cast<fftw_complex*>(half_),
                                     FFTW_ESTIMATE);
    if (!plan_c2r_ || !plan_r2c_) throw std::runtime_error("FourierWorkspace: planning failed");
}

FourierWorkspace::~FourierWorkspace() {
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (plan_c2r_) fftw_destroy_plan(plan_c2r_);
        if (plan_r2c_) fftw_destroy_plan(plan_r2c_);
    }
    fftw_free(real_);
    fftw_free(half_);
    for (auto& b : bufs_) fftw_free(b);
}

double* FourierWorkspace::phys(int i) { return bufs_[i]; }

void FourierWorkspace::cube_to_physical(std::span<const Complex> cube, double* out) {
    const int n  = grid_.n;
    const int kd = grid_.kd;
    const int nh = n / 2 + 1;
    auto* half   = static_cast<fftw_complex*>(half_);

    std::memset(half, 0, half_count_ * sizeof(fftw_complex));
    for (int k1 = -kd; k1 <= kd; ++k1) {
        const int m1 = (k1 + n) % n;
        for (int k2 = -kd; k2 <= kd; ++k2) {
            const int m2 = (k2 + n) % n;
            for (int k3 = 0; k3 <= kd; ++k3) {
                const Complex v = cube[grid_.index(k1, k2, k3)];
                fftw_complex& h = half[(static_cast<std::size_t>(m1) * n + m2) * nh + k3];
                h[0]            = v.real();
                h[1]            = v.imag();
            }
        }
    }
    fftw_execute_dft_c2r(plan_c2r_, half, out);
}

void FourierWorkspace::physical_to_cube(const double* in, std::span<Complex> cube) {
    const int n  = grid_.n;
    const int kd = grid_.kd;
    const int nh = n / 2 + 1;
    auto* half   = static_cast<fftw_complex*>(half_);

    std::memcpy(real_, in, phys_count_ * sizeof(double));
    fftw_execute_dft_r2c(plan_r2c_, real_, half);

    const double scale = 1.0 / static_cast<double>(phys_count_);
    // Read canonical representatives from the stored half-spectrum, then
    // mirror conjugates so Hermitian symmetry is exact by construction.
    for (int k1 = -kd; k1 <= kd; ++k1) {
        const int m1 = (k1 + n) % n;
        for (int k2 = -kd; k2 <= kd; ++k2) {
            const int m2 = (k2 + n) % n;
            for (int k3 = 0; k3 <= kd; ++k3) {
                if (!canonical_mode(k1, k2, k3)) continue;
                const fftw_complex& h =
                    half[(static_cast<std::size_t>(m1) * n + m2) * nh + k3];
                const Complex v{h[0] * scale, h[1] * scale};
                cube[grid_.index(k1, k2, k3)]    = v;
                cube[grid_.index(-k1, -k2, -k3)] = std::conj(v);
            }
        }
    }
}

}  // namespace snse
