#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "pmadc/common.hpp"

namespace pmadc::detail {

using cvec = std::vector<std::complex<double>>;

inline bool is_pow2(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 Cooley-Tukey. n must be a power of two.
inline void fft_pow2(cvec& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

/// Bluestein chirp-z for arbitrary n, expressed through a power-of-two
/// convolution.
inline void fft_bluestein(cvec& a, bool inverse) {
    const std::size_t n = a.size();
    std::size_t m = 1;
    while (m < 2 * n + 1) m <<= 1;

    const double sign = inverse ? 1.0 : -1.0;
    cvec chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the chirp argument small
        const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) %
                                 (2 * static_cast<std::uint64_t>(n));
        const double ang = sign * pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = {std::cos(ang), std::sin(ang)};
    }

    cvec x(m, {0.0, 0.0}), y(m, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
    y[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) y[k] = y[m - k] = std::conj(chirp[k]);

    fft_pow2(x, false);
    fft_pow2(y, false);
    for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
    fft_pow2(x, true);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * inv_m * chirp[k];
}

/// Unnormalized forward DFT / normalized (1/n) inverse DFT of any length.
inline void fft(cvec& a, bool inverse = false) {
    const std::size_t n = a.size();
    if (n < 2) return;
    if (is_pow2(n))
        fft_pow2(a, inverse);
    else
        fft_bluestein(a, inverse);
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& v : a) v *= inv_n;
    }
}

inline cvec fft_of_real(const std::vector<double>& x) {
    cvec a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = {x[i], 0.0};
    fft(a, false);
    return a;
}

/// Angular frequency of DFT bin k for sample spacing ts, in (-pi/ts, pi/ts].
inline double bin_omega(std::size_t k, std::size_t n, double ts) noexcept {
    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n);
    const double centered = (kk <= nn / 2.0) ? kk : kk - nn;
    return 2.0 * pi * centered / (nn * ts);
}

}  // namespace pmadc::detail
