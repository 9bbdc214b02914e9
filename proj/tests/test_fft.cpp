#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <vector>

#include "pmadc/common.hpp"
#include "pmadc/fft.hpp"

namespace detail = pmadc::detail;
using detail::cvec;

namespace {

// O(n^2) reference DFT, the oracle for every transform size.
cvec dft_naive(const cvec& x, bool inverse) {
    const std::size_t n = x.size();
    cvec out(n, {0.0, 0.0});
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sign * 2.0 * pmadc::pi *
                               static_cast<double>(k * j) / static_cast<double>(n);
            acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

double max_err(const cvec& a, const cvec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

cvec random_cvec(std::size_t n, std::uint64_t seed) {
    pmadc::Rng rng(seed);
    cvec x(n);
    for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    return x;
}

}  // namespace

TEST_CASE("fft matches naive DFT for power-of-two sizes", "[fft]") {
    for (std::size_t n : {2u, 4u, 8u, 16u, 64u, 256u}) {
        cvec x = random_cvec(n, 100 + n);
        cvec got = x;
        detail::fft(got, false);
        CHECK(max_err(got, dft_naive(x, false)) < 1e-9 * static_cast<double>(n));
    }
}

TEST_CASE("fft matches naive DFT for arbitrary sizes", "[fft]") {
    for (std::size_t n : {3u, 5u, 6u, 12u, 37u, 100u, 101u, 255u}) {
        cvec x = random_cvec(n, 200 + n);
        cvec got = x;
        detail::fft(got, false);
        CHECK(max_err(got, dft_naive(x, false)) < 1e-8 * static_cast<double>(n));
        cvec inv = x;
        detail::fft(inv, true);
        CHECK(max_err(inv, dft_naive(x, true)) < 1e-10 * static_cast<double>(n));
    }
}

TEST_CASE("fft inverse round trip", "[fft]") {
    for (std::size_t n : {8u, 48u, 97u, 128u}) {
        cvec x = random_cvec(n, 300 + n);
        cvec y = x;
        detail::fft(y, false);
        detail::fft(y, true);
        CHECK(max_err(y, x) < 1e-10 * static_cast<double>(n));
    }
}

TEST_CASE("fft impulse and Parseval", "[fft]") {
    cvec x(32, {0.0, 0.0});
    x[0] = {1.0, 0.0};
    cvec y = x;
    detail::fft(y, false);
    for (const auto& v : y) CHECK(std::abs(v - std::complex<double>(1, 0)) < 1e-12);

    cvec z = random_cvec(100, 9);
    double time_energy = 0.0;
    for (const auto& v : z) time_energy += std::norm(v);
    cvec Z = z;
    detail::fft(Z, false);
    double freq_energy = 0.0;
    for (const auto& v : Z) freq_energy += std::norm(v);
    CHECK(freq_energy / static_cast<double>(z.size()) ==
          Catch::Approx(time_energy).epsilon(1e-10));
}

TEST_CASE("bin_omega layout", "[fft]") {
    const double ts = 0.5;
    CHECK(detail::bin_omega(0, 8, ts) == 0.0);
    CHECK(detail::bin_omega(1, 8, ts) == Catch::Approx(2.0 * pmadc::pi / (8 * ts)));
    CHECK(detail::bin_omega(4, 8, ts) == Catch::Approx(pmadc::pi / ts));      // Nyquist
    CHECK(detail::bin_omega(7, 8, ts) == Catch::Approx(-2.0 * pmadc::pi / (8 * ts)));
    CHECK(detail::bin_omega(5, 9, ts) < 0.0);
}
