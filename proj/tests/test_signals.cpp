#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "pmadc/fft.hpp"
#include "pmadc/signals.hpp"

using namespace pmadc;

namespace {
constexpr double kT = 0.5e-3;  // 1 kHz bandlimit
}

TEST_CASE("sinc and dsinc against quadrature-free oracles", "[signals]") {
    CHECK(detail::sinc(0.0) == 1.0);
    CHECK(detail::sinc(1.0) == 0.0);
    CHECK(detail::sinc(-3.0) == 0.0);
    CHECK(detail::sinc(0.5) == Catch::Approx(2.0 / pi));
    // derivative vs central differences at representative points
    for (double x : {0.3, 1.7, -2.4, 0.001, -0.0004}) {
        const double h = 1e-6;
        const double fd = (detail::sinc(x + h) - detail::sinc(x - h)) / (2 * h);
        CHECK(detail::dsinc(x) == Catch::Approx(fd).margin(1e-7));
    }
    CHECK(detail::dsinc(0.0) == 0.0);
}

TEST_CASE("sinc series honors the generation recipe", "[signals]") {
    const auto s = gen_sinc_series(123, 4, kT, 0.5, 4.0);
    CHECK(s.coeffs.size() == 9);
    CHECK(s.nc() == 4);

    // identical seed reproduces the model bit for bit
    const auto s2 = gen_sinc_series(123, 4, kT, 0.5, 4.0);
    CHECK(s.scale == s2.scale);
    CHECK(s.coeffs == s2.coeffs);

    // normalization: dense-grid max is 1
    CHECK(amplitude_bound(SignalModel(s)) == Catch::Approx(1.0).margin(1e-9));

    // sinc orthogonality: f(kT) = scale * r_k
    for (int k = -4; k <= 4; ++k)
        CHECK(eval(SignalModel(s), k * kT) ==
              Catch::Approx(s.scale * s.coeffs[k + 4]).margin(1e-12));

    // coefficient statistics across many draws match N(0.5, 4)
    double m1 = 0, m2 = 0;
    int n = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const auto g = gen_sinc_series(seed, 4, kT, 0.5, 4.0, false);
        for (double c : g.coeffs) {
            m1 += c;
            m2 += c * c;
            ++n;
        }
    }
    m1 /= n;
    CHECK(m1 == Catch::Approx(0.5).margin(0.1));
    CHECK(m2 / n - m1 * m1 == Catch::Approx(4.0).margin(0.3));
}

TEST_CASE("sinc series edge cases", "[signals]") {
    const auto zero = gen_sinc_series(1, 4, kT, 0.0, 0.0, false);
    for (double t : {-3.0 * kT, 0.0, 0.7 * kT}) CHECK(eval(SignalModel(zero), t) == 0.0);

    SincSeries delta;
    delta.t_nyq = kT;
    delta.coeffs = {0, 0, 0, 0, 1, 0, 0, 0, 0};
    for (int k = -4; k <= 4; ++k)
        CHECK(eval(SignalModel(delta), k * kT) == Catch::Approx(k == 0 ? 1.0 : 0.0).margin(1e-12));

    CHECK_THROWS_AS(gen_sinc_series(1, 4, kT, std::nan(""), 4.0), std::invalid_argument);
    CHECK_THROWS_AS(gen_sinc_series(1, 4, -kT, 0.5, 4.0), std::invalid_argument);
}

TEST_CASE("bandlimit check via DFT energy", "[signals]") {
    const auto s = gen_sinc_series(7, 4, kT, 0.5, 4.0);

    // at the Nyquist rate every DFT bin lies within [-omega_m, omega_m]
    {
        const auto g = nyquist_grid(pi / kT, 1.0, 8);
        const auto x = eval(SignalModel(s), g.instants());
        auto spec = detail::fft_of_real(x);
        double inband = 0, total = 0;
        for (std::size_t k = 0; k < spec.size(); ++k) {
            const double w = std::abs(detail::bin_omega(k, spec.size(), g.ts));
            const double e = std::norm(spec[k]);
            total += e;
            if (w <= pi / kT * (1 + 1e-12)) inband += e;
        }
        CHECK(inband / total > 1.0 - 1e-6);
    }

    // oversampled: out-of-band content comes only from truncating the
    // observation window (rectangular-window leakage), so it is small
    // but not below the Nyquist-rate threshold
    {
        const auto g = nyquist_grid(pi / kT, 4.0, 8);
        const auto x = eval(SignalModel(s), g.instants());
        auto spec = detail::fft_of_real(x);
        double inband = 0, total = 0;
        for (std::size_t k = 0; k < spec.size(); ++k) {
            const double w = std::abs(detail::bin_omega(k, spec.size(), g.ts));
            const double e = std::norm(spec[k]);
            total += e;
            if (w <= pi / kT * 1.0001) inband += e;
        }
        CHECK(inband / total > 0.98);
    }
}

TEST_CASE("evaluation linearity under scaling", "[signals]") {
    const auto s = gen_sinc_series(5, 4, kT, 0.5, 4.0);
    const SignalModel m(s);
    const SignalModel m3 = scaled(m, 3.0);
    for (double t : {-2.3 * kT, 0.0, 1.1 * kT})
        CHECK(eval(m3, t) == Catch::Approx(3.0 * eval(m, t)).margin(1e-12));
    CHECK(amplitude_bound(m3) == Catch::Approx(3.0).margin(1e-8));
}

TEST_CASE("pulse stream evaluation", "[signals]") {
    PulseStream p;
    p.shape = Kernel::triangle(0.5);
    p.amplitudes = {2.0};
    p.delays = {1.0};
    CHECK(eval(SignalModel(p), 1.0) == 2.0);
    CHECK(eval(SignalModel(p), 1.25) == Catch::Approx(1.0));
    CHECK(eval(SignalModel(p), 2.0) == 0.0);

    PulseStream q;
    q.shape = Kernel::gaussian(0.1);
    q.amplitudes = {1.0, -0.5};
    q.delays = {0.0, 1.0};
    CHECK(eval(SignalModel(q), 0.0) == Catch::Approx(1.0).margin(1e-6));
    CHECK(eval(SignalModel(q), 1.0) == Catch::Approx(-0.5).margin(1e-6));
}

TEST_CASE("shift-invariant series evaluation", "[signals]") {
    ShiftInvariantSeries si;
    si.basis = Kernel::sinc_lowpass(1.0);
    si.coeffs = {1.0, 2.0, -1.0};
    si.step = 1.0;
    si.k0 = -1;
    // sinc basis at unit step interpolates its own coefficients
    CHECK(eval(SignalModel(si), -1.0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(eval(SignalModel(si), 0.0) == Catch::Approx(2.0).margin(1e-12));
    CHECK(eval(SignalModel(si), 1.0) == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("sinusoid bounds are closed form", "[signals]") {
    const Sinusoid s{2.0, 100.0, 0.3};
    CHECK(amplitude_bound(SignalModel(s)) == Catch::Approx(2.0).margin(1e-4));
    CHECK(derivative_bound(SignalModel(s)) == Catch::Approx(200.0));
    CHECK(bandwidth(SignalModel(s)) == 100.0);
}

TEST_CASE("amplitude bound matches a 10x finer oracle", "[signals]") {
    const auto s = gen_sinc_series(31, 4, kT, 0.5, 4.0, false);
    const double coarse = amplitude_bound(SignalModel(s), 64);
    const double fine = amplitude_bound(SignalModel(s), 640);
    CHECK(coarse == Catch::Approx(fine).epsilon(1e-4));
}

TEST_CASE("derivative bound closed form vs finite differences", "[signals]") {
    const auto s = gen_sinc_series(17, 4, kT, 0.5, 4.0);
    const SignalModel m(s);
    const double closed = derivative_bound(m);
    // finite-difference oracle over the same support
    double fd_max = 0;
    for (double t = -8 * kT; t <= 8 * kT; t += kT / 64) {
        const double h = kT * 1e-6;
        fd_max = std::max(fd_max, std::abs(eval(m, t + h) - eval(m, t - h)) / (2 * h));
    }
    CHECK(closed == Catch::Approx(fd_max).epsilon(1e-4));
}

TEST_CASE("sampling grids", "[signals]") {
    const auto g = nyquist_grid(pi / kT, 6.0, 4);
    CHECK(g.count == 48);
    CHECK(g.ts == Catch::Approx(kT / 6.0));
    CHECK(g.t0 == Catch::Approx(-4 * kT));
    CHECK(g.oversampling == 6.0);
    CHECK(g.instant(0) == g.t0);
    // half-open window: last instant is one step short of +4T
    CHECK(g.instant(g.count - 1) == Catch::Approx(4 * kT - g.ts));
    CHECK(g.omega_s() == Catch::Approx(6.0 * 2.0 * pi / kT));

    const auto j = jittered_grid(g, 0.2 * g.ts, 99);
    CHECK(j.jitter.size() == g.count);
    for (std::size_t n = 0; n < j.count; ++n) {
        CHECK(std::abs(j.jitter[n]) <= 0.2 * g.ts);
        CHECK(j.instant(n) == Catch::Approx(g.instant(n) + j.jitter[n]));
    }
    CHECK_THROWS_AS(jittered_grid(g, g.ts, 1), std::invalid_argument);

    const auto e = explicit_grid({0.0, 0.5, 0.7});
    CHECK(e.count == 3);
    CHECK(e.instant(2) == 0.7);
    CHECK_THROWS_AS(explicit_grid({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("record CSV round trip and normalization", "[signals]") {
    const std::string path = "test_record_tmp.csv";
    {
        std::ofstream out(path);
        out << "# rate_hz=500\n0.1\n0.2\n-0.4\n";
    }
    const auto rec = load_record_csv(path, 500.0);
    REQUIRE(rec.base.size() == 3);
    CHECK(rec.base[0] == Catch::Approx(0.25));
    CHECK(rec.base[1] == Catch::Approx(0.5));
    CHECK(rec.base[2] == Catch::Approx(-1.0));
    CHECK(rec.baseline_amplitude == 0.0);

    CHECK_THROWS_WITH(load_record_csv(path, 360.0),
                      Catch::Matchers::ContainsSubstring("rate mismatch"));
    {
        std::ofstream out(path);
        out << "0.1\nnot-a-number\n";
    }
    CHECK_THROWS_WITH(load_record_csv(path, 500.0),
                      Catch::Matchers::ContainsSubstring("malformed"));
    {
        std::ofstream out(path);
        out << "# rate_hz=500\n";
    }
    CHECK_THROWS_WITH(load_record_csv(path, 500.0),
                      Catch::Matchers::ContainsSubstring("empty"));

    write_record_csv(path, {0.5, -1.0, 0.25}, 500.0);
    const auto back = load_record_csv(path, 500.0);
    REQUIRE(back.base.size() == 3);
    CHECK(back.base[1] == -1.0);
    std::remove(path.c_str());
}

TEST_CASE("baselined record evaluation", "[signals]") {
    BaselinedRecord rec;
    rec.base = {0.0, 0.0, 0.0};
    rec.rate_hz = 500.0;
    rec.baseline_amplitude = 0.5;
    rec.baseline_freq_hz = 0.07;
    const double quarter = 1.0 / (4.0 * 0.07);
    CHECK(eval(SignalModel(rec), quarter) == Catch::Approx(0.5).margin(1e-12));

    BaselinedRecord r2;
    r2.base = {0.25, 0.5, -1.0};
    r2.rate_hz = 500.0;
    for (std::size_t n = 0; n < 3; ++n)
        CHECK(eval(SignalModel(r2), static_cast<double>(n) / 500.0) ==
              Catch::Approx(r2.base[n]).margin(1e-12));
}

TEST_CASE("synthetic ECG record", "[signals]") {
    const auto ecg = synth_ecg_record();
    CHECK(ecg.size() == 5000);
    double peak = 0;
    for (double v : ecg) peak = std::max(peak, std::abs(v));
    CHECK(peak == Catch::Approx(1.0).margin(1e-12));
    CHECK(synth_ecg_record() == ecg);  // deterministic

    // roughly 12 beats in 10 s at 72 bpm: count R-peak threshold crossings
    int beats = 0;
    bool above = false;
    for (double v : ecg) {
        if (!above && v > 0.6) {
            ++beats;
            above = true;
        } else if (above && v < 0.2) {
            above = false;
        }
    }
    CHECK(beats == 12);
}
