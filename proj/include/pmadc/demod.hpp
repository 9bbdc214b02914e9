#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "pmadc/common.hpp"
#include "pmadc/fft.hpp"
#include "pmadc/frontend.hpp"
#include "pmadc/signals.hpp"

namespace pmadc {

struct DemodReport {
    std::vector<double> recovered;
    std::string method;
    std::size_t clamp_count = 0;      // asin arguments clipped to [-1, 1]
    bool carrier_ok = true;           // carrier alignment: integer multiple of omega_s
                                      // (instantaneous path) or representable and on a
                                      // DFT bin of the block (Hilbert path)
    double effective_bandwidth = 0.0; // Delta_omega + omega_m, Hilbert path only
    std::string warning;              // non-fatal precondition notes
    std::size_t edge_trim = 0;        // diagnostic: samples to ignore at each end
};

namespace detail {

inline bool carrier_is_multiple(double omega_c, double omega_s) {
    if (omega_c == 0.0) return true;
    const double k = omega_c / omega_s;
    return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, std::abs(k));
}

}  // namespace detail

/// Discrete Hilbert transform via the DFT multiplier: -j on positive
/// frequencies, +j on negative, zero on DC and (even length) Nyquist.
/// Maps cos(w0 n Ts) to sin(w0 n Ts) for on-bin w0.
inline std::vector<double> dht(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("dht: need at least 2 samples");
    auto spec = detail::fft_of_real(values);
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == 0 || (n % 2 == 0 && k == half)) {
            spec[k] = {0.0, 0.0};
        } else if (k < half || (n % 2 == 1 && k == half)) {
            spec[k] *= std::complex<double>(0.0, -1.0);
        } else {
            spec[k] *= std::complex<double>(0.0, 1.0);
        }
    }
    detail::fft(spec, true);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = spec[k].real();
    return out;
}

/// Zero all DFT bins with |omega| > cutoff. cutoff must lie inside
/// (0, pi/ts), the representable band.
inline std::vector<double> lowpass_ideal(const std::vector<double>& values, double ts,
                                         double cutoff) {
    if (!(cutoff > 0) || !(cutoff < pi / ts))
        throw std::invalid_argument("lowpass_ideal: cutoff must be in (0, pi/ts)");
    const std::size_t n = values.size();
    if (n < 2) return values;
    auto spec = detail::fft_of_real(values);
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(detail::bin_omega(k, n, ts)) > cutoff) spec[k] = {0.0, 0.0};
    detail::fft(spec, true);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = spec[k].real();
    return out;
}

/// Keep only DFT bins within half_width of the carrier, i.e.
/// ||omega| - omega_c| <= half_width. With omega_c = 0 this degenerates
/// to lowpass_ideal at the same cutoff; with a modulated carrier it is
/// the equivalent band filter (a lowpass on the complex baseband).
inline std::vector<double> carrier_band_filter(const std::vector<double>& values, double ts,
                                               double omega_c, double half_width) {
    if (!(half_width > 0)) throw std::invalid_argument("carrier_band_filter: bad half-width");
    const std::size_t n = values.size();
    if (n < 2) return values;
    auto spec = detail::fft_of_real(values);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = std::abs(detail::bin_omega(k, n, ts));
        if (std::abs(w - omega_c) > half_width) spec[k] = {0.0, 0.0};
    }
    detail::fft(spec, true);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = spec[k].real();
    return out;
}

/// Carson's rule bandwidth Delta_omega + omega_m with
/// Delta_omega = mu * max |df/dt|.
inline double carson_bandwidth(const SignalModel& model, double mu, double omega_m) {
    if (!(mu > 0)) throw std::invalid_argument("carson_bandwidth: mu must be > 0");
    return mu * derivative_bound(model) + omega_m;
}

/// Instantaneous sin^-1 recovery:
/// f_hat_n = (1/mu) asin(value_n / (lambda + noise_bound)), arguments
/// clamped into [-1, 1] with counting. For Gaussian noise pass
/// 3 * stddev as the bound (the draws are unbounded).
inline DemodReport dpd_asin(const SampleStream& stream, const PmConfig& pm,
                            double noise_bound = 0.0, double amplitude_bound_c = 0.0) {
    pm.validate();
    if (!(pm.lambda + noise_bound > 0))
        throw std::invalid_argument("dpd_asin: lambda + noise bound must be > 0");
    DemodReport rep;
    rep.method = "asin";
    if (pm.omega_c > 0) {
        if (stream.grid.kind != SamplingGrid::Kind::uniform)
            throw std::invalid_argument(
                "dpd_asin: nonzero carrier requires a uniform grid (use dpd_asin_jitter "
                "for jittered grids)");
        rep.carrier_ok = detail::carrier_is_multiple(pm.omega_c, stream.grid.omega_s());
        if (!rep.carrier_ok)
            throw std::invalid_argument(
                "dpd_asin: omega_c must be 0 or an integer multiple of omega_s");
    }
    if (amplitude_bound_c > 0 && pm.mu * amplitude_bound_c > pi / 2 + 1e-12)
        rep.warning = "mu * c exceeds pi/2; sin^-1 inversion is not guaranteed unique";
    const double denom = pm.lambda + noise_bound;
    rep.recovered.resize(stream.values.size());
    for (std::size_t n = 0; n < stream.values.size(); ++n) {
        double a = stream.values[n] / denom;
        if (a > 1.0) {
            a = 1.0;
            ++rep.clamp_count;
        } else if (a < -1.0) {
            a = -1.0;
            ++rep.clamp_count;
        }
        rep.recovered[n] = std::asin(a) / pm.mu;
    }
    return rep;
}

/// Jitter-corrected sin^-1 recovery on a known-jitter grid:
/// f_hat_n = (1/mu) (asin(value_n / lambda) - omega_c epsilon_n).
/// Requires |omega_c * eps_max + mu * c| <= pi/2.
inline DemodReport dpd_asin_jitter(const SampleStream& stream, const PmConfig& pm,
                                   double amplitude_bound_c) {
    pm.validate();
    if (stream.grid.kind != SamplingGrid::Kind::jittered &&
        stream.grid.kind != SamplingGrid::Kind::uniform)
        throw std::invalid_argument("dpd_asin_jitter: grid must be uniform or jittered");
    if (pm.omega_c > 0 && !detail::carrier_is_multiple(pm.omega_c, stream.grid.omega_s()))
        throw std::invalid_argument(
            "dpd_asin_jitter: omega_c must be 0 or an integer multiple of omega_s");
    double eps_max = 0.0;
    for (double e : stream.grid.jitter) eps_max = std::max(eps_max, std::abs(e));
    const double bound = pm.omega_c * eps_max + pm.mu * amplitude_bound_c;
    if (!(bound <= pi / 2 + 1e-12))
        throw std::invalid_argument(
            "dpd_asin_jitter: |omega_c*eps + mu*c| = " + std::to_string(bound) +
            " exceeds pi/2; recovery is not unique");
    DemodReport rep;
    rep.method = "asin_jitter";
    rep.recovered.resize(stream.values.size());
    for (std::size_t n = 0; n < stream.values.size(); ++n) {
        double a = stream.values[n] / pm.lambda;
        if (a > 1.0) {
            a = 1.0;
            ++rep.clamp_count;
        } else if (a < -1.0) {
            a = -1.0;
            ++rep.clamp_count;
        }
        const double eps = stream.grid.jitter.empty() ? 0.0 : stream.grid.jitter[n];
        rep.recovered[n] = (std::asin(a) - pm.omega_c * eps) / pm.mu;
    }
    return rep;
}

/// Analytic-signal recovery. The quadrature follows the convention
/// Hc sin(w0 t) = -cos(w0 t), so a_n = -dht(values)_n + j values_n has
/// argument omega_c t_n + mu f(t_n); the estimate is the principal value
/// of (1/mu) arg(a_n e^{-j omega_c t_n}). With denoise set, values are
/// first band-filtered to the Carson bandwidth around the carrier, which
/// for omega_c = 0 is the plain lowpass at Delta_omega + omega_m.
/// signal_derivative_bound feeds Delta_omega = mu * bound; pass 0 when
/// unknown (the filter then keeps just omega_m around the carrier).
inline DemodReport dpd_hilbert(const SampleStream& stream, const PmConfig& pm, double omega_m,
                               bool denoise = false, double signal_derivative_bound = 0.0,
                               bool unwrap = false, std::size_t edge_trim = 0) {
    pm.validate();
    if (stream.values.empty()) throw std::invalid_argument("dpd_hilbert: empty stream");
    DemodReport rep;
    rep.method = "hilbert";
    rep.edge_trim = edge_trim;
    rep.effective_bandwidth = pm.mu * signal_derivative_bound + omega_m;
    const double omega_s = stream.grid.omega_s();
    const double carrier_bins =
        pm.omega_c * stream.grid.ts * static_cast<double>(stream.values.size()) / (2.0 * pi);
    rep.carrier_ok = 2.0 * pm.omega_c <= omega_s &&
                     std::abs(carrier_bins - std::round(carrier_bins)) < 1e-6;
    if (omega_s < 2.0 * pm.omega_c)
        rep.warning = "omega_s < 2 omega_c; carrier is not representable";
    else if (pm.omega_c > 0 && pm.omega_c + 1e-12 < rep.effective_bandwidth)
        rep.warning = "omega_c below Carson bandwidth; Bedrosian separation is poor";

    std::vector<double> y = stream.values;
    if (denoise && y.size() >= 2)
        y = carrier_band_filter(y, stream.grid.ts, pm.omega_c, rep.effective_bandwidth);

    const std::vector<double> q = dht(y);
    const detail::CarrierPhase phase(stream.grid, pm.omega_c);
    rep.recovered.resize(y.size());
    double prev_raw = 0.0, offset = 0.0;
    for (std::size_t n = 0; n < y.size(); ++n) {
        const std::complex<double> a(-q[n], y[n]);
        const std::complex<double> rot(std::cos(phase(n)), -std::sin(phase(n)));
        const double raw = std::arg(a * rot);
        if (unwrap && n > 0) {
            const double d = raw - prev_raw;
            if (d > pi) offset -= 2.0 * pi;
            else if (d < -pi) offset += 2.0 * pi;
        }
        prev_raw = raw;
        rep.recovered[n] = (raw + offset) / pm.mu;
    }
    return rep;
}

}  // namespace pmadc
