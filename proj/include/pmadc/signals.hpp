#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pmadc/common.hpp"

namespace pmadc {

namespace detail {

/// Normalized sinc. Arguments within 1e-12 of an integer snap to the
/// lattice so that series evaluation at sample instants is exact.
inline double sinc(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) < 1e-12) return r == 0.0 ? 1.0 : 0.0;
    const double px = pi * x;
    return std::sin(px) / px;
}

inline double dsinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return pi * pi * x * (-1.0 / 3.0 + pi * pi * x2 / 30.0);
    }
    const double px = pi * x;
    return (px * std::cos(px) - std::sin(px)) / (px * x);
}

}  // namespace detail

/// Pulse / basis / sampling-kernel shapes. identity stands for the
/// Dirac kernel (pass-through sampling) and is not evaluable.
struct Kernel {
    enum class Shape { identity, triangle, gaussian, sinc_lowpass };

    Shape shape = Shape::identity;
    double param = 1.0;  // triangle half-width, gaussian sigma, sinc zero spacing

    static Kernel identity() { return {Shape::identity, 1.0}; }
    static Kernel triangle(double half_width) {
        if (!(half_width > 0)) throw std::invalid_argument("triangle half-width must be > 0");
        return {Shape::triangle, half_width};
    }
    static Kernel gaussian(double sigma) {
        if (!(sigma > 0)) throw std::invalid_argument("gaussian sigma must be > 0");
        return {Shape::gaussian, sigma};
    }
    static Kernel sinc_lowpass(double zero_spacing) {
        if (!(zero_spacing > 0)) throw std::invalid_argument("sinc spacing must be > 0");
        return {Shape::sinc_lowpass, zero_spacing};
    }

    bool evaluable() const { return shape != Shape::identity; }

    /// Half-width outside which the kernel is treated as zero.
    double half_support() const {
        switch (shape) {
            case Shape::triangle: return param;
            case Shape::gaussian: return 8.0 * param;
            case Shape::sinc_lowpass: return 64.0 * param;
            case Shape::identity: return 0.0;
        }
        return 0.0;
    }

    double operator()(double t) const {
        switch (shape) {
            case Shape::triangle:
                return std::abs(t) >= param ? 0.0 : 1.0 - std::abs(t) / param;
            case Shape::gaussian:
                return std::exp(-0.5 * (t / param) * (t / param));
            case Shape::sinc_lowpass:
                return detail::sinc(t / param);
            case Shape::identity:
                throw std::invalid_argument("identity kernel is not evaluable");
        }
        return 0.0;
    }
};

/// Truncated sinc expansion: scale * sum_k r_k sinc(t/T - k), k = -Nc..Nc.
struct SincSeries {
    double t_nyq = 1.0;
    std::vector<double> coeffs;  // r_k, index i holds k = i - Nc
    double scale = 1.0;

    int nc() const { return static_cast<int>((coeffs.size() - 1) / 2); }
};

struct PulseStream {
    Kernel shape;
    std::vector<double> amplitudes;
    std::vector<double> delays;  // strictly increasing
};

struct ShiftInvariantSeries {
    Kernel basis;
    std::vector<double> coeffs;  // a_k, index i holds k = k0 + i
    double step = 1.0;
    int k0 = 0;
};

struct Sinusoid {
    double amplitude = 1.0;
    double omega = 1.0;  // rad/s
    double phase = 0.0;
};

/// Uniformly sampled record (e.g. an ECG trace) plus an analytic
/// baseline-wander term added on evaluation.
struct BaselinedRecord {
    std::vector<double> base;  // normalized so max |base| = 1
    double rate_hz = 1.0;
    double baseline_amplitude = 0.0;
    double baseline_freq_hz = 0.0;
};

using SignalModel =
    std::variant<SincSeries, PulseStream, ShiftInvariantSeries, Sinusoid, BaselinedRecord>;

// ---------------------------------------------------------------- evaluation

inline double eval(const SincSeries& m, double t) {
    const int nc = m.nc();
    const double x = t / m.t_nyq;
    double acc = 0.0;
    for (std::size_t i = 0; i < m.coeffs.size(); ++i)
        acc += m.coeffs[i] * detail::sinc(x - (static_cast<int>(i) - nc));
    return m.scale * acc;
}

inline double eval(const PulseStream& m, double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.amplitudes.size(); ++i)
        acc += m.amplitudes[i] * m.shape(t - m.delays[i]);
    return acc;
}

inline double eval(const ShiftInvariantSeries& m, double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.coeffs.size(); ++i)
        acc += m.coeffs[i] * m.basis(t - (m.k0 + static_cast<int>(i)) * m.step);
    return acc;
}

inline double eval(const Sinusoid& m, double t) {
    return m.amplitude * std::sin(m.omega * t + m.phase);
}

inline double eval(const BaselinedRecord& m, double t) {
    const double x = t * m.rate_hz;
    const double r = std::round(x);
    double acc;
    if (std::abs(x - r) < 1e-9 && r >= 0 && r < static_cast<double>(m.base.size())) {
        acc = m.base[static_cast<std::size_t>(r)];
    } else {
        acc = 0.0;
        for (std::size_t n = 0; n < m.base.size(); ++n)
            acc += m.base[n] * detail::sinc(x - static_cast<double>(n));
    }
    return acc + m.baseline_amplitude * std::sin(2.0 * pi * m.baseline_freq_hz * t);
}

inline double eval(const SignalModel& m, double t) {
    return std::visit([t](const auto& v) { return eval(v, t); }, m);
}

inline std::vector<double> eval(const SignalModel& m, const std::vector<double>& times) {
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = eval(m, times[i]);
    return out;
}

// ------------------------------------------------------- support and bounds

namespace detail {

struct Support {
    double lo, hi, step_ref;  // step_ref: the model's natural time scale
};

inline Support support_of(const SincSeries& m) {
    const double margin = 4.0 * m.t_nyq;
    const double half = m.nc() * m.t_nyq + margin;
    return {-half, half, m.t_nyq};
}
inline Support support_of(const PulseStream& m) {
    const double hs = m.shape.half_support();
    return {m.delays.front() - hs, m.delays.back() + hs,
            std::max(m.shape.param, 1e-12)};
}
inline Support support_of(const ShiftInvariantSeries& m) {
    const double hs = m.basis.half_support();
    return {m.k0 * m.step - hs,
            (m.k0 + static_cast<int>(m.coeffs.size()) - 1) * m.step + hs, m.step};
}
inline Support support_of(const Sinusoid& m) {
    const double period = 2.0 * pi / m.omega;
    return {0.0, period, period / 16.0};
}
inline Support support_of(const BaselinedRecord& m) {
    const double dur = static_cast<double>(m.base.size() - 1) / m.rate_hz;
    return {0.0, dur, 1.0 / m.rate_hz};
}

template <class Model, class F>
double grid_max(const Model& m, int density, F&& f) {
    const Support s = support_of(m);
    const double step = s.step_ref / density;
    const auto n = static_cast<std::size_t>(std::ceil((s.hi - s.lo) / step)) + 1;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        best = std::max(best, std::abs(f(std::min(s.lo + i * step, s.hi))));
    return best;
}

}  // namespace detail

/// Max |f| over a dense grid (density samples per natural step).
inline double amplitude_bound(const SignalModel& m, int density = 64) {
    if (density < 8) throw std::invalid_argument("grid density must be >= 8");
    return std::visit(
        [&](const auto& v) {
            return detail::grid_max(v, density, [&](double t) { return eval(v, t); });
        },
        m);
}

/// Max |df/dt| over a dense grid; closed forms for sinc series and
/// sinusoids, central differences otherwise.
inline double derivative_bound(const SignalModel& m, int density = 64) {
    if (density < 8) throw std::invalid_argument("grid density must be >= 8");
    if (const auto* s = std::get_if<SincSeries>(&m)) {
        const int nc = s->nc();
        return detail::grid_max(*s, density, [&](double t) {
            double acc = 0.0;
            for (std::size_t i = 0; i < s->coeffs.size(); ++i)
                acc += s->coeffs[i] *
                       detail::dsinc(t / s->t_nyq - (static_cast<int>(i) - nc));
            return s->scale * acc / s->t_nyq;
        });
    }
    if (const auto* s = std::get_if<Sinusoid>(&m)) return std::abs(s->amplitude) * s->omega;
    return std::visit(
        [&](const auto& v) {
            const double h = detail::support_of(v).step_ref / density;
            return detail::grid_max(v, density, [&](double t) {
                return (eval(v, t + h) - eval(v, t - h)) / (2.0 * h);
            });
        },
        m);
}

/// Bandwidth omega_m in rad/s (effective for non-bandlimited kernels).
inline double bandwidth(const SignalModel& m) {
    struct V {
        double operator()(const SincSeries& s) const { return pi / s.t_nyq; }
        double operator()(const Sinusoid& s) const { return s.omega; }
        double operator()(const BaselinedRecord& s) const { return pi * s.rate_hz; }
        double operator()(const PulseStream& s) const { return kernel_bw(s.shape); }
        double operator()(const ShiftInvariantSeries& s) const { return kernel_bw(s.basis); }
        static double kernel_bw(const Kernel& k) {
            switch (k.shape) {
                case Kernel::Shape::sinc_lowpass: return pi / k.param;
                case Kernel::Shape::gaussian: return 4.0 / k.param;   // |H| down to e^-8
                case Kernel::Shape::triangle: return 2.0 * pi / k.param;  // main lobe
                case Kernel::Shape::identity: break;
            }
            throw std::invalid_argument("identity kernel has no bandwidth");
        }
    };
    return std::visit(V{}, m);
}

// ---------------------------------------------------------------- generators

/// Random truncated sinc series, coefficients ~ N(mean, variance).
/// With normalize set, scale is fixed so the dense-grid max is 1.
inline SincSeries gen_sinc_series(std::uint64_t seed, int nc, double t_nyq, double mean,
                                  double variance, bool normalize = true) {
    if (!(t_nyq > 0) || !(variance >= 0) || nc < 0 || !std::isfinite(mean) ||
        !std::isfinite(variance) || !std::isfinite(t_nyq))
        throw std::invalid_argument("gen_sinc_series: invalid parameters");
    Rng rng(seed);
    SincSeries s;
    s.t_nyq = t_nyq;
    s.coeffs.resize(2 * nc + 1);
    const double stddev = std::sqrt(variance);
    for (auto& c : s.coeffs) c = rng.gaussian(mean, stddev);
    s.scale = 1.0;
    if (normalize) {
        const double peak = amplitude_bound(SignalModel(s), 64);
        if (peak > 0) s.scale = 1.0 / peak;
    }
    return s;
}

inline SignalModel scaled(SignalModel m, double gain) {
    std::visit(
        [&](auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SincSeries>) {
                v.scale *= gain;
            } else if constexpr (std::is_same_v<T, PulseStream>) {
                for (auto& a : v.amplitudes) a *= gain;
            } else if constexpr (std::is_same_v<T, ShiftInvariantSeries>) {
                for (auto& c : v.coeffs) c *= gain;
            } else if constexpr (std::is_same_v<T, Sinusoid>) {
                v.amplitude *= gain;
            } else {
                for (auto& b : v.base) b *= gain;
                v.baseline_amplitude *= gain;
            }
        },
        m);
    return m;
}

// ------------------------------------------------------------ sampling grids

struct SamplingGrid {
    enum class Kind { uniform, jittered, explicit_times };

    Kind kind = Kind::uniform;
    double t0 = 0.0;
    double ts = 1.0;
    std::size_t count = 0;
    std::vector<double> jitter;  // epsilon_n, jittered grids only
    std::vector<double> times;   // explicit grids only
    double oversampling = 0.0;   // OF bookkeeping, 0 when not applicable

    double instant(std::size_t n) const {
        switch (kind) {
            case Kind::uniform: return t0 + static_cast<double>(n) * ts;
            case Kind::jittered: return t0 + static_cast<double>(n) * ts + jitter[n];
            case Kind::explicit_times: return times[n];
        }
        return 0.0;
    }

    std::vector<double> instants() const {
        std::vector<double> out(count);
        for (std::size_t n = 0; n < count; ++n) out[n] = instant(n);
        return out;
    }

    double rate_hz() const { return 1.0 / ts; }
    double omega_s() const { return 2.0 * pi / ts; }
};

inline SamplingGrid uniform_grid(double t0, double ts, std::size_t count,
                                 double oversampling = 0.0) {
    if (!(ts > 0) || count == 0) throw std::invalid_argument("uniform_grid: bad parameters");
    SamplingGrid g;
    g.kind = SamplingGrid::Kind::uniform;
    g.t0 = t0;
    g.ts = ts;
    g.count = count;
    g.oversampling = oversampling;
    return g;
}

/// Uniform grid at OF times the Nyquist rate of a bandwidth-omega_m
/// signal, spanning the half-open window [-half_width*T, half_width*T)
/// with T = pi/omega_m. The even count keeps integer-multiple carriers
/// exactly on DFT bins.
inline SamplingGrid nyquist_grid(double omega_m, double oversampling, int half_width_t) {
    if (!(omega_m > 0) || !(oversampling > 0) || half_width_t <= 0)
        throw std::invalid_argument("nyquist_grid: bad parameters");
    const double t = pi / omega_m;
    const double ts = t / oversampling;
    const auto count =
        static_cast<std::size_t>(std::llround(2.0 * half_width_t * oversampling));
    return uniform_grid(-half_width_t * t, ts, count, oversampling);
}

inline SamplingGrid jittered_grid(const SamplingGrid& base, double eps_bound,
                                  std::uint64_t seed) {
    if (base.kind != SamplingGrid::Kind::uniform)
        throw std::invalid_argument("jittered_grid: base must be uniform");
    if (!(eps_bound >= 0) || eps_bound >= base.ts / 2)
        throw std::invalid_argument("jittered_grid: need 0 <= eps < Ts/2");
    SamplingGrid g = base;
    g.kind = SamplingGrid::Kind::jittered;
    g.jitter.resize(g.count);
    Rng rng(seed);
    for (auto& e : g.jitter) e = rng.uniform(-eps_bound, eps_bound);
    return g;
}

inline SamplingGrid explicit_grid(std::vector<double> times) {
    if (times.empty()) throw std::invalid_argument("explicit_grid: empty");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("explicit_grid: times must be strictly increasing");
    SamplingGrid g;
    g.kind = SamplingGrid::Kind::explicit_times;
    g.count = times.size();
    g.t0 = times.front();
    g.ts = times.size() > 1 ? (times.back() - times.front()) /
                                  static_cast<double>(times.size() - 1)
                            : 1.0;
    g.times = std::move(times);
    return g;
}

// -------------------------------------------------------------- record I/O

/// Record CSV: optional `# rate_hz=<float>` header, then one sample per
/// line. Samples are normalized to max |.| = 1 on load; the baseline
/// starts at zero.
inline BaselinedRecord load_record_csv(const std::string& path, double expected_rate_hz) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open record file: " + path);
    BaselinedRecord rec;
    rec.rate_hz = expected_rate_hz;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (line[0] == '#') {
            const auto pos = line.find("rate_hz=");
            if (pos != std::string::npos) {
                const double rate = std::stod(line.substr(pos + 8));
                if (std::abs(rate - expected_rate_hz) > 1e-9 * expected_rate_hz)
                    throw std::runtime_error("record rate mismatch: file " +
                                             std::to_string(rate) + " Hz, expected " +
                                             std::to_string(expected_rate_hz) + " Hz");
            }
            continue;
        }
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(line, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed record row at line " + std::to_string(lineno));
        }
        while (used < line.size() &&
               (line[used] == ' ' || line[used] == '\t' || line[used] == '\r'))
            ++used;
        if (used != line.size())
            throw std::runtime_error("malformed record row at line " + std::to_string(lineno));
        rec.base.push_back(v);
    }
    if (rec.base.empty()) throw std::runtime_error("empty record file: " + path);
    double peak = 0.0;
    for (double v : rec.base) peak = std::max(peak, std::abs(v));
    if (peak > 0)
        for (auto& v : rec.base) v /= peak;
    return rec;
}

inline void write_record_csv(const std::string& path, const std::vector<double>& samples,
                             double rate_hz) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write record file: " + path);
    out << "# rate_hz=" << rate_hz << "\n";
    out.precision(17);
    for (double v : samples) out << v << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ------------------------------------------------------------ ECG synthesis

/// Deterministic synthetic single-lead ECG: per beat a sum of five
/// Gaussian bumps (P, Q, R, S, T), R amplitude modulated by a slow
/// respiratory cycle, normalized to max |.| = 1. Amplitudes and widths
/// loosely follow a normal adult lead-II shape.
inline std::vector<double> synth_ecg_record(double duration_s = 10.0, double rate_hz = 500.0,
                                            double bpm = 72.0, double resp_period_s = 5.0,
                                            double resp_depth = 0.15) {
    if (!(duration_s > 0) || !(rate_hz > 0) || !(bpm > 0) || !(resp_period_s > 0))
        throw std::invalid_argument("synth_ecg_record: invalid parameters");
    struct Wave {
        double amp, center, width;
    };
    static constexpr Wave waves[] = {{0.12, -0.180, 0.022},
                                     {-0.12, -0.022, 0.009},
                                     {1.0, 0.0, 0.012},
                                     {-0.18, 0.025, 0.009},
                                     {0.35, 0.240, 0.055}};
    const auto n = static_cast<std::size_t>(duration_s * rate_hz);
    const double period = 60.0 / bpm;
    std::vector<double> y(n, 0.0);
    const int k0 = static_cast<int>(std::floor(-0.5 / period));
    const int k1 = static_cast<int>(std::ceil((duration_s + 0.5) / period));
    for (int k = k0; k <= k1; ++k) {
        const double tc = (k + 0.4) * period;
        const double ramp = 1.0 + resp_depth * std::sin(2.0 * pi * tc / resp_period_s);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / rate_hz - tc;
            for (const auto& w : waves) {
                const double amp = (w.center == 0.0) ? ramp * w.amp : w.amp;
                const double z = (t - w.center) / w.width;
                if (std::abs(z) < 12.0) y[i] += amp * std::exp(-0.5 * z * z);
            }
        }
    }
    double peak = 0.0;
    for (double v : y) peak = std::max(peak, std::abs(v));
    for (auto& v : y) v /= peak;
    return y;
}

}  // namespace pmadc
