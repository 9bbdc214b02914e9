#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pmadc/common.hpp"
#include "pmadc/signals.hpp"

namespace pmadc {

struct PmConfig {
    double omega_c = 0.0;  // rad/s
    double mu = 1.0;       // rad per amplitude unit
    double lambda = 1.0;   // ADC half-range

    void validate() const {
        if (!(lambda > 0) || !(mu > 0) || !(omega_c >= 0))
            throw std::invalid_argument("PmConfig: need lambda > 0, mu > 0, omega_c >= 0");
    }
};

struct NoiseSpec {
    enum class Family { uniform_bounded, gaussian };
    Family family = Family::uniform_bounded;
    double sigma = 0.0;  // uniform: bound, gaussian: standard deviation
    std::uint64_t seed = 0;
};

struct QuantizerSpec {
    int bits = 8;
    double lo = -1.0;
    double hi = 1.0;

    /// Level spacing under the endpoints-included convention.
    double step() const { return (hi - lo) / (std::pow(2.0, bits) - 1.0); }

    void validate() const {
        if (bits < 1 || !(hi > lo))
            throw std::invalid_argument("QuantizerSpec: need bits >= 1 and hi > lo");
    }

    /// The hardware prototype's single-supply 8-bit converter.
    static QuantizerSpec single_supply_8bit(double lambda) {
        return {8, -lambda, lambda};
    }
};

enum class Stage { pm, folded, attenuated, clean, noisy, quantized };

inline const char* stage_name(Stage s) {
    switch (s) {
        case Stage::pm: return "pm";
        case Stage::folded: return "folded";
        case Stage::attenuated: return "attenuated";
        case Stage::clean: return "clean";
        case Stage::noisy: return "noisy";
        case Stage::quantized: return "quantized";
    }
    return "?";
}

inline Stage stage_from_name(const std::string& name) {
    for (Stage s : {Stage::pm, Stage::folded, Stage::attenuated, Stage::clean, Stage::noisy,
                    Stage::quantized})
        if (name == stage_name(s)) return s;
    throw std::invalid_argument("unknown stage tag: " + name);
}

struct SampleStream {
    SamplingGrid grid;
    std::vector<double> values;
    Stage stage = Stage::clean;
    double lambda = 0.0;        // half-range of the producing stage, 0 if n/a
    std::size_t clip_count = 0;  // quantizer saturation events
};

namespace detail {

/// Carrier phase omega_c * t_n reduced mod 2*pi. On uniform/jittered
/// grids the per-step cycle count and the start offset are snapped to
/// integers when within 1e-9 of one, so integer-multiple carriers
/// (omega_c = k * omega_s, t0 a whole number of steps) cancel exactly.
class CarrierPhase {
public:
    CarrierPhase(const SamplingGrid& grid, double omega_c) : grid_(&grid) {
        structured_ = grid.kind != SamplingGrid::Kind::explicit_times;
        if (!structured_) {
            omega_c_ = omega_c;
            return;
        }
        double rho = omega_c * grid.ts / (2.0 * pi);  // carrier cycles per step
        if (std::abs(rho - std::round(rho)) < 1e-9) rho = std::round(rho);
        rho_frac_ = frac(rho);
        double m = grid.t0 / grid.ts;  // start offset in steps
        if (std::abs(m - std::round(m)) < 1e-9) m = std::round(m);
        base_cycles_ = frac(rho * m);
        omega_c_ = omega_c;
    }

    double operator()(std::size_t n) const {
        if (!structured_) return omega_c_ * grid_->times[n];
        double cycles = frac(base_cycles_ + frac(static_cast<double>(n) * rho_frac_));
        double phase = 2.0 * pi * cycles;
        if (grid_->kind == SamplingGrid::Kind::jittered) phase += omega_c_ * grid_->jitter[n];
        return phase;
    }

private:
    const SamplingGrid* grid_;
    bool structured_ = true;
    double omega_c_ = 0.0;
    double rho_frac_ = 0.0;
    double base_cycles_ = 0.0;
};

}  // namespace detail

/// f_pm(t_n) = lambda * sin(omega_c t_n + mu f(t_n)) at the grid instants.
inline SampleStream pm_modulate(const SignalModel& model, const PmConfig& pm,
                                const SamplingGrid& grid) {
    pm.validate();
    SampleStream out;
    out.grid = grid;
    out.stage = Stage::pm;
    out.lambda = pm.lambda;
    out.values.resize(grid.count);
    const detail::CarrierPhase phase(grid, pm.omega_c);
    for (std::size_t n = 0; n < grid.count; ++n)
        out.values[n] = pm.lambda * std::sin(phase(n) + pm.mu * eval(model, grid.instant(n)));
    return out;
}

/// x reduced into [-lambda, lambda); x - result is an exact multiple of
/// 2*lambda.
inline double centered_modulo(double x, double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("centered_modulo: lambda must be > 0");
    double r = x - 2.0 * lambda * std::floor(x / (2.0 * lambda) + 0.5);
    if (r >= lambda) r -= 2.0 * lambda;
    if (r < -lambda) r += 2.0 * lambda;
    return r;
}

inline SampleStream modulo_fold(const SignalModel& model, double lambda,
                                const SamplingGrid& grid) {
    SampleStream out;
    out.grid = grid;
    out.stage = Stage::folded;
    out.lambda = lambda;
    out.values.resize(grid.count);
    for (std::size_t n = 0; n < grid.count; ++n)
        out.values[n] = centered_modulo(eval(model, grid.instant(n)), lambda);
    return out;
}

inline SignalModel attenuate(const SignalModel& model, double gain) {
    if (!(gain > 0) || gain > 1.0)
        throw std::invalid_argument("attenuate: gain must be in (0, 1]");
    return scaled(model, gain);
}

namespace detail {

template <class F>
double adaptive_simpson(F&& f, double a, double m, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double rel_tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = rel_tol * std::max(std::abs(whole), 1e-12);
    return adaptive_simpson(f, a, m, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace detail

/// (f * g)(t_n) by adaptive Simpson quadrature over the kernel support;
/// the identity (Dirac) kernel returns plain samples exactly.
inline SampleStream kernel_sample(const SignalModel& model, const Kernel& kernel,
                                  const SamplingGrid& grid) {
    SampleStream out;
    out.grid = grid;
    out.stage = Stage::clean;
    out.values.resize(grid.count);
    if (!kernel.evaluable()) {
        for (std::size_t n = 0; n < grid.count; ++n)
            out.values[n] = eval(model, grid.instant(n));
        return out;
    }
    const double hs = kernel.half_support();
    for (std::size_t n = 0; n < grid.count; ++n) {
        const double tn = grid.instant(n);
        out.values[n] = detail::integrate(
            [&](double tau) { return eval(model, tau) * kernel(tn - tau); }, tn - hs, tn + hs,
            1e-8);
    }
    return out;
}

inline SampleStream add_noise(const SampleStream& stream, const NoiseSpec& spec) {
    if (!(spec.sigma >= 0)) throw std::invalid_argument("add_noise: sigma must be >= 0");
    SampleStream out = stream;
    out.stage = Stage::noisy;
    Rng rng(spec.seed);
    for (auto& v : out.values)
        v += spec.family == NoiseSpec::Family::uniform_bounded
                 ? rng.uniform(-spec.sigma, spec.sigma)
                 : rng.gaussian(0.0, spec.sigma);
    return out;
}

/// Snap to the nearest of 2^B levels spanning [lo, hi] (endpoints are
/// levels); out-of-range inputs saturate and are counted.
inline SampleStream quantize(const SampleStream& stream, const QuantizerSpec& q) {
    q.validate();
    SampleStream out = stream;
    out.stage = Stage::quantized;
    out.clip_count = 0;
    const double step = q.step();
    for (auto& v : out.values) {
        if (v < q.lo) {
            v = q.lo;
            ++out.clip_count;
        } else if (v > q.hi) {
            v = q.hi;
            ++out.clip_count;
        }
        v = q.lo + step * std::round((v - q.lo) / step);
        if (v > q.hi) v = q.hi;
    }
    return out;
}

// ---------------------------------------------------------------- stream I/O

/// Stream CSV: `# stage=<tag> rate_hz=<..> lambda=<..>` then `t,value`
/// rows.
inline void write_stream_csv(const std::string& path, const SampleStream& stream) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write stream file: " + path);
    out.precision(17);
    out << "# stage=" << stage_name(stream.stage) << " rate_hz=" << stream.grid.rate_hz()
        << " lambda=" << stream.lambda << "\n";
    for (std::size_t n = 0; n < stream.values.size(); ++n)
        out << stream.grid.instant(n) << "," << stream.values[n] << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline SampleStream load_stream_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stream file: " + path);
    SampleStream s;
    s.stage = Stage::clean;
    std::vector<double> times;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (line[0] == '#') {
            std::istringstream hdr(line.substr(1));
            std::string tok;
            while (hdr >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "stage") s.stage = stage_from_name(val);
                if (key == "lambda") s.lambda = std::stod(val);
            }
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed stream row at line " + std::to_string(lineno));
        try {
            times.push_back(std::stod(line.substr(0, comma)));
            s.values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw std::runtime_error("malformed stream row at line " + std::to_string(lineno));
        }
    }
    if (times.empty()) throw std::runtime_error("empty stream file: " + path);
    // recognize uniform spacing so downstream carrier checks still work
    bool uniform = times.size() >= 2;
    const double ts = uniform ? times[1] - times[0] : 1.0;
    for (std::size_t n = 1; uniform && n < times.size(); ++n)
        uniform = std::abs(times[n] - times[0] - static_cast<double>(n) * ts) <= 1e-9 * ts;
    if (uniform && ts > 0)
        s.grid = uniform_grid(times[0], ts, times.size());
    else
        s.grid = explicit_grid(std::move(times));
    return s;
}

}  // namespace pmadc
