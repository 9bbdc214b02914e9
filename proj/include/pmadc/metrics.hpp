#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pmadc/common.hpp"
#include "pmadc/signals.hpp"

namespace pmadc {

struct NmseResult {
    double db = 0.0;
    double numerator = 0.0;    // error energy
    double denominator = 0.0;  // truth energy
};

inline constexpr double nmse_floor_db = -300.0;

inline NmseResult nmse_db(const std::vector<double>& truth,
                          const std::vector<double>& estimate) {
    if (truth.size() != estimate.size())
        throw std::invalid_argument("nmse_db: length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double e = truth[i] - estimate[i];
        num += e * e;
        den += truth[i] * truth[i];
    }
    if (!(den > 0)) throw std::invalid_argument("nmse_db: zero-energy truth");
    NmseResult r;
    r.numerator = num;
    r.denominator = den;
    r.db = (num == 0.0) ? nmse_floor_db : 10.0 * std::log10(num / den);
    if (r.db < nmse_floor_db) r.db = nmse_floor_db;
    return r;
}

inline double max_abs_error(const std::vector<double>& truth,
                            const std::vector<double>& estimate) {
    if (truth.size() != estimate.size())
        throw std::invalid_argument("max_abs_error: length mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        m = std::max(m, std::abs(truth[i] - estimate[i]));
    return m;
}

/// Shannon interpolation of uniform samples onto an arbitrary time grid.
inline std::vector<double> sinc_reconstruct(const std::vector<double>& samples,
                                            const SamplingGrid& grid,
                                            const std::vector<double>& t_out) {
    if (grid.kind != SamplingGrid::Kind::uniform)
        throw std::invalid_argument("sinc_reconstruct: grid must be uniform");
    if (samples.size() != grid.count)
        throw std::invalid_argument("sinc_reconstruct: sample count mismatch");
    std::vector<double> out(t_out.size(), 0.0);
    for (std::size_t i = 0; i < t_out.size(); ++i) {
        const double x = (t_out[i] - grid.t0) / grid.ts;
        double acc = 0.0;
        for (std::size_t n = 0; n < samples.size(); ++n)
            acc += samples[n] * detail::sinc(x - static_cast<double>(n));
        out[i] = acc;
    }
    return out;
}

}  // namespace pmadc
