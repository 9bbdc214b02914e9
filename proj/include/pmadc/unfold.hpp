#pragma once

// Higher-order-difference (HoD) recovery of true samples from
// modulo-folded samples. The N-th finite difference of a sufficiently
// oversampled signal stays inside [-lambda, lambda), so folding commutes
// with differencing there and the fold residual can be re-integrated.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmadc/common.hpp"
#include "pmadc/frontend.hpp"

namespace pmadc {

struct HodConfig {
    int order = 1;        // difference order N
    double lambda = 1.0;  // fold half-range
    double beta = 1.0;    // known bound on ||f||_inf
    // Integration constants are all zero; that is only sound when the
    // first N true samples already lie inside [-lambda, lambda]. The
    // flag makes the caller state that contract explicitly.
    bool assume_unfolded_prefix = true;

    void validate() const {
        if (order < 1) throw std::invalid_argument("HodConfig: order must be >= 1");
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("HodConfig: lambda must be positive and finite");
        if (!(beta >= lambda) || !std::isfinite(beta))
            throw std::invalid_argument("HodConfig: beta must be finite and >= lambda");
    }
};

/// Smallest N in [1, 6] whose shrinkage estimate (pi/OF)^N * beta drops
/// below lambda; 6 plus a warning when no order satisfies it. beta <=
/// lambda means no folding can occur, so order 1 is enough. The sigma
/// argument is reserved: the estimate ignores noise, and rounding inside
/// hod_unfold is the only denoising applied.
inline int choose_order(double oversampling, double beta, double lambda, double /*sigma*/ = 0.0,
                        std::string* warning = nullptr) {
    if (!(oversampling >= 1.0))
        throw std::invalid_argument("choose_order: oversampling must be >= 1");
    if (!(lambda > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("choose_order: beta and lambda must be positive");
    if (warning) warning->clear();
    if (beta <= lambda) return 1;
    const double ratio = pi / oversampling;
    double estimate = beta;
    for (int n = 1; n <= 6; ++n) {
        estimate *= ratio;
        if (estimate < lambda) return n;
    }
    if (warning)
        *warning = "shrinkage estimate never drops below lambda; capping the order at 6";
    return 6;
}

/// Recover true samples from folded ones. d = Delta^N(folded) is folded
/// entrywise; the residual e = fold(d) - d is an exact multiple of
/// 2*lambda, snapped to that lattice and anti-differenced N times with
/// zero integration constants (the unfolded-prefix contract). Rounding
/// to the lattice is also the only denoising step, so the same path
/// serves noisy streams. Exact whenever ||Delta^N f||_inf < lambda.
inline std::vector<double> hod_unfold(const SampleStream& folded, const HodConfig& cfg) {
    cfg.validate();
    if (!cfg.assume_unfolded_prefix)
        throw std::invalid_argument(
            "hod_unfold: only zero integration constants are implemented; "
            "the unfolded-prefix contract must be accepted");
    if (folded.grid.kind != SamplingGrid::Kind::uniform)
        throw std::invalid_argument("hod_unfold: requires a uniform sampling grid");
    const auto& y = folded.values;
    if (y.size() <= static_cast<std::size_t>(cfg.order))
        throw std::invalid_argument("hod_unfold: need more than N samples");

    std::vector<double> d = y;
    for (int pass = 0; pass < cfg.order; ++pass) {
        for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
        d.pop_back();
    }

    // Residual differences in lattice coordinates: resid[i] = e_i / (2*lambda).
    const double two_lambda = 2.0 * cfg.lambda;
    std::vector<double> resid(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double e = centered_modulo(d[i], cfg.lambda) - d[i];
        const double k = std::round(e / two_lambda);
        if (std::abs(e - k * two_lambda) > 1e-9 * two_lambda)
            throw std::runtime_error(
                "hod_unfold: residual difference is off the 2*lambda lattice "
                "(sampling rate too low for this order)");
        resid[i] = k;
    }

    // Anti-difference N times. The running sums stay exact integers, so
    // every intermediate sequence sits on the lattice by construction.
    for (int pass = 0; pass < cfg.order; ++pass) {
        std::vector<double> acc(resid.size() + 1, 0.0);
        double run = 0.0;
        for (std::size_t i = 0; i < resid.size(); ++i) {
            run += resid[i];
            acc[i + 1] = run;
        }
        resid.swap(acc);
    }

    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + two_lambda * resid[i];
    return out;
}

}  // namespace pmadc
