#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pmadc {

inline constexpr double pi = std::numbers::pi;

namespace detail {

/// SplitMix64 finalizer, used both for seeding and for counter-hash
/// seed derivation.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

/// Fractional part with result in [0, 1).
inline double frac(double x) noexcept {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;  // guard against floor rounding at negative epsilons
    return f;
}

}  // namespace detail

/// Repo-wide random source: xoshiro256++ seeded through SplitMix64,
/// Gaussian draws via Box-Muller. The exact streams are part of the
/// reproducibility contract (std::normal_distribution is not, since it
/// is implementation defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t z = seed;
        for (auto& w : s_) {
            z = detail::mix64(z);
            w = z;
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = detail::rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform01();
    }

    /// Standard normal draw (Box-Muller, pairs cached).
    double gaussian() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double gaussian(double mean, double stddev) noexcept {
        return mean + stddev * gaussian();
    }

    /// Counter-hash seed derivation: independent child streams from a
    /// master seed plus up to two indices (e.g. trial number, stage).
    static constexpr std::uint64_t derive(std::uint64_t master,
                                          std::uint64_t a,
                                          std::uint64_t b = 0) noexcept {
        return detail::mix64(master ^ detail::mix64(a ^ detail::mix64(b)));
    }

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace pmadc
