#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "pmadc/common.hpp"

using pmadc::Rng;
namespace detail = pmadc::detail;

TEST_CASE("mix64 matches the published SplitMix64 vector", "[common]") {
    // First three outputs of SplitMix64 from state 0 (reference
    // implementation by Vigna), used here as an external oracle.
    CHECK(detail::mix64(0x0000000000000000ull) == 0xe220a8397b1dcdafull);
    CHECK(detail::mix64(0x9e3779b97f4a7c15ull) == 0x6e789e6aa1b965f4ull);
    CHECK(detail::mix64(0x3c6ef372fe94f82aull) == 0x06c45d188009454full);
}

TEST_CASE("frac stays in [0,1)", "[common]") {
    CHECK(detail::frac(2.75) == Catch::Approx(0.75));
    CHECK(detail::frac(-0.25) == Catch::Approx(0.75));
    CHECK(detail::frac(3.0) == 0.0);
    CHECK(detail::frac(-1e-20) == 0.0);
    for (double x : {-123.456, -1.0, 0.0, 0.999, 17.125, 1e9 + 0.5}) {
        const double f = detail::frac(x);
        CHECK(f >= 0.0);
        CHECK(f < 1.0);
    }
}

TEST_CASE("rng streams are deterministic per seed", "[common]") {
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const auto va = a.next_u64();
        all_equal = all_equal && (va == b.next_u64());
        any_diff = any_diff || (va != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("uniform01 moments", "[common]") {
    Rng rng(7);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sumsq += u * u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(mean == Catch::Approx(0.5).margin(0.005));
    CHECK(var == Catch::Approx(1.0 / 12.0).margin(0.002));
    CHECK(lo < 0.001);
    CHECK(hi > 0.999);
}

TEST_CASE("gaussian moments via Box-Muller", "[common]") {
    Rng rng(11);
    const int n = 200000;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        m1 += g;
        m2 += g * g;
        m3 += g * g * g;
        m4 += g * g * g * g;
    }
    m1 /= n; m2 /= n; m3 /= n; m4 /= n;
    CHECK(m1 == Catch::Approx(0.0).margin(0.01));
    CHECK(m2 == Catch::Approx(1.0).margin(0.02));
    CHECK(m3 == Catch::Approx(0.0).margin(0.05));   // skewness
    CHECK(m4 == Catch::Approx(3.0).margin(0.1));    // kurtosis
    Rng rng2(11);
    double s = 0;
    for (int i = 0; i < 50000; ++i) s += rng2.gaussian(0.5, 2.0);
    CHECK(s / 50000 == Catch::Approx(0.5).margin(0.05));
}

TEST_CASE("derive gives collision-free child seeds", "[common]") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 100; ++a)
        for (std::uint64_t b = 0; b < 100; ++b)
            seen.insert(Rng::derive(12345, a, b));
    CHECK(seen.size() == 100 * 100);
    CHECK(Rng::derive(1, 2, 3) == Rng::derive(1, 2, 3));
    CHECK(Rng::derive(1, 2, 3) != Rng::derive(2, 2, 3));
}
