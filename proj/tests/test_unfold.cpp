#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "pmadc/metrics.hpp"
#include "pmadc/unfold.hpp"

using namespace pmadc;

namespace {
constexpr double kT = 0.5e-3;
const double kWm = pi / kT;

std::vector<double> nth_diff(std::vector<double> v, int order) {
    for (int pass = 0; pass < order; ++pass) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
        v.pop_back();
    }
    return v;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}
}  // namespace

TEST_CASE("hod_unfold recovers the hand-traced staircase", "[unfold][property]") {
    const std::vector<double> truth{0.0, 0.6, 1.4, 2.2, 2.6};
    SampleStream folded;
    folded.grid = uniform_grid(0.0, 1.0, truth.size());
    folded.stage = Stage::folded;
    folded.lambda = 1.0;
    for (double g : truth) folded.values.push_back(centered_modulo(g, 1.0));

    const std::vector<double> expect_folded{0.0, 0.6, -0.6, 0.2, 0.6};
    for (std::size_t i = 0; i < truth.size(); ++i)
        CHECK(folded.values[i] == Catch::Approx(expect_folded[i]).margin(1e-12));

    const auto recovered = hod_unfold(folded, {1, 1.0, 3.0, true});
    const std::vector<double> residual{0.0, 0.0, 2.0, 2.0, 2.0};
    REQUIRE(recovered.size() == truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        CHECK(recovered[i] == Catch::Approx(truth[i]).margin(1e-12));
        CHECK(recovered[i] - folded.values[i] == Catch::Approx(residual[i]).margin(1e-12));
    }
}

TEST_CASE("choose_order follows the shrinkage estimate", "[unfold]") {
    std::string warn = "stale";
    CHECK(choose_order(8.0, 20.0, 1.0, 0.0, &warn) == 4);
    CHECK(warn.empty());
    CHECK(choose_order(10.0, 20.0, 1.0) == 3);
    CHECK(choose_order(8.0, 1.0, 1.0) == 1);  // beta <= lambda: nothing folds
    CHECK(choose_order(1.0, 20.0, 1.0, 0.0, &warn) == 6);
    CHECK_FALSE(warn.empty());
    CHECK_THROWS_AS(choose_order(0.5, 20.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(choose_order(4.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("hod_unfold passes unfolded input through", "[unfold]") {
    const auto grid = nyquist_grid(kWm, 8.0, 4);
    const SignalModel m = scaled(SignalModel(gen_sinc_series(31, 4, kT, 0.5, 4.0)), 0.4);
    const auto truth = eval(m, grid.instants());
    const auto folded = modulo_fold(m, 1.0, grid);
    for (std::size_t i = 0; i < truth.size(); ++i) REQUIRE(folded.values[i] == truth[i]);
    const auto recovered = hod_unfold(folded, {1, 1.0, 1.0, true});
    for (std::size_t i = 0; i < truth.size(); ++i) CHECK(recovered[i] == truth[i]);
}

TEST_CASE("hod_unfold is exact when the difference condition holds", "[unfold][property]") {
    // window wide enough that the leading samples sit in the decayed tail
    const auto grid = nyquist_grid(kWm, 8.0, 8);
    const double lambda = 0.3;
    const int order = choose_order(8.0, 1.0, lambda);
    CHECK(order == 2);
    for (std::uint64_t seed : {11, 12, 13, 14, 15}) {
        const SignalModel m(gen_sinc_series(seed, 4, kT, 0.5, 4.0));
        const auto truth = eval(m, grid.instants());
        // the method's own precondition, checked directly
        REQUIRE(max_abs(nth_diff(truth, order)) < lambda);
        for (int k = 0; k < order; ++k) REQUIRE(std::abs(truth[k]) <= lambda);

        const auto folded = modulo_fold(m, lambda, grid);
        double moved = 0.0;
        for (std::size_t i = 0; i < truth.size(); ++i)
            moved = std::max(moved, std::abs(folded.values[i] - truth[i]));
        REQUIRE(moved > lambda);  // folding actually happened

        const auto recovered = hod_unfold(folded, {order, lambda, 1.0, true});
        for (std::size_t i = 0; i < truth.size(); ++i)
            CHECK(std::abs(recovered[i] - truth[i]) <= 1e-9);
    }
}

TEST_CASE("anti-difference intermediates stay on the residual lattice", "[unfold][property]") {
    // float-arithmetic replay of the reconstruction: every partial
    // sequence must sit within 1e-9 of 2*lambda*Z while the difference
    // condition holds
    const auto grid = nyquist_grid(kWm, 8.0, 8);
    const double lambda = 0.3;
    const int order = 2;
    const SignalModel m(gen_sinc_series(21, 4, kT, 0.5, 4.0));
    const auto truth = eval(m, grid.instants());
    REQUIRE(max_abs(nth_diff(truth, order)) < lambda);

    const auto folded = modulo_fold(m, lambda, grid);
    const auto d = nth_diff(folded.values, order);
    std::vector<double> e(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) e[i] = centered_modulo(d[i], lambda) - d[i];

    const double two_lambda = 2.0 * lambda;
    const auto on_lattice = [&](const std::vector<double>& v) {
        for (double x : v)
            if (std::abs(x - two_lambda * std::round(x / two_lambda)) > 1e-9 * two_lambda)
                return false;
        return true;
    };
    CHECK(on_lattice(e));
    for (int pass = 0; pass < order; ++pass) {
        std::vector<double> acc(e.size() + 1, 0.0);
        for (std::size_t i = 0; i < e.size(); ++i) acc[i + 1] = acc[i] + e[i];
        e.swap(acc);
        CHECK(on_lattice(e));
    }

    // the raw-float replay agrees with the library result
    const auto recovered = hod_unfold(folded, {order, lambda, 1.0, true});
    for (std::size_t i = 0; i < truth.size(); ++i)
        CHECK(folded.values[i] + e[i] == Catch::Approx(recovered[i]).margin(1e-9));
}

TEST_CASE("hod_unfold error grows with noise", "[unfold][property]") {
    const auto grid = nyquist_grid(kWm, 8.0, 8);
    const double lambda = 0.3;
    const int order = 2;
    std::vector<double> means;
    for (double ratio : {0.05, 0.1, 0.2}) {
        double total = 0.0;
        const int trials = 50;
        for (int t = 0; t < trials; ++t) {
            const SignalModel m(gen_sinc_series(100 + t, 4, kT, 0.5, 4.0));
            const auto truth = eval(m, grid.instants());
            const auto folded = modulo_fold(m, lambda, grid);
            // one noise seed per trial, shared across sigma levels, so the
            // realizations scale together
            const auto noisy = add_noise(
                folded, {NoiseSpec::Family::uniform_bounded, ratio * lambda, 1000u + t});
            total += nmse_db(truth, hod_unfold(noisy, {order, lambda, 1.0, true})).db;
        }
        means.push_back(total / trials);
    }
    CHECK(means[0] <= means[1]);
    CHECK(means[1] <= means[2]);
}

TEST_CASE("hod_unfold guards its contract", "[unfold]") {
    SampleStream s;
    s.grid = uniform_grid(0.0, 1.0, 5);
    s.values = {0.0, 0.1, 0.2, 0.3, 0.4};
    s.stage = Stage::folded;
    s.lambda = 1.0;
    CHECK_THROWS_AS(hod_unfold(s, {0, 1.0, 1.0, true}), std::invalid_argument);
    CHECK_THROWS_AS(hod_unfold(s, {1, 1.0, 0.5, true}), std::invalid_argument);
    CHECK_THROWS_AS(hod_unfold(s, {1, 1.0, 1.0, false}), std::invalid_argument);
    CHECK_THROWS_AS(hod_unfold(s, {5, 1.0, 1.0, true}), std::invalid_argument);
    SampleStream j = s;
    j.grid = jittered_grid(s.grid, 0.1, 7);
    CHECK_THROWS_AS(hod_unfold(j, {1, 1.0, 1.0, true}), std::invalid_argument);
}
