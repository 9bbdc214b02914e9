// Modulo-folding walkthrough: sample a signal through an ADC whose range is
// a fifth of the signal swing, then undo the folding with the higher-order
// difference method at an automatically chosen order.

#include <cstdio>

#include "pmadc/harness.hpp"

using namespace pmadc;

int main() {
    const double t_nyq = 5e-4;
    const double omega_m = pi / t_nyq;
    const double lambda = 0.2;
    const double oversampling = 8.0;
    const auto grid = nyquist_grid(omega_m, oversampling, 8);

    const SignalModel model(gen_sinc_series(11, 4, t_nyq, 0.5, 4.0));
    const double beta = amplitude_bound(model);
    const auto truth = eval(model, grid.instants());

    const auto folded = modulo_fold(model, lambda, grid);
    std::size_t wrapped = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (folded.values[i] != truth[i]) ++wrapped;

    std::string warning;
    const int order = choose_order(oversampling, beta, lambda, 0.0, &warning);
    const auto recovered = hod_unfold(folded, {order, lambda, beta, true});

    std::printf("range ratio beta/lambda = %.1f, order %d%s\n", beta / lambda, order,
                warning.empty() ? "" : " (order capped)");
    std::printf("%zu of %zu samples were folded; max error after unfolding = %.3g\n", wrapped,
                truth.size(), max_abs_error(truth, recovered));
    return 0;
}
