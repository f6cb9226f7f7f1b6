// Walks along the flow: kappa_0(u) by three methods, the UV bound states at
// m = 10, and a short TBA comparison at N = 5.

#include <cmath>
#include <cstdio>

#include "heunflow/heunflow.hpp"

using namespace heunflow;

int main() {
    std::printf("kappa_0(u), m = 0\n");
    std::printf("%6s %16s %16s %16s %12s\n", "u", "matrix", "ode", "series(40)", "UV law");
    for (double u = -3.0; u <= 6.01; u += 1.5) {
        const double ode = solve_ode_spectrum(u, 0, 1).levels[0];
        char mat[32] = "-", ser[32] = "-", uv[32] = "-";
        if (u <= kMatrixUvLimit) std::snprintf(mat, sizeof mat, "%.10f", spectrum_matrix(u, 0, 1, 1e-12).levels[0]);
        const auto s = sum_series(kappa_series(0, 0, 40, Variable::lambda), derive_params(u, 0).lambda());
        if (s.tail_est < 1e-6 * s.value) std::snprintf(ser, sizeof ser, "%.10f", s.value);
        if (u > 0.0) std::snprintf(uv, sizeof uv, "%.6f", uv_level_flow(u, 0, 0));
        std::printf("%6.2f %16s %16.10f %16s %12s\n", u, mat, ode, ser, uv);
    }

    std::printf("\nu = 10, m = 10: kappa/6 below the continuum at 100\n");
    const auto b = solve_ode_spectrum(10.0, 10, 7);
    const auto exact = bound_state_levels(10);
    for (std::size_t i = 0; i < b.levels.size(); ++i) {
        if (b.continuum[i]) {
            std::printf("  %zu  %10.4f  (continuum)\n", i, b.levels[i] / 6.0);
        } else {
            std::printf("  %zu  %10.4f  limit %g\n", i, b.levels[i] / 6.0, exact.at(i));
        }
    }

    std::printf("\nN = 5: (N+2)(2-c) against kappa_0(u(MR))\n");
    std::printf("%12s %10s %12s %12s %12s\n", "MR", "u", "scaled", "kappa0", "deviation");
    for (const auto& r : match_curve(5, log_spaced(1e-4, 1e2, 7)))
        std::printf("%12.4g %10.4f %12.6f %12.6f %12.6f\n", r.MR, r.u, r.scaled, r.kappa0, r.deviation);
}
