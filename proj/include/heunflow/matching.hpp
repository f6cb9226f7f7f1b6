#pragma once

// Comparison of the TBA central charge with the ground-state scaling
// function: (N+2)(2 - c) against kappa_0(u) under the empirical u(MR) map.

#include <cmath>
#include <string>
#include <vector>

#include "heunflow/asymptotics.hpp"
#include "heunflow/error.hpp"
#include "heunflow/jacobi_operator.hpp"
#include "heunflow/ode_spectrum.hpp"
#include "heunflow/parallel.hpp"
#include "heunflow/perturbation.hpp"
#include "heunflow/tba.hpp"

namespace heunflow {

struct MatchRow {
    int N = 0;
    double MR = 0.0;
    double u = 0.0;
    double c = 0.0;
    double scaled = 0.0;  // (N+2)(2-c)
    double kappa0 = 0.0;
    double deviation = 0.0;  // scaled - kappa0
};

/// u = log(N/MR) / N_eff, N_eff = sqrt((N+2)(N - 2 tanh(4 log(N/MR)))).
inline double u_from_mr(int N, double MR) {
    detail::require(N >= 4, "u_from_mr: N must be >= 4");
    detail::require(std::isfinite(MR) && MR > 0.0, "u_from_mr: MR must be positive");
    const double l = std::log(N / MR);
    const double rad = (N + 2.0) * (N - 2.0 * std::tanh(4.0 * l));
    detail::require(rad > 0.0, "u_from_mr: non-positive radicand");
    return l / std::sqrt(rad);
}

inline constexpr double kMatrixUvLimit = 2.0;

/// kappa_0(u) at m = 0 from the matrix for u <= 2, the ODE beyond.
inline SpectralResult ground_kappa(double u, double tol = 1e-10) {
    if (u <= kMatrixUvLimit) return spectrum_matrix(u, 0, 1, tol);
    return solve_ode_spectrum(u, 0, 1);
}

struct MatchOptions {
    TbaOptions tba{};
    unsigned threads = 0;
    double overlap_rtol = 1e-6;  // matrix vs ODE on u in [1, 2]
};

/// Rows for an increasing MR list: one TBA curve, then row-parallel kappa_0.
inline std::vector<MatchRow> match_curve(int N, const std::vector<double>& MR_list, const MatchOptions& opt = {}) {
    detail::require(N >= 4, "match_curve: N must be >= 4");
    const FlowCurve curve = central_charge_curve(N, MR_list, Source::massless_flow, opt.tba);
    std::vector<MatchRow> rows(MR_list.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        MatchRow& r = rows[i];
        r.N = N;
        r.MR = MR_list[i];
        r.u = u_from_mr(N, r.MR);
        r.c = curve.points[i].y;
        r.scaled = (N + 2.0) * (2.0 - r.c);
    }
    parallel_for(rows.size(), resolve_threads(opt.threads), [&](std::size_t i) {
        MatchRow& r = rows[i];
        r.kappa0 = ground_kappa(r.u).levels[0];
        if (r.u >= 1.0 && r.u <= kMatrixUvLimit) {
            const double other = solve_ode_spectrum(r.u, 0, 1).levels[0];
            if (std::abs(other - r.kappa0) > opt.overlap_rtol * std::abs(r.kappa0))
                throw ConvergenceError("match_curve: matrix and ODE disagree on the overlap at u = " +
                                           std::to_string(r.u),
                                       std::abs(other - r.kappa0));
        }
        r.deviation = r.scaled - r.kappa0;
    });
    return rows;
}

struct IrSeriesReport {
    int N = 0;
    double B2 = 0.0;  // (N+2) b2
    double B3 = 0.0;  // (N+2) b3
    // (N+2)(2-c) = 6 - lambda2 lambda^2 - lambda3 lambda^3 + ...
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    // the same coefficients of 6 - kappa_0 from the exact series
    double kappa_lambda2 = 0.0;
    double kappa_lambda3 = 0.0;
};

/// With exp(4u) = ((N+2)/MR)^{4/(N+2)} = lambda/(1-lambda) the two printed IR
/// terms become B2 y^2 + B3 y^3, y = lambda + lambda^2 + ..., so
/// lambda2 = B2 and lambda3 = 2 B2 + B3.
inline IrSeriesReport ir_series_compare(int N) {
    IrSeriesReport r;
    r.N = N;
    r.B2 = (N + 2.0) * b2(N);
    r.B3 = (N + 2.0) * b3(N);
    r.lambda2 = r.B2;
    r.lambda3 = 2.0 * r.B2 + r.B3;
    const RationalSeries k = kappa_series(0, 0, 3, Variable::lambda);
    r.kappa_lambda2 = -k.at(2).get_d();
    r.kappa_lambda3 = -k.at(3).get_d();
    return r;
}

}  // namespace heunflow
