#pragma once

// Closed-form limits of the spectrum and the data of the parafermionic
// IR theory. Half-integer spins are passed as two_j = 2j.

#include <cmath>
#include <vector>

#include "heunflow/error.hpp"
#include "heunflow/special_functions.hpp"

namespace heunflow {

/// kappa/6 of the UV bound states, m^2 - (2n+1-m)^2 for integers n < (m-1)/2.
inline std::vector<double> bound_state_levels(int m) {
    detail::require(m >= 0, "bound_state_levels: m must be non-negative");
    std::vector<double> out;
    for (int n = 0; 2 * n < m - 1; ++n) out.push_back(double(m) * m - double(2 * n + 1 - m) * (2 * n + 1 - m));
    return out;
}

/// r_m = psi(1) - psi((m+1)/2); r_0 = 2 log 2.
inline double uv_shift(int m) {
    detail::require(m >= 0, "uv_shift: m must be non-negative");
    return digamma(1.0) - digamma(0.5 * m + 0.5);
}

/// 6 (m^2 + pi^2 (2n-m+2)^2 / (16 (u+r_m)^2)), valid for 2n >= m-1.
inline double uv_level_flow(double u, int m, int n) {
    detail::require(m >= 0 && n >= 0, "uv_level_flow: m, n must be non-negative");
    detail::require(2 * n >= m - 1, "uv_level_flow: needs 2n >= m-1 (bound states follow bound_state_levels)");
    const double z = u + uv_shift(m);
    detail::require(z > 0.0, "uv_level_flow: u + r_m must be positive");
    const double k = 2.0 * n - m + 2.0;
    return 6.0 * (double(m) * m + M_PI * M_PI * k * k / (16.0 * z * z));
}

/// 6 (m^2 + pi^2 (n+1)^2 / (4 (u+r_m)^2)).
inline double uv_level_sausage(double u, int m, int n) {
    detail::require(m >= 0 && n >= 0, "uv_level_sausage: m, n must be non-negative");
    const double z = u + uv_shift(m);
    detail::require(z > 0.0, "uv_level_sausage: u + r_m must be positive");
    const double k = n + 1.0;
    return 6.0 * (double(m) * m + M_PI * M_PI * k * k / (4.0 * z * z));
}

/// 6((2j+1)^2 - m^2), j = n + m/2, n = 0..count-1.
inline std::vector<double> ir_spectrum(int m, int count) {
    detail::require(m >= 0, "ir_spectrum: m must be non-negative");
    detail::require(count >= 1, "ir_spectrum: count must be >= 1");
    std::vector<double> out;
    for (int n = 0; n < count; ++n) {
        const double t = 2.0 * n + m + 1.0;
        out.push_back(6.0 * (t * t - double(m) * m));
    }
    return out;
}

struct PcftLevel {
    int m = 0;
    int two_j = 0;
    int N = 0;
    double Delta = 0.0;
    double D = 0.0;

    double j() const { return 0.5 * two_j; }
};

/// Delta_{mj} = j(j+1)/(N+2) - m^2/(4N), D = (N+2) Delta.
inline PcftLevel pcft_dimension(int m, int two_j, int N) {
    detail::require(N >= 3, "pcft_dimension: N must be >= 3");
    detail::require(two_j >= std::abs(m) && two_j <= N, "pcft_dimension: need |m|/2 <= j <= N/2");
    detail::require((two_j - m) % 2 == 0, "pcft_dimension: 2j - m must be even");
    PcftLevel p;
    p.m = m;
    p.two_j = two_j;
    p.N = N;
    const double j = p.j();
    p.Delta = j * (j + 1.0) / (N + 2.0) - double(m) * m / (4.0 * N);
    p.D = (N + 2.0) * p.Delta;
    return p;
}

/// b1(j, N) = 2N^2/(N+2)^2 g(1/(N+2))^2 g((2j+2)/(N+2)) / (g(2/(N+2)) g(2j/(N+2))) (8 pi)^{4/(N+2)}.
inline double b1(int two_j, int N) {
    detail::require(N >= 3, "b1: N must be >= 3");
    detail::require(two_j >= 0 && two_j + 2 < N + 2, "b1: needs 0 <= 2j < N");
    const double s = 1.0 / (N + 2.0);
    const double g1 = gamma_ratio(s);
    return 2.0 * N * N * s * s * g1 * g1 * gamma_ratio((two_j + 2) * s) /
           (gamma_ratio(2.0 * s) * gamma_ratio(two_j * s)) * std::pow(8.0 * M_PI, 4.0 * s);
}

/// (N+2) b2 = N^2 (N-2)^2 g(1/(N+2)) g(3/(N+2)) (8pi)^{8/(N+2)} / ((N+4)^2 (N+6)^2 g(4/(N+2)) g(-2/(N+2))^2).
inline double b2(int N) {
    detail::require(N >= 3, "b2: N must be >= 3");
    const double s = 1.0 / (N + 2.0);
    const double gm = gamma_ratio(-2.0 * s);
    const double num = double(N) * N * (N - 2.0) * (N - 2.0) * gamma_ratio(s) * gamma_ratio(3.0 * s) *
                       std::pow(8.0 * M_PI, 8.0 * s);
    const double den = (N + 4.0) * (N + 4.0) * (N + 6.0) * (N + 6.0) * gamma_ratio(4.0 * s) * gm * gm;
    return num / den * s;
}

/// (N+2) b3 = -3 N^4 (N-4)^2 g(2/(N+2)) g(4/(N+2)) (8pi)^{12/(N+2)} / (2 (N+4)^4 (N+8)^2 g(6/(N+2)) g(-3/(N+2))^2).
inline double b3(int N) {
    detail::require(N >= 5, "b3: N must be >= 5");
    const double s = 1.0 / (N + 2.0);
    const double gm = gamma_ratio(-3.0 * s);
    const double n4 = double(N) * N * N * N;
    const double num = -3.0 * n4 * (N - 4.0) * (N - 4.0) * gamma_ratio(2.0 * s) * gamma_ratio(4.0 * s) *
                       std::pow(8.0 * M_PI, 12.0 * s);
    const double p4 = std::pow(N + 4.0, 4);
    const double den = 2.0 * p4 * (N + 8.0) * (N + 8.0) * gamma_ratio(6.0 * s) * gm * gm;
    return num / den * s;
}

/// (N+2)(e_mj - e_0)/6 through the first correction:
/// 4 D - D^2 b1/(j(j+1)) ((N+2)/MR)^{4/(N+2)}.
inline double level_ir_correction(int m, int two_j, int N, double MR) {
    detail::require(two_j > 0, "level_ir_correction: j = 0 divides by j(j+1)");
    detail::require(std::isfinite(MR) && MR > 0.0, "level_ir_correction: MR must be positive");
    const PcftLevel p = pcft_dimension(m, two_j, N);
    const double j = p.j();
    return 4.0 * p.D - p.D * p.D * b1(two_j, N) / (j * (j + 1.0)) * std::pow((N + 2.0) / MR, 4.0 / (N + 2.0));
}

/// Z_m(R) = log(8 pi (N-2)/MR) + (N-2)(psi(1) - psi((m+1)/2)) + psi(1).
inline double uv_log_scale(int m, int N, double MR) {
    detail::require(N > 2, "uv_log_scale: N must be > 2");
    detail::require(std::isfinite(MR) && MR > 0.0, "uv_log_scale: MR must be positive");
    return std::log(8.0 * M_PI * (N - 2.0) / MR) + (N - 2.0) * uv_shift(m) + digamma(1.0);
}

/// N e_mj = 6 m^2 + 3 (j-m+1)^2 pi^2 N (N-2) / (2 Z_m^2).
inline double uv_exact_level(int m, int two_j, int N, double MR) {
    detail::require(m >= 0, "uv_exact_level: m must be non-negative");
    detail::require(two_j >= 2 * m - 1, "uv_exact_level: needs j >= m - 1/2");
    const double Z = uv_log_scale(m, N, MR);
    detail::require(Z > 0.0, "uv_exact_level: Z_m must be positive");
    const double k = 0.5 * two_j - m + 1.0;
    return 6.0 * double(m) * m + 3.0 * k * k * M_PI * M_PI * N * (N - 2.0) / (2.0 * Z * Z);
}

}  // namespace heunflow
