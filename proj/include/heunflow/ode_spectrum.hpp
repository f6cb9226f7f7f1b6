#pragma once

// Levels from the regularized Sturm-Liouville problem
//
//     -psi'' + sigma^2 V(xi, u) psi = (kappa/6) W(xi, u) psi,   Neumann at both ends,
//
// discretized by second differences on a uniform xi grid. Lumping the
// trapezoid weights into both sides keeps the pencil (A, B) symmetric with
// B diagonal; half weights on the end rows give the Neumann closure.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "heunflow/error.hpp"
#include "heunflow/jacobi_operator.hpp"
#include "heunflow/tridiagonal.hpp"

namespace heunflow {

namespace detail {

// 1/(1+e^{-t}) without overflow.
inline double logistic(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// log(1 + e^t) without overflow.
inline double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

}  // namespace detail

struct Potentials {
    double sigma2V = 0.0;
    double W = 0.0;
};

/// sigma^2 V and W at xi. With p = e^{2xi}/(1+e^{2xi}), r = A/(A+e^{2xi}) and
/// s = 1 - r, A = 1 + e^{4u}:
///   sigma^2 V = p(1-p) r^2 + p^2 r^2 (2+3e^{4u})/A^2 + p^2 r s + m^2 p^2
///   W = p r
inline Potentials generalized_potentials(double xi, double u, int m) {
    detail::require(std::isfinite(xi) && std::isfinite(u), "generalized_potentials: inputs must be finite");
    const double logA = detail::softplus(4.0 * u);
    const double p = detail::logistic(2.0 * xi);
    const double q = detail::logistic(-2.0 * xi);
    const double r = detail::logistic(logA - 2.0 * xi);
    const double s = detail::logistic(2.0 * xi - logA);
    double gamma;  // (2 + 3a)/(1 + a)^2, a = e^{4u}
    if (u <= 0.0) {
        const double a = std::exp(4.0 * u);
        gamma = (2.0 + 3.0 * a) / ((1.0 + a) * (1.0 + a));
    } else {
        const double ai = std::exp(-4.0 * u);
        gamma = ai * (2.0 * ai + 3.0) / ((1.0 + ai) * (1.0 + ai));
    }
    Potentials out;
    out.sigma2V = p * q * r * r + p * p * gamma * r * r + p * p * r * s + double(m) * m * p * p;
    out.W = p * r;
    return out;
}

struct Discretization {
    double u = 0.0;
    int m = 0;
    double L = 0.0;
    double h = 0.0;
    std::vector<double> xi;
    std::vector<double> pot;
    std::vector<double> weight;
};

inline constexpr double kWeightCutoff = 1e-14;

inline double default_window(double u) { return std::max(12.0, 4.0 * std::abs(u) + 12.0); }

namespace detail {

template <class Pot>
Discretization sample_window(double u, int m, double L, double h, Pot&& pot) {
    require(L > 0.0 && std::isfinite(L), "discretize: L must be positive");
    require(h > 0.0 && std::isfinite(h), "discretize: h must be positive");
    const auto steps = static_cast<std::size_t>(std::llround(2.0 * L / h));
    require(steps >= 2, "discretize: fewer than three grid points");
    std::vector<double> xs(steps + 1), ps(steps + 1), ws(steps + 1);
    double wmax = 0.0;
    for (std::size_t i = 0; i <= steps; ++i) {
        xs[i] = -L + static_cast<double>(i) * h;
        const Potentials v = pot(xs[i]);
        ps[i] = v.sigma2V;
        ws[i] = v.W;
        wmax = std::max(wmax, v.W);
    }
    require(wmax > 0.0, "discretize: weight vanishes on the whole window");
    // W is unimodal, so the supported set is one contiguous run.
    std::size_t lo = 0, hi = steps;
    while (lo < hi && ws[lo] < kWeightCutoff * wmax) ++lo;
    while (hi > lo && ws[hi] < kWeightCutoff * wmax) --hi;
    require(hi - lo >= 2, "discretize: degenerate weight (too few supported points)");
    Discretization d;
    d.u = u;
    d.m = m;
    d.L = L;
    d.h = h;
    d.xi.assign(xs.begin() + lo, xs.begin() + hi + 1);
    d.pot.assign(ps.begin() + lo, ps.begin() + hi + 1);
    d.weight.assign(ws.begin() + lo, ws.begin() + hi + 1);
    return d;
}

struct Pencil {
    std::vector<double> diag, off, b;
};

inline Pencil assemble_pencil(const Discretization& d) {
    const std::size_t n = d.xi.size();
    const double ih2 = 1.0 / (d.h * d.h);
    Pencil P;
    P.diag.resize(n);
    P.b.resize(n);
    P.off.assign(n - 1, -ih2);
    for (std::size_t i = 0; i < n; ++i) {
        const double tw = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        P.diag[i] = tw * (2.0 * ih2 + d.pot[i]);
        P.b[i] = tw * d.weight[i];
    }
    return P;
}

// Solve a tridiagonal system with partial pivoting; dl is reused for the
// second superdiagonal created by row interchanges.
inline std::vector<double> solve_tridiagonal(std::vector<double> dl, std::vector<double> d, std::vector<double> du,
                                             std::vector<double> b) {
    const std::size_t n = d.size();
    constexpr double tiny = std::numeric_limits<double>::min();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) d[i] = tiny;
            const double f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        } else {
            const double f = d[i] / dl[i];
            d[i] = dl[i];
            const double t = d[i + 1];
            d[i + 1] = du[i] - f * t;
            if (i + 2 < n) {
                dl[i] = du[i + 1];
                du[i + 1] = -f * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = t;
            const double bt = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bt - f * b[i + 1];
        }
    }
    if (d[n - 1] == 0.0) d[n - 1] = tiny;
    std::vector<double> x(n);
    x[n - 1] = b[n - 1] / d[n - 1];
    if (n >= 2) x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) x[i] = (b[i] - du[i] * x[i + 1] - dl[i] * x[i + 2]) / d[i];
    return x;
}

// Eigenvector of the pencil for eigenvalue mu by inverse iteration.
inline std::vector<double> pencil_eigenvector(const Pencil& P, double mu) {
    const std::size_t n = P.diag.size();
    std::vector<double> d(n), dl(P.off), du(P.off);
    const double shift = mu * (1.0 + 1e-12) + 1e-300;
    for (std::size_t i = 0; i < n; ++i) d[i] = P.diag[i] - shift * P.b[i];
    std::vector<double> x(n, 1.0);
    for (int it = 0; it < 4; ++it) {
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = P.b[i] * x[i];
        x = solve_tridiagonal(dl, d, du, rhs);
        double nrm = 0.0;
        for (double v : x) nrm = std::max(nrm, std::abs(v));
        for (double& v : x) v /= nrm;
    }
    return x;
}

inline std::vector<double> pencil_levels(const Pencil& P, std::size_t count) {
    auto mu = lowest_eigenvalues(P.diag, P.off, P.b, count, 1e-300);
    for (double& v : mu) v *= 6.0;
    return mu;
}

}  // namespace detail

/// Flow-model grid on [-L, L]; points with W < 1e-14 max W are dropped.
inline Discretization discretize(double u, int m, double L, double h) {
    detail::require(m >= 0, "discretize: m must be non-negative");
    return detail::sample_window(u, m, L, h, [&](double x) { return generalized_potentials(x, u, m); });
}

/// Measure-weighted density |psi|^2 sigma^4/rho on the grid; since
/// W = cosh(2u) sigma^4/rho, this is psi^2 W up to the normalization.
struct DensityProfile {
    std::vector<double> xi;
    std::vector<double> values;
};

inline double continuum_threshold(int m) {
    detail::require(m >= 0, "continuum_threshold: m must be non-negative");
    return 6.0 * m * m;
}

struct OdeOptions {
    double L = 0.0;              // <= 0 selects max(12, 4|u| + 12)
    double h = 0.02;
    double window_tol = 1e-7;    // relative shift tolerated when L -> L + 2
    bool window_check = true;
    bool densities = false;
};

struct OdeSpectrum {
    SpectralResult result;
    std::vector<DensityProfile> densities;
};

namespace detail {

inline DensityProfile density_of(const Discretization& d, const Pencil& P, double kappa) {
    const auto psi = pencil_eigenvector(P, kappa / 6.0);
    DensityProfile prof;
    prof.xi = d.xi;
    prof.values.resize(psi.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        prof.values[i] = psi[i] * psi[i] * d.weight[i];
        const double tw = (i == 0 || i + 1 == psi.size()) ? 0.5 : 1.0;
        norm += tw * prof.values[i] * d.h;
    }
    for (double& v : prof.values) v /= norm;
    return prof;
}

template <class Disc>
OdeSpectrum solve_pencil_problem(double u, int m, std::size_t nlevels, const OdeOptions& opt, double L,
                                 Disc&& disc, double threshold) {
    require(nlevels >= 1, "solve_ode_spectrum: nlevels must be >= 1");
    require(opt.h > 0.0, "solve_ode_spectrum: h must be positive");
    const Discretization coarse = disc(L, opt.h);
    const Discretization fine = disc(L, 0.5 * opt.h);
    require(coarse.xi.size() >= nlevels, "solve_ode_spectrum: grid smaller than requested level count");
    const Pencil Pc = assemble_pencil(coarse);
    const Pencil Pf = assemble_pencil(fine);
    const auto kc = pencil_levels(Pc, nlevels);
    const auto kf = pencil_levels(Pf, nlevels);

    OdeSpectrum out;
    SpectralResult& r = out.result;
    r.u = u;
    r.m = m;
    r.method = Method::ode;
    r.levels.resize(nlevels);
    r.err_est.resize(nlevels);
    r.continuum.assign(nlevels, false);
    for (std::size_t i = 0; i < nlevels; ++i) {
        r.levels[i] = (4.0 * kf[i] - kc[i]) / 3.0;
        r.err_est[i] = std::abs(kf[i] - kc[i]) / 3.0;
    }
    r.discretization = "L=" + std::to_string(L) + ",h=" + std::to_string(opt.h) + "," + std::to_string(opt.h / 2) +
                       ",points=" + std::to_string(fine.xi.size());

    // On the UV side the levels above 6m^2 are the ones that collapse onto
    // the threshold as u grows.
    if (m >= 1 && u > 0.0)
        for (std::size_t i = 0; i < nlevels; ++i) r.continuum[i] = r.levels[i] >= threshold;

    if (opt.window_check) {
        const auto kw = pencil_levels(assemble_pencil(disc(L + 2.0, opt.h)), nlevels);
        double worst = 0.0;
        for (std::size_t i = 0; i < nlevels; ++i) {
            const double shift = std::abs(kw[i] - kc[i]) / std::max(std::abs(kc[i]), 1e-300);
            if (shift <= opt.window_tol) continue;
            if (m >= 1 && u > 0.0 && r.levels[i] >= threshold)
                r.continuum[i] = true;
            else
                worst = std::max(worst, shift);
        }
        if (worst > 0.0)
            throw ConvergenceError("solve_ode_spectrum: window too small, sub-threshold level moved by " +
                                       std::to_string(worst) + " (relative) when L grew by 2",
                                   worst);
    }
    if (opt.densities)
        for (std::size_t i = 0; i < nlevels; ++i) out.densities.push_back(density_of(fine, Pf, kf[i]));
    return out;
}

}  // namespace detail

/// Richardson-extrapolated flow-model levels (4 kappa_{h/2} - kappa_h)/3 with
/// err_est = |kappa_{h/2} - kappa_h|/3. Levels above 6m^2 are flagged as
/// continuum for u > 0, m >= 1, or whenever they move as the window grows;
/// a moving sub-threshold level is a convergence error.
inline OdeSpectrum solve_ode_spectrum_full(double u, int m, std::size_t nlevels, const OdeOptions& opt = {}) {
    detail::require(std::isfinite(u), "solve_ode_spectrum: u must be finite");
    detail::require(m >= 0, "solve_ode_spectrum: m must be non-negative");
    const double L = opt.L > 0.0 ? opt.L : default_window(u);
    return detail::solve_pencil_problem(
        u, m, nlevels, opt, L, [&](double LL, double hh) { return discretize(u, m, LL, hh); },
        continuum_threshold(m));
}

inline SpectralResult solve_ode_spectrum(double u, int m, std::size_t nlevels, double L = 0.0, double h = 0.02) {
    OdeOptions opt;
    opt.L = L;
    opt.h = h;
    return solve_ode_spectrum_full(u, m, nlevels, opt).result;
}

// ---------------------------------------------------------------------------
// Sausage model in its original coordinate, u > 0:
//   -Psi'' + [m^2 + (1 + cosh2u cosh2y)/(cosh2u + cosh2y)^2] Psi
//          = (kappa/6) sinh2u/(cosh2u + cosh2y) Psi,   y in [-(u+22), u+22].

inline Potentials sausage_potentials(double y, double u, int m) {
    const double a = 2.0 * u;
    const double b = 2.0 * std::abs(y);
    const double M = std::max(a, b);
    const double cu = 0.5 * (std::exp(a - M) + std::exp(-a - M));
    const double su = 0.5 * (std::exp(a - M) - std::exp(-a - M));
    const double cy = 0.5 * (std::exp(b - M) + std::exp(-b - M));
    const double den = cu + cy;
    Potentials out;
    out.sigma2V = double(m) * m + (std::exp(-2.0 * M) + cu * cy) / (den * den);
    out.W = su / den;
    return out;
}

inline OdeSpectrum solve_sausage_ode_spectrum(double u, int m, std::size_t nlevels, const OdeOptions& opt = {}) {
    detail::require(std::isfinite(u) && u > 0.0, "solve_sausage_ode_spectrum: the sausage model needs u > 0");
    detail::require(m >= 0, "solve_sausage_ode_spectrum: m must be non-negative");
    const double L = opt.L > 0.0 ? opt.L : u + 22.0;
    return detail::solve_pencil_problem(
        u, m, nlevels, opt, L,
        [&](double LL, double hh) {
            return detail::sample_window(u, m, LL, hh, [&](double y) { return sausage_potentials(y, u, m); });
        },
        continuum_threshold(m));
}

}  // namespace heunflow
