#pragma once

// Tridiagonal Jacobi-polynomial representation of the Heun operator.
//
// For a Heun equation with exponents gamma = 1+a at 0, delta = 1+b at 1,
// epsilon = 1 at the movable singularity w, and alpha*beta = s, the operator
//
//     H = (1 - 2w - y) Lambda + (1 - y^2) d/dy - s y,      y = 1 - 2x,
//
// with Lambda P_n = n(n+a+b+1) P_n acts tridiagonally on P_n^{(a,b)}(y) and
// has eigenvalue 2q - s. Splitting H = (1-2w) Lambda + V isolates the
// w-independent coupling V.
//
//   flow model:    a = m, b = 0, s = m+1, w = -e^{-4u}
//   sausage model: a = b = m,    s = (m+1)^2, w_bar = e^{4u}/(e^{4u}-1)

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "heunflow/error.hpp"
#include "heunflow/params.hpp"
#include "heunflow/tridiagonal.hpp"

namespace heunflow {

enum class Basis { rational, orthonormal };
enum class Method { matrix, ode, series };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::matrix: return "matrix";
        case Method::ode: return "ode";
        case Method::series: return "series";
    }
    return "?";
}

/// Exponent data selecting the Jacobi family P^{(a,b)} and the shift s = alpha*beta.
struct HeunFamily {
    int a = 0;
    int b = 0;
    std::int64_t shift = 1;

    static HeunFamily flow(int m) { return {m, 0, m + 1}; }
    static HeunFamily sausage(int m) { return {m, m, static_cast<std::int64_t>(m + 1) * (m + 1)}; }
};

/// Column n of V in the unnormalized basis: V P_n = below P_{n-1} + diag P_n + above P_{n+1}.
template <class Scalar>
struct JacobiColumn {
    Scalar below{};
    Scalar diag{};
    Scalar above{};
};

template <class Scalar>
Scalar unperturbed_level(std::int64_t n, const HeunFamily& f) {
    return Scalar(n * (n + f.a + f.b + 1));
}

/// Column of V from the three-term recurrences of y P_n and (1-y^2) P_n'.
/// Exact when Scalar is a rational type.
template <class Scalar>
JacobiColumn<Scalar> coupling_column(std::int64_t n, const HeunFamily& f) {
    const std::int64_t a = f.a;
    const std::int64_t b = f.b;
    const std::int64_t s = 2 * n + a + b;
    const std::int64_t nab1 = n + a + b + 1;
    const Scalar lam_plus = Scalar(n * nab1 + f.shift);

    // y P_n coefficients
    const Scalar up = Scalar(2 * (n + 1) * nab1) / Scalar((s + 1) * (s + 2));
    const Scalar mid = (s == 0) ? Scalar(b - a) / Scalar(a + b + 2) : Scalar(b * b - a * a) / Scalar(s * (s + 2));
    const Scalar down = (n > 0) ? Scalar(2 * (n + a) * (n + b)) / Scalar(s * (s + 1)) : Scalar(0);

    const Scalar nab1s = Scalar(nab1);
    JacobiColumn<Scalar> col;
    col.diag = (nab1s - lam_plus) * mid + Scalar(nab1 * (a - b)) / Scalar(s + 2);
    col.above = (nab1s - lam_plus) * up - Scalar(2 * (n + 1) * nab1) / Scalar(s + 2);
    col.below = (nab1s - lam_plus) * down;
    return col;
}

/// Flow-model V entries, as ratios of integers.
template <class Scalar>
JacobiColumn<Scalar> flow_column(std::int64_t n, int m) {
    const std::int64_t mm = m;
    JacobiColumn<Scalar> col;
    if (mm > 0)
        col.diag = Scalar(mm * ((2 + mm) * n * n + (mm + 1) * (mm + 2) * n + mm * (mm + 1))) /
                   Scalar((mm + 2 * n) * (mm + 2 * n + 2));
    if (n > 0)
        col.below = -Scalar(2 * n * n * (mm + n) * (mm + n)) / Scalar((mm + 2 * n) * (mm + 2 * n + 1));
    col.above = -Scalar(2 * (n + 1) * (n + 1) * (mm + n + 1) * (mm + n + 1)) /
                Scalar((mm + 2 * n + 1) * (mm + 2 * n + 2));
    return col;
}

/// Off-diagonal of the flow operator in the orthonormal basis.
inline double flow_orthonormal_offdiag(std::int64_t n, int m) {
    const double np1 = static_cast<double>(n + 1);
    const double nm1 = static_cast<double>(n + m + 1);
    const double s = static_cast<double>(2 * n + m + 2);
    return 2.0 * np1 * np1 * nm1 * nm1 / (s * std::sqrt(s * s - 1.0));
}

struct TridiagonalOperator {
    Basis basis = Basis::orthonormal;
    int m = 0;
    double w = 0.0;
    std::vector<double> diag;
    std::vector<double> lower;  // lower[i] = H[i+1][i]
    std::vector<double> upper;  // upper[i] = H[i][i+1]

    std::size_t dim() const { return diag.size(); }

    bool symmetric() const { return lower == upper; }
};

/// leading * Lambda + coupling * V for the given family, truncated to `dim`.
inline TridiagonalOperator assemble_operator(const HeunFamily& fam, std::size_t dim, Basis basis, double leading,
                                             double coupling, bool flow_closed_form) {
    detail::require(dim >= 2, "build_operator: dim must be at least 2");
    TridiagonalOperator op;
    op.basis = basis;
    op.m = fam.a;
    op.diag.resize(dim);
    op.lower.resize(dim - 1);
    op.upper.resize(dim - 1);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto n = static_cast<std::int64_t>(i);
        const auto col = flow_closed_form ? flow_column<double>(n, fam.a) : coupling_column<double>(n, fam);
        op.diag[i] = leading * unperturbed_level<double>(n, fam) + coupling * col.diag;
        if (i + 1 < dim) op.lower[i] = coupling * col.above;
        if (i > 0) op.upper[i - 1] = coupling * col.below;
    }
    if (basis == Basis::orthonormal) {
        for (std::size_t i = 0; i + 1 < dim; ++i) {
            const double v = flow_closed_form
                                 ? std::abs(coupling) * flow_orthonormal_offdiag(static_cast<std::int64_t>(i), fam.a)
                                 : std::sqrt(op.lower[i] * op.upper[i]);
            op.lower[i] = op.upper[i] = v;
        }
    }
    return op;
}

/// H = (1-2w) H0 + V of the flow model.
inline TridiagonalOperator build_operator(const ModelParams& p, std::size_t dim, Basis basis) {
    auto op = assemble_operator(HeunFamily::flow(p.m), dim, basis, 1.0 - 2.0 * p.w(), 1.0, true);
    op.w = p.w();
    return op;
}

/// Lowest `count` eigenvalues of a symmetric operator, each bracketed to width <= tol.
inline std::vector<double> eigenvalues_bisection(const TridiagonalOperator& op, std::size_t count, double tol) {
    detail::require(op.basis == Basis::orthonormal && op.symmetric(),
                    "eigenvalues_bisection: operator must be in the symmetric orthonormal basis");
    detail::require(count <= op.dim(), "eigenvalues_bisection: count exceeds dimension");
    return lowest_eigenvalues(op.diag, op.lower, count, tol);
}

struct SpectralResult {
    double u = 0.0;
    int m = 0;
    Method method = Method::matrix;
    std::vector<double> levels;
    std::vector<double> err_est;
    std::vector<bool> continuum;
    std::string discretization;
};

struct MatrixOptions {
    std::size_t start_dim = 32;
    std::size_t max_dim = 4096;
};

namespace detail {

// Bisection width for eigenvalues of a scaled operator: stop at roundoff.
inline constexpr double kBisectionFloor = 1e-15;

template <class Build, class ToKappa>
SpectralResult converge_in_dimension(double u, int m, std::size_t nlevels, double tol, const MatrixOptions& opt,
                                     Build&& build, ToKappa&& to_kappa, const char* name) {
    require(nlevels >= 1, std::string(name) + ": nlevels must be >= 1");
    require(tol > 0.0, std::string(name) + ": tol must be positive");
    std::size_t dim = std::max<std::size_t>(opt.start_dim, 2);
    while (dim < 4 * nlevels) dim *= 2;
    require(dim <= opt.max_dim, std::string(name) + ": too many levels for the dimension cap");

    std::vector<double> prev;
    std::vector<double> change(nlevels, std::numeric_limits<double>::infinity());
    for (; dim <= opt.max_dim; dim *= 2) {
        const TridiagonalOperator op = build(dim);
        const auto ev = lowest_eigenvalues(op.diag, op.lower, nlevels, kBisectionFloor);
        std::vector<double> kappa(nlevels);
        for (std::size_t i = 0; i < nlevels; ++i) kappa[i] = to_kappa(ev[i]);
        if (!prev.empty()) {
            double worst = 0.0;
            for (std::size_t i = 0; i < nlevels; ++i) {
                change[i] = std::abs(kappa[i] - prev[i]);
                worst = std::max(worst, change[i]);
            }
            if (worst < tol) {
                SpectralResult r;
                r.u = u;
                r.m = m;
                r.method = Method::matrix;
                r.levels = std::move(kappa);
                r.err_est = change;
                r.continuum.assign(nlevels, false);
                r.discretization = "dim=" + std::to_string(dim);
                return r;
            }
        }
        prev = std::move(kappa);
    }
    double worst = 0.0;
    for (double c : change) worst = std::max(worst, c);
    throw ConvergenceError(std::string(name) + ": levels not stable to tol within dim cap " +
                               std::to_string(opt.max_dim),
                           worst);
}

}  // namespace detail

/// Flow-model levels kappa_{m,n}(u), n = 0..nlevels-1, from the truncated
/// matrix H0 + eps V (eigenvalue eps (2q - m - 1)); the dimension doubles
/// until every level moves by less than `tol`.
inline SpectralResult spectrum_matrix(double u, int m, std::size_t nlevels, double tol,
                                      const MatrixOptions& opt = {}) {
    const ModelParams p = derive_params(u, m);
    const double eps = p.epsilon();
    return detail::converge_in_dimension(
        u, m, nlevels, tol, opt,
        [&](std::size_t dim) {
            return assemble_operator(HeunFamily::flow(m), dim, Basis::orthonormal, 1.0, eps, true);
        },
        [&](double E) { return kappa_from_scaled_eigenvalue(E, eps, m); }, "spectrum_matrix");
}

/// Sausage-model levels kappa^{ssg}_{m,n}(u) for u > 0 through the mapped
/// Heun problem on (0,1), scaled by eps_bar = 1/(1 - 2 w_bar) = -tanh(2u).
inline SpectralResult spectrum_sausage_matrix(double u, int m, std::size_t nlevels, double tol,
                                              const MatrixOptions& opt = {}) {
    detail::require(std::isfinite(u) && u > 0.0, "spectrum_sausage_matrix: the sausage model needs u > 0");
    detail::require(m >= 0, "spectrum_sausage_matrix: m must be non-negative");
    const double eps_bar = -std::tanh(2.0 * u);
    return detail::converge_in_dimension(
        u, m, nlevels, tol, opt,
        [&](std::size_t dim) {
            return assemble_operator(HeunFamily::sausage(m), dim, Basis::orthonormal, 1.0, eps_bar, false);
        },
        [&](double E) { return sausage_kappa_from_scaled_eigenvalue(E, u, m); }, "spectrum_sausage_matrix");
}

}  // namespace heunflow
