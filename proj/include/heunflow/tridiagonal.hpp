#pragma once

// Sturm-sequence bisection for symmetric tridiagonal matrices and for
// tridiagonal pencils (A, B) with B diagonal and positive.
//
// The number of eigenvalues below a shift s equals the number of negative
// pivots in the LDL^T factorization of A - s B (Sylvester inertia). Working
// on the pencil directly, rather than on B^{-1/2} A B^{-1/2}, avoids the
// loss of relative accuracy when B has entries spanning many decades.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "heunflow/error.hpp"

namespace heunflow {

struct Bracket {
    double lo;
    double hi;
};

namespace detail {

// Returns the negative-pivot count, or -1 when a pivot is exactly zero
// (unless substitute_zero, which replaces it by -pivmin as LAPACK does).
inline long negative_pivots(std::span<const double> diag, std::span<const double> off,
                            std::span<const double> bdiag, double shift, bool substitute_zero = false) {
    const bool pencil = !bdiag.empty();
    long count = 0;
    double pivot = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        double t = diag[i] - shift * (pencil ? bdiag[i] : 1.0);
        if (i > 0) t -= off[i - 1] * (off[i - 1] / pivot);
        if (t == 0.0) {
            if (!substitute_zero) return -1;
            t = -std::numeric_limits<double>::min();
        }
        if (t < 0.0) ++count;
        pivot = t;
    }
    return count;
}

}  // namespace detail

/// Number of eigenvalues strictly below `shift`. An exactly vanishing pivot
/// is resolved by nudging the shift up by one ulp; if that cannot move it
/// (a row with negligible weight), the pivot is replaced by -pivmin.
inline std::size_t sturm_count(std::span<const double> diag, std::span<const double> off,
                               std::span<const double> bdiag, double shift) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        const long c = detail::negative_pivots(diag, off, bdiag, shift);
        if (c >= 0) return static_cast<std::size_t>(c);
        shift = std::nextafter(shift, std::numeric_limits<double>::infinity());
    }
    return static_cast<std::size_t>(detail::negative_pivots(diag, off, bdiag, shift, true));
}

inline std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double shift) {
    return sturm_count(diag, off, {}, shift);
}

/// Gershgorin enclosure of the spectrum of B^{-1/2} A B^{-1/2} (B = I when
/// bdiag is empty).
inline Bracket gershgorin(std::span<const double> diag, std::span<const double> off,
                          std::span<const double> bdiag = {}) {
    const bool pencil = !bdiag.empty();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double bi = pencil ? bdiag[i] : 1.0;
        double r = 0.0;
        if (i > 0) r += std::abs(off[i - 1]) / std::sqrt(bi * (pencil ? bdiag[i - 1] : 1.0));
        if (i + 1 < n) r += std::abs(off[i]) / std::sqrt(bi * (pencil ? bdiag[i + 1] : 1.0));
        const double c = diag[i] / bi;
        lo = std::min(lo, c - r);
        hi = std::max(hi, c + r);
    }
    const double pad = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    return {lo - pad, hi + pad};
}

/// The k-th (0-based) eigenvalue, bisected from `start` until the bracket is
/// no wider than `tol` or cannot shrink further in double precision.
inline double bisect_eigenvalue(std::span<const double> diag, std::span<const double> off,
                                std::span<const double> bdiag, std::size_t k, Bracket start, double tol) {
    double lo = start.lo;
    double hi = start.hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(diag, off, bdiag, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// Lowest `count` eigenvalues of the symmetric tridiagonal (diag, off), or
/// of the pencil (diag, off; bdiag) when bdiag is non-empty.
inline std::vector<double> lowest_eigenvalues(std::span<const double> diag, std::span<const double> off,
                                              std::span<const double> bdiag, std::size_t count, double tol) {
    detail::require(!diag.empty(), "lowest_eigenvalues: empty matrix");
    detail::require(off.size() + 1 == diag.size(), "lowest_eigenvalues: off-diagonal length mismatch");
    detail::require(bdiag.empty() || bdiag.size() == diag.size(), "lowest_eigenvalues: weight length mismatch");
    detail::require(count <= diag.size(), "lowest_eigenvalues: count exceeds dimension");
    detail::require(tol > 0.0, "lowest_eigenvalues: tol must be positive");
    const Bracket g = gershgorin(diag, off, bdiag);
    std::vector<double> out;
    out.reserve(count);
    double lo = g.lo;
    for (std::size_t k = 0; k < count; ++k) {
        const double ev = bisect_eigenvalue(diag, off, bdiag, k, {lo, g.hi}, tol);
        out.push_back(ev);
        // eigenvalues are ordered, so eigenvalue k+1 lies above eigenvalue k's bracket
        lo = std::max(lo, ev - tol);
    }
    return out;
}

inline std::vector<double> lowest_eigenvalues(std::span<const double> diag, std::span<const double> off,
                                              std::size_t count, double tol) {
    return lowest_eigenvalues(diag, off, {}, count, tol);
}

}  // namespace heunflow
