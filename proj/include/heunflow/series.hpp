#pragma once

// Truncated power series with exact rational (GMP) or floating coefficients.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "heunflow/error.hpp"

namespace heunflow {

using Rational = mpq_class;

enum class Variable { epsilon, lambda };
enum class Target { two_q_minus, kappa };

inline const char* to_string(Variable v) { return v == Variable::epsilon ? "epsilon" : "lambda"; }
inline const char* to_string(Target t) { return t == Target::kappa ? "kappa" : "two_q"; }

/// sum_k coeffs[k] x^{min_power + k}, retained through x^order.
///
/// For two_q_minus the series is of 2q - m - 1; excited levels (n > 0)
/// carry a simple pole n(n+m+1)/eps, hence min_power = -1.
struct RationalSeries {
    Variable variable = Variable::epsilon;
    Target target = Target::two_q_minus;
    int m = 0;
    int n = 0;
    int min_power = 0;
    std::vector<Rational> coeffs;

    int order() const { return min_power + static_cast<int>(coeffs.size()) - 1; }

    /// Coefficient of x^p (zero outside the stored range).
    Rational at(int p) const {
        const int i = p - min_power;
        if (i < 0 || i >= static_cast<int>(coeffs.size())) return Rational(0);
        return coeffs[static_cast<std::size_t>(i)];
    }
};

namespace series {

/// Product truncated to `len` terms.
template <class T>
std::vector<T> mul(const std::vector<T>& a, const std::vector<T>& b, std::size_t len) {
    std::vector<T> r(len, T(0));
    for (std::size_t i = 0; i < std::min(a.size(), len); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

/// a(e(x)) truncated to `len` terms; requires e[0] = 0.
template <class T>
std::vector<T> compose(const std::vector<T>& a, const std::vector<T>& e, std::size_t len) {
    detail::require(e.empty() || e[0] == 0, "series::compose: inner series must vanish at 0");
    std::vector<T> r(len, T(0));
    std::vector<T> p(len, T(0));
    if (len == 0) return r;
    p[0] = T(1);
    for (std::size_t k = 0; k < std::min(a.size(), len); ++k) {
        if (a[k] != 0)
            for (std::size_t i = 0; i < len; ++i) r[i] += a[k] * p[i];
        if (k + 1 < std::min(a.size(), len)) p = mul(p, e, len);
    }
    return r;
}

/// (1 + t(x))^alpha with t[0] = 0, via f'(1+t) = alpha t' f.
template <class T>
std::vector<T> pow1p(const std::vector<T>& t, const T& alpha, std::size_t len) {
    detail::require(t.empty() || t[0] == 0, "series::pow1p: t must vanish at 0");
    std::vector<T> f(len, T(0));
    if (len == 0) return f;
    f[0] = T(1);
    auto tc = [&](std::size_t j) { return j < t.size() ? t[j] : T(0); };
    for (std::size_t k = 1; k < len; ++k) {
        T s(0);
        for (std::size_t j = 1; j <= k; ++j) {
            const T tj = tc(j);
            if (tj == 0) continue;
            // alpha * j t_j f_{k-j} - (k-j) t_j f_{k-j}
            s += (alpha * T(static_cast<long>(j)) - T(static_cast<long>(k - j))) * tj * f[k - j];
        }
        f[k] = s / T(static_cast<long>(k));
    }
    return f;
}

/// Coefficients of x/(2-x) = sum_{k>=1} x^k / 2^k.
template <class T>
std::vector<T> epsilon_of_lambda(std::size_t len) {
    std::vector<T> e(len, T(0));
    T p(1);
    for (std::size_t k = 1; k < len; ++k) {
        p /= T(2);
        e[k] = p;
    }
    return e;
}

inline std::vector<double> to_double(const std::vector<Rational>& v) {
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = v[i].get_d();
    return d;
}

}  // namespace series
}  // namespace heunflow
