#pragma once

// Rayleigh-Schroedinger expansion of the levels of H0 + eps V about eps = 0.
//
// With E(eps) the perturbed eigenvalue, E = eps (2q - m - 1). The
// recursion needs only the action of V on vectors of finite support, so
// the unnormalized rational V can be used directly: a diagonal similarity
// S V S^{-1} leaves every delta_k unchanged.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "heunflow/error.hpp"
#include "heunflow/jacobi_operator.hpp"
#include "heunflow/series.hpp"

namespace heunflow {

namespace detail {

template <class T>
struct Plain {
    T sum{0};
    void add(const T& x) { sum += x; }
    T value() const { return sum; }
};

// Neumaier compensated sum.
template <class T>
struct Compensated {
    T sum{0};
    T comp{0};
    void add(T x) {
        const T t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    T value() const { return sum + comp; }
};

// delta_0..delta_order for level n0, given V columns.
template <class T, template <class> class Acc, class Column>
std::vector<T> rs_recursion(int m, int n0, int order, Column&& column) {
    const std::int64_t E0 = static_cast<std::int64_t>(n0) * (n0 + m + 1);
    const std::size_t width = static_cast<std::size_t>(n0 + order + 2);
    std::vector<JacobiColumn<T>> cols;
    cols.reserve(width);
    for (std::size_t j = 0; j < width; ++j) cols.push_back(column(static_cast<std::int64_t>(j)));

    std::vector<std::vector<T>> eta;
    eta.emplace_back(width, T(0));
    eta[0][static_cast<std::size_t>(n0)] = T(1);
    std::vector<T> delta{T(E0)};

    std::vector<T> Vp(width);
    for (int k = 1; k <= order; ++k) {
        std::fill(Vp.begin(), Vp.end(), T(0));
        const auto& prev = eta[static_cast<std::size_t>(k - 1)];
        for (std::size_t j = 0; j + 1 < width; ++j) {
            if (prev[j] == 0) continue;
            if (j > 0) Vp[j - 1] += cols[j].below * prev[j];
            Vp[j] += cols[j].diag * prev[j];
            Vp[j + 1] += cols[j].above * prev[j];
        }
        delta.push_back(Vp[static_cast<std::size_t>(n0)]);

        std::vector<T> next(width, T(0));
        for (std::size_t i = 0; i < width; ++i) {
            if (i == static_cast<std::size_t>(n0)) continue;
            Acc<T> acc;
            acc.add(-Vp[i]);
            for (int l = 1; l <= k; ++l) {
                const T& c = eta[static_cast<std::size_t>(k - l)][i];
                if (c != 0) acc.add(delta[static_cast<std::size_t>(l)] * c);
            }
            const T r = acc.value();
            if (r == 0) continue;
            const auto ii = static_cast<std::int64_t>(i);
            next[i] = r / T(ii * (ii + m + 1) - E0);
        }
        eta.push_back(std::move(next));
    }
    return delta;
}

inline void check_level(int m, int n, int order, const char* who) {
    require(m >= 0, std::string(who) + ": m must be non-negative");
    require(n >= 0, std::string(who) + ": n must be non-negative");
    require(order >= 0, std::string(who) + ": order must be non-negative");
}

}  // namespace detail

/// Exact delta_k = [eps^k] E(eps), k = 0..order.
inline std::vector<Rational> rs_deltas(int m, int n, int order) {
    detail::check_level(m, n, order, "rs_deltas");
    return detail::rs_recursion<Rational, detail::Plain>(
        m, n, order, [m](std::int64_t j) { return flow_column<Rational>(j, m); });
}

/// Floating delta_k from the symmetric (orthonormal-basis) V with
/// compensated accumulation; intended for orders beyond the exact path.
inline std::vector<long double> rs_deltas_float(int m, int n, int order) {
    detail::check_level(m, n, order, "rs_deltas_float");
    return detail::rs_recursion<long double, detail::Compensated>(m, n, order, [m](std::int64_t j) {
        JacobiColumn<long double> c;
        const auto raw = flow_column<long double>(j, m);
        c.diag = raw.diag;
        c.above = -static_cast<long double>(flow_orthonormal_offdiag(j, m));
        if (j > 0) c.below = -static_cast<long double>(flow_orthonormal_offdiag(j - 1, m));
        return c;
    });
}

namespace detail {

// 2q - m - 1 through eps^order (order >= min_power).
inline RationalSeries two_q_series(int m, int n, int order) {
    const int lo = (n > 0) ? -1 : 0;
    require(order >= lo, "two_q_series: order below the leading power");
    const auto d = rs_deltas(m, n, order + 1);
    RationalSeries s;
    s.variable = Variable::epsilon;
    s.target = Target::two_q_minus;
    s.m = m;
    s.n = n;
    s.min_power = lo;
    for (std::size_t k = static_cast<std::size_t>(lo + 1); k < d.size(); ++k) s.coeffs.push_back(d[k]);
    return s;
}

}  // namespace detail

/// Exact eps-series of 2q - m - 1 for level (m, n) through eps^order.
inline RationalSeries rs_expand(int m, int n, int order) {
    detail::require(order >= 1, "rs_expand: order must be >= 1");
    return detail::two_q_series(m, n, order);
}

/// Substitute eps = lambda/(2 - lambda), keeping the same highest power.
inline RationalSeries reexpand_lambda(const RationalSeries& s) {
    detail::require(s.variable == Variable::epsilon, "reexpand_lambda: input must be a series in epsilon");
    detail::require(!s.coeffs.empty(), "reexpand_lambda: empty series");
    const std::size_t len = s.coeffs.size();
    const auto eps = series::epsilon_of_lambda<Rational>(len);
    auto body = series::compose(s.coeffs, eps, len);

    // eps^p = lambda^p (2 - lambda)^{-p}
    const int p = s.min_power;
    if (p != 0) {
        Rational scale(1);
        for (int i = 0; i < std::abs(p); ++i) scale *= 2;
        if (p > 0) scale = 1 / scale;
        std::vector<Rational> half{Rational(0), Rational(-1, 2)};
        auto fac = series::pow1p(half, Rational(-p), len);
        for (auto& c : fac) c *= scale;
        body = series::mul(body, fac, len);
    }
    RationalSeries r = s;
    r.variable = Variable::lambda;
    r.coeffs = std::move(body);
    return r;
}

/// Convert a 2q - m - 1 series into the kappa series in the same variable,
/// exact through one power beyond the input.
///
///   eps:    kappa = (24 E + 6(1+2m) + eps(6-12m)) / (1+eps),   E = eps (2q-m-1)
///   lambda: kappa = 6(1+2m) - 12 m lambda + 12 lambda (2q-m-1)
inline RationalSeries to_kappa(const RationalSeries& s) {
    detail::require(s.target == Target::two_q_minus, "to_kappa: input must be a 2q-m-1 series");
    detail::require(s.min_power >= -1, "to_kappa: unsupported pole order");
    const int top = s.order() + 1;
    const std::size_t len = static_cast<std::size_t>(top + 1);

    // x * s as an ordinary power series
    std::vector<Rational> xs(len, Rational(0));
    for (int p = s.min_power; p <= s.order(); ++p) xs[static_cast<std::size_t>(p + 1)] = s.at(p);

    std::vector<Rational> k(len, Rational(0));
    const int m = s.m;
    if (s.variable == Variable::epsilon) {
        for (std::size_t i = 0; i < len; ++i) k[i] = 24 * xs[i];
        k[0] += 6 * (1 + 2 * m);
        if (len > 1) k[1] += 6 - 12 * m;
        std::vector<Rational> inv(len);
        for (std::size_t i = 0; i < len; ++i) inv[i] = (i % 2 == 0) ? Rational(1) : Rational(-1);
        k = series::mul(k, inv, len);
    } else {
        for (std::size_t i = 0; i < len; ++i) k[i] = 12 * xs[i];
        k[0] += 6 * (1 + 2 * m);
        if (len > 1) k[1] -= 12 * m;
    }
    RationalSeries r;
    r.variable = s.variable;
    r.target = Target::kappa;
    r.m = s.m;
    r.n = s.n;
    r.min_power = 0;
    r.coeffs = std::move(k);
    return r;
}

/// Exact kappa_{m,n} series through x^order in the chosen variable.
inline RationalSeries kappa_series(int m, int n, int order, Variable var) {
    detail::require(order >= 1, "kappa_series: order must be >= 1");
    RationalSeries s = detail::two_q_series(m, n, order - 1);
    if (var == Variable::lambda) s = reexpand_lambda(s);
    return to_kappa(s);
}

/// Floating kappa coefficients in lambda through lambda^order.
inline std::vector<long double> kappa_lambda_float(int m, int n, int order) {
    detail::require(order >= 1, "kappa_lambda_float: order must be >= 1");
    const auto d = rs_deltas_float(m, n, order);
    const std::size_t len = static_cast<std::size_t>(order + 1);
    // lambda (2q-m-1) = lambda E/eps = (2 - lambda) E(eps(lambda))
    const auto e = series::epsilon_of_lambda<long double>(len);
    auto El = series::compose(std::vector<long double>(d.begin(), d.end()), e, len);
    std::vector<long double> two_minus{2.0L, -1.0L};
    auto ls = series::mul(El, two_minus, len);
    std::vector<long double> k(len);
    for (std::size_t i = 0; i < len; ++i) k[i] = 12.0L * ls[i];
    k[0] += 6.0L * (1 + 2 * m);
    if (len > 1) k[1] -= 12.0L * m;
    return k;
}

struct SeriesSum {
    double value = 0.0;
    double tail_est = 0.0;
};

/// Horner sum at x in [0, 1); tail_est = |last term| x/(1-x).
inline SeriesSum sum_series(const RationalSeries& s, double x) {
    detail::require(!s.coeffs.empty(), "sum_series: empty series");
    detail::require(std::isfinite(x) && x >= 0.0 && x < 1.0, "sum_series: argument must lie in [0, 1)");
    detail::require(!(x == 0.0 && s.min_power < 0), "sum_series: pole at 0");
    long double acc = 0.0L;
    for (std::size_t i = s.coeffs.size(); i-- > 0;) acc = acc * x + static_cast<long double>(s.coeffs[i].get_d());
    const long double lead = std::pow(static_cast<long double>(x), s.min_power);
    const int top = s.order();
    const long double last = static_cast<long double>(s.coeffs.back().get_d()) *
                             std::pow(static_cast<long double>(x), top);
    SeriesSum r;
    r.value = static_cast<double>(acc * lead);
    r.tail_est = (x == 0.0) ? 0.0 : static_cast<double>(std::abs(last) * x / (1.0L - x));
    return r;
}

/// |c_{k+1}/c_k| for consecutive nonzero coefficients (convergence radius probe).
template <class T>
std::vector<double> coefficient_ratios(const std::vector<T>& c) {
    std::vector<double> r;
    for (std::size_t k = 1; k + 1 < c.size(); ++k) {
        const double a = static_cast<double>(c[k]);
        const double b = static_cast<double>(c[k + 1]);
        if (a != 0.0) r.push_back(std::abs(b / a));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Upsilon(eps) = sqrt(eps/(4q - 2 + eps)) for the m = 0 ground state.
// With 2q - 1 = s(eps), Upsilon = a(eps)^{-1/2}, a = 1 + 2 s/eps.

struct UpsilonSeries {
    Rational a0;                 // a(0)
    std::vector<Rational> f;     // (a/a0)^{-1/2}; Upsilon = f / sqrt(a0)
};

inline UpsilonSeries upsilon_series(const RationalSeries& s, int max_order) {
    detail::require(s.m == 0 && s.n == 0, "upsilon: needs the m=0 ground-state series");
    detail::require(s.variable == Variable::epsilon && s.target == Target::two_q_minus,
                    "upsilon: needs the eps-series of 2q-1");
    detail::require(max_order >= 10, "upsilon: max_order must be >= 10");
    detail::require(s.min_power == 0 && s.order() >= max_order + 1, "upsilon: series too short");
    detail::require(s.at(0) == 0, "upsilon: 2q-1 must vanish at eps = 0");
    const std::size_t len = static_cast<std::size_t>(max_order + 1);
    std::vector<Rational> a(len);
    for (std::size_t k = 0; k < len; ++k) a[k] = 2 * s.at(static_cast<int>(k) + 1);
    a[0] += 1;
    UpsilonSeries u;
    u.a0 = a[0];
    detail::require(u.a0 > 0, "upsilon: non-positive leading term");
    std::vector<Rational> t(len);
    for (std::size_t k = 1; k < len; ++k) t[k] = a[k] / u.a0;
    t[0] = 0;
    u.f = series::pow1p(t, Rational(-1, 2), len);
    return u;
}

struct UpsilonRow {
    int order = 0;
    double coeff = 0.0;
    double asymptote = 0.0;
    double rel_dev = 0.0;
};

/// Even-order Taylor coefficients of Upsilon against those of
/// log((1+eps)/(1-eps))/(2 pi eps), namely 1/(pi (k+1)).
inline std::vector<UpsilonRow> upsilon_analysis(const RationalSeries& s, int max_order) {
    const auto u = upsilon_series(s, max_order);
    const double pref = 1.0 / std::sqrt(u.a0.get_d());
    std::vector<UpsilonRow> rows;
    for (int k = 0; k <= max_order; k += 2) {
        UpsilonRow r;
        r.order = k;
        r.coeff = pref * u.f[static_cast<std::size_t>(k)].get_d();
        r.asymptote = 1.0 / (M_PI * (k + 1));
        r.rel_dev = r.coeff / r.asymptote - 1.0;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace heunflow
