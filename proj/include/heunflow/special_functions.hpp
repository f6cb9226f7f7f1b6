#pragma once

// Digamma and log-gamma for positive arguments: upward recurrence past 8,
// then the asymptotic (Bernoulli) series. Accurate to ~1e-15.

#include <cmath>

#include "heunflow/error.hpp"

namespace heunflow {

inline constexpr double kEulerGamma = 0.57721566490153286061;

inline double digamma(double x) {
    detail::require(std::isfinite(x) && x > 0.0, "digamma: argument must be positive");
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // B_{2k}/(2k) for k = 1..7
    const double series =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
    return acc + std::log(x) - 0.5 / x - series;
}

inline double log_gamma(double x) {
    detail::require(std::isfinite(x) && x > 0.0, "log_gamma: argument must be positive");
    double acc = 0.0;
    while (x < 8.0) {
        acc -= std::log(x);
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // B_{2k}/(2k(2k-1)) for k = 1..7
    const double series = (1.0 / 12 - r * (1.0 / 360 - r * (1.0 / 1260 - r * (1.0 / 1680 - r * (1.0 / 1188 - r * (691.0 / 360360 - r / 156)))))) / x;
    return acc + (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * M_PI) + series;
}

/// g(x) = Gamma(1+x)/Gamma(1-x) on (-1, 1).
inline double gamma_ratio(double x) {
    detail::require(std::isfinite(x) && x > -1.0 && x < 1.0, "gamma_ratio: argument must lie in (-1, 1)");
    return std::exp(log_gamma(1.0 + x) - log_gamma(1.0 - x));
}

}  // namespace heunflow
