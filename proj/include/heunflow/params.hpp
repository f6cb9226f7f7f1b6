#pragma once

// Parameter algebra for the flow and sausage spectral problems.
//
// The RG parameter u is the only stored quantity; lambda, epsilon and the
// singular point w are derived on demand so the parametrizations can never
// drift apart.

#include <cmath>
#include <string>

#include "heunflow/error.hpp"

namespace heunflow {

struct ModelParams {
    double u = 0.0;
    int m = 0;

    /// lambda = 1/(1+e^{-4u}), evaluated without overflow for any finite u.
    double lambda() const {
        if (u >= 0.0) return 1.0 / (1.0 + std::exp(-4.0 * u));
        const double e = std::exp(4.0 * u);
        return e / (1.0 + e);
    }

    /// 1 - lambda, accurate where lambda -> 1.
    double one_minus_lambda() const {
        if (u <= 0.0) return 1.0 / (1.0 + std::exp(4.0 * u));
        const double e = std::exp(-4.0 * u);
        return e / (1.0 + e);
    }

    /// epsilon = 1/(1 - 2w) = 1/(1+2e^{-4u}).
    double epsilon() const {
        if (u >= 0.0) return 1.0 / (1.0 + 2.0 * std::exp(-4.0 * u));
        const double e = std::exp(4.0 * u);
        return e / (e + 2.0);
    }

    /// w = -e^{-4u}; overflows to -inf for u below about -177.
    double w() const { return -std::exp(-4.0 * u); }
};

/// Accessory parameter q and the position w of the movable singularity.
struct AccessoryPair {
    double q = 0.0;
    double w = 0.0;
};

inline ModelParams derive_params(double u, int m) {
    detail::require(std::isfinite(u), "derive_params: u must be finite");
    detail::require(m >= 0, "derive_params: m must be non-negative");
    return ModelParams{u, m};
}

inline double lambda_from_epsilon(double eps) { return 2.0 * eps / (1.0 + eps); }
inline double epsilon_from_lambda(double lam) { return lam / (2.0 - lam); }

// ---------------------------------------------------------------------------
// Flow model bridge: q = (kappa(1-w) + 6(1+w)(1+2m)) / 24

inline double q_from_kappa(double kappa, double w, int m) {
    return (kappa * (1.0 - w) + 6.0 * (1.0 + w) * (1.0 + 2.0 * m)) / 24.0;
}

inline double kappa_from_q(double q, double w, int m) {
    detail::require(w != 1.0, "kappa_from_q: w = 1 is singular");
    return (24.0 * q - 6.0 * (1.0 + w) * (1.0 + 2.0 * m)) / (1.0 - w);
}

/// kappa from an eigenvalue E of the scaled operator H0 + eps V
/// (E = eps (2q - m - 1)). Same relation as kappa_from_q with w eliminated;
/// no cancellation for any eps in (0, 1).
inline double kappa_from_scaled_eigenvalue(double E, double eps, int m) {
    return (24.0 * E + 6.0 * (1.0 + 2.0 * m) + eps * (6.0 - 12.0 * m)) / (1.0 + eps);
}

// ---------------------------------------------------------------------------
// Sausage model.
//
// With w = e^{4u} the sausage equation is the same Heun equation on the
// negative real axis, 24 q = 6(1+w)(1+2m) + kappa (w-1). The Moebius map
// x -> x/(x-1) brings it back to (0,1) with singular point w/(w-1); for
// m = 0 the new accessory parameter is (w-q)/(w-1), in general
// (w(m+1)^2 - q)/(w-1).

inline AccessoryPair sausage_map(double q, double w, int m = 0) {
    detail::require(w != 1.0, "sausage_map: w = 1 is singular");
    const double mp1sq = (m + 1.0) * (m + 1.0);
    return AccessoryPair{(w * mp1sq - q) / (w - 1.0), w / (w - 1.0)};
}

inline AccessoryPair sausage_map(const AccessoryPair& p, int m = 0) { return sausage_map(p.q, p.w, m); }

inline double sausage_q_from_kappa(double kappa, double w, int m) {
    return (6.0 * (1.0 + w) * (1.0 + 2.0 * m) + kappa * (w - 1.0)) / 24.0;
}

inline double sausage_kappa_from_q(double q, double w, int m) {
    detail::require(w != 1.0, "sausage_kappa_from_q: w = 1 is singular");
    return (24.0 * q - 6.0 * (1.0 + w) * (1.0 + 2.0 * m)) / (w - 1.0);
}

/// kappa^{ssg} from an eigenvalue E of Lambda + eps_bar V_ssg, where
/// eps_bar = 1/(1 - 2 w_bar) = -tanh(2u).
inline double sausage_kappa_from_scaled_eigenvalue(double E, double u, int m) {
    detail::require(u > 0.0, "sausage model requires u > 0");
    return (12.0 * E + 6.0 * (2.0 * m * m + 2.0 * m + 1.0)) / std::tanh(2.0 * u);
}

}  // namespace heunflow
