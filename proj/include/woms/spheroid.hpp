#pragma once

// Brownian exit from a heat ball (spheroid) of size d: the domain
// {(t,x) : |x| <= sqrt(t log(d^2/t)), 0 <= t <= d^2}.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "woms/errors.hpp"
#include "woms/random.hpp"

namespace woms {

enum class Side { Plus, Minus };

/// Exit of standard Brownian motion from a spheroid: internal time and boundary side.
struct SpheroidExit {
    double tau = 0.0;
    Side side = Side::Plus;
};

namespace detail {

// Relative slack accepted beyond t = d^2 (sampler round-trips land there).
inline constexpr double kEndpointSlack = 1e-12;
inline constexpr double kRadicandFloor = -2.0 * kEndpointSlack;

inline void check_size(double d) {
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw DomainError("spheroid size d must be positive and finite, got " + std::to_string(d));
    }
}

}  // namespace detail

/// Spheroid boundary ±sqrt(t·log(d²/t)) on [0, d²].
inline double psi(double d, double t, Side side) {
    detail::check_size(d);
    const double d2 = d * d;
    if (!(t >= 0.0) || t > d2 * (1.0 + detail::kEndpointSlack)) {
        throw DomainError("psi: t=" + std::to_string(t) + " outside [0, d^2]");
    }
    if (t == 0.0) {
        return 0.0;
    }
    double radicand = t * (2.0 * std::log(d) - std::log(t));
    if (radicand < 0.0) {
        // Only rounding near t = d^2 can get here.
        if (radicand < detail::kRadicandFloor * d2) {
            throw DomainError("psi: negative radicand at t=" + std::to_string(t));
        }
        radicand = 0.0;
    }
    const double r = std::sqrt(radicand);
    return side == Side::Plus ? r : -r;
}

/// Density of the spheroid exit time on (0, d²).
inline double spheroid_density(double d, double t) {
    detail::check_size(d);
    if (!(t > 0.0) || !(t < d * d)) {
        throw DomainError("spheroid_density: t=" + std::to_string(t) + " outside (0, d^2)");
    }
    const double log_ratio = std::max(0.0, 2.0 * std::log(d) - std::log(t));
    return std::sqrt(log_ratio / t) / (d * std::sqrt(2.0 * std::numbers::pi));
}

/// Survival function of the chi-square law with 3 degrees of freedom.
inline double chi_square3_sf(double x) {
    if (x <= 0.0) {
        return 1.0;
    }
    return std::erfc(std::sqrt(0.5 * x)) +
           std::sqrt(2.0 * x / std::numbers::pi) * std::exp(-0.5 * x);
}

/// P(tau <= t) for the spheroid exit time.
///
/// -log(tau/d²) = -2 log U + N² is chi-square with 3 degrees of freedom, so
/// P(tau <= t) = P(chi2_3 >= log(d²/t)).
inline double spheroid_cdf(double d, double t) {
    detail::check_size(d);
    if (t <= 0.0) {
        return 0.0;
    }
    if (t >= d * d) {
        return 1.0;
    }
    return chi_square3_sf(2.0 * std::log(d) - std::log(t));
}

/// Draws (tau, side) with tau = d²·U²·exp(-N²).
///
/// Consumes one uniform, one normal and one fair bit, in that order.
template <VariateStream Rng>
SpheroidExit sample_spheroid_exit(double d, Rng& rng) {
    detail::check_size(d);
    const double u = rng.uniform();
    const double n = rng.gaussian();
    const bool minus = rng.bernoulli();
    return {d * d * u * u * std::exp(-n * n), minus ? Side::Minus : Side::Plus};
}

}  // namespace woms
