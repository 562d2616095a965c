#pragma once

// Ornstein-Uhlenbeck process dX = -theta (X - mu) dt + sigma dW and its
// generalized spheroids: images of Brownian spheroids under the time change
// X_t = e^{-theta t} (x + sigma/sqrt(2 theta) V_{e^{2 theta t} - 1}).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "woms/errors.hpp"
#include "woms/spheroid.hpp"

namespace woms {

struct OUParams {
    double theta = 1.0;  ///< mean-reversion rate, > 0
    double sigma = 1.0;  ///< noise amplitude, > 0
    double mu = 0.0;     ///< mean level
};

/// Exit of the OU process from [a, b] started at x0, stopped within eps of the boundary.
struct ExitProblem {
    OUParams params;
    double a = 0.0;
    double b = 1.0;
    double x0 = 0.5;
    double eps = 1e-3;
    double gamma_shrink = 1e-6;
};

/// A generalized spheroid inscribed in the shrunk interval around a walk position.
struct SpheroidGeometry {
    double d = 0.0;         ///< size of the underlying Brownian spheroid
    double a_gx = 0.0;      ///< shrunk lower bound
    double b_gx = 0.0;      ///< shrunk upper bound
    double t_max_ou = 0.0;  ///< OU-time lifetime, log(1 + d²) / (2 theta)
};

inline void validate(const OUParams& p) {
    if (!(p.theta > 0.0) || !std::isfinite(p.theta)) {
        throw ValidationError("theta", "theta > 0");
    }
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
        throw ValidationError("sigma", "sigma > 0");
    }
    if (!std::isfinite(p.mu)) {
        throw ValidationError("mu", "mu must be finite");
    }
}

/// Checks every ExitProblem invariant; x0 outside (a+eps, b-eps) is allowed.
inline void validate(const ExitProblem& p) {
    validate(p.params);
    if (!std::isfinite(p.a)) {
        throw ValidationError("a", "a must be finite");
    }
    if (!std::isfinite(p.b)) {
        throw ValidationError("b", "b must be finite");
    }
    if (!(p.a < p.b)) {
        throw ValidationError("a", "a < b");
    }
    if (!std::isfinite(p.x0)) {
        throw ValidationError("x0", "x0 must be finite");
    }
    if (!(p.eps > 0.0) || !(p.eps < 0.5 * (p.b - p.a))) {
        throw ValidationError("eps", "0 < eps < (b - a) / 2");
    }
    if (!(p.gamma_shrink >= 0.0) || !(p.gamma_shrink < 1.0)) {
        throw ValidationError("gamma_shrink", "0 <= gamma_shrink < 1");
    }
}

/// Shifts the problem to mu = 0; Y = X - mu is a centered OU process.
inline ExitProblem reduce_mu(const ExitProblem& problem) {
    ExitProblem out = problem;
    const double mu = problem.params.mu;
    out.params.mu = 0.0;
    out.a = problem.a - mu;
    out.b = problem.b - mu;
    out.x0 = problem.x0 - mu;
    return out;
}

/// [a + γ(x−a), b − γ(b−x)].
inline std::pair<double, double> shrunk_interval(double x, const ExitProblem& problem) {
    if (!(x >= problem.a && x <= problem.b)) {
        throw DomainError("shrunk_interval: x=" + std::to_string(x) + " outside [a, b]");
    }
    const double g = problem.gamma_shrink;
    return {problem.a + g * (x - problem.a), problem.b - g * (problem.b - x)};
}

namespace detail {

// Size for x > 0 (also used for x < 0 after mirroring x -> -x, [a,b] -> [-b,-a]).
// Upper side: the boundary never exceeds x + sigma d / sqrt(2 theta e).
// Lower side: positive root of x d²/2 + sigma d / sqrt(2 theta e) + (a_g - x),
// written without the cancellation of the textbook root formula.
inline double spheroid_size_positive(double x, double lo, double hi, const OUParams& p) {
    const double k = std::sqrt(2.0 * p.theta * std::numbers::e);
    const double up = (hi - x) / p.sigma;
    const double down =
        2.0 * (x - lo) /
        (std::sqrt(p.sigma * p.sigma + 4.0 * p.theta * std::numbers::e * x * (x - lo)) + p.sigma);
    return k * std::min(up, down);
}

}  // namespace detail

/// Largest admissible spheroid size at position x of a mu-centered problem.
inline SpheroidGeometry compute_d(double x, const ExitProblem& problem) {
    const OUParams& p = problem.params;
    if (!(x > problem.a && x < problem.b)) {
        throw GeometryError("compute_d: x=" + std::to_string(x) + " not inside (a, b)");
    }
    const auto [lo, hi] = shrunk_interval(x, problem);
    if (!(lo < x && x < hi)) {
        throw GeometryError("compute_d: x=" + std::to_string(x) + " not inside shrunk interval");
    }

    const double zero_band =
        1e-12 * std::max({std::abs(problem.a), std::abs(problem.b), 1.0});
    double d;
    if (std::abs(x) < zero_band) {
        d = std::sqrt(2.0 * p.theta * std::numbers::e) / p.sigma * std::min(std::abs(lo), hi);
    } else if (x > 0.0) {
        d = detail::spheroid_size_positive(x, lo, hi, p);
    } else {
        d = detail::spheroid_size_positive(-x, -hi, -lo, p);
    }
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw GeometryError("compute_d: degenerate spheroid at x=" + std::to_string(x));
    }
    return {d, lo, hi, std::log1p(d * d) / (2.0 * p.theta)};
}

/// Brownian internal time -> OU time, log(1 + tau) / (2 theta).
inline double time_map(double tau, double theta) {
    if (!(tau >= 0.0)) {
        throw DomainError("time_map: tau=" + std::to_string(tau) + " < 0");
    }
    if (!(theta > 0.0)) {
        throw DomainError("time_map: theta must be positive");
    }
    return std::log1p(tau) / (2.0 * theta);
}

/// Generalized spheroid boundary e^{-θt}(σ/√(2θ)·ψ±(e^{2θt} − 1) + x) for t in [0, t_max_ou].
inline double psi_ou(double t, double x, const SpheroidGeometry& geom, Side side,
                     const OUParams& params) {
    if (!(t >= 0.0) || t > geom.t_max_ou * (1.0 + detail::kEndpointSlack)) {
        throw DomainError("psi_ou: t=" + std::to_string(t) + " outside [0, t_max_ou]");
    }
    const double theta = params.theta;
    const double brownian_t = std::min(std::expm1(2.0 * theta * t), geom.d * geom.d);
    const double scale = params.sigma / std::sqrt(2.0 * theta);
    return std::exp(-theta * t) * (scale * psi(geom.d, brownian_t, side) + x);
}

/// OU duration of one spheroid step and the position it ends at.
struct StepResult {
    double tau_ou = 0.0;
    double x_next = 0.0;
};

/// Maps a Brownian spheroid exit to the OU step it encodes.
///
/// e^{-θ·tau_ou} equals (1 + tau)^{-1/2}, used directly so no exp/log round trip
/// perturbs the endpoint.
inline StepResult next_state(double x, const SpheroidExit& exit, const SpheroidGeometry& geom,
                             const OUParams& params) {
    const double tau_ou = time_map(exit.tau, params.theta);
    const double scale = params.sigma / std::sqrt(2.0 * params.theta);
    const double x_next = (scale * psi(geom.d, exit.tau, exit.side) + x) / std::sqrt(1.0 + exit.tau);
    return {tau_ou, x_next};
}

}  // namespace woms
