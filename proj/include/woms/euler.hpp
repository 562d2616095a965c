#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "woms/batch.hpp"
#include "woms/errors.hpp"
#include "woms/ou.hpp"
#include "woms/random.hpp"
#include "woms/walk.hpp"

namespace woms {

inline constexpr std::uint64_t kDefaultEulerMaxSteps = 1'000'000'000;

/// Probability that a Brownian bridge with variance sigma²·h between x_i and x_j
/// touches `boundary`; both endpoints must lie on the inner side.
inline double bridge_exit_prob(double x_i, double x_j, double boundary, bool is_upper,
                               double sigma, double h) {
    if (!(h > 0.0) || !(sigma > 0.0)) {
        throw DomainError("bridge_exit_prob: sigma and h must be positive");
    }
    const double gap_i = is_upper ? boundary - x_i : x_i - boundary;
    const double gap_j = is_upper ? boundary - x_j : x_j - boundary;
    if (gap_i < 0.0 || gap_j < 0.0) {
        throw DomainError("bridge_exit_prob: state on the wrong side of boundary " +
                          std::to_string(boundary));
    }
    return std::exp(-2.0 * gap_i * gap_j / (sigma * sigma * h));
}

/*!
 * Euler–Maruyama exit time of the OU process from (a, b).
 *
 * X_{i+1} = X_i − θ(X_i − μ)h + σ√h·N_i. With `bridge` set, every step that
 * stays inside draws one uniform and exits if it falls below the summed
 * upper and lower bridge crossing probabilities. The exit time is the grid
 * time at which the exit is detected. `eps` and `gamma_shrink` are unused.
 */
template <VariateStream Rng>
ExitOutcome euler_exit(const ExitProblem& problem, double h, Rng& rng, bool bridge = true,
                       std::uint64_t max_steps = kDefaultEulerMaxSteps) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw DomainError("euler_exit: step h must be positive, got " + std::to_string(h));
    }
    const auto& [theta, sigma, mu] = problem.params;
    const double a = problem.a;
    const double b = problem.b;

    ExitOutcome out;
    double x = problem.x0;
    if (!(a < x && x < b)) {
        out.x_final = x;
        out.side = x >= b ? Boundary::Upper : Boundary::Lower;
        return out;
    }

    const double sqrt_h = std::sqrt(h);
    std::uint64_t i = 0;
    for (;;) {
        if (i >= max_steps) {
            throw StepLimitExceeded(max_steps, x);
        }
        const double next = x - theta * (x - mu) * h + sigma * sqrt_h * rng.gaussian();
        ++i;
        if (next >= b || next <= a) {
            out.x_final = next;
            out.side = next >= b ? Boundary::Upper : Boundary::Lower;
            break;
        }
        if (bridge) {
            const double p_up = bridge_exit_prob(x, next, b, true, sigma, h);
            const double p_low = bridge_exit_prob(x, next, a, false, sigma, h);
            const double u = rng.uniform();
            if (u < p_up + p_low) {
                const bool upper = u < p_up;
                out.x_final = upper ? b : a;
                out.side = upper ? Boundary::Upper : Boundary::Lower;
                break;
            }
        }
        x = next;
    }
    out.t_eps = static_cast<double>(i) * h;
    out.n_steps = i;
    return out;
}

/// Batch of Euler exits with the same stream derivation as run_batch.
inline std::vector<ExitOutcome> euler_batch(const ExitProblem& problem, double h, bool bridge,
                                            std::size_t n_samples, std::uint64_t master_seed,
                                            unsigned parallelism = 1,
                                            std::uint64_t max_steps = kDefaultEulerMaxSteps) {
    validate(problem.params);
    if (!(problem.a < problem.b)) {
        throw ValidationError("a", "a < b");
    }
    if (n_samples == 0) {
        throw DomainError("euler_batch: n_samples must be at least 1");
    }
    return run_replicates(n_samples, master_seed, parallelism, [&](Stream& rng) {
        return euler_exit(problem, h, rng, bridge, max_steps);
    });
}

}  // namespace woms
